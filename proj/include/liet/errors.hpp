#pragma once

#include <stdexcept>
#include <string>

namespace liet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// world
struct InvalidTask : Error { using Error::Error; };
struct MalformedJointAction : Error { using Error::Error; };
struct UnreachableTarget : Error { using Error::Error; };

// utility
struct EmptyDataset : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };

// llm / comm
struct TemplateError : Error { using Error::Error; };
struct UnboundPlaceholder : TemplateError { using TemplateError::TemplateError; };
struct UnknownBinding : TemplateError { using TemplateError::TemplateError; };

struct BackendFailure : Error {
  enum class Cause { Transport, HttpStatus, Timeout, Auth, ExhaustedRetries, Other };
  BackendFailure(Cause c, const std::string& what) : Error(what), cause(c) {}
  Cause cause;
};

// harness
struct ConfigError : Error { using Error::Error; };
struct SchemaVersionMismatch : Error { using Error::Error; };

}  // namespace liet
