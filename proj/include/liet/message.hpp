#pragma once

#include <string>

namespace liet::comm {

inline constexpr std::size_t kMaxMessageChars = 500;

// One broadcast message. Text is capped at 500 characters by the sender.
struct Message {
  int sender = -1;
  long tick = 0;
  std::string text;

  friend bool operator==(const Message&, const Message&) = default;
};

}  // namespace liet::comm
