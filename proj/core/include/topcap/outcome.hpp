#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace topcap {

// Screening steps reject records as ordinary values; only malformed input
// raises an exception.
enum class RejectReason { no_signal, too_short, too_few_points, empty_diagram };

std::string_view to_string(RejectReason r) noexcept;

struct Rejection {
  RejectReason reason;
  std::string detail;
};

template <class T>
using Screened = std::variant<T, Rejection>;

template <class T>
bool accepted(const Screened<T>& s) noexcept {
  return std::holds_alternative<T>(s);
}

}  // namespace topcap
