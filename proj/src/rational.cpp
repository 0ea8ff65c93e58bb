#include "carnotkit/rational.hpp"

#include <cctype>
#include <sstream>

namespace carnotkit {

std::string to_string(const Rat& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::optional<Rat> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto read_digits = [&](BigInt& out) -> bool {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
    out = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
    return true;
  };
  BigInt num;
  if (!read_digits(num)) return std::nullopt;
  BigInt den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    if (!read_digits(den) || den == 0) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  Rat value(num, den);
  return negative ? Rat(-value) : value;
}

}  // namespace carnotkit
