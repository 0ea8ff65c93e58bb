#ifndef CARNOTKIT_RATIONAL_HPP
#define CARNOTKIT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnotkit {

/// Exact scalar used wherever identities are asserted (validation,
/// automorphy, group axioms). Double precision is used for sampling
/// and Jacobians; see Element<T>.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Library-level usage error (mismatched algebras, bad arguments,
/// malformed definitions). The CLI maps it to exit code 2.
struct CarnotError : std::runtime_error {
  explicit CarnotError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

std::string to_string(const Rat& x);

/// Parses "p", "-p", or "p/q" with integer p, q (q > 0 after
/// normalization). Returns nullopt on anything else.
std::optional<Rat> parse_rational(std::string_view text);

}  // namespace carnotkit

#endif
