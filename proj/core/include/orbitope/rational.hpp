#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace orbitope {

/// Exact arbitrary-precision rational. All coefficient arithmetic in the
/// function algebra and every exact verdict in the library runs on this type.
using Rational = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// num/den in lowest terms (gmp does not canonicalize two-argument inits).
Rational make_rational(long num, long den = 1);

double to_double(const Rational& q);

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

/// Accepts "p", "p/q" and plain decimals ("-1.25", "3e2"); exact in all cases.
std::optional<Rational> parse_rational(const std::string& s);

/// "p" or "p/q", lowest terms.
std::string to_string(const Rational& q);

}  // namespace orbitope
