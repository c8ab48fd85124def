#include "orbitope/rational.hpp"

#include <cctype>
#include <cmath>

namespace orbitope {

Rational make_rational(long num, long den) {
  if (den == 0) throw Error("rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error("rational_from_double: non-finite value");
  Rational q(x);  // exact for finite doubles
  q.canonicalize();
  return q;
}

std::optional<Rational> parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) return std::nullopt;

  auto slash = t.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(t, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return Rational(q);
  }

  // Decimal / scientific form: mantissa [.fraction] [e exponent]
  std::string mant = t;
  long expo = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = t.substr(0, epos);
    try {
      expo = std::stol(t.substr(epos + 1));
    } catch (...) {
      return std::nullopt;
    }
  }
  std::string digits = mant;
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    expo -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
  for (size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i]))) return std::nullopt;

  mpz_class num;
  if (num.set_str(digits, 10) != 0) return std::nullopt;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(expo)));
  Rational q;
  if (expo >= 0)
    q = Rational(num * scale);
  else
    q = Rational(num, scale);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace orbitope
