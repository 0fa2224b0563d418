#include <cstdlib>
#include <numeric>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

Rational::Rational(long long num, long long den) {
  if (den == 0) throw BadExponent("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      long long n = std::stoll(text, &used);
      if (used != text.size()) throw BadExponent("malformed rational '" + text + "'");
      return Rational(n);
    }
    std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    long long n = std::stoll(a, &used);
    if (used != a.size()) throw BadExponent("malformed rational '" + text + "'");
    long long d = std::stoll(b, &used);
    if (used != b.size()) throw BadExponent("malformed rational '" + text + "'");
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw BadExponent("malformed rational '" + text + "'");
  }
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw BadExponent("division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}
bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

ExponentSet exponents(const Rational& p, int n) {
  if (p < Rational(2)) throw BadExponent("p must be at least 2, got " + p.str());
  if (n != 2 && n != 3) throw BadExponent("dimension must be 2 or 3");
  ExponentSet e;
  e.p = p;
  e.conjugate = p / (p - Rational(1));
  const Rational dim(n);
  if (p < dim) e.sobolev = dim * p / (dim - p);
  if (n == 3) {
    e.q = Rational(2) * p + Rational(2);
    e.l = Rational(2) * *e.q / (p + *e.q - Rational(2));
  }
  return e;
}

}  // namespace thickflow
