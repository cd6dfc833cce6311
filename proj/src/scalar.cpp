#include "cwave/scalar.hpp"

#include <sstream>

namespace cwave {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(BigInt(s));
  bool neg = !s.empty() && s[0] == '-';
  std::string ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
  std::string fp = s.substr(dot + 1);
  if (ip.empty()) ip = "0";
  for (char ch : ip + fp)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::invalid_argument("bad decimal literal '" + text + "'");
  BigInt den = 1;
  for (size_t i = 0; i < fp.size(); ++i) den *= 10;
  BigInt num(ip + fp);
  Rational q(num, den);
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double Scalar::to_double() const {
  return cwave::to_double(c_) * std::pow(M_PI, pi_);
}

std::string Scalar::str() const {
  if (pi_ == 0) return cwave::to_string(c_);
  std::string out = cwave::to_string(c_);
  if (c_ == 1) out = "";
  else if (c_ == -1) out = "-";
  else out += "*";
  out += "pi";
  if (pi_ != 1) out += "^" + std::to_string(pi_);
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.c_ == 0) return *this;
  if (c_ == 0) {
    *this = o;
    return *this;
  }
  if (pi_ != o.pi_) throw std::domain_error("exact sum of different powers of pi");
  c_ += o.c_;
  canon();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  c_ *= o.c_;
  pi_ += o.pi_;
  canon();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.c_ == 0) throw std::domain_error("division by zero");
  c_ /= o.c_;
  pi_ -= o.pi_;
  canon();
  return *this;
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
  if (a.pi_ == b.pi_ || a.c_ == 0 || b.c_ == 0) {
    // With a zero operand the power of pi is irrelevant: compare signs/values.
    if (a.pi_ == b.pi_) return a.c_ < b.c_ ? -1 : (a.c_ > b.c_ ? 1 : 0);
    if (a.c_ == 0) return -b.sign();
    return a.sign();
  }
  throw std::domain_error("exact comparison of different powers of pi");
}

}  // namespace cwave
