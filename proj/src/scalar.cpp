#include "qcduality/scalar.hpp"

#include "qcduality/errors.hpp"

#include <cmath>

namespace qcd {

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  a_ += o.a_;
  if (sgn(o.b_) != 0) b_ += o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  a_ -= o.a_;
  if (sgn(o.b_) != 0) b_ -= o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  if (is_rational() && o.is_rational()) {
    a_ *= o.a_;
    return *this;
  }
  // (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r
  Rational ac = a_ * o.a_;
  Rational bd = b_ * o.b_;
  Rational ad = a_ * o.b_;
  Rational bc = b_ * o.a_;
  a_ = ac + 2 * bd;
  b_ = ad + bc;
  return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
  if (o.is_zero()) throw Error(ErrorCode::PoleCollision, "division by zero in Q(sqrt2)");
  if (o.is_rational()) {
    a_ /= o.a_;
    if (sgn(b_) != 0) b_ /= o.a_;
    return *this;
  }
  // 1/(c + d r) = (c - d r)/(c^2 - 2 d^2); the norm never vanishes since sqrt2 is irrational
  Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
  QSqrt2 conj(Rational(o.a_ / norm), Rational(-o.b_ / norm));
  return *this *= conj;
}

double QSqrt2::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(2.0); }

std::string QSqrt2::str() const {
  if (is_rational()) return a_.get_str();
  return a_.get_str() + "+" + b_.get_str() + "*sqrt2";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      Rational r(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
      if (r.get_den() == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in " + s);
      r.canonicalize();
      return r;
    }
    auto exp_pos = s.find_first_of("eE");
    long exponent = 0;
    if (exp_pos != std::string::npos) {
      exponent = std::stol(s.substr(exp_pos + 1));
      s = s.substr(0, exp_pos);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      exponent -= static_cast<long>(s.size() - dot - 1);
      s.erase(dot, 1);
    }
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    Rational r{mpz_class(s)};
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0) {
      r *= ten_pow;
    } else {
      r /= ten_pow;
    }
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidArgument, "not a rational literal: " + std::string(text));
  }
}

HPComplex to_hp(const Complex& z) { return HPComplex(HPReal(z.real()), HPReal(z.imag())); }

}  // namespace qcd
