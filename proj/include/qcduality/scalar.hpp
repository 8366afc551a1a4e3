#pragma once

// Scalar families used by every matrix-producing routine.
//
//   Complex    double-precision complex numbers (dynamics, root finding)
//   QSqrt2     exact elements a + b*sqrt(2) of the field Q(sqrt 2), a, b in Q
//   HPComplex  120-digit complex numbers (on-shell refinement)
//   Jet<S>     truncated power series s0 + s1*e + s2*e^2 over S
//
// Generic code talks to a scalar only through field operators and the free
// functions below (from_int, sqrt2, is_zero, magnitude).

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <string>
#include <string_view>

namespace qcd {

using Complex = std::complex<double>;
using Rational = mpq_class;

using HPReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>,
                                             boost::multiprecision::et_off>;
using HPComplex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<120>>,
    boost::multiprecision::et_off>;

/// Exact element a + b*sqrt(2) of Q(sqrt 2).
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static QSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  double to_double() const;
  std::string str() const;

  QSqrt2 operator-() const { return {Rational(-a_), Rational(-b_)}; }
  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
  friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
  friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
  friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }
  friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const QSqrt2& x, const QSqrt2& y) { return !(x == y); }

 private:
  Rational a_{0};
  Rational b_{0};
};

/// Truncated power series c0 + c1*e + c2*e^2 (e^3 and higher dropped).
template <class S>
struct Jet {
  S c0{}, c1{}, c2{};

  Jet() = default;
  Jet(long v) : c0(v), c1(0), c2(0) {}  // NOLINT(google-explicit-constructor)
  Jet(S a, S b = S(0), S c = S(0)) : c0(std::move(a)), c1(std::move(b)), c2(std::move(c)) {}  // NOLINT

  Jet operator-() const { return {-c0, -c1, -c2}; }
  Jet& operator+=(const Jet& o) {
    c0 += o.c0;
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    c0 -= o.c0;
    c1 -= o.c1;
    c2 -= o.c2;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    S n2 = c0 * o.c2 + c1 * o.c1 + c2 * o.c0;
    S n1 = c0 * o.c1 + c1 * o.c0;
    S n0 = c0 * o.c0;
    c0 = std::move(n0);
    c1 = std::move(n1);
    c2 = std::move(n2);
    return *this;
  }
  // requires an invertible constant term
  Jet& operator/=(const Jet& o) {
    S q0 = c0 / o.c0;
    S q1 = (c1 - q0 * o.c1) / o.c0;
    S q2 = (c2 - q0 * o.c2 - q1 * o.c1) / o.c0;
    c0 = std::move(q0);
    c1 = std::move(q1);
    c2 = std::move(q2);
    return *this;
  }
  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator*(Jet x, const Jet& y) { return x *= y; }
  friend Jet operator/(Jet x, const Jet& y) { return x /= y; }
  friend bool operator==(const Jet& x, const Jet& y) {
    return x.c0 == y.c0 && x.c1 == y.c1 && x.c2 == y.c2;
  }
  friend bool operator!=(const Jet& x, const Jet& y) { return !(x == y); }
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_rational(const Rational& r) { return {r.get_d(), 0.0}; }
  static Complex sqrt2() { return {std::sqrt(2.0), 0.0}; }
  static bool is_zero(const Complex& x) { return x == 0.0; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
};

template <>
struct ScalarTraits<QSqrt2> {
  static constexpr bool exact = true;
  static QSqrt2 from_int(long v) { return QSqrt2(v); }
  static QSqrt2 from_rational(const Rational& r) { return QSqrt2(r); }
  static QSqrt2 sqrt2() { return QSqrt2::sqrt2(); }
  static bool is_zero(const QSqrt2& x) { return x.is_zero(); }
  static double magnitude(const QSqrt2& x) { return std::abs(x.to_double()); }
  static Complex to_complex(const QSqrt2& x) { return {x.to_double(), 0.0}; }
};

template <>
struct ScalarTraits<HPComplex> {
  static constexpr bool exact = false;
  static HPComplex from_int(long v) { return HPComplex(v); }
  static HPComplex from_rational(const Rational& r) {
    return HPComplex(HPReal(r.get_num().get_str()) / HPReal(r.get_den().get_str()));
  }
  static HPComplex sqrt2() { return HPComplex(boost::multiprecision::sqrt(HPReal(2))); }
  static bool is_zero(const HPComplex& x) { return x == HPComplex(0); }
  static double magnitude(const HPComplex& x) {
    return static_cast<double>(boost::multiprecision::abs(x));
  }
  static Complex to_complex(const HPComplex& x) {
    return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
  }
};

template <class S>
struct ScalarTraits<Jet<S>> {
  static constexpr bool exact = ScalarTraits<S>::exact;
  static Jet<S> from_int(long v) { return Jet<S>(ScalarTraits<S>::from_int(v)); }
  static Jet<S> from_rational(const Rational& r) { return Jet<S>(ScalarTraits<S>::from_rational(r)); }
  static Jet<S> sqrt2() { return Jet<S>(ScalarTraits<S>::sqrt2()); }
  static bool is_zero(const Jet<S>& x) {
    return ScalarTraits<S>::is_zero(x.c0) && ScalarTraits<S>::is_zero(x.c1) &&
           ScalarTraits<S>::is_zero(x.c2);
  }
  // magnitude of the leading (constant) term; used for pivoting only
  static double magnitude(const Jet<S>& x) { return ScalarTraits<S>::magnitude(x.c0); }
  static Complex to_complex(const Jet<S>& x) { return ScalarTraits<S>::to_complex(x.c0); }
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

template <class S>
S from_int(long v) {
  return ScalarTraits<S>::from_int(v);
}

template <class S>
S from_rational(const Rational& r) {
  return ScalarTraits<S>::from_rational(r);
}

template <class S>
S sqrt2() {
  return ScalarTraits<S>::sqrt2();
}

template <class S>
bool is_zero(const S& x) {
  return ScalarTraits<S>::is_zero(x);
}

template <class S>
double magnitude(const S& x) {
  return ScalarTraits<S>::magnitude(x);
}

template <class S>
Complex to_complex(const S& x) {
  return ScalarTraits<S>::to_complex(x);
}

/// Parses "p/q", an integer, or a finite decimal such as "-1.25" exactly.
Rational parse_rational(std::string_view text);

HPComplex to_hp(const Complex& z);

}  // namespace qcd
