#pragma once

// Scaled number structures.
//
// A structure S^s shares its base set with the standard structure S^1 but
// assigns each base-set element r the value r/s. Arithmetic inside S^s is
// rescaled (x_s = x/s, /_s = s*/, 1_s = s) so the axioms still hold. The
// connection C(s, t) maps S^t onto S^s preserving the base-set element and
// changing its value by the factor t/s.
//
// Numbers are stored by (value, scale); the base-set element ("raw") is
// computed on demand as scale * value.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "localmath/error.hpp"

namespace localmath {

// Expression templates off so generic code sees plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// Natural number structures N^n: base set is the multiples of n.

class NaturalStructure {
 public:
  explicit NaturalStructure(std::uint64_t n);

  std::uint64_t n() const noexcept { return n_; }
  bool contains(std::uint64_t m) const noexcept { return m % n_ == 0; }

  std::uint64_t zero() const noexcept { return 0; }
  std::uint64_t one() const noexcept { return n_; }

 private:
  std::uint64_t n_;
};

enum class NaturalOp { add, mul };

/// v_n(m) = m/n, defined only when n divides m.
Rational valuation_natural(const NaturalStructure& structure, std::uint64_t m);

/// +_n is ordinary addition, x_n is x_1 / n. Result stays in the base set.
std::uint64_t natural_op(const NaturalStructure& structure, NaturalOp op, std::uint64_t m1,
                         std::uint64_t m2);

// ---------------------------------------------------------------------------
// Scale factors and scaled numbers.

namespace detail {
template <class V>
struct scalar_of {
  using type = V;
};
template <class T>
struct scalar_of<std::complex<T>> {
  using type = T;
};
template <class T>
bool is_zero(const T& v) {
  return v == T(0);
}
}  // namespace detail

template <class V>
using scalar_of_t = typename detail::scalar_of<V>::type;

/// Positive scaling factor of a number structure.
template <class T>
class ScaleFactor {
 public:
  explicit ScaleFactor(T s) : s_(std::move(s)) {
    if (!(s_ > T(0))) fail(ErrorCode::InvalidScale, "scale factor must be positive");
  }

  const T& value() const noexcept { return s_; }

  friend bool operator==(const ScaleFactor& a, const ScaleFactor& b) { return a.s_ == b.s_; }

 private:
  T s_;
};

/// A number of S^s represented by its value a; the raw element is s*a.
/// Complex values scale real and imaginary parts by the same real factor.
template <class V>
class ScaledNumber {
 public:
  using value_type = V;
  using scalar_type = scalar_of_t<V>;

  ScaledNumber(V value, ScaleFactor<scalar_type> scale)
      : value_(std::move(value)), scale_(std::move(scale)) {}

  static ScaledNumber from_raw(const V& raw, const ScaleFactor<scalar_type>& scale) {
    return ScaledNumber(raw / scale.value(), scale);
  }

  const V& value() const noexcept { return value_; }
  const ScaleFactor<scalar_type>& scale() const noexcept { return scale_; }
  V raw() const { return value_ * scale_.value(); }

  friend bool operator==(const ScaledNumber& a, const ScaledNumber& b) {
    return a.value_ == b.value_ && a.scale_ == b.scale_;
  }

 private:
  V value_;
  ScaleFactor<scalar_type> scale_;
};

enum class ArithOp { add, sub, mul, div };

std::string to_string(ArithOp op);

/// Value in S^s of the base-set element r: r/s.
template <class V, class S>
V value_of_raw(const V& raw, const ScaleFactor<S>& s) {
  return raw / s.value();
}

/// C(target, source): same base-set element, value multiplied by source/target.
template <class V>
ScaledNumber<V> connect_value(const ScaleFactor<scalar_of_t<V>>& target,
                              const ScaleFactor<scalar_of_t<V>>& source, const ScaledNumber<V>& x) {
  if (!(x.scale() == source))
    fail(ErrorCode::MixedScales, "connect_value: operand is not in the source structure");
  if (target == source) return x;
  return ScaledNumber<V>(x.value() * (source.value() / target.value()), target);
}

/// Value in S^d of a raw symbol string that was read from S^b. The source
/// scale does not enter: the string itself has no value until a structure is chosen.
template <class V, class S>
V connect_raw_string(const ScaleFactor<S>& target, const ScaleFactor<S>& /*source*/, const V& raw) {
  return value_of_raw(raw, target);
}

// Raw-level operations of S^s.
template <class T>
T raw_add(const ScaleFactor<T>&, const T& r1, const T& r2) {
  return r1 + r2;
}
template <class T>
T raw_sub(const ScaleFactor<T>&, const T& r1, const T& r2) {
  return r1 - r2;
}
template <class T>
T raw_mul(const ScaleFactor<T>& s, const T& r1, const T& r2) {
  return r1 * r2 / s.value();
}
template <class T>
T raw_div(const ScaleFactor<T>& s, const T& r1, const T& r2) {
  if (detail::is_zero(r2)) fail(ErrorCode::DivisionByZero, "raw_div: zero divisor");
  return s.value() * r1 / r2;
}

/// Combines two numbers of the same structure. At value level this is the
/// ordinary operation; operands from other structures are rejected.
template <class V>
ScaledNumber<V> scaled_combine(ArithOp op, const ScaleFactor<scalar_of_t<V>>& s,
                               const ScaledNumber<V>& x, const ScaledNumber<V>& y) {
  if (!(x.scale() == s) || !(y.scale() == s))
    fail(ErrorCode::MixedScales, "arithmetic is defined only within one structure");
  switch (op) {
    case ArithOp::add: return ScaledNumber<V>(x.value() + y.value(), s);
    case ArithOp::sub: return ScaledNumber<V>(x.value() - y.value(), s);
    case ArithOp::mul: return ScaledNumber<V>(x.value() * y.value(), s);
    case ArithOp::div:
      if (detail::is_zero(y.value())) fail(ErrorCode::DivisionByZero, "scaled_combine: zero divisor");
      return ScaledNumber<V>(x.value() / y.value(), s);
  }
  fail(ErrorCode::InvalidArgument, "unknown ArithOp");
}

template <class T>
T apply(ArithOp op, const T& a, const T& b) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div:
      if (detail::is_zero(b)) fail(ErrorCode::DivisionByZero, "zero divisor");
      return a / b;
  }
  fail(ErrorCode::InvalidArgument, "unknown ArithOp");
}

/// Compares transport-after-combination with combination-after-transport.
template <class T>
struct CommutationRow {
  T transport_of_combo;     // C(s,t)[a op b]_t, as a value in S^s
  T combo_of_transports;    // C(s,t)a_t op_s C(s,t)b_t, as a value in S^s
  std::optional<T> ratio;   // combo / transport; empty when both vanish
};

/// Mismatch factors: mul t/s, div s/t, add and sub 1.
template <class T>
CommutationRow<T> commutation_table(const ScaleFactor<T>& s, const ScaleFactor<T>& t, ArithOp op,
                                    const T& a, const T& b) {
  const T factor = t.value() / s.value();
  const T transport = factor * apply(op, a, b);
  const T combo = apply(op, factor * a, factor * b);
  CommutationRow<T> row{transport, combo, std::nullopt};
  if (!detail::is_zero(transport)) {
    row.ratio = combo / transport;
  } else if (detail::is_zero(combo) && (op == ArithOp::add || op == ArithOp::sub)) {
    row.ratio = T(1);
  }
  return row;
}

/// Components of C(s,t)S^t expressed as values in S^s.
template <class T>
struct TransportedComponents {
  T add_coeff;
  T mul_coeff;
  T div_coeff;
  T one;
  T zero;
};

template <class T>
TransportedComponents<T> transported_components(const ScaleFactor<T>& s, const ScaleFactor<T>& t) {
  return {T(1), s.value() / t.value(), t.value() / s.value(), t.value() / s.value(), T(0)};
}

// ---------------------------------------------------------------------------
// Scaled vector spaces V^s.

template <class T>
class ScaledVector {
 public:
  ScaledVector(std::vector<T> value, ScaleFactor<T> scale)
      : value_(std::move(value)), scale_(std::move(scale)) {}

  const std::vector<T>& value() const noexcept { return value_; }
  const ScaleFactor<T>& scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return value_.size(); }

 private:
  std::vector<T> value_;
  ScaleFactor<T> scale_;
};

/// Scalar product as a number of the vector's structure.
template <class T>
ScaledNumber<T> dot(const ScaledVector<T>& u, const ScaledVector<T>& v) {
  if (!(u.scale() == v.scale())) fail(ErrorCode::MixedScales, "dot: vectors from different structures");
  if (u.size() != v.size()) fail(ErrorCode::InvalidArgument, "dot: dimension mismatch");
  T acc(0);
  for (std::size_t i = 0; i < u.size(); ++i) acc += u.value()[i] * v.value()[i];
  return ScaledNumber<T>(acc, u.scale());
}

/// Euclidean norm |v|_s. Floating point only.
template <class T>
  requires std::is_floating_point_v<T>
ScaledNumber<T> norm(const ScaledVector<T>& v) {
  using std::sqrt;
  return ScaledNumber<T>(sqrt(dot(v, v).value()), v.scale());
}

template <class T>
ScaledVector<T> connect_vector(const ScaleFactor<T>& target, const ScaleFactor<T>& source,
                               const ScaledVector<T>& v) {
  if (!(v.scale() == source))
    fail(ErrorCode::MixedScales, "connect_vector: vector is not in the source structure");
  if (target == source) return v;
  const T factor = source.value() / target.value();
  std::vector<T> out(v.value());
  for (auto& c : out) c *= factor;
  return ScaledVector<T>(std::move(out), target);
}

}  // namespace localmath
