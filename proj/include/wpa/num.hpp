#pragma once

// Scalar abstraction layer: the numeric core is templated on the floating
// type so that harness computations can run in double or __float128.
// Unqualified math calls inside namespace wpa resolve to the overload set
// below.

#include <cmath>
#include <cstdint>
#include <limits>

#include <quadmath.h>

namespace wpa {
namespace num {

using std::atan;
using std::cos;
using std::exp;
using std::expm1;
using std::fabs;
using std::isfinite;
using std::isnan;
using std::log;
using std::log1p;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

inline __float128 sqrt(__float128 x) { return ::sqrtq(x); }
inline __float128 exp(__float128 x) { return ::expq(x); }
inline __float128 expm1(__float128 x) { return ::expm1q(x); }
inline __float128 log(__float128 x) { return ::logq(x); }
inline __float128 log1p(__float128 x) { return ::log1pq(x); }
inline __float128 sin(__float128 x) { return ::sinq(x); }
inline __float128 cos(__float128 x) { return ::cosq(x); }
inline __float128 atan(__float128 x) { return ::atanq(x); }
inline __float128 tanh(__float128 x) { return ::tanhq(x); }
inline __float128 fabs(__float128 x) { return ::fabsq(x); }
inline __float128 pow(__float128 x, __float128 y) { return ::powq(x, y); }
inline bool isfinite(__float128 x) { return ::finiteq(x) != 0; }
inline bool isnan(__float128 x) { return ::isnanq(x) != 0; }

template <class R>
inline double to_double(R x) {
  return static_cast<double>(x);
}

template <class R>
inline R pi() {
  return R(3.14159265358979323846264338327950288L);
}
template <>
inline __float128 pi<__float128>() {
  static const __float128 v = 4 * ::atanq(__float128(1));
  return v;
}

template <class R>
inline R eps() {
  return std::numeric_limits<R>::epsilon();
}
template <>
inline __float128 eps<__float128>() {
  // 2^-112
  static const __float128 v = [] {
    __float128 e = 1;
    for (int i = 0; i < 112; ++i) e /= 2;
    return e;
  }();
  return v;
}

template <class R>
inline R huge() {
  return std::numeric_limits<R>::max();
}
template <>
inline __float128 huge<__float128>() {
  return FLT128_MAX;
}

template <class R>
inline R infinity() {
  return std::numeric_limits<R>::infinity();
}
template <>
inline __float128 infinity<__float128>() {
  return __float128(std::numeric_limits<double>::infinity());
}

// Largest z with exp(z) finite, with margin.
template <class R>
inline R exp_arg_max() {
  return R(700);
}
template <>
inline __float128 exp_arg_max<__float128>() {
  return __float128(11300);
}

}  // namespace num

namespace detail {
template <class R>
struct precision_tag;
template <>
struct precision_tag<double> {
  static constexpr const char* name = "double";
};
template <>
struct precision_tag<long double> {
  static constexpr const char* name = "long-double";
};
template <>
struct precision_tag<__float128> {
  static constexpr const char* name = "quad";
};
}  // namespace detail

}  // namespace wpa
