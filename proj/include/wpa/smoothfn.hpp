#pragma once

// A function together with the derivatives the caller can supply. Harness
// code never differentiates numerically; derivatives come from the symbolic
// layer or from closed forms in tests.

#include <functional>
#include <vector>

#include "wpa/errors.hpp"

namespace wpa {

template <class R>
struct SmoothFn {
  std::vector<std::function<R(R)>> d;  // d[k] = k-th derivative

  SmoothFn() = default;
  explicit SmoothFn(std::function<R(R)> f) { d.push_back(std::move(f)); }
  SmoothFn(std::initializer_list<std::function<R(R)>> fs) : d(fs) {}

  R operator()(R x) const { return d[0](x); }
  int max_order() const { return int(d.size()) - 1; }
  R deriv(int k, R x) const {
    if (k < 0 || k >= int(d.size()))
      throw Error("smoothfn", errc::order_unavailable,
                  "derivative order " + std::to_string(k) + " not supplied");
    return d[k](x);
  }
};

}  // namespace wpa
