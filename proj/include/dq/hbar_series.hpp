#pragma once
#include <vector>

#include "dq/error.hpp"

namespace dq {

// Truncated formal power series in hbar; arithmetic is modulo hbar^(K+1).
// T needs +, * and a zero prototype supplied at construction.
template <class T>
class HbarSeries {
 public:
  HbarSeries(int order, const T& zero) : c_(order + 1, zero) {
    if (order < 0) throw Error("negative series order");
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& at(int k) const { return c_.at(k); }
  T& at(int k) { return c_.at(k); }
  const std::vector<T>& coeffs() const { return c_; }

  HbarSeries operator+(const HbarSeries& o) const {
    check(o);
    HbarSeries r = *this;
    for (int k = 0; k <= order(); ++k) r.c_[k] = r.c_[k] + o.c_[k];
    return r;
  }

  HbarSeries operator-(const HbarSeries& o) const {
    check(o);
    HbarSeries r = *this;
    for (int k = 0; k <= order(); ++k) r.c_[k] = r.c_[k] - o.c_[k];
    return r;
  }

  HbarSeries operator*(const HbarSeries& o) const {
    check(o);
    HbarSeries r(order(), zero_like());
    for (int a = 0; a <= order(); ++a)
      for (int b = 0; a + b <= order(); ++b) r.c_[a + b] = r.c_[a + b] + c_[a] * o.c_[b];
    return r;
  }

  // Re-truncate to a lower order.
  HbarSeries truncated(int k) const {
    HbarSeries r(k, zero_like());
    for (int i = 0; i <= k && i <= order(); ++i) r.c_[i] = c_[i];
    return r;
  }

  bool operator==(const HbarSeries& o) const { return c_ == o.c_; }

 private:
  T zero_like() const { return c_.front() - c_.front(); }
  void check(const HbarSeries& o) const {
    if (order() != o.order()) throw Error("series order mismatch");
  }
  std::vector<T> c_;
};

}  // namespace dq
