#pragma once

#include <cmath>
#include <functional>
#include <map>

#include "sosz/compensated_sum.hpp"
#include "sosz/sos_engine.hpp"

namespace sosz::detail {

inline Work rising(Work a, int k) { return pochhammer_work(a, k); }

// u = x^2 + y^2 and v = y^2, so that y^{2N} 2F1(.; .; 1 + x^2/y^2)
// becomes a polynomial in u and v with no division by y.
struct Plane {
  explicit Plane(ComplexPoint z)
      : x(z.x()), u(static_cast<Work>(z.x()) * z.x() + static_cast<Work>(z.y()) * z.y()),
        v(static_cast<Work>(z.y()) * z.y()) {}
  Work x;
  Work u;
  Work v;
};

// sum_k (-n)_k (b)_k / k! * weight(k) * u^k v^{N-k}, stopping at the first
// vanishing numerator.
template <typename Weight>
Work rearranged(int n, Work b, Weight&& weight, const Plane& pl, int N) {
  CompensatedSum<Work> s;
  Work p = 1.0L;
  Work upow = 1.0L;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      p *= (static_cast<Work>(k - 1 - n)) * (b + static_cast<Work>(k - 1)) / static_cast<Work>(k);
      upow *= pl.u;
    }
    if (p == 0.0L) break;
    s.add(p * weight(k) * upow * std::pow(pl.v, N - k));
  }
  return s.value();
}

// Memoized real base values indexed by parameter shift.
class BaseCache {
 public:
  using Eval = std::function<Work(int, bool&)>;
  explicit BaseCache(Eval eval) : eval_(std::move(eval)) {}

  Work operator()(int shift) {
    auto it = cache_.find(shift);
    if (it != cache_.end()) return it->second;
    bool ok = true;
    const Work v = eval_(shift, ok);
    converged_ = converged_ && ok;
    cache_.emplace(shift, v);
    return v;
  }
  bool converged() const { return converged_; }

 private:
  Eval eval_;
  std::map<int, Work> cache_;
  bool converged_ = true;
};

// Outer-sum accumulator: terms are added per index, and the core-math
// stopping rule is applied to the per-index contributions once the index
// reaches min_index.
class OuterSum {
 public:
  OuterSum(SosExpansion& e, const TruncationPolicy& policy, int min_index)
      : expansion_(e), policy_(policy), min_index_(min_index) {}

  void add(Work coefficient, Work base, int index, int sub_index = 0, int group = 0);
  // Returns true when the sum should stop after `index`.
  bool finish_index(int index);
  void set_base_converged(bool ok) { base_converged_ = base_converged_ && ok; }
  void finalize(bool terminating);

 private:
  SosExpansion& expansion_;
  const TruncationPolicy& policy_;
  int min_index_;
  CompensatedSum<Work> sum_;
  Work index_sum_ = 0.0L;
  Work magnitude_ = 0.0L;
  Work last_ = 0.0L;
  int indices_ = 0;
  int small_ = 0;
  bool finite_ = true;
  bool stopped_ = false;
  bool base_converged_ = true;
};

int burn_in(ComplexPoint z, const TruncationPolicy& policy);

}  // namespace sosz::detail
