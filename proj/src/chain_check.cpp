#include <cfloat>
#include <cmath>
#include <optional>

#include "sos_internal.hpp"
#include "sosz/sos_engine.hpp"

namespace sosz {

namespace {

using detail::Plane;
using detail::rearranged;
using detail::rising;

constexpr Work kRounding = 4.0L * DBL_EPSILON;

struct Side {
  Work value = 0.0L;
  Work error = 0.0L;
  bool converged = true;
};

// One side of an identity written as a series over an index. Terms are
// grouped by index, and the stopping rule is applied to the per-index
// totals as in the expansions.
class ChainSum {
 public:
  ChainSum(const TruncationPolicy& policy, int min_index, std::optional<int> last)
      : policy_(policy), min_index_(min_index), last_(last) {}

  // coefficient * base (or base^2), with the base's own truncation error.
  void add(Work coefficient, const SeriesEvaluation& base, bool squared) {
    const Work b = base.value.real();
    const Work tail = base.tail_estimate;
    const Work contribution = squared ? coefficient * b * b : coefficient * b;
    push(contribution);
    base_error_ += std::abs(coefficient) * (squared ? 2.0L * std::abs(b) * tail + tail * tail : tail);
    converged_ = converged_ && base.converged;
  }

  void add_exact(Work contribution) { push(contribution); }

  // Closes index `index`; true when the sum is complete.
  bool close(int index) {
    const Work last = std::abs(index_sum_);
    index_sum_ = 0.0L;
    ++indices_;
    if (last_) return index >= *last_;
    if (!std::isfinite(static_cast<double>(last))) {
      converged_ = false;
      return true;
    }
    last_contribution_ = last;
    const Work threshold = static_cast<Work>(policy_.rel_tol) * (std::abs(sum_.value()) + 1e-300L);
    small_ = last < threshold ? small_ + 1 : 0;
    if (index >= min_index_ && small_ >= policy_.consecutive_small) return true;
    if (indices_ >= policy_.max_terms) {
      converged_ = false;
      return true;
    }
    return false;
  }

  Side result() const {
    Side s;
    s.value = sum_.value();
    s.error = base_error_ + kRounding * magnitude_;
    if (!last_) s.error += last_contribution_ * policy_.consecutive_small;
    s.converged = converged_ && std::isfinite(static_cast<double>(s.value));
    return s;
  }

 private:
  void push(Work contribution) {
    sum_.add(contribution);
    index_sum_ += contribution;
    magnitude_ += std::abs(contribution);
  }

  const TruncationPolicy& policy_;
  int min_index_;
  std::optional<int> last_;
  CompensatedSum<Work> sum_;
  Work index_sum_ = 0.0L;
  Work magnitude_ = 0.0L;
  Work base_error_ = 0.0L;
  Work last_contribution_ = 0.0L;
  int indices_ = 0;
  int small_ = 0;
  bool converged_ = true;
};

Side modsq_side(const SeriesEvaluation& v) {
  const Work m = std::abs(static_cast<std::complex<Work>>(v.value));
  Side s;
  s.value = m * m;
  s.error = 2.0L * m * v.tail_estimate + kRounding * m * m;
  s.converged = v.converged;
  return s;
}

Side linear_side(const SeriesEvaluation& v) {
  Side s;
  s.value = v.value.real();
  s.error = v.tail_estimate + kRounding * std::abs(s.value);
  s.converged = v.converged;
  return s;
}

Side exact_side(Work value) {
  Side s;
  s.value = value;
  s.error = kRounding * std::abs(value);
  return s;
}

SeriesEvaluation real_series(Work value) {
  SeriesEvaluation s;
  s.value = Complex(static_cast<double>(value), 0.0);
  s.term_magnitude = std::abs(s.value.real());
  s.terms_used = 1;
  return s;
}

void require(bool ok, const char* message) {
  if (!ok) throw InvalidParameter(message);
}

// (2a)_n (n+a) / a with the removable singularity at a = 0 taken out:
// 1 for n = 0, (n+a) 2 (2a+1)_{n-1} otherwise.
Work doubled_ratio(Work a, int n) {
  return n == 0 ? 1.0L : (n + a) * 2.0L * rising(2.0L * a + 1.0L, n - 1);
}

// (A)_j (A+2j) / A, regular at A = 0.
Work laguerre_ratio(Work A, int j) {
  return j == 0 ? 1.0L : (A + 2.0L * j) * rising(A + 1.0L, j - 1);
}

std::optional<int> terminating_index(std::initializer_list<double> numerators) {
  std::optional<int> last;
  for (double p : numerators) {
    if (is_nonpositive_integer(p)) {
      const int end = static_cast<int>(-p);
      last = last ? std::min(*last, end) : end;
    }
  }
  return last;
}

int min_index(double radius, const TruncationPolicy& policy) {
  return detail::burn_in(ComplexPoint(radius, 0.0), policy);
}

SeriesEvaluation J(double alpha, double x, const TruncationPolicy& p) {
  return calJ(alpha, ComplexPoint(x, 0.0), p);
}
SeriesEvaluation F0(double c, double x, const TruncationPolicy& p) {
  return hyp0f1(c, Complex(x, 0.0), p);
}
SeriesEvaluation F1(double a, double c, double x, const TruncationPolicy& p) {
  return hyp1f1(a, c, Complex(x, 0.0), p);
}
SeriesEvaluation F2(double a, double b, double c, double x, const TruncationPolicy& p) {
  return hyp2f1_series(a, b, c, Complex(x, 0.0), p);
}

struct Sides {
  Side lhs;
  Side rhs;
  bool finite = false;
};

Sides eq3_4(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.alpha > -1.0, "Eq3_4 requires alpha > -1");
  const Plane pl(z);
  const Work a = p.alpha;
  ChainSum s(policy, min_index(2.0 * std::abs(z.value()), policy), std::nullopt);
  const Work g = std::tgamma(a + 1.0L);
  for (int k = 0;; ++k) {
    // (a+1/2)_k / (2a+1)_k = prod_{i<k} (a+1/2+i)/(2a+1+i); the i = 0
    // factor is 1/2 for every a, including a = -1/2.
    Work ratio = 1.0L;
    for (int i = 0; i < k; ++i) ratio *= i == 0 ? 0.5L : (a + 0.5L + i) / (2.0L * a + 1.0L + i);
    const Work coef = ratio * std::exp2(static_cast<Work>(k) - a) / (std::tgamma(k + 1.0L) * g) *
                      std::pow(pl.u, k);
    s.add(coef, J(p.alpha + k, 2.0 * z.x(), policy), false);
    if (s.close(k)) break;
  }
  return {modsq_side(calJ(p.alpha, z, policy)), s.result()};
}

Sides eq3_5(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.k >= 0, "Eq3_5 requires k >= 0");
  require(p.alpha + p.k > -1.0, "Eq3_5 requires alpha + k > -1");
  const Work a = p.alpha;
  const int k = p.k;
  const double x = z.x();
  const Work g = std::tgamma(k + a + 1.0L);
  ChainSum s(policy, min_index(2.0 * std::abs(x), policy), std::nullopt);
  for (int j = 0;; ++j) {
    // Gamma(k+a) (j+k+a) (2k+2a)_j with the pole at k+a = 0 cancelled
    const Work gamma_part = j == 0 ? g : g * (j + k + a) * 2.0L * rising(2.0L * k + 2.0L * a + 1.0L, j - 1);
    const Work coef = std::exp2(static_cast<Work>(k) + a) * gamma_part / std::tgamma(j + 1.0L) *
                      (j % 2 == 0 ? 1.0L : -1.0L) * std::pow(static_cast<Work>(x), 2 * j);
    s.add(coef, J(p.alpha + j + k, x, policy), true);
    if (s.close(j)) break;
  }
  return {linear_side(J(p.alpha + k, 2.0 * x, policy)), s.result()};
}

Sides eq3_6(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.alpha > -1.0 && p.alpha != -0.5, "Eq3_6 requires alpha > -1, alpha != -1/2");
  const Plane swapped(ComplexPoint(z.y(), z.x()));
  const Work a = p.alpha;
  ChainSum s(policy, min_index(std::abs(z.value()), policy), std::nullopt);
  for (int n = 0;; ++n) {
    const Work poly = rearranged(
        n, n + 2.0L * a, [&](int k) { return 1.0L / rising(2.0L * a + 1.0L, k); }, swapped, n);
    const Work coef = doubled_ratio(a, n) / std::tgamma(n + 1.0L) * (n % 2 == 0 ? 1.0L : -1.0L) * poly;
    s.add(coef, J(p.alpha + n, z.x(), policy), true);
    if (s.close(n)) break;
  }
  return {modsq_side(calJ(p.alpha, z, policy)), s.result()};
}

Sides eq3_15(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(!is_nonpositive_integer(p.c), "Eq3_15 requires c not zero or a negative integer");
  const Plane pl(z);
  const Work c = p.c;
  ChainSum s(policy, min_index(2.0 * std::abs(z.value()), policy), std::nullopt);
  for (int k = 0;; ++k) {
    const Work coef = std::pow(pl.u, k) / (std::tgamma(k + 1.0L) * rising(c, k) * rising(c, 2 * k));
    s.add(coef, F0(p.c + 2 * k, 2.0 * z.x(), policy), false);
    if (s.close(k)) break;
  }
  return {modsq_side(hyp0f1(p.c, z.value(), policy)), s.result()};
}

Sides eq3_16(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.k >= 0, "Eq3_16 requires k >= 0");
  const Work c = p.c + 2.0 * p.k;
  require(!is_nonpositive_integer(static_cast<double>(c)),
          "Eq3_16 requires c + 2k not zero or a negative integer");
  const double x = z.x();
  ChainSum s(policy, min_index(2.0 * std::abs(x), policy), std::nullopt);
  for (int j = 0;; ++j) {
    const Work coef = (j % 2 == 0 ? 1.0L : -1.0L) /
                      (std::tgamma(j + 1.0L) * rising(c + j - 1.0L, j) * rising(c, 2 * j)) *
                      std::pow(static_cast<Work>(x), 2 * j);
    s.add(coef, F0(static_cast<double>(c) + 2 * j, x, policy), true);
    if (s.close(j)) break;
  }
  return {linear_side(F0(static_cast<double>(c), 2.0 * x, policy)), s.result()};
}

Sides eq3_17(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(!is_nonpositive_integer(p.c), "Eq3_17 requires c not zero or a negative integer");
  const Plane swapped(ComplexPoint(z.y(), z.x()));
  const Work c = p.c;
  ChainSum s(policy, min_index(std::abs(z.value()), policy), std::nullopt);
  for (int n = 0;; ++n) {
    const Work poly =
        rearranged(n, n + c - 1.0L, [&](int k) { return 1.0L / rising(c, k); }, swapped, n);
    const Work coef = (n % 2 == 0 ? 1.0L : -1.0L) /
                      (std::tgamma(n + 1.0L) * rising(c + n - 1.0L, n) * rising(c, 2 * n)) * poly;
    s.add(coef, F0(p.c + 2 * n, z.x(), policy), true);
    if (s.close(n)) break;
  }
  return {modsq_side(hyp0f1(p.c, z.value(), policy)), s.result()};
}

Sides eq4_3(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.n >= 0 && p.k >= 0 && p.k <= p.n, "Eq4_3 requires 0 <= k <= n");
  const int N = p.n - p.k;
  const Work A = p.alpha + 2.0 * p.k;
  require(A > -1.0L, "Eq4_3 requires alpha + 2k > -1");
  const double x = z.x();
  ChainSum s(policy, 0, N);
  for (int j = 0; j <= N; ++j) {
    const Work coef = std::tgamma(static_cast<Work>(N - j) + 1.0L) * laguerre_ratio(A, j) /
                      (std::tgamma(j + 1.0L) * rising(A + 1.0L, N + j)) * (j % 2 == 0 ? 1.0L : -1.0L) *
                      std::pow(static_cast<Work>(x), 2 * j);
    s.add(coef, real_series(laguerre_real(N - j, static_cast<double>(A + 2.0L * j), x)), true);
    if (s.close(j)) break;
  }
  return {exact_side(laguerre_real(N, static_cast<double>(A), 2.0 * x)), s.result(), true};
}

Sides eq4_4(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.n >= 0, "Eq4_4 requires n >= 0");
  require(p.alpha > -1.0, "Eq4_4 requires alpha > -1");
  const Plane pl(z);
  const Work a = p.alpha;
  const int n = p.n;
  ChainSum s(policy, 0, n);
  const Work lead = rising(a + 1.0L, n) / std::tgamma(n + 1.0L);
  for (int k = 0; k <= n; ++k) {
    const Work coef = lead / (std::tgamma(k + 1.0L) * rising(a + 1.0L, k)) * std::pow(pl.u, k);
    s.add(coef, real_series(laguerre_real(n - k, p.alpha + 2 * k, 2.0 * z.x())), false);
    if (s.close(k)) break;
  }
  const Complex l = laguerre(n, p.alpha, z);
  return {exact_side(std::norm(static_cast<std::complex<Work>>(l))), s.result(), true};
}

Sides eq4_5(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(p.n >= 0, "Eq4_5 requires n >= 0");
  require(p.alpha > -1.0, "Eq4_5 requires alpha > -1");
  const Plane swapped(ComplexPoint(z.y(), z.x()));
  const Work a = p.alpha;
  const int n = p.n;
  ChainSum s(policy, 0, n);
  for (int k = 0; k <= n; ++k) {
    const Work poly =
        rearranged(k, k + a, [&](int j) { return 1.0L / rising(a + 1.0L, j); }, swapped, k);
    const Work coef = std::tgamma(static_cast<Work>(n - k) + 1.0L) * laguerre_ratio(a, k) /
                      (std::tgamma(n + 1.0L) * std::tgamma(k + 1.0L) * rising(a + 1.0L + n, k)) *
                      (k % 2 == 0 ? 1.0L : -1.0L) * poly;
    s.add(coef, real_series(laguerre_real(n - k, p.alpha + 2 * k, z.x())), true);
    if (s.close(k)) break;
  }
  const Complex l = laguerre(n, p.alpha, z);
  return {exact_side(std::norm(static_cast<std::complex<Work>>(l))), s.result(), true};
}

Sides eq4_13(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require(!is_nonpositive_integer(p.c), "Eq4_13 requires c not zero or a negative integer");
  const Plane swapped(ComplexPoint(z.y(), z.x()));
  const Work a = p.a;
  const Work c = p.c;
  const auto last = terminating_index({p.a, p.c - p.a});
  ChainSum s(policy, min_index(std::abs(z.value()), policy), last);
  for (int k = 0;; ++k) {
    const Work poly =
        rearranged(k, c + k - 1.0L, [&](int j) { return 1.0L / rising(c, j); }, swapped, k);
    const Work coef = rising(a, k) * rising(c - a, k) /
                      (std::tgamma(k + 1.0L) * rising(c, 2 * k) * rising(c + k - 1.0L, k)) * poly;
    s.add(coef, F1(p.a + k, p.c + 2 * k, z.x(), policy), true);
    if (s.close(k)) break;
  }
  return {modsq_side(hyp1f1(p.a, p.c, z.value(), policy)), s.result(), last.has_value()};
}

void require_disk(ComplexPoint z) {
  if (std::abs(z.value()) > 0.4) throw DomainError("2F1 chain identities require |z| <= 0.4");
}

Sides eq5_3(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require_disk(z);
  require(!is_nonpositive_integer(p.c), "Eq5_3 requires c not zero or a negative integer");
  const Plane pl(z);
  const Work a = p.a, b = p.b, c = p.c;
  const auto last = terminating_index({p.a, p.b, p.c - p.a, p.c - p.b});
  ChainSum s(policy, min_index(1.0, policy), last);
  const double w = 2.0 * z.x() - static_cast<double>(pl.u);
  for (int k = 0;; ++k) {
    const Work coef = rising(a, k) * rising(b, k) * rising(c - a, k) * rising(c - b, k) /
                      (std::tgamma(k + 1.0L) * rising(c, k) * rising(c, 2 * k)) * std::pow(pl.u, k);
    s.add(coef, F2(p.a + k, p.b + k, p.c + 2 * k, w, policy), false);
    if (s.close(k)) break;
  }
  return {modsq_side(hyp2f1_series(p.a, p.b, p.c, z.value(), policy)), s.result(), last.has_value()};
}

Sides eq5_4(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require_disk(z);
  require(p.k >= 0, "Eq5_4 requires k >= 0");
  const double A = p.a + p.k, B = p.b + p.k, C = p.c + 2.0 * p.k;
  require(!is_nonpositive_integer(C), "Eq5_4 requires c + 2k not zero or a negative integer");
  const Plane pl(z);
  const auto last = terminating_index({A, B});
  ChainSum s(policy, min_index(1.0, policy), last);
  for (int j = 0;; ++j) {
    const Work coef = rising(A, j) * rising(B, j) / (std::tgamma(j + 1.0L) * rising(C, j)) *
                      (j % 2 == 0 ? 1.0L : -1.0L) * std::pow(pl.u, j);
    s.add(coef, F2(A + j, B + j, C + j, 2.0 * z.x(), policy), false);
    if (s.close(j)) break;
  }
  const double w = 2.0 * z.x() - static_cast<double>(pl.u);
  return {linear_side(F2(A, B, C, w, policy)), s.result(), last.has_value()};
}

Sides eq5_5(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require_disk(z);
  require(!is_nonpositive_integer(p.c), "Eq5_5 requires c not zero or a negative integer");
  const double x = z.x();
  const auto last = terminating_index({p.a, p.b});
  ChainSum s(policy, min_index(1.0, policy), last);
  for (int m = 0;; ++m) {
    const Work coef = rising(p.a, m) * rising(p.b, m) / (std::tgamma(m + 1.0L) * rising(p.c, m)) *
                      std::pow(static_cast<Work>(x), 2 * m);
    s.add(coef, F2(p.a + m, p.b + m, p.c + m, 2.0 * x - x * x, policy), false);
    if (s.close(m)) break;
  }
  return {linear_side(F2(p.a, p.b, p.c, 2.0 * x, policy)), s.result(), last.has_value()};
}

Sides eq5_6(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require_disk(z);
  require(!is_nonpositive_integer(p.c), "Eq5_6 requires c not zero or a negative integer");
  const double x = z.x();
  const Work a = p.a, b = p.b, c = p.c;
  const auto last = terminating_index({p.a, p.b, p.c - p.a, p.c - p.b});
  ChainSum s(policy, min_index(1.0, policy), last);
  for (int n = 0;; ++n) {
    const Work coef = rising(a, n) * rising(b, n) * rising(c - a, n) * rising(c - b, n) /
                      (std::tgamma(n + 1.0L) * rising(c + n - 1.0L, n) * rising(c, 2 * n)) *
                      (n % 2 == 0 ? 1.0L : -1.0L) * std::pow(static_cast<Work>(x), 2 * n);
    s.add(coef, F2(p.a + n, p.b + n, p.c + 2 * n, x, policy), true);
    if (s.close(n)) break;
  }
  return {linear_side(F2(p.a, p.b, p.c, 2.0 * x - x * x, policy)), s.result(), last.has_value()};
}

Sides eq5_7(const ChainParams& p, ComplexPoint z, const TruncationPolicy& policy) {
  require_disk(z);
  require(!is_nonpositive_integer(p.c), "Eq5_7 requires c not zero or a negative integer");
  const Plane swapped(ComplexPoint(z.y(), z.x()));
  const Work a = p.a, b = p.b, c = p.c;
  const Work v = static_cast<Work>(z.y()) * z.y();
  const auto last = terminating_index({p.a, p.b});
  ChainSum s(policy, min_index(1.0, policy), last);
  for (int m = 0;; ++m) {
    for (int j = 0; j <= m; ++j) {
      const Work cj = rising(c - a, j) * rising(c - b, j);
      if (cj == 0.0L) break;
      const Work poly =
          rearranged(j, m + c - 1.0L, [&](int k) { return 1.0L / rising(c, k); }, swapped, j);
      const Work coef = rising(a, m) * rising(b, m) * cj /
                        (std::tgamma(j + 1.0L) * std::tgamma(static_cast<Work>(m - j) + 1.0L) *
                         rising(c, m + j) * rising(m + c - 1.0L, j)) *
                        (m % 2 == 0 ? 1.0L : -1.0L) * std::pow(v, m - j) * poly;
      s.add(coef, F2(p.a + m, p.b + m, p.c + m + j, z.x(), policy), true);
    }
    if (s.close(m)) break;
  }
  return {modsq_side(hyp2f1_series(p.a, p.b, p.c, z.value(), policy)), s.result(), last.has_value()};
}

}  // namespace

std::string to_string(ChainId id) {
  switch (id) {
    case ChainId::Eq3_4: return "Eq3_4";
    case ChainId::Eq3_5: return "Eq3_5";
    case ChainId::Eq3_6: return "Eq3_6";
    case ChainId::Eq3_15: return "Eq3_15";
    case ChainId::Eq3_16: return "Eq3_16";
    case ChainId::Eq3_17: return "Eq3_17";
    case ChainId::Eq4_3: return "Eq4_3";
    case ChainId::Eq4_4: return "Eq4_4";
    case ChainId::Eq4_5: return "Eq4_5";
    case ChainId::Eq4_13: return "Eq4_13";
    case ChainId::Eq5_3: return "Eq5_3";
    case ChainId::Eq5_4: return "Eq5_4";
    case ChainId::Eq5_5: return "Eq5_5";
    case ChainId::Eq5_6: return "Eq5_6";
    case ChainId::Eq5_7: return "Eq5_7";
  }
  return "unknown";
}

const std::vector<ChainId>& all_chain_ids() {
  static const std::vector<ChainId> ids = {
      ChainId::Eq3_4,  ChainId::Eq3_5, ChainId::Eq3_6, ChainId::Eq3_15, ChainId::Eq3_16,
      ChainId::Eq3_17, ChainId::Eq4_3, ChainId::Eq4_4, ChainId::Eq4_5,  ChainId::Eq4_13,
      ChainId::Eq5_3,  ChainId::Eq5_4, ChainId::Eq5_5, ChainId::Eq5_6,  ChainId::Eq5_7};
  return ids;
}

ChainId chain_id_from_string(const std::string& tag) {
  for (ChainId id : all_chain_ids()) {
    if (to_string(id) == tag) return id;
  }
  throw InvalidParameter("unknown chain identity '" + tag + "'");
}

ChainResidual chain_check(ChainId which, const ChainParams& params, ComplexPoint z,
                          const TruncationPolicy& policy) {
  policy.validate();
  Sides s;
  switch (which) {
    case ChainId::Eq3_4: s = eq3_4(params, z, policy); break;
    case ChainId::Eq3_5: s = eq3_5(params, z, policy); break;
    case ChainId::Eq3_6: s = eq3_6(params, z, policy); break;
    case ChainId::Eq3_15: s = eq3_15(params, z, policy); break;
    case ChainId::Eq3_16: s = eq3_16(params, z, policy); break;
    case ChainId::Eq3_17: s = eq3_17(params, z, policy); break;
    case ChainId::Eq4_3: s = eq4_3(params, z, policy); break;
    case ChainId::Eq4_4: s = eq4_4(params, z, policy); break;
    case ChainId::Eq4_5: s = eq4_5(params, z, policy); break;
    case ChainId::Eq4_13: s = eq4_13(params, z, policy); break;
    case ChainId::Eq5_3: s = eq5_3(params, z, policy); break;
    case ChainId::Eq5_4: s = eq5_4(params, z, policy); break;
    case ChainId::Eq5_5: s = eq5_5(params, z, policy); break;
    case ChainId::Eq5_6: s = eq5_6(params, z, policy); break;
    case ChainId::Eq5_7: s = eq5_7(params, z, policy); break;
  }
  ChainResidual r;
  r.lhs = static_cast<double>(s.lhs.value);
  r.rhs = static_cast<double>(s.rhs.value);
  const Work scale = std::abs(s.lhs.value) + 1e-300L;
  r.residual = static_cast<double>(std::abs(s.lhs.value - s.rhs.value) / scale);
  r.finite = s.finite;
  r.error_estimate = s.finite ? 0.0 : static_cast<double>((s.lhs.error + s.rhs.error) / scale);
  r.converged = s.lhs.converged && s.rhs.converged;
  return r;
}

}  // namespace sosz
