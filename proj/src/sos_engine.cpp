#include "sosz/sos_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sos_internal.hpp"

namespace sosz {

using detail::BaseCache;
using detail::Plane;
using detail::rearranged;
using detail::rising;

double SosExpansion::partial_sum(std::size_t count) const {
  CompensatedSum<Work> s;
  for (std::size_t i = 0; i < std::min(count, terms.size()); ++i) {
    s.add(static_cast<Work>(terms[i].coefficient) * terms[i].square_base * terms[i].square_base);
  }
  return static_cast<double>(s.value());
}

double SosExpansion::min_coefficient() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) m = std::min(m, t.coefficient);
  return m;
}

namespace detail {

void OuterSum::add(Work coefficient, Work base, int index, int sub_index, int group) {
  const Work contribution = coefficient * base * base;
  sum_.add(contribution);
  index_sum_ += contribution;
  magnitude_ += std::abs(contribution);
  SosTerm t;
  t.coefficient = static_cast<double>(coefficient);
  t.square_base = static_cast<double>(base);
  t.index = index;
  t.sub_index = sub_index;
  t.group = group;
  expansion_.terms.push_back(t);
}

bool OuterSum::finish_index(int index) {
  ++indices_;
  const Work last = std::abs(index_sum_);
  last_ = last;
  index_sum_ = 0.0L;
  if (!std::isfinite(static_cast<double>(last))) {
    finite_ = false;
    return true;
  }
  const Work threshold =
      static_cast<Work>(policy_.rel_tol) * (std::abs(sum_.value()) + 1e-300L);
  small_ = last < threshold ? small_ + 1 : 0;
  if (index >= min_index_ && small_ >= policy_.consecutive_small) {
    stopped_ = true;
    return true;
  }
  return indices_ >= policy_.max_terms;
}

void OuterSum::finalize(bool terminating) {
  expansion_.total = static_cast<double>(sum_.value());
  expansion_.terms_used = indices_;
  expansion_.term_magnitude = static_cast<double>(magnitude_);
  if (terminating) {
    expansion_.tail_estimate = 0.0;
    expansion_.converged = finite_ && base_converged_;
  } else {
    expansion_.tail_estimate = static_cast<double>(last_) * policy_.consecutive_small;
    expansion_.converged = stopped_ && finite_ && base_converged_;
  }
  if (!std::isfinite(expansion_.total)) expansion_.converged = false;
}

int burn_in(ComplexPoint z, const TruncationPolicy& policy) {
  // Contributions of the nonterminating expansions grow roughly like
  // (|z| |x|)^n / (n!)^2 before decaying; do not stop before the peak.
  const double r = std::hypot(z.x(), z.y());
  return static_cast<int>(std::ceil(2.0 * r)) + policy.consecutive_small;
}

}  // namespace detail

namespace {

using detail::OuterSum;

void require(bool ok, const char* message) {
  if (!ok) throw InvalidParameter(message);
}

void require_order(int order) {
  require(order >= 0 && order <= 2, "sos expansion: order must be 0, 1 or 2");
}

SosExpansion start(const FunctionFamily& family, int order) {
  return SosExpansion{family, order, {}, 0.0, 1.0, 0, 0.0, true, 0.0};
}

}  // namespace

SosExpansion sincos_sos(Trig which, ComplexPoint z, int order) {
  require_order(order);
  const FunctionFamily family = which == Trig::Sin ? FunctionFamily::sine() : FunctionFamily::cosine();
  SosExpansion e = start(family, order);
  const TruncationPolicy policy;
  OuterSum sum(e, policy, 0);
  const Work x = z.x();
  const Work y = z.y();
  switch (order) {
    case 0:
      sum.add(1.0L, which == Trig::Sin ? std::sin(x) : std::cos(x), 0);
      sum.add(1.0L, std::sinh(y), 1);
      break;
    case 1: {
      // y sinh 2y = (sinh 2y / y) * y^2, coefficient 2 at y = 0
      const Work coef = y == 0.0L ? 2.0L : std::sinh(2.0L * y) / y;
      sum.add(coef, y, 0);
      break;
    }
    case 2:
      sum.add(2.0L, std::cosh(y), 0);
      sum.add(2.0L, std::sinh(y), 1);
      break;
  }
  sum.finish_index(0);
  sum.finalize(true);
  return e;
}

SosExpansion bessel_sos(double alpha, ComplexPoint z, int order, const TruncationPolicy& policy) {
  require_order(order);
  policy.validate();
  require(order == 0 ? alpha > -1.0 : alpha >= -1.0,
          order == 0 ? "bessel_sos: order 0 requires alpha > -1"
                     : "bessel_sos: orders 1, 2 require alpha >= -1");
  SosExpansion e = start(FunctionFamily::bessel(alpha), order);
  const Plane pl(z);
  const Work a = alpha;
  BaseCache base([&](int shift, bool& ok) {
    const SeriesEvaluation s = calJ(alpha + shift, ComplexPoint(z.x(), 0.0), policy);
    ok = s.converged;
    return static_cast<Work>(s.value.real());
  });
  OuterSum sum(e, policy, detail::burn_in(z, policy));
  for (int n = 0;; ++n) {
    if (order == 0) {
      // (2n+2a)(2a+1)_{n-1}/n! y^{2n} 2F1(-n, 1-n; 2a+1; 1+x^2/y^2), with
      // (2a+1)_{n-1} / (2a+1)_k folded into (2a+1+k)_{n-1-k}.
      Work coef = 1.0L;
      if (n >= 1) {
        const Work poly = rearranged(
            n, 1.0L - n, [&](int k) { return rising(2.0L * a + 1.0L + k, n - 1 - k); }, pl, n);
        coef = (2.0L * n + 2.0L * a) / std::tgamma(n + 1.0L) * poly;
      }
      sum.add(coef, base(n), n);
    } else {
      const Work nf = std::tgamma(n + 1.0L);
      const Work poly1 =
          rearranged(n, -static_cast<Work>(n), [&](int k) { return rising(2.0L * a + 2.0L + k, n - k); }, pl, n);
      const Work c1 = (n + a + 1.0L) / nf * poly1;
      if (order == 1) {
        sum.add(4.0L * pl.v * c1, base(n + 1), n);
      } else {
        sum.add(4.0L * c1, base(n + 1), n, 0, 0);
        const Work poly2 = rearranged(
            n, -static_cast<Work>(n) - 1.0L, [&](int k) { return rising(2.0L * a + 3.0L + k, n + 1 - k); }, pl, n);
        sum.add(8.0L * pl.v * (n + a + 2.0L) / nf * poly2, base(n + 2), n, 0, 1);
      }
    }
    if (sum.finish_index(n)) break;
  }
  sum.set_base_converged(base.converged());
  sum.finalize(false);
  return e;
}

SosExpansion hyp0f1_sos(double c, ComplexPoint z, int order, const TruncationPolicy& policy) {
  require_order(order);
  policy.validate();
  require(order == 0 ? c > 0.0 : c >= -1.0,
          order == 0 ? "hyp0f1_sos: order 0 requires c > 0" : "hyp0f1_sos: orders 1, 2 require c >= -1");
  const Normalization norm = order == 0 ? Normalization::Plain : Normalization::CTimesCPlusOne;
  SosExpansion e = start(FunctionFamily::hyp0f1(c, norm), order);
  const Plane pl(z);
  const Work cc = c;
  BaseCache base([&](int shift, bool& ok) {
    const SeriesEvaluation s = hyp0f1(c + shift, Complex(z.x(), 0.0), policy);
    ok = s.converged;
    return static_cast<Work>(s.value.real());
  });
  OuterSum sum(e, policy, detail::burn_in(z, policy));
  for (int n = 0;; ++n) {
    const Work nf = std::tgamma(n + 1.0L);
    if (order == 0) {
      const Work poly = rearranged(n, 1.0L - n, [&](int k) { return 1.0L / rising(cc, k); }, pl, n);
      const Work coef = poly / (nf * rising(n + cc - 1.0L, n) * rising(cc, 2 * n));
      sum.add(coef, base(2 * n), n);
    } else {
      // (c+1)^2 / ((c+1)_{2n} (c+1)_{2n+1}) with the (c+1) factors cancelled.
      const Work s1 = n == 0 ? cc + 1.0L : 1.0L / (rising(cc + 2.0L, 2 * n - 1) * rising(cc + 2.0L, 2 * n));
      const Work poly1 =
          rearranged(n, -static_cast<Work>(n), [&](int k) { return rising(cc + 1.0L + k, n - k); }, pl, n);
      const Work c1 = s1 / nf * poly1;
      if (order == 1) {
        sum.add(2.0L * pl.v * c1, base(2 * n + 2), n);
      } else {
        sum.add(2.0L * c1, base(2 * n + 2), n, 0, 0);
        const Work s2 = 1.0L / (rising(cc + 2.0L, 2 * n + 1) * rising(cc + 2.0L, 2 * n + 2));
        const Work poly2 = rearranged(
            n, -static_cast<Work>(n) - 1.0L, [&](int k) { return rising(cc + 2.0L + k, n + 1 - k); }, pl, n);
        sum.add(4.0L * pl.v * s2 / nf * poly2, base(2 * n + 4), n, 0, 1);
      }
    }
    if (sum.finish_index(n)) break;
  }
  sum.set_base_converged(base.converged());
  sum.finalize(false);
  return e;
}

SosExpansion laguerre_sos(int n, double alpha, ComplexPoint z, int order) {
  require_order(order);
  require(n >= 0, "laguerre_sos: n must be >= 0");
  require(order == 0 ? alpha > -1.0 : alpha >= -2.0,
          order == 0 ? "laguerre_sos: order 0 requires alpha > -1"
                     : "laguerre_sos: orders 1, 2 require alpha >= -2");
  SosExpansion e = start(FunctionFamily::laguerre(n, alpha), order);
  const Plane pl(z);
  const Work a = alpha;
  const TruncationPolicy policy;
  OuterSum sum(e, policy, 0);
  auto lag = [&](int degree, Work upper) {
    return static_cast<Work>(laguerre_real(degree, static_cast<double>(upper), z.x()));
  };
  const Work nf = std::tgamma(n + 1.0L);
  if (order == 0) {
    for (int k = 0; k <= n; ++k) {
      Work coef = 1.0L;
      if (k >= 1) {
        const Work poly =
            rearranged(k, 1.0L - k, [&](int j) { return rising(a + 1.0L + j, k - 1 - j); }, pl, k);
        coef = std::tgamma(static_cast<Work>(n - k) + 1.0L) * (2.0L * k + a) /
               (nf * std::tgamma(k + 1.0L) * rising(a + 1.0L + n, k)) * poly;
      }
      sum.add(coef, lag(n - k, a + 2.0L * k), k);
      sum.finish_index(k);
    }
  } else {
    for (int k = 0; k <= n - 1; ++k) {
      // (2k+a+2) / (n+a+1)_{k+1}; for n = 1 this ratio is identically 1,
      // including the 0/0 point a = -2.
      const Work ratio = n == 1 ? 1.0L : (2.0L * k + a + 2.0L) / rising(n + a + 1.0L, k + 1);
      const Work poly1 =
          rearranged(k, -static_cast<Work>(k), [&](int j) { return rising(a + 2.0L + j, k - j); }, pl, k);
      const Work c1 = ratio * std::tgamma(static_cast<Work>(n - k)) / (nf * std::tgamma(k + 1.0L)) * poly1;
      const Work b1 = lag(n - k - 1, a + 2.0L * k + 2.0L);
      if (order == 1) {
        sum.add(2.0L * pl.v * c1, b1, k);
      } else {
        sum.add(2.0L * c1, b1, k, 0, 0);
        if (k <= n - 2) {
          const Work poly2 = rearranged(
              k, -static_cast<Work>(k) - 1.0L, [&](int j) { return rising(a + 3.0L + j, k + 1 - j); }, pl, k);
          const Work c2 = std::tgamma(static_cast<Work>(n - k - 1)) * (2.0L * k + a + 4.0L) /
                          (nf * std::tgamma(k + 1.0L) * rising(n + a + 1.0L, k + 2)) * poly2;
          sum.add(4.0L * pl.v * c2, lag(n - k - 2, a + 2.0L * k + 4.0L), k, 0, 1);
        }
      }
      sum.finish_index(k);
    }
  }
  sum.finalize(true);
  return e;
}

SosExpansion hyp1f1_sos(double a, double c, ComplexPoint z, int order, const TruncationPolicy& policy) {
  require_order(order);
  policy.validate();
  if (order == 0) {
    require(!is_nonpositive_integer(c), "hyp1f1_sos: order 0 requires c not zero or a negative integer");
  } else {
    require(c >= -1.0, "hyp1f1_sos: orders 1, 2 require c >= -1");
  }
  const Normalization norm = order == 0 ? Normalization::Plain : Normalization::CTimesCPlusOne;
  SosExpansion e = start(FunctionFamily::hyp1f1(a, c, norm), order);
  const Plane pl(z);
  const Work aa = a;
  const Work cc = c;
  auto base = [&](double upper, double lower, bool& ok) {
    const SeriesEvaluation s = hyp1f1(upper, lower, Complex(z.x(), 0.0), policy);
    ok = ok && s.converged;
    return static_cast<Work>(s.value.real());
  };
  bool base_ok = true;
  // The outer sum terminates when a or c - a is a nonpositive integer.
  // Orders 1 and 2 start at (a)_{k+1}, so they end one index earlier.
  int last = std::numeric_limits<int>::max();
  bool terminating = false;
  for (double p : {a, c - a}) {
    if (is_nonpositive_integer(p)) {
      terminating = true;
      last = std::min(last, static_cast<int>(-p) - (order == 0 ? 0 : 1));
    }
  }
  OuterSum sum(e, policy, terminating ? 0 : detail::burn_in(z, policy));
  if (terminating && last < 0) {  // no nonzero term at all
    sum.finish_index(0);
    sum.finalize(true);
    return e;
  }
  for (int k = 0;; ++k) {
    const Work kf = std::tgamma(k + 1.0L);
    const Work sign = k % 2 == 0 ? 1.0L : -1.0L;
    if (order == 0) {
      const Work poly = rearranged(k, 1.0L - k, [&](int j) { return 1.0L / rising(cc, j); }, pl, k);
      const Work coef = rising(aa, k) * rising(cc - aa, k) * sign /
                        (kf * rising(cc, 2 * k) * rising(cc + k - 1.0L, k)) * poly;
      sum.add(coef, base(a + k, c + 2 * k, base_ok), k);
    } else {
      // (c+1) 2F1(-k, -k; c+1; .): the factor (c+1) cancels against (c+1)_j.
      const Work poly1 = rearranged(
          k, -static_cast<Work>(k),
          [&](int j) { return j == 0 ? cc + 1.0L : 1.0L / rising(cc + 2.0L, j - 1); }, pl, k);
      const Work c1 = rising(aa, k + 1) * rising(cc - aa, k + 1) * (-sign) /
                      (kf * rising(cc + 2.0L, 2 * k) * rising(cc + k + 1.0L, k)) * poly1;
      const Work b1 = base(a + k + 1, c + 2 * k + 2, base_ok);
      if (order == 1) {
        sum.add(2.0L * pl.v * c1, b1, k);
      } else {
        sum.add(2.0L * c1, b1, k, 0, 0);
        const Work poly2 = rearranged(
            k, -static_cast<Work>(k) - 1.0L, [&](int j) { return 1.0L / rising(cc + 2.0L, j); }, pl, k);
        const Work c2 = rising(aa, k + 2) * rising(cc - aa, k + 2) * sign /
                        (kf * rising(cc + 2.0L, 2 * k + 2) * rising(cc + k + 3.0L, k)) * poly2;
        sum.add(4.0L * pl.v * c2, base(a + k + 2, c + 2 * k + 4, base_ok), k, 0, 1);
      }
    }
    const bool stop = sum.finish_index(k);
    if (terminating ? k >= last : stop) break;
  }
  sum.set_base_converged(base_ok);
  sum.finalize(terminating);
  return e;
}

namespace {

// Shared body of the 2F1 double sum. With `polynomial_bases` the bases
// 2F1(m-n, m+b; m+j+c; x) are finite and evaluated without the |x| < 1
// restriction.
void hyp2f1_double_sum(SosExpansion& e, double a, double b, double c, ComplexPoint z,
                       const TruncationPolicy& policy, bool polynomial_bases) {
  const Plane pl(z);
  const Work aa = a;
  const Work bb = b;
  const Work cc = c;
  bool base_ok = true;
  int last = -1;
  for (double p : {a, b}) {
    if (is_nonpositive_integer(p)) {
      const int end = static_cast<int>(-p);
      last = last < 0 ? end : std::min(last, end);
    }
  }
  const bool terminating = last >= 0;
  OuterSum sum(e, policy, terminating ? 0 : detail::burn_in(z, policy));
  for (int m = 0;; ++m) {
    const Work am = rising(aa, m) * rising(bb, m);
    for (int j = 0; j <= m; ++j) {
      const Work cj = rising(cc - aa, j) * rising(cc - bb, j);
      if (cj == 0.0L) break;
      const Work sign = (m + j) % 2 == 0 ? 1.0L : -1.0L;
      const Work poly = rearranged(j, 1.0L - m, [&](int k) { return 1.0L / rising(cc, k); }, pl, m);
      const Work coef = am * cj * sign /
                        (std::tgamma(j + 1.0L) * std::tgamma(static_cast<Work>(m - j) + 1.0L) *
                         rising(cc, m + j) * rising(m + cc - 1.0L, j)) *
                        poly;
      Work basev = 0.0L;
      if (polynomial_bases) {
        basev = hyp2f1_terminating(static_cast<int>(-(m + a)), m + b, m + j + c, z.x());
      } else {
        const SeriesEvaluation s = hyp2f1_series(m + a, m + b, m + j + c, Complex(z.x(), 0.0), policy);
        base_ok = base_ok && s.converged;
        basev = s.value.real();
      }
      sum.add(coef, basev, m, j);
    }
    const bool stop = sum.finish_index(m);
    if (terminating ? m >= last : stop) break;
  }
  sum.set_base_converged(base_ok);
  sum.finalize(terminating);
}

}  // namespace

SosExpansion hyp2f1_sos(double a, double b, double c, ComplexPoint z, const TruncationPolicy& policy,
                        double radius_cap) {
  policy.validate();
  require(!is_nonpositive_integer(c), "hyp2f1_sos: c must not be zero or a negative integer");
  if (!(radius_cap < 1.0)) throw DomainError("hyp2f1_sos: radius cap must be < 1");
  if (std::hypot(z.x(), z.y()) > radius_cap) {
    throw DomainError("hyp2f1_sos: |z| exceeds the radius cap");
  }
  SosExpansion e = start(FunctionFamily::hyp2f1(a, b, c), 0);
  hyp2f1_double_sum(e, a, b, c, z, policy, false);
  return e;
}

SosExpansion jacobi_sos(int n, double alpha, double beta, ComplexPoint z) {
  require(n >= 0, "jacobi_sos: n must be >= 0");
  require(alpha > -1.0, "jacobi_sos: alpha must be > -1");
  SosExpansion e = start(FunctionFamily::jacobi(n, alpha, beta), 0);
  const Work norm = std::tgamma(n + 1.0L) / rising(static_cast<Work>(alpha) + 1.0L, n);
  e.modsq_scale = static_cast<double>(norm * norm);
  hyp2f1_double_sum(e, -n, n + alpha + beta + 1.0, alpha + 1.0, z, TruncationPolicy{}, true);
  return e;
}

CoefficientDecomposition bessel_coefficient_decomposition(int n, double alpha, double t) {
  if (n < 0) throw InvalidParameter("bessel_coefficient_decomposition: n must be >= 0");
  if (!(alpha > -1.0)) throw InvalidParameter("bessel_coefficient_decomposition: requires alpha > -1");
  if (!(t >= 0.0)) throw InvalidParameter("bessel_coefficient_decomposition: requires t >= 0");
  CoefficientDecomposition out;
  const Work c = 2.0L * alpha + 1.0L;
  out.direct = c == 0.0L ? std::numeric_limits<double>::quiet_NaN()
                         : static_cast<double>(c * hyp2f1_terminating(n, 1.0 - n, static_cast<double>(c), 1.0 + t));
  const Work head = c + static_cast<Work>(n) * n - n;
  const Work lin = static_cast<Work>(n) * (n - 1) * t;
  CompensatedSum<Work> s;
  s.add(head);
  s.add(lin);
  out.terms_positive = n < 2 || (head > 0.0L && lin >= 0.0L);
  Work p = static_cast<Work>(n) * (n - 1);  // (-n)_1 (1-n)_1 / 1!
  for (int k = 2; k <= n; ++k) {
    p *= static_cast<Work>(k - 1 - n) * static_cast<Work>(k - n) / k;
    const Work term = p / detail::rising(c + 1.0L, k - 1) * std::pow(1.0L + t, k);
    if (term < 0.0L) out.terms_positive = false;
    s.add(term);
  }
  out.decomposed = static_cast<double>(s.value());
  return out;
}

bool sos_available(const FunctionFamily& family, int order) {
  if (order < 0 || order > 2) return false;
  const auto& p = family.params();
  switch (family.kind()) {
    case FamilyKind::SinCos:
      return true;
    case FamilyKind::Bessel:
      return order == 0 ? p[0] > -1.0 : p[0] >= -1.0;
    case FamilyKind::Hyp0F1:
      return order == 0 ? p[0] > 0.0 : p[0] >= -1.0;
    case FamilyKind::Laguerre:
      return order == 0 ? p[1] > -1.0 : p[1] >= -2.0;
    case FamilyKind::Hyp1F1:
      return order == 0 ? !is_nonpositive_integer(p[1]) : p[1] >= -1.0;
    case FamilyKind::Jacobi:
      return order == 0 && p[1] > -1.0;
    case FamilyKind::Hyp2F1:
      return order == 0 && !is_nonpositive_integer(p[2]);
  }
  return false;
}

SosExpansion sos_expand(const FunctionFamily& family, ComplexPoint z, int order,
                        const TruncationPolicy& policy) {
  if (!sos_available(family, order)) {
    throw InvalidParameter("no expansion of order " + std::to_string(order) + " for " +
                           family.describe());
  }
  const auto& p = family.params();
  switch (family.kind()) {
    case FamilyKind::SinCos:
      return sincos_sos(family.is_sine() ? Trig::Sin : Trig::Cos, z, order);
    case FamilyKind::Bessel:
      return bessel_sos(p[0], z, order, policy);
    case FamilyKind::Hyp0F1:
      return hyp0f1_sos(p[0], z, order, policy);
    case FamilyKind::Laguerre:
      return laguerre_sos(family.degree(), p[1], z, order);
    case FamilyKind::Hyp1F1:
      return hyp1f1_sos(p[0], p[1], z, order, policy);
    case FamilyKind::Jacobi:
      return jacobi_sos(family.degree(), p[1], p[2], z);
    case FamilyKind::Hyp2F1:
      return hyp2f1_sos(p[0], p[1], p[2], z, policy);
  }
  throw InvalidParameter("sos_expand: unknown family");
}

double direct_counterpart(const SosExpansion& expansion, ComplexPoint z, DerivativeRoute route,
                          const TruncationPolicy& policy) {
  const FunctionFamily& f = expansion.family;
  double q = 0.0;
  switch (expansion.derivative_order) {
    case 0:
      q = modsq_direct(f, z, policy);
      break;
    case 1:
      q = z.y() * (route == DerivativeRoute::Analytic ? dy_analytic(f, z, 1, policy)
                                                      : dy_fd(f, z, 1, policy));
      break;
    default:
      q = route == DerivativeRoute::Analytic ? dy_analytic(f, z, 2, policy) : dy_fd(f, z, 2, policy);
      break;
  }
  return expansion.modsq_scale * q;
}

}  // namespace sosz
