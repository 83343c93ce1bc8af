#include "sosz/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sosz/compensated_sum.hpp"

namespace sosz {

ComplexPoint::ComplexPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidParameter("ComplexPoint coordinates must be finite");
  }
}

void TruncationPolicy::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw InvalidParameter("TruncationPolicy.rel_tol must be positive");
  }
  if (consecutive_small < 2) {
    throw InvalidParameter("TruncationPolicy.consecutive_small must be >= 2");
  }
  if (max_terms < consecutive_small) {
    throw InvalidParameter(
        "TruncationPolicy.max_terms must be >= consecutive_small");
  }
}

bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

Work pochhammer_work(Work a, int k) {
  Work p = 1.0L;
  for (int i = 0; i < k; ++i) {
    p *= a + static_cast<Work>(i);
  }
  return p;
}

double pochhammer(double a, int k) {
  if (k < 0) throw InvalidParameter("pochhammer: k must be nonnegative");
  return static_cast<double>(pochhammer_work(a, k));
}

namespace {

constexpr Work kSumFloor = 1e-300L;

// Accumulates t_k for k = first_index, first_index + 1, ... where
// next(k, t_{k-1}) returns t_k. `exact_count`, when nonnegative, is the
// number of terms of a terminating series (counted from first_index).
template <typename Next>
SeriesEvaluation run_series(CompensatedComplexSum<Work> sum, int prefix_terms,
                            Work prefix_magnitude, WorkComplex first,
                            int first_index, Next next,
                            const TruncationPolicy& policy,
                            int exact_count = -1) {
  policy.validate();
  SeriesEvaluation out;
  WorkComplex term = first;
  Work magnitude = prefix_magnitude;
  int used = prefix_terms;
  int small = 0;
  int k = first_index;
  bool converged = false;
  Work last = 0.0L;
  for (;;) {
    sum.add(term);
    magnitude += std::abs(term);
    last = std::abs(term);
    ++used;
    if (!std::isfinite(static_cast<double>(last))) break;
    if (exact_count >= 0) {
      if (used - prefix_terms >= exact_count) {
        converged = true;
        last = 0.0L;
        break;
      }
    } else {
      const Work threshold =
          static_cast<Work>(policy.rel_tol) * (std::abs(sum.value()) + kSumFloor);
      small = last < threshold ? small + 1 : 0;
      if (small >= policy.consecutive_small) {
        converged = true;
        break;
      }
    }
    if (used >= policy.max_terms) break;
    ++k;
    term = next(k, term);
  }
  const WorkComplex v = sum.value();
  out.value = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  out.terms_used = used;
  out.tail_estimate = static_cast<double>(last) * policy.consecutive_small;
  out.converged = converged && std::isfinite(out.value.real()) &&
                  std::isfinite(out.value.imag());
  out.term_magnitude = static_cast<double>(magnitude);
  return out;
}

SeriesEvaluation trivial(Complex value) {
  SeriesEvaluation out;
  out.value = value;
  out.terms_used = 1;
  out.term_magnitude = std::abs(value);
  return out;
}

WorkComplex to_work(Complex w) { return {w.real(), w.imag()}; }

// Number of nonzero terms when a numerator parameter is a nonpositive
// integer, or -1 for a nonterminating series.
int terminating_length(double a) {
  return is_nonpositive_integer(a) ? static_cast<int>(-a) + 1 : -1;
}

}  // namespace

SeriesEvaluation hyp0f1(double c, Complex w, const TruncationPolicy& policy) {
  policy.validate();
  if (is_nonpositive_integer(c)) {
    throw InvalidParameter("hyp0f1: c must not be zero or a negative integer");
  }
  if (w == Complex(0.0, 0.0)) return trivial(1.0);
  const WorkComplex ww = to_work(w);
  const Work cc = c;
  return run_series(
      {}, 0, 0.0L, WorkComplex(1.0L),
      0,
      [&](int k, WorkComplex prev) {
        return prev * ww / (static_cast<Work>(k) * (cc + static_cast<Work>(k - 1)));
      },
      policy);
}

SeriesEvaluation hyp1f1(double a, double c, Complex w,
                        const TruncationPolicy& policy) {
  policy.validate();
  const int length = terminating_length(a);
  if (is_nonpositive_integer(c) && !(length >= 0 && length - 1 < -c)) {
    throw InvalidParameter("hyp1f1: c must not be zero or a negative integer");
  }
  if (w == Complex(0.0, 0.0)) return trivial(1.0);
  const WorkComplex ww = to_work(w);
  const Work aa = a;
  const Work cc = c;
  return run_series(
      {}, 0, 0.0L, WorkComplex(1.0L), 0,
      [&](int k, WorkComplex prev) {
        const Work km1 = static_cast<Work>(k - 1);
        return prev * ww * (aa + km1) / (static_cast<Work>(k) * (cc + km1));
      },
      policy, length);
}

double hyp2f1_terminating(int n, double b, double c, double w) {
  if (n < 0) throw InvalidParameter("hyp2f1_terminating: n must be >= 0");
  CompensatedSum<Work> sum(1.0L);
  Work term = 1.0L;
  for (int k = 1; k <= n; ++k) {
    const Work km1 = static_cast<Work>(k - 1);
    const Work numer = (static_cast<Work>(-n) + km1) * (static_cast<Work>(b) + km1);
    if (numer == 0.0L) break;
    const Work denom = static_cast<Work>(c) + km1;
    if (denom == 0.0L) {
      throw InvalidParameter(
          "hyp2f1_terminating: (c)_k vanishes within the polynomial degree");
    }
    term *= numer * static_cast<Work>(w) / (denom * static_cast<Work>(k));
    sum.add(term);
  }
  return static_cast<double>(sum.value());
}

SeriesEvaluation hyp2f1_series(double a, double b, double c, Complex w,
                               const TruncationPolicy& policy) {
  policy.validate();
  if (!(std::abs(w) < 1.0)) {
    throw DomainError("hyp2f1_series: requires |w| < 1");
  }
  int length = -1;
  const int la = terminating_length(a);
  const int lb = terminating_length(b);
  if (la >= 0 && lb >= 0) {
    length = std::min(la, lb);
  } else {
    length = std::max(la, lb);
  }
  if (is_nonpositive_integer(c) && !(length >= 0 && length - 1 < -c)) {
    throw InvalidParameter(
        "hyp2f1_series: c must not be zero or a negative integer");
  }
  if (w == Complex(0.0, 0.0)) return trivial(1.0);
  const WorkComplex ww = to_work(w);
  const Work aa = a;
  const Work bb = b;
  const Work cc = c;
  return run_series(
      {}, 0, 0.0L, WorkComplex(1.0L), 0,
      [&](int k, WorkComplex prev) {
        const Work km1 = static_cast<Work>(k - 1);
        return prev * ww * (aa + km1) * (bb + km1) /
               (static_cast<Work>(k) * (cc + km1));
      },
      policy, length);
}

namespace {

// Shared body of the normalized series: terms c (c+1) p_k w^k / ((c)_k k!),
// where p_k is 1 for 0F1 and (a)_k for 1F1. For k >= 2 the coefficient
// c (c+1) / (c)_k equals 1 / (c+2)_{k-2}, which has no singularity at
// c = 0 or c = -1.
SeriesEvaluation normalized_series(double a, bool has_a, double c, Complex w,
                                   const TruncationPolicy& policy) {
  policy.validate();
  if (is_nonpositive_integer(c) && c <= -2.0) {
    throw InvalidParameter(
        "normalized hypergeometric series: c must not be an integer <= -2");
  }
  const Work cc = c;
  const Work aa = has_a ? static_cast<Work>(a) : 1.0L;
  if (w == Complex(0.0, 0.0)) {
    return trivial(static_cast<double>(cc * (cc + 1.0L)));
  }
  const WorkComplex ww = to_work(w);
  const WorkComplex t0(cc * (cc + 1.0L));
  const WorkComplex t1 = (cc + 1.0L) * aa * ww;
  CompensatedComplexSum<Work> prefix;
  prefix.add(t0);
  prefix.add(t1);
  const Work prefix_mag = std::abs(t0) + std::abs(t1);

  int length = -1;
  if (has_a && is_nonpositive_integer(a)) {
    const int n_terms = static_cast<int>(-a) + 1;
    if (n_terms <= 2) {
      SeriesEvaluation out;
      const WorkComplex v = n_terms == 1 ? t0 : prefix.value();
      out.value = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      out.terms_used = n_terms;
      out.term_magnitude = static_cast<double>(n_terms == 1 ? std::abs(t0) : prefix_mag);
      return out;
    }
    length = n_terms - 2;
  }
  const WorkComplex t2 = (has_a ? aa * (aa + 1.0L) : 1.0L) * ww * ww / 2.0L;
  return run_series(
      prefix, 2, prefix_mag, t2, 2,
      [&](int k, WorkComplex prev) {
        const Work km1 = static_cast<Work>(k - 1);
        const Work num = has_a ? aa + km1 : 1.0L;
        return prev * ww * num / (static_cast<Work>(k) * (cc + km1));
      },
      policy, length);
}

}  // namespace

SeriesEvaluation hyp0f1_normalized(double c, Complex w,
                                   const TruncationPolicy& policy) {
  return normalized_series(0.0, false, c, w, policy);
}

SeriesEvaluation hyp1f1_normalized(double a, double c, Complex w,
                                   const TruncationPolicy& policy) {
  return normalized_series(a, true, c, w, policy);
}

}  // namespace sosz
