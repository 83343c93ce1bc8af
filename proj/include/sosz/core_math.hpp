#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sosz {

using Complex = std::complex<double>;

// Working precision of every series and polynomial evaluator. Results are
// rounded to double at the API boundary.
using Work = long double;
using WorkComplex = std::complex<Work>;

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point z = x + iy. Both coordinates are finite.
class ComplexPoint {
 public:
  ComplexPoint(double x, double y);

  double x() const { return x_; }
  double y() const { return y_; }
  Complex value() const { return {x_, y_}; }
  ComplexPoint conj() const { return {x_, -y_}; }
  ComplexPoint with_y(double y) const { return {x_, y}; }

 private:
  double x_;
  double y_;
};

/// Stopping rule for infinite series. Summation stops once
/// `consecutive_small` successive terms each fall below
/// rel_tol * (|running sum| + 1e-300), or after `max_terms` terms.
struct TruncationPolicy {
  double rel_tol = 1e-15;
  int consecutive_small = 3;
  int max_terms = 10000;

  /// Throws InvalidParameter unless rel_tol > 0, consecutive_small >= 2 and
  /// max_terms >= consecutive_small.
  void validate() const;

  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

struct SeriesEvaluation {
  Complex value{0.0, 0.0};
  int terms_used = 0;
  // |last included term| * consecutive_small; heuristic, not a bound.
  double tail_estimate = 0.0;
  bool converged = true;
  // Sum of |term|; eps * term_magnitude bounds the accumulated rounding.
  double term_magnitude = 0.0;

  double real() const { return value.real(); }
};

bool is_nonpositive_integer(double a);

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), by running product so that
/// a vanishing factor gives an exact zero.
double pochhammer(double a, int k);
Work pochhammer_work(Work a, int k);

/// 0F1(; c; w).
SeriesEvaluation hyp0f1(double c, Complex w,
                        const TruncationPolicy& policy = {});

/// 1F1(a; c; w). Terminates after |a|+1 terms when a is a nonpositive
/// integer; a nonpositive-integer c is admitted only if the series ends
/// before the vanishing denominator.
SeriesEvaluation hyp1f1(double a, double c, Complex w,
                        const TruncationPolicy& policy = {});

/// 2F1(-n, b; c; w) as a finite polynomial in w.
double hyp2f1_terminating(int n, double b, double c, double w);

/// 2F1(a, b; c; w) for |w| < 1.
SeriesEvaluation hyp2f1_series(double a, double b, double c, Complex w,
                               const TruncationPolicy& policy = {});

/// c (c+1) 0F1(; c; w), continued to c = 0 and c = -1 where it equals
/// w 0F1(; 2; w) and w^2 0F1(; 3; w) / 2.
SeriesEvaluation hyp0f1_normalized(double c, Complex w,
                                   const TruncationPolicy& policy = {});

/// c (c+1) 1F1(a; c; w) with the same continuation in c.
SeriesEvaluation hyp1f1_normalized(double a, double c, Complex w,
                                   const TruncationPolicy& policy = {});

}  // namespace sosz
