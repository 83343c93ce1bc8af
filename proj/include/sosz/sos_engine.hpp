#pragma once

#include <string>
#include <vector>

#include "sosz/core_math.hpp"
#include "sosz/special_functions.hpp"

namespace sosz {

/// One term coefficient * square_base^2 of an expansion. `index` is the
/// outer summation index, `sub_index` the inner one of a double sum, and
/// `group` tells apart the separate sums of a second-derivative expansion.
struct SosTerm {
  double coefficient = 0.0;
  double square_base = 0.0;
  int index = 0;
  int sub_index = 0;
  int group = 0;

  double contribution() const { return coefficient * square_base * square_base; }
};

/// An evaluated expansion of |F|^2 (order 0), y d/dy |F|^2 (order 1) or
/// d^2/dy^2 |F|^2 (order 2), where F is `family`. The total equals
/// modsq_scale times the corresponding quantity of F.
struct SosExpansion {
  FunctionFamily family;
  int derivative_order = 0;
  std::vector<SosTerm> terms;
  double total = 0.0;
  double modsq_scale = 1.0;
  int terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = true;
  // Sum of |contribution| over all terms.
  double term_magnitude = 0.0;

  /// Sum of the first `count` contributions.
  double partial_sum(std::size_t count) const;
  double min_coefficient() const;
};

enum class Trig { Sin, Cos };

/// |sin z|^2 = sin^2 x + sinh^2 y, |cos z|^2 = cos^2 x + sinh^2 y, and their
/// y-derivatives y sinh 2y = (sinh 2y / y) y^2 and 2 cosh^2 y + 2 sinh^2 y.
SosExpansion sincos_sos(Trig which, ComplexPoint z, int order);

/// Expansions of |calJ_alpha(z)|^2 in squares calJ_{alpha+n}(x)^2.
/// Order 0 needs alpha > -1, orders 1 and 2 alpha >= -1.
SosExpansion bessel_sos(double alpha, ComplexPoint z, int order,
                        const TruncationPolicy& policy = {});

/// Order 0 expands |0F1(; c; z)|^2 (c > 0); orders 1 and 2 expand the
/// derivatives of |c (c+1) 0F1(; c; z)|^2 (c >= -1).
SosExpansion hyp0f1_sos(double c, ComplexPoint z, int order,
                        const TruncationPolicy& policy = {});

/// Finite expansions of |L_n^alpha(z)|^2. Order 0 needs alpha > -1,
/// orders 1 and 2 alpha >= -2.
SosExpansion laguerre_sos(int n, double alpha, ComplexPoint z, int order);

/// Order 0 expands |1F1(a; c; z)|^2; orders 1 and 2 expand the derivatives
/// of |c (c+1) 1F1(a; c; z)|^2 (c >= -1).
SosExpansion hyp1f1_sos(double a, double c, ComplexPoint z, int order,
                        const TruncationPolicy& policy = {});

/// Double-sum expansion of |2F1(a, b; c; z)|^2, for |z| <= radius_cap < 1.
SosExpansion hyp2f1_sos(double a, double b, double c, ComplexPoint z,
                        const TruncationPolicy& policy = {}, double radius_cap = 0.4);

/// Finite expansion of |n!/(alpha+1)_n P_n^(alpha,beta)(1-2z)|^2, alpha > -1.
SosExpansion jacobi_sos(int n, double alpha, double beta, ComplexPoint z);

/// The Bessel order-0 coefficient (2 alpha + 1) 2F1(-n, 1-n; 2 alpha + 1; 1 + t)
/// with t = x^2 / y^2, evaluated directly and through its decomposition
/// (2 alpha + 1 + n^2 - n) + n (n-1) t + sum_{k=2}^n (-n)_k (1-n)_k (1+t)^k
/// / (k! (2 alpha + 2)_{k-1}), whose first term is positive and the rest
/// nonnegative for n >= 2, alpha > -1. `direct` is NaN at alpha = -1/2.
struct CoefficientDecomposition {
  double direct = 0.0;
  double decomposed = 0.0;
  bool terms_positive = true;
};
CoefficientDecomposition bessel_coefficient_decomposition(int n, double alpha, double t);

/// True when `family` has an expansion of the given order whose parameter
/// range covers it.
bool sos_available(const FunctionFamily& family, int order);

/// Dispatches to the expansion for `family`. Throws InvalidParameter when
/// sos_available is false.
SosExpansion sos_expand(const FunctionFamily& family, ComplexPoint z, int order,
                        const TruncationPolicy& policy = {});

enum class DerivativeRoute { FiniteDifference, Analytic };

/// The quantity an expansion's total stands for, computed by the direct
/// route: modsq_scale * |F|^2, modsq_scale * y dF/dy or modsq_scale *
/// d^2|F|^2/dy^2 with the chosen derivative route.
double direct_counterpart(const SosExpansion& expansion, ComplexPoint z,
                          DerivativeRoute route = DerivativeRoute::FiniteDifference,
                          const TruncationPolicy& policy = {});

/// Intermediate identities of the expansion chains.
enum class ChainId {
  Eq3_4,
  Eq3_5,
  Eq3_6,
  Eq3_15,
  Eq3_16,
  Eq3_17,
  Eq4_3,
  Eq4_4,
  Eq4_5,
  Eq4_13,
  Eq5_3,
  Eq5_4,
  Eq5_5,
  Eq5_6,
  Eq5_7,
};

std::string to_string(ChainId id);
ChainId chain_id_from_string(const std::string& tag);
const std::vector<ChainId>& all_chain_ids();

/// Parameters of a chain identity. Bessel identities read `alpha`, 0F1
/// identities `c`, Laguerre identities `n` and `alpha`, 1F1 and 2F1
/// identities `a`, `b`, `c`. `k`, `j`, `m` are the index shifts of the
/// one- and two-step shifted identities.
struct ChainParams {
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int n = 0;
  int k = 0;
  int j = 0;
  int m = 0;
};

struct ChainResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  // |lhs - rhs| / (|lhs| + 1e-300)
  double residual = 0.0;
  // Relative truncation-plus-rounding estimate of both sides; zero for
  // identities between finite sums.
  double error_estimate = 0.0;
  bool finite = false;
  bool converged = true;
};

/// Evaluates both sides of an intermediate identity independently.
/// The 2F1 identities require |z| <= 0.4.
ChainResidual chain_check(ChainId which, const ChainParams& params, ComplexPoint z,
                          const TruncationPolicy& policy = {});

}  // namespace sosz
