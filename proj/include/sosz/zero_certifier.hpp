#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosz/core_math.hpp"
#include "sosz/special_functions.hpp"

namespace sosz {

/// Rectangular lattice of nx * ny points. Coordinates are computed as
/// convex combinations of the endpoints, so a symmetric range with an odd
/// point count contains 0 exactly.
struct GridSpec {
  double x_min = -5.0;
  double x_max = 5.0;
  double y_min = -5.0;
  double y_max = 5.0;
  int nx = 41;
  int ny = 41;

  /// Throws InvalidParameter on empty ranges or nonpositive counts.
  void validate() const;
  double x(int i) const;
  double y(int j) const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class CertificateStatus { Certified, Violated, Inconclusive };
std::string to_string(CertificateStatus status);
CertificateStatus certificate_status_from_string(const std::string& name);

struct Witness {
  double x = 0.0;
  double y = 0.0;
  std::string quantity;
  double value = 0.0;
  // The tolerance the value was compared against.
  double tolerance = 0.0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Outcome of a grid scan. "certified" only means no violation was found
/// at the scanned points.
struct Certificate {
  CertificateStatus status = CertificateStatus::Certified;
  std::optional<Witness> witness;
  int checks_run = 0;
  // Points whose evaluation failed or did not converge.
  int failures = 0;
  // "sos", "finite-difference" or "closed-form".
  std::string route;
  std::string message;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Default scan grids: [-5, 5]^2 for entire transcendental families,
/// [-(B+1), B+1] x [-3, 3] for polynomials (B = polynomial_root_bound),
/// and a square inside |z| <= 0.4 for 2F1. All 41 x 41.
GridSpec default_grid(const FunctionFamily& family);

/// Bound B with every complex zero satisfying |z| <= B, from Fujiwara's
/// bound 2 max |a_{d-k} / a_d|^{1/k} (the last ratio halved). Leading
/// coefficients below 1e-14 of the largest are treated as zero; returns 0
/// for constants and for the zero polynomial.
double polynomial_root_bound(const std::vector<double>& coefficients);

/// Index of the highest coefficient that is not negligible, or -1.
int effective_degree(const std::vector<double>& coefficients);

struct JensenOptions {
  double absolute = 1e-12;
  // Relative to the local scale max(|F|^2, sum of |term contributions|).
  double relative = 1e-10;
  // Relative tolerance used when finite differences replace an expansion.
  double fd_relative = 1e-6;
  int threads = 1;
  TruncationPolicy policy{};
};

/// Evaluates y d/dy |F|^2 and d^2/dy^2 |F|^2 at every grid point through
/// the expansions when sos_available, else through dy_fd. The order-1
/// quantity is exactly 0 on y = 0 and passes there. The witness of a
/// violation is the most negative value found.
Certificate jensen_scan(const FunctionFamily& family, const GridSpec& grid,
                        const JensenOptions& options = {});

enum class InequalityId {
  Eq2_5,
  Eq2_6,
  Eq2_7,
  Eq2_8,
  Eq2_9,
  Eq3_10,
  Eq3_13,
  Eq3_14,
  Eq3_21,
  Eq3_22,
  Eq4_7,
  Eq4_8,
  Eq4_11,
  Eq4_12,
  Eq5_10,
  Eq5_11,
};

std::string to_string(InequalityId id);
InequalityId inequality_id_from_string(const std::string& tag);
const std::vector<InequalityId>& all_inequality_ids();

/// Inequalities whose family and parameter range cover `family`.
std::vector<InequalityId> inequalities_for(const FunctionFamily& family);

struct InequalityOptions {
  double absolute = 1e-12;
  double relative = 1e-9;
  // For derivative inequalities, whose left side comes from dy_fd.
  double fd_relative = 1e-6;
  TruncationPolicy policy{};
};

/// Left side by the direct route, right side by its closed form, at every
/// grid point. Certified iff LHS >= RHS - tolerance everywhere. Throws
/// InvalidParameter when `family` is outside the inequality's range.
Certificate sos_lower_bound_check(InequalityId which, const FunctionFamily& family,
                                  const GridSpec& grid, const InequalityOptions& options = {});

struct RealZero {
  double location = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  // |F(location)|
  double residual = 0.0;
  // max |F| over the lattice cell the zero was detected in
  double local_scale = 0.0;
  // false for zeros found without a sign change
  bool confirmed = true;
  // From the Taylor coefficients for polynomials; otherwise 1 at a sign
  // change and 0 (unknown) for unconfirmed zeros.
  int multiplicity = 1;

  friend bool operator==(const RealZero&, const RealZero&) = default;
};

struct ZeroList {
  std::vector<RealZero> zeros;
  std::optional<std::pair<double, double>> interval;

  std::vector<double> locations() const;
  /// Number of zeros counted with multiplicity.
  int count_with_multiplicity() const;

  friend bool operator==(const ZeroList&, const ZeroList&) = default;
};

/// Sign changes of F on `samples` equispaced points of [lo, hi], refined
/// by bisection to width <= refine_tol. Samples where F is exactly 0 are
/// zeros with a degenerate bracket. Interior lattice minima of |F| without
/// a sign change are minimized further and reported, unconfirmed, when
/// |F| drops below 1e-8 of the local scale. Zeros closer together than
/// the lattice spacing can be missed.
ZeroList find_real_zeros(const FunctionFamily& family, double lo, double hi, int samples = 2001,
                         double refine_tol = 1e-13, const TruncationPolicy& policy = {});

/// True iff every open interval between consecutive zeros of one list
/// holds exactly one zero of the other, for both lists, after restricting
/// both to the intersection of their search intervals.
bool interlacing_check(const ZeroList& a, const ZeroList& b);

struct ZeroCount {
  Certificate certificate;
  ZeroList zeros;
  int degree = 0;
  // Real zeros counted with multiplicity.
  int count = 0;
  std::pair<double, double> interval{0.0, 0.0};
};

/// Real zeros of a Laguerre or Jacobi polynomial on [-(B+1), B+1]. Violated
/// if jensen_scan on the default grid is violated. Otherwise certified iff
/// the count with multiplicity equals the degree and every zero is simple
/// and confirmed, or the Jensen scan certified; inconclusive otherwise.
ZeroCount count_real_zeros_vs_degree(const FunctionFamily& family,
                                     const JensenOptions& options = {});

}  // namespace sosz
