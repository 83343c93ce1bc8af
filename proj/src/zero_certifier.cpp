#include "sosz/zero_certifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "sos_internal.hpp"
#include "sosz/sos_engine.hpp"

namespace sosz {

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max)) {
    throw InvalidParameter("grid: bounds must be finite");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw InvalidParameter("grid: requires x_min < x_max and y_min < y_max");
  }
  if (nx < 1 || ny < 1) throw InvalidParameter("grid: nx and ny must be positive");
}

namespace {

double lattice(double lo, double hi, int n, int i) {
  if (n == 1) return lo;
  const double t = static_cast<double>(i) / (n - 1);
  const double s = static_cast<double>(n - 1 - i) / (n - 1);
  return lo * s + hi * t;
}

}  // namespace

double GridSpec::x(int i) const { return lattice(x_min, x_max, nx, i); }
double GridSpec::y(int j) const { return lattice(y_min, y_max, ny, j); }

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Certified: return "certified";
    case CertificateStatus::Violated: return "violated";
    case CertificateStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CertificateStatus certificate_status_from_string(const std::string& name) {
  if (name == "certified") return CertificateStatus::Certified;
  if (name == "violated") return CertificateStatus::Violated;
  if (name == "inconclusive") return CertificateStatus::Inconclusive;
  throw InvalidParameter("unknown certificate status '" + name + "'");
}

int effective_degree(const std::vector<double>& coefficients) {
  double largest = 0.0;
  for (double c : coefficients) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return -1;
  for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k) {
    if (std::abs(coefficients[k]) > 1e-14 * largest) return k;
  }
  return -1;
}

double polynomial_root_bound(const std::vector<double>& coefficients) {
  const int d = effective_degree(coefficients);
  if (d <= 0) return 0.0;
  const double lead = std::abs(coefficients[d]);
  double bound = 0.0;
  for (int k = 1; k <= d; ++k) {
    double ratio = std::abs(coefficients[d - k]) / lead;
    if (k == d) ratio /= 2.0;
    bound = std::max(bound, std::pow(ratio, 1.0 / k));
  }
  return 2.0 * bound;
}

namespace {

// Half-width of the polynomial search interval: the root bound plus a unit
// margin, so that the interval is never degenerate.
double polynomial_half_width(const FunctionFamily& family) {
  return polynomial_root_bound(polynomial_coefficients(family)) + 1.0;
}

}  // namespace

GridSpec default_grid(const FunctionFamily& family) {
  GridSpec g;
  if (family.is_polynomial()) {
    const double b = polynomial_half_width(family);
    g.x_min = -b;
    g.x_max = b;
    g.y_min = -3.0;
    g.y_max = 3.0;
  } else if (family.kind() == FamilyKind::Hyp2F1) {
    g.x_min = g.y_min = -0.28;
    g.x_max = g.y_max = 0.28;
  }
  return g;
}

namespace {

struct PointOutcome {
  bool failed = false;
  // Most negative margin value - (-tolerance) among the point's checks.
  std::optional<Witness> violation;
};

// Runs `eval(i, j)` over the grid, row blocks in parallel, and merges the
// outcomes in lattice order so the result does not depend on scheduling.
Certificate scan(const GridSpec& grid, int threads, int checks_per_point,
                 const std::function<PointOutcome(double, double)>& eval) {
  grid.validate();
  const int workers = std::max(1, std::min(threads, grid.ny));
  std::vector<std::future<std::vector<PointOutcome>>> parts;
  auto rows = [&](int j0, int j1) {
    std::vector<PointOutcome> out;
    out.reserve(static_cast<std::size_t>(j1 - j0) * grid.nx);
    for (int j = j0; j < j1; ++j) {
      for (int i = 0; i < grid.nx; ++i) out.push_back(eval(grid.x(i), grid.y(j)));
    }
    return out;
  };
  for (int w = 0; w < workers; ++w) {
    const int j0 = grid.ny * w / workers;
    const int j1 = grid.ny * (w + 1) / workers;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, rows, j0, j1));
  }
  Certificate cert;
  for (auto& part : parts) {
    for (const PointOutcome& o : part.get()) {
      cert.checks_run += checks_per_point;
      if (o.failed) ++cert.failures;
      if (o.violation && (!cert.witness || o.violation->value < cert.witness->value)) {
        cert.witness = o.violation;
      }
    }
  }
  if (cert.witness) {
    cert.status = CertificateStatus::Violated;
  } else if (cert.failures > 0) {
    cert.status = CertificateStatus::Inconclusive;
    cert.message = std::to_string(cert.failures) + " grid points failed to evaluate or converge";
  }
  return cert;
}

void consider(PointOutcome& out, double x, double y, const char* quantity, double value,
              double tolerance) {
  if (!std::isfinite(value)) {
    out.failed = true;
    return;
  }
  if (value < -tolerance && (!out.violation || value < out.violation->value)) {
    out.violation = Witness{x, y, quantity, value, tolerance};
  }
}

// Family whose derivative expansions the scan uses, and the factor that
// converts its quantities back to `family`.
std::pair<FunctionFamily, double> expansion_family(const FunctionFamily& family) {
  if (family.kind() != FamilyKind::Hyp0F1 && family.kind() != FamilyKind::Hyp1F1) {
    return {family, 1.0};
  }
  const FunctionFamily scaled = family.with_normalization(Normalization::CTimesCPlusOne);
  if (family.normalization() == Normalization::CTimesCPlusOne) return {scaled, 1.0};
  const double c = family.kind() == FamilyKind::Hyp0F1 ? family.param(0) : family.param(1);
  const double k = c * (c + 1.0);
  return {scaled, 1.0 / (k * k)};
}

}  // namespace

Certificate jensen_scan(const FunctionFamily& family, const GridSpec& grid,
                        const JensenOptions& options) {
  options.policy.validate();
  const auto [efamily, factor] = expansion_family(family);
  const bool use_sos = sos_available(efamily, 1) && sos_available(efamily, 2);
  const TruncationPolicy& policy = options.policy;
  auto eval = [&](double x, double y) {
    PointOutcome out;
    try {
      const ComplexPoint z(x, y);
      const double modsq = modsq_direct(family, z, policy);
      if (use_sos) {
        const SosExpansion e1 = sos_expand(efamily, z, 1, policy);
        const SosExpansion e2 = sos_expand(efamily, z, 2, policy);
        if (!e1.converged || !e2.converged) out.failed = true;
        const double scale1 = std::max(modsq, e1.term_magnitude * factor);
        const double scale2 = std::max(modsq, e2.term_magnitude * factor);
        consider(out, x, y, "ydy", e1.total * factor, options.absolute + options.relative * scale1);
        consider(out, x, y, "d2y", e2.total * factor, options.absolute + options.relative * scale2);
      } else {
        const double q1 = y == 0.0 ? 0.0 : y * dy_fd(family, z, 1, policy);
        const double q2 = dy_fd(family, z, 2, policy);
        const double tol =
            options.absolute + options.fd_relative * (modsq + std::abs(q1) + std::abs(q2));
        consider(out, x, y, "ydy", q1, tol);
        consider(out, x, y, "d2y", q2, tol);
      }
    } catch (const std::exception&) {
      out.failed = true;
    }
    return out;
  };
  Certificate cert = scan(grid, options.threads, 2, eval);
  cert.route = use_sos ? "sos" : "finite-difference";
  if (family.is_polynomial() && effective_degree(polynomial_coefficients(family)) < 0) {
    cert.message = "function vanishes identically";
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Inequalities

std::string to_string(InequalityId id) {
  switch (id) {
    case InequalityId::Eq2_5: return "Eq2_5";
    case InequalityId::Eq2_6: return "Eq2_6";
    case InequalityId::Eq2_7: return "Eq2_7";
    case InequalityId::Eq2_8: return "Eq2_8";
    case InequalityId::Eq2_9: return "Eq2_9";
    case InequalityId::Eq3_10: return "Eq3_10";
    case InequalityId::Eq3_13: return "Eq3_13";
    case InequalityId::Eq3_14: return "Eq3_14";
    case InequalityId::Eq3_21: return "Eq3_21";
    case InequalityId::Eq3_22: return "Eq3_22";
    case InequalityId::Eq4_7: return "Eq4_7";
    case InequalityId::Eq4_8: return "Eq4_8";
    case InequalityId::Eq4_11: return "Eq4_11";
    case InequalityId::Eq4_12: return "Eq4_12";
    case InequalityId::Eq5_10: return "Eq5_10";
    case InequalityId::Eq5_11: return "Eq5_11";
  }
  return "unknown";
}

const std::vector<InequalityId>& all_inequality_ids() {
  static const std::vector<InequalityId> ids = {
      InequalityId::Eq2_5,  InequalityId::Eq2_6,  InequalityId::Eq2_7,  InequalityId::Eq2_8,
      InequalityId::Eq2_9,  InequalityId::Eq3_10, InequalityId::Eq3_13, InequalityId::Eq3_14,
      InequalityId::Eq3_21, InequalityId::Eq3_22, InequalityId::Eq4_7,  InequalityId::Eq4_8,
      InequalityId::Eq4_11, InequalityId::Eq4_12, InequalityId::Eq5_10, InequalityId::Eq5_11};
  return ids;
}

InequalityId inequality_id_from_string(const std::string& tag) {
  for (InequalityId id : all_inequality_ids()) {
    if (to_string(id) == tag) return id;
  }
  throw InvalidParameter("unknown inequality '" + tag + "'");
}

namespace {

struct Inequality {
  int order = 0;
  // Family whose direct-route quantity is the left side.
  FunctionFamily lhs_family;
  std::function<double(double, double)> rhs;
};

SeriesEvaluation Jx(double alpha, double x, const TruncationPolicy& p) {
  return calJ(alpha, ComplexPoint(x, 0.0), p);
}

// Builds the inequality, or returns nullopt when the family or its
// parameters are outside the stated range.
std::optional<Inequality> make_inequality(InequalityId id, const FunctionFamily& f,
                                          const TruncationPolicy& policy) {
  const auto& p = f.params();
  using detail::rising;
  switch (id) {
    case InequalityId::Eq2_5:
    case InequalityId::Eq2_6:
    case InequalityId::Eq2_7:
    case InequalityId::Eq2_8:
    case InequalityId::Eq2_9: {
      if (f.kind() != FamilyKind::SinCos) return std::nullopt;
      const bool sine = f.is_sine();
      switch (id) {
        case InequalityId::Eq2_5:
          return Inequality{0, f, [sine](double x, double) {
                              const double s = sine ? std::sin(x) : std::cos(x);
                              return s * s;
                            }};
        case InequalityId::Eq2_6:
          return Inequality{0, f, [](double, double y) { return std::sinh(y) * std::sinh(y); }};
        case InequalityId::Eq2_7:
          return Inequality{1, f, [](double, double y) { return 2.0 * y * y; }};
        case InequalityId::Eq2_8:
          return Inequality{2, f, [](double, double y) { return 2.0 * std::cosh(y) * std::cosh(y); }};
        default:
          return Inequality{2, f, [](double, double y) { return 2.0 + 2.0 * std::sinh(y) * std::sinh(y); }};
      }
    }
    case InequalityId::Eq3_10:
    case InequalityId::Eq3_13:
    case InequalityId::Eq3_14: {
      if (f.kind() != FamilyKind::Bessel) return std::nullopt;
      const double a = p[0];
      if (id == InequalityId::Eq3_10 ? !(a > -1.0) : !(a >= -1.0)) return std::nullopt;
      if (id == InequalityId::Eq3_10) {
        return Inequality{0, f, [a, &policy](double x, double y) {
                            const double j0 = Jx(a, x, policy).value.real();
                            const double j1 = Jx(a + 1.0, x, policy).value.real();
                            return j0 * j0 + 2.0 * (a + 1.0) * (y * j1) * (y * j1);
                          }};
      }
      const int order = id == InequalityId::Eq3_13 ? 1 : 2;
      return Inequality{order, f, [a, order, &policy](double x, double y) {
                          const double j1 = Jx(a + 1.0, x, policy).value.real();
                          const double yy = order == 1 ? y * y : 1.0;
                          return 4.0 * (a + 1.0) * yy * j1 * j1;
                        }};
    }
    case InequalityId::Eq3_21:
    case InequalityId::Eq3_22: {
      if (f.kind() != FamilyKind::Hyp0F1 || !(p[0] >= -1.0)) return std::nullopt;
      const double c = p[0];
      const int order = id == InequalityId::Eq3_21 ? 1 : 2;
      return Inequality{order, f.with_normalization(Normalization::CTimesCPlusOne),
                        [c, order, &policy](double x, double y) {
                          const double g = hyp0f1(c + 2.0, Complex(x, 0.0), policy).value.real();
                          const double yy = order == 1 ? y * y : 1.0;
                          return 2.0 * (c + 1.0) * yy * g * g;
                        }};
    }
    case InequalityId::Eq4_7:
    case InequalityId::Eq4_8: {
      if (f.kind() != FamilyKind::Laguerre) return std::nullopt;
      const int n = f.degree();
      const double a = p[1];
      if (!(a > -1.0) || (id == InequalityId::Eq4_8 && n < 1)) return std::nullopt;
      const Work coef = rising(a + 1.0L, n) /
                        (std::tgamma(n + 1.0L) * std::tgamma(n + 1.0L) * rising(n + static_cast<Work>(a), n));
      if (id == InequalityId::Eq4_7) {
        return Inequality{0, f, [n, a, coef](double x, double y) {
                            const detail::Plane pl(ComplexPoint(x, y));
                            const Work w = detail::rearranged(
                                n, 1.0L - n, [&](int k) { return 1.0L / rising(a + 1.0L, k); }, pl, n);
                            return static_cast<double>(coef * w);
                          }};
      }
      return Inequality{0, f, [n, a, coef](double x, double y) {
                          const double l = laguerre_real(n, a, x);
                          return l * l + static_cast<double>(coef * std::pow(static_cast<Work>(y), 2 * n));
                        }};
    }
    case InequalityId::Eq4_11:
    case InequalityId::Eq4_12: {
      if (f.kind() != FamilyKind::Laguerre) return std::nullopt;
      const int n = f.degree();
      const double a = p[1];
      if (!(a > -2.0) || n < 1) return std::nullopt;
      const double coef = 2.0 * (a + 2.0) / (n * (n + a + 1.0));
      const int order = id == InequalityId::Eq4_11 ? 1 : 2;
      return Inequality{order, f, [n, a, coef, order](double x, double y) {
                          const double l = laguerre_real(n - 1, a + 2.0, x);
                          const double yy = order == 1 ? y * y : 1.0;
                          return coef * yy * l * l;
                        }};
    }
    case InequalityId::Eq5_10:
    case InequalityId::Eq5_11: {
      if (f.kind() != FamilyKind::Jacobi) return std::nullopt;
      const int n = f.degree();
      const double a = p[1];
      const double b = p[2];
      if (n < 1 || !(a >= -1.0) || !(b >= -1.0)) return std::nullopt;
      const Work base = 2.0L * n * rising(n + static_cast<Work>(a) + b + 1.0L, n) * rising(a + 1.0L, n) /
                        (std::tgamma(n + 1.0L) * std::tgamma(n + 1.0L));
      if (id == InequalityId::Eq5_10) {
        return Inequality{1, f, [n, base](double, double y) {
                            return static_cast<double>(base * std::pow(static_cast<Work>(y), 2 * n));
                          }};
      }
      return Inequality{2, f, [n, base](double, double y) {
                          return static_cast<double>(base * (2.0L * n - 1.0L) *
                                                     std::pow(static_cast<Work>(y), 2 * n - 2));
                        }};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<InequalityId> inequalities_for(const FunctionFamily& family) {
  std::vector<InequalityId> out;
  const TruncationPolicy policy;
  for (InequalityId id : all_inequality_ids()) {
    if (make_inequality(id, family, policy)) out.push_back(id);
  }
  return out;
}

Certificate sos_lower_bound_check(InequalityId which, const FunctionFamily& family,
                                  const GridSpec& grid, const InequalityOptions& options) {
  options.policy.validate();
  const TruncationPolicy& policy = options.policy;
  const auto ineq = make_inequality(which, family, policy);
  if (!ineq) {
    throw InvalidParameter(to_string(which) + " does not apply to " + family.describe());
  }
  const std::string quantity = to_string(which) + ":lhs-rhs";
  auto eval = [&](double x, double y) {
    PointOutcome out;
    try {
      const ComplexPoint z(x, y);
      const double modsq = modsq_direct(ineq->lhs_family, z, policy);
      double lhs = modsq;
      if (ineq->order == 1) lhs = y == 0.0 ? 0.0 : y * dy_fd(ineq->lhs_family, z, 1, policy);
      if (ineq->order == 2) lhs = dy_fd(ineq->lhs_family, z, 2, policy);
      const double rhs = ineq->rhs(x, y);
      const double rel = ineq->order == 0 ? options.relative : options.fd_relative;
      const double tol = options.absolute + rel * (std::abs(lhs) + std::abs(rhs) + modsq);
      consider(out, x, y, quantity.c_str(), lhs - rhs, tol);
    } catch (const std::exception&) {
      out.failed = true;
    }
    return out;
  };
  Certificate cert = scan(grid, 1, 1, eval);
  cert.route = ineq->order == 0 ? "closed-form" : "finite-difference";
  return cert;
}

// ---------------------------------------------------------------------------
// Real zeros

std::vector<double> ZeroList::locations() const {
  std::vector<double> out;
  out.reserve(zeros.size());
  for (const auto& z : zeros) out.push_back(z.location);
  return out;
}

int ZeroList::count_with_multiplicity() const {
  int n = 0;
  for (const auto& z : zeros) n += z.multiplicity;
  return n;
}

namespace {

using RealFn = std::function<Work(double)>;

RealFn real_restriction(const FunctionFamily& family, const TruncationPolicy& policy) {
  if (family.is_polynomial()) {
    std::vector<Work> c;
    for (double v : polynomial_coefficients(family)) c.push_back(v);
    return [c](double x) {
      Work acc = 0.0L;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
  }
  return [family, policy](double x) {
    return static_cast<Work>(direct_eval(family, ComplexPoint(x, 0.0), policy).value.real());
  };
}

int sign(Work v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Narrows a sign-change bracket [a, b]; returns the final bracket.
std::pair<double, double> bisect(const RealFn& f, double a, double b, Work fa, double tol) {
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    const double m = a + (b - a) / 2.0;
    if (m <= a || m >= b) break;
    const Work fm = f(m);
    if (fm == 0.0L) return {m, m};
    if (sign(fm) == sign(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return {a, b};
}

// Multiplicity of a polynomial zero at x0: the first Taylor coefficient
// t_k (scaled by h^k) that is not negligible against the largest one.
int polynomial_multiplicity(const std::vector<double>& coefficients, double x0, double h) {
  std::vector<Work> c(coefficients.begin(), coefficients.end());
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<Work> taylor;
  // Repeated synthetic division by (x - x0) yields the Taylor coefficients.
  for (int k = 0; k <= d; ++k) {
    Work acc = 0.0L;
    std::vector<Work> q(c.size(), 0.0L);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      acc = acc * x0 + c[i];
      q[i] = acc;
    }
    taylor.push_back(q[0]);
    c.assign(q.begin() + 1, q.end());
    if (c.empty()) break;
  }
  Work largest = 0.0L;
  for (std::size_t k = 0; k < taylor.size(); ++k) {
    largest = std::max(largest, std::abs(taylor[k]) * std::pow(static_cast<Work>(h), static_cast<int>(k)));
  }
  for (std::size_t k = 1; k < taylor.size(); ++k) {
    if (std::abs(taylor[k]) * std::pow(static_cast<Work>(h), static_cast<int>(k)) > 1e-6L * largest) {
      return static_cast<int>(k);
    }
  }
  return 1;
}

}  // namespace

ZeroList find_real_zeros(const FunctionFamily& family, double lo, double hi, int samples,
                         double refine_tol, const TruncationPolicy& policy) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidParameter("find_real_zeros: requires a finite interval lo < hi");
  }
  if (samples < 2) throw InvalidParameter("find_real_zeros: samples must be >= 2");
  if (!(refine_tol > 0.0)) throw InvalidParameter("find_real_zeros: refine_tol must be positive");
  const RealFn f = real_restriction(family, policy);
  const std::vector<double> coefficients =
      family.is_polynomial() ? polynomial_coefficients(family) : std::vector<double>{};
  const double h = (hi - lo) / (samples - 1);

  std::vector<double> xs(samples);
  std::vector<Work> fs(samples);
  bool all_zero = true;
  for (int i = 0; i < samples; ++i) {
    xs[i] = lattice(lo, hi, samples, i);
    fs[i] = f(xs[i]);
    all_zero = all_zero && fs[i] == 0.0L;
  }
  ZeroList out;
  out.interval = std::make_pair(lo, hi);
  if (all_zero) return out;

  auto multiplicity = [&](double x0, bool odd) {
    if (family.is_polynomial()) return polynomial_multiplicity(coefficients, x0, h);
    return odd ? 1 : 0;
  };
  auto cell_scale = [&](int i0, int i1) {
    Work s = 0.0L;
    for (int i = std::max(0, i0); i <= std::min(samples - 1, i1); ++i) s = std::max(s, std::abs(fs[i]));
    return static_cast<double>(s);
  };
  auto push_bracketed = [&](double a, double b, Work fa, double scale) {
    const auto [l, r] = bisect(f, a, b, fa, refine_tol);
    RealZero z;
    z.location = l == r ? l : l + (r - l) / 2.0;
    z.bracket_lo = l;
    z.bracket_hi = r;
    z.residual = static_cast<double>(std::abs(f(z.location)));
    z.local_scale = scale;
    z.multiplicity = multiplicity(z.location, true);
    out.zeros.push_back(z);
  };

  for (int i = 0; i < samples; ++i) {
    if (fs[i] == 0.0L) {
      const int left = i > 0 ? sign(fs[i - 1]) : 0;
      const int right = i + 1 < samples ? sign(fs[i + 1]) : 0;
      RealZero z;
      z.location = z.bracket_lo = z.bracket_hi = xs[i];
      z.residual = 0.0;
      z.local_scale = cell_scale(i - 1, i + 1);
      z.confirmed = left != 0 && right != 0 && left != right;
      z.multiplicity = multiplicity(xs[i], z.confirmed);
      out.zeros.push_back(z);
      continue;
    }
    if (i + 1 < samples && fs[i + 1] != 0.0L && sign(fs[i]) != sign(fs[i + 1])) {
      push_bracketed(xs[i], xs[i + 1], fs[i], cell_scale(i, i + 1));
    }
    // Interior minimum of |F| without a sign change: a possible even zero.
    if (i > 0 && i + 1 < samples && sign(fs[i - 1]) == sign(fs[i]) && sign(fs[i + 1]) == sign(fs[i]) &&
        std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) <= std::abs(fs[i + 1])) {
      const double scale = cell_scale(i - 1, i + 1);
      const int s0 = sign(fs[i]);
      // Golden-section search for the minimum of |F| on [x_{i-1}, x_{i+1}].
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = xs[i - 1], b = xs[i + 1];
      double c = b - g * (b - a), d = a + g * (b - a);
      Work fc = f(c), fd = f(d);
      std::optional<double> flip;
      for (int it = 0; it < 200 && b - a > refine_tol; ++it) {
        if (sign(fc) != s0) { flip = c; break; }
        if (sign(fd) != s0) { flip = d; break; }
        if (std::abs(fc) < std::abs(fd)) {
          b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
        } else {
          a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
        }
      }
      if (flip) {
        // Two close simple zeros inside one lattice cell pair.
        push_bracketed(xs[i - 1], *flip, fs[i - 1], scale);
        push_bracketed(*flip, xs[i + 1], f(*flip), scale);
        continue;
      }
      const double xm = std::abs(fc) < std::abs(fd) ? c : d;
      const Work fm = std::min(std::abs(fc), std::abs(fd));
      if (fm <= 1e-8L * scale) {
        RealZero z;
        z.location = xm;
        z.bracket_lo = a;
        z.bracket_hi = b;
        z.residual = static_cast<double>(fm);
        z.local_scale = scale;
        z.confirmed = false;
        z.multiplicity = multiplicity(xm, false);
        out.zeros.push_back(z);
      }
    }
  }
  std::sort(out.zeros.begin(), out.zeros.end(),
            [](const RealZero& l, const RealZero& r) { return l.location < r.location; });
  return out;
}

bool interlacing_check(const ZeroList& a, const ZeroList& b) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const ZeroList* l : {&a, &b}) {
    if (l->interval) {
      lo = std::max(lo, l->interval->first);
      hi = std::min(hi, l->interval->second);
    }
  }
  auto restrict = [&](const ZeroList& l) {
    std::vector<double> v;
    for (double x : l.locations()) {
      if (x >= lo && x <= hi) v.push_back(x);
    }
    return v;
  };
  const std::vector<double> za = restrict(a);
  const std::vector<double> zb = restrict(b);
  auto one_between = [](const std::vector<double>& outer, const std::vector<double>& inner) {
    for (std::size_t i = 0; i + 1 < outer.size(); ++i) {
      const auto n = std::count_if(inner.begin(), inner.end(),
                                   [&](double x) { return x > outer[i] && x < outer[i + 1]; });
      if (n != 1) return false;
    }
    return true;
  };
  return one_between(za, zb) && one_between(zb, za);
}

ZeroCount count_real_zeros_vs_degree(const FunctionFamily& family, const JensenOptions& options) {
  if (family.kind() != FamilyKind::Laguerre && family.kind() != FamilyKind::Jacobi) {
    throw InvalidParameter("count_real_zeros_vs_degree: requires a Laguerre or Jacobi family");
  }
  ZeroCount result;
  const std::vector<double> coefficients = polynomial_coefficients(family);
  result.degree = effective_degree(coefficients);
  if (result.degree < 0) {
    result.certificate.status = CertificateStatus::Inconclusive;
    result.certificate.message = "function vanishes identically";
    return result;
  }
  const double w = polynomial_half_width(family);
  result.interval = {-w, w};
  const int samples = std::max(4001, 1000 * result.degree + 1);
  result.zeros = find_real_zeros(family, -w, w, samples, 1e-13, options.policy);
  result.count = result.zeros.count_with_multiplicity();

  const Certificate jensen = jensen_scan(family, default_grid(family), options);
  Certificate cert;
  cert.route = jensen.route;
  cert.checks_run = jensen.checks_run + samples;
  cert.failures = jensen.failures;
  const bool all_simple = std::all_of(result.zeros.zeros.begin(), result.zeros.zeros.end(),
                                      [](const RealZero& z) { return z.confirmed && z.multiplicity == 1; });
  if (jensen.status == CertificateStatus::Violated) {
    cert.status = CertificateStatus::Violated;
    cert.witness = jensen.witness;
    cert.message = std::to_string(result.count) + " real zeros for degree " + std::to_string(result.degree);
  } else if (result.count == result.degree &&
             (all_simple || jensen.status == CertificateStatus::Certified)) {
    cert.status = CertificateStatus::Certified;
    if (!all_simple) cert.message = "count includes multiple zeros; Jensen scan certified";
  } else {
    cert.status = CertificateStatus::Inconclusive;
    cert.message = result.count == result.degree
                       ? "zero count matches the degree but includes multiple or unconfirmed zeros"
                       : std::to_string(result.count) + " real zeros for degree " +
                             std::to_string(result.degree);
  }
  result.certificate = cert;
  return result;
}

}  // namespace sosz
