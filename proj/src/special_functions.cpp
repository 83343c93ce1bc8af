#include "sosz/special_functions.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "sosz/compensated_sum.hpp"

namespace sosz {

namespace {

constexpr std::array<const char*, 7> kKindNames = {
    "sincos", "bessel", "hyp0f1", "laguerre", "hyp1f1", "jacobi", "hyp2f1"};

std::size_t expected_param_count(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::SinCos:
    case FamilyKind::Bessel:
    case FamilyKind::Hyp0F1:
      return 1;
    case FamilyKind::Laguerre:
    case FamilyKind::Hyp1F1:
      return 2;
    case FamilyKind::Jacobi:
    case FamilyKind::Hyp2F1:
      return 3;
  }
  return 0;
}

bool is_degree(double n) { return n >= 0.0 && n == std::floor(n) && n < 1e6; }

// A nonpositive-integer lower parameter is harmless when a numerator
// parameter terminates the series before the vanishing factor.
bool terminates_before(double numer, double lower) {
  return is_nonpositive_integer(numer) && -numer < -lower;
}

}  // namespace

std::string to_string(FamilyKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

FamilyKind family_kind_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (name == kKindNames[i]) return static_cast<FamilyKind>(i);
  }
  if (name == "sin" || name == "cos") return FamilyKind::SinCos;
  throw InvalidParameter("unknown function family '" + name + "'");
}

FunctionFamily::FunctionFamily(FamilyKind kind, std::vector<double> params,
                               Normalization normalization)
    : kind_(kind), params_(std::move(params)), normalization_(normalization) {
  if (params_.size() != expected_param_count(kind_)) {
    throw InvalidParameter(to_string(kind_) + ": expected " +
                           std::to_string(expected_param_count(kind_)) + " parameters");
  }
  for (double p : params_) {
    if (!std::isfinite(p)) throw InvalidParameter(to_string(kind_) + ": parameters must be finite");
  }
  const bool normalizable = kind_ == FamilyKind::Hyp0F1 || kind_ == FamilyKind::Hyp1F1;
  if (!normalizable && normalization_ != Normalization::Plain) {
    throw InvalidParameter(to_string(kind_) + ": only 0F1 and 1F1 carry a c(c+1) factor");
  }
  const bool scaled = normalization_ == Normalization::CTimesCPlusOne;
  switch (kind_) {
    case FamilyKind::SinCos:
      if (params_[0] != 0.0 && params_[0] != 1.0) {
        throw InvalidParameter("sincos: which must be 0 (sin) or 1 (cos)");
      }
      break;
    case FamilyKind::Bessel:
      if (params_[0] < -1.0) throw InvalidParameter("bessel: alpha must be >= -1");
      break;
    case FamilyKind::Hyp0F1: {
      const double c = params_[0];
      if (scaled ? (is_nonpositive_integer(c) && c <= -2.0) : is_nonpositive_integer(c)) {
        throw InvalidParameter("hyp0f1: inadmissible c");
      }
      break;
    }
    case FamilyKind::Laguerre:
      if (!is_degree(params_[0])) throw InvalidParameter("laguerre: n must be a nonnegative integer");
      break;
    case FamilyKind::Hyp1F1: {
      const double a = params_[0];
      const double c = params_[1];
      const bool bad = scaled ? (is_nonpositive_integer(c) && c <= -2.0)
                              : (is_nonpositive_integer(c) && !terminates_before(a, c));
      if (bad) throw InvalidParameter("hyp1f1: inadmissible c");
      break;
    }
    case FamilyKind::Jacobi:
      if (!is_degree(params_[0])) throw InvalidParameter("jacobi: n must be a nonnegative integer");
      break;
    case FamilyKind::Hyp2F1: {
      const double c = params_[2];
      if (is_nonpositive_integer(c) && !terminates_before(params_[0], c) &&
          !terminates_before(params_[1], c)) {
        throw InvalidParameter("hyp2f1: inadmissible c");
      }
      break;
    }
  }
}

FunctionFamily FunctionFamily::sine() { return {FamilyKind::SinCos, {0.0}}; }
FunctionFamily FunctionFamily::cosine() { return {FamilyKind::SinCos, {1.0}}; }
FunctionFamily FunctionFamily::bessel(double alpha) { return {FamilyKind::Bessel, {alpha}}; }
FunctionFamily FunctionFamily::hyp0f1(double c, Normalization normalization) {
  return {FamilyKind::Hyp0F1, {c}, normalization};
}
FunctionFamily FunctionFamily::laguerre(int n, double alpha) {
  return {FamilyKind::Laguerre, {static_cast<double>(n), alpha}};
}
FunctionFamily FunctionFamily::hyp1f1(double a, double c, Normalization normalization) {
  return {FamilyKind::Hyp1F1, {a, c}, normalization};
}
FunctionFamily FunctionFamily::jacobi(int n, double alpha, double beta) {
  return {FamilyKind::Jacobi, {static_cast<double>(n), alpha, beta}};
}
FunctionFamily FunctionFamily::hyp2f1(double a, double b, double c) {
  return {FamilyKind::Hyp2F1, {a, b, c}};
}

FunctionFamily FunctionFamily::with_normalization(Normalization normalization) const {
  return {kind_, params_, normalization};
}

bool FunctionFamily::is_polynomial() const {
  return kind_ == FamilyKind::Laguerre || kind_ == FamilyKind::Jacobi;
}

int FunctionFamily::degree() const {
  if (!is_polynomial()) throw InvalidParameter(to_string(kind_) + " is not a polynomial family");
  return static_cast<int>(params_[0]);
}

std::string FunctionFamily::describe() const {
  std::ostringstream os;
  os.precision(15);
  switch (kind_) {
    case FamilyKind::SinCos:
      return is_sine() ? "sin" : "cos";
    case FamilyKind::Bessel:
      os << "bessel(alpha=" << params_[0] << ")";
      break;
    case FamilyKind::Hyp0F1:
      os << "hyp0f1(c=" << params_[0] << ")";
      break;
    case FamilyKind::Laguerre:
      os << "laguerre(n=" << params_[0] << ",alpha=" << params_[1] << ")";
      break;
    case FamilyKind::Hyp1F1:
      os << "hyp1f1(a=" << params_[0] << ",c=" << params_[1] << ")";
      break;
    case FamilyKind::Jacobi:
      os << "jacobi(n=" << params_[0] << ",alpha=" << params_[1] << ",beta=" << params_[2] << ")";
      break;
    case FamilyKind::Hyp2F1:
      os << "hyp2f1(a=" << params_[0] << ",b=" << params_[1] << ",c=" << params_[2] << ")";
      break;
  }
  std::string s = os.str();
  if (normalization_ == Normalization::CTimesCPlusOne) s = "c(c+1)*" + s;
  return s;
}

SeriesEvaluation calJ(double alpha, ComplexPoint z, const TruncationPolicy& policy) {
  if (std::isnan(alpha) || alpha < -1.0) {
    throw InvalidParameter("calJ: alpha must be >= -1");
  }
  const Complex zz = z.value();
  if (alpha == -1.0) {
    SeriesEvaluation s = calJ(1.0, z, policy);
    const Complex factor = -(zz * zz);
    s.value *= factor;
    s.tail_estimate *= std::abs(factor);
    s.term_magnitude *= std::abs(factor);
    return s;
  }
  const Complex w = -(zz * zz) / 4.0;
  SeriesEvaluation s = hyp0f1(alpha + 1.0, w, policy);
  const Work a = alpha;
  const double prefactor = static_cast<double>(std::exp2(-a) / std::tgamma(a + 1.0L));
  s.value *= prefactor;
  s.tail_estimate *= prefactor;
  s.term_magnitude *= prefactor;
  return s;
}

std::vector<double> laguerre_coefficients(int n, double alpha) {
  if (n < 0) throw InvalidParameter("laguerre: n must be >= 0");
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    // (alpha+j+1)_{n-j} / ((n-j)! j!), accumulated factor by factor.
    Work c = 1.0L;
    for (int i = 1; i <= n - j; ++i) {
      c *= (static_cast<Work>(alpha) + static_cast<Work>(j + i)) / static_cast<Work>(i);
    }
    for (int i = 1; i <= j; ++i) c /= static_cast<Work>(i);
    coeffs[static_cast<std::size_t>(j)] = static_cast<double>(j % 2 == 0 ? c : -c);
  }
  return coeffs;
}

std::vector<double> jacobi_shifted_coefficients(int n, double alpha, double beta) {
  if (n < 0) throw InvalidParameter("jacobi: n must be >= 0");
  const Work b = static_cast<Work>(n) + alpha + beta + 1.0L;
  const Work nfact = std::tgamma(static_cast<Work>(n) + 1.0L);
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
  Work lead = 1.0L;  // (-n)_k (b)_k / k!
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      const Work km1 = static_cast<Work>(k - 1);
      lead *= (static_cast<Work>(-n) + km1) * (b + km1) / static_cast<Work>(k);
    }
    const Work tail = pochhammer_work(static_cast<Work>(alpha) + 1.0L + static_cast<Work>(k), n - k);
    coeffs[static_cast<std::size_t>(k)] = static_cast<double>(lead * tail / nfact);
  }
  return coeffs;
}

namespace {

WorkComplex horner(const std::vector<double>& coeffs, WorkComplex z) {
  WorkComplex acc(0.0L);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z + static_cast<Work>(*it);
  }
  return acc;
}

Complex to_complex(WorkComplex v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

WorkComplex to_work(ComplexPoint z) { return {z.x(), z.y()}; }

SeriesEvaluation exact(Complex value) {
  SeriesEvaluation s;
  s.value = value;
  s.terms_used = 1;
  s.term_magnitude = std::abs(value);
  return s;
}

}  // namespace

Complex laguerre(int n, double alpha, ComplexPoint z) {
  return to_complex(horner(laguerre_coefficients(n, alpha), to_work(z)));
}

double laguerre_real(int n, double alpha, double x) {
  return static_cast<double>(horner(laguerre_coefficients(n, alpha), WorkComplex(x)).real());
}

Complex jacobi_shifted(int n, double alpha, double beta, ComplexPoint z) {
  return to_complex(horner(jacobi_shifted_coefficients(n, alpha, beta), to_work(z)));
}

std::vector<double> polynomial_coefficients(const FunctionFamily& family) {
  switch (family.kind()) {
    case FamilyKind::Laguerre:
      return laguerre_coefficients(family.degree(), family.param(1));
    case FamilyKind::Jacobi:
      return jacobi_shifted_coefficients(family.degree(), family.param(1), family.param(2));
    default:
      throw InvalidParameter(family.describe() + " is not a polynomial family");
  }
}

SeriesEvaluation direct_eval(const FunctionFamily& family, ComplexPoint z,
                             const TruncationPolicy& policy) {
  const auto& p = family.params();
  const bool scaled = family.normalization() == Normalization::CTimesCPlusOne;
  switch (family.kind()) {
    case FamilyKind::SinCos:
      return exact(family.is_sine() ? std::sin(z.value()) : std::cos(z.value()));
    case FamilyKind::Bessel:
      return calJ(p[0], z, policy);
    case FamilyKind::Hyp0F1:
      return scaled ? hyp0f1_normalized(p[0], z.value(), policy) : hyp0f1(p[0], z.value(), policy);
    case FamilyKind::Laguerre:
      return exact(laguerre(family.degree(), p[1], z));
    case FamilyKind::Hyp1F1:
      return scaled ? hyp1f1_normalized(p[0], p[1], z.value(), policy)
                    : hyp1f1(p[0], p[1], z.value(), policy);
    case FamilyKind::Jacobi:
      return exact(jacobi_shifted(family.degree(), p[1], p[2], z));
    case FamilyKind::Hyp2F1:
      return hyp2f1_series(p[0], p[1], p[2], z.value(), policy);
  }
  throw InvalidParameter("direct_eval: unknown family");
}

double modsq_direct(const FunctionFamily& family, ComplexPoint z, const TruncationPolicy& policy) {
  return std::norm(direct_eval(family, z, policy).value);
}

double default_fd_step(int order, double y) {
  const double rel = order == 1 ? 1e-4 : 1e-3;
  return std::max(rel, rel * std::abs(y));
}

double dy_fd(const FunctionFamily& family, ComplexPoint z, int order, double step,
             const TruncationPolicy& policy) {
  if (order != 1 && order != 2) throw InvalidParameter("dy_fd: order must be 1 or 2");
  if (!(step > 0.0)) throw InvalidParameter("dy_fd: step must be positive");
  // Sixth-order central stencils.
  const double y = z.y();
  Work v[7];
  for (int k = -3; k <= 3; ++k) {
    if (order == 1 && k == 0) continue;
    v[k + 3] = modsq_direct(family, z.with_y(y + k * step), policy);
  }
  auto f = [&](int k) { return v[k + 3]; };
  if (order == 1) {
    return static_cast<double>((45.0L * (f(1) - f(-1)) - 9.0L * (f(2) - f(-2)) + (f(3) - f(-3))) /
                               (60.0L * step));
  }
  const Work s1 = f(1) + f(-1), s2 = f(2) + f(-2), s3 = f(3) + f(-3);
  return static_cast<double>((270.0L * s1 - 27.0L * s2 + 2.0L * s3 - 490.0L * f(0)) /
                             (180.0L * static_cast<Work>(step) * step));
}

double dy_fd(const FunctionFamily& family, ComplexPoint z, int order,
             const TruncationPolicy& policy) {
  return dy_fd(family, z, order, default_fd_step(order, z.y()), policy);
}

namespace {

struct Jet {
  Complex f;
  Complex d1;
  Complex d2;
};

Complex value_of(const FunctionFamily& family, ComplexPoint z, const TruncationPolicy& policy) {
  return direct_eval(family, z, policy).value;
}

// F, F', F'' from the families' differentiation formulas.
Jet jet(const FunctionFamily& family, ComplexPoint z, const TruncationPolicy& policy) {
  const auto& p = family.params();
  const Complex zz = z.value();
  const bool scaled = family.normalization() == Normalization::CTimesCPlusOne;
  switch (family.kind()) {
    case FamilyKind::SinCos: {
      const Complex s = std::sin(zz);
      const Complex c = std::cos(zz);
      return family.is_sine() ? Jet{s, c, -s} : Jet{c, -s, -c};
    }
    case FamilyKind::Bessel: {
      // d/dz calJ_a = -z calJ_{a+1}
      const double a = p[0];
      const Complex j0 = calJ(a, z, policy).value;
      const Complex j1 = calJ(a + 1.0, z, policy).value;
      const Complex j2 = calJ(a + 2.0, z, policy).value;
      return {j0, -zz * j1, -j1 + zz * zz * j2};
    }
    case FamilyKind::Hyp0F1: {
      const double c = p[0];
      if (scaled) {
        const Complex g0 = hyp0f1_normalized(c, zz, policy).value;
        const Complex g1 = hyp0f1_normalized(c + 1.0, zz, policy).value;
        const Complex g2 = hyp0f1_normalized(c + 2.0, zz, policy).value;
        return {g0, g1 / (c + 2.0), g2 / ((c + 2.0) * (c + 3.0))};
      }
      return {hyp0f1(c, zz, policy).value, hyp0f1(c + 1.0, zz, policy).value / c,
              hyp0f1(c + 2.0, zz, policy).value / (c * (c + 1.0))};
    }
    case FamilyKind::Laguerre: {
      const int n = family.degree();
      const double a = p[1];
      const Complex f = laguerre(n, a, z);
      const Complex d1 = n >= 1 ? -laguerre(n - 1, a + 1.0, z) : Complex{};
      const Complex d2 = n >= 2 ? laguerre(n - 2, a + 2.0, z) : Complex{};
      return {f, d1, d2};
    }
    case FamilyKind::Hyp1F1: {
      const double a = p[0];
      const double c = p[1];
      if (scaled) {
        const Complex h0 = hyp1f1_normalized(a, c, zz, policy).value;
        const Complex h1 = hyp1f1_normalized(a + 1.0, c + 1.0, zz, policy).value;
        const Complex h2 = hyp1f1_normalized(a + 2.0, c + 2.0, zz, policy).value;
        return {h0, a * h1 / (c + 2.0), a * (a + 1.0) * h2 / ((c + 2.0) * (c + 3.0))};
      }
      return {hyp1f1(a, c, zz, policy).value,
              a / c * hyp1f1(a + 1.0, c + 1.0, zz, policy).value,
              a * (a + 1.0) / (c * (c + 1.0)) * hyp1f1(a + 2.0, c + 2.0, zz, policy).value};
    }
    case FamilyKind::Jacobi: {
      const int n = family.degree();
      const double al = p[1];
      const double be = p[2];
      const double s = n + al + be + 1.0;
      const Complex f = jacobi_shifted(n, al, be, z);
      const Complex d1 = n >= 1 ? -s * jacobi_shifted(n - 1, al + 1.0, be + 1.0, z) : Complex{};
      const Complex d2 =
          n >= 2 ? s * (s + 1.0) * jacobi_shifted(n - 2, al + 2.0, be + 2.0, z) : Complex{};
      return {f, d1, d2};
    }
    case FamilyKind::Hyp2F1: {
      const double a = p[0];
      const double b = p[1];
      const double c = p[2];
      return {value_of(family, z, policy),
              a * b / c * hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, zz, policy).value,
              a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) *
                  hyp2f1_series(a + 2.0, b + 2.0, c + 2.0, zz, policy).value};
    }
  }
  throw InvalidParameter("dy_analytic: unknown family");
}

}  // namespace

double dy_analytic(const FunctionFamily& family, ComplexPoint z, int order,
                   const TruncationPolicy& policy) {
  if (order != 1 && order != 2) throw InvalidParameter("dy_analytic: order must be 1 or 2");
  const Jet j = jet(family, z, policy);
  if (order == 1) return -2.0 * (std::conj(j.f) * j.d1).imag();
  return 2.0 * std::norm(j.d1) - 2.0 * (std::conj(j.f) * j.d2).real();
}

}  // namespace sosz
