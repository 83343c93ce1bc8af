#pragma once

#include <string>
#include <vector>

#include "sosz/core_math.hpp"

namespace sosz {

enum class FamilyKind { SinCos, Bessel, Hyp0F1, Laguerre, Hyp1F1, Jacobi, Hyp2F1 };

// The 0F1 and 1F1 families carry their leading factor: either the plain
// series, or c (c+1) times it, which extends continuously to c = 0, -1.
enum class Normalization { Plain, CTimesCPlusOne };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// One member of a function family, identified by its kind and real
/// parameters:
///   SinCos   {which}            0 = sin, 1 = cos
///   Bessel   {alpha}            the even entire function z^-alpha J_alpha(z)
///   Hyp0F1   {c}                0F1(; c; z)
///   Laguerre {n, alpha}         L_n^alpha(z)
///   Hyp1F1   {a, c}             1F1(a; c; z)
///   Jacobi   {n, alpha, beta}   P_n^(alpha,beta)(1 - 2z), a polynomial in z
///   Hyp2F1   {a, b, c}          2F1(a, b; c; z), |z| < 1
class FunctionFamily {
 public:
  /// Throws InvalidParameter when the parameter count does not match the
  /// kind, a degree is not a nonnegative integer, or the member is not
  /// defined (e.g. Bessel alpha < -1).
  FunctionFamily(FamilyKind kind, std::vector<double> params,
                 Normalization normalization = Normalization::Plain);

  static FunctionFamily sine();
  static FunctionFamily cosine();
  static FunctionFamily bessel(double alpha);
  static FunctionFamily hyp0f1(double c, Normalization normalization = Normalization::Plain);
  static FunctionFamily laguerre(int n, double alpha);
  static FunctionFamily hyp1f1(double a, double c,
                               Normalization normalization = Normalization::Plain);
  static FunctionFamily jacobi(int n, double alpha, double beta);
  static FunctionFamily hyp2f1(double a, double b, double c);

  FamilyKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double param(std::size_t i) const { return params_.at(i); }
  Normalization normalization() const { return normalization_; }
  FunctionFamily with_normalization(Normalization normalization) const;

  bool is_polynomial() const;
  /// Polynomial degree parameter n (Laguerre, Jacobi).
  int degree() const;
  bool is_sine() const { return kind_ == FamilyKind::SinCos && params_[0] == 0.0; }

  std::string describe() const;

  friend bool operator==(const FunctionFamily&, const FunctionFamily&) = default;

 private:
  FamilyKind kind_;
  std::vector<double> params_;
  Normalization normalization_;
};

/// z^-alpha J_alpha(z) = 2^-alpha / Gamma(alpha+1) 0F1(; alpha+1; -z^2/4).
/// At alpha = -1 this is the limit -z^2 calJ(1, z).
SeriesEvaluation calJ(double alpha, ComplexPoint z, const TruncationPolicy& policy = {});

/// Coefficients of z^j, j = 0..n, of L_n^alpha(z):
/// (-1)^j (alpha+j+1)_{n-j} / ((n-j)! j!). Valid for every real alpha,
/// including the negative-integer limit cases.
std::vector<double> laguerre_coefficients(int n, double alpha);
Complex laguerre(int n, double alpha, ComplexPoint z);
/// Real-argument evaluation in working precision.
double laguerre_real(int n, double alpha, double x);

/// Coefficients of z^k of P_n^(alpha,beta)(1 - 2z):
/// (-n)_k (n+alpha+beta+1)_k (alpha+1+k)_{n-k} / (k! n!).
std::vector<double> jacobi_shifted_coefficients(int n, double alpha, double beta);
Complex jacobi_shifted(int n, double alpha, double beta, ComplexPoint z);

/// Coefficients of the polynomial families, lowest degree first.
std::vector<double> polynomial_coefficients(const FunctionFamily& family);

/// F(z) by the definition-based route.
SeriesEvaluation direct_eval(const FunctionFamily& family, ComplexPoint z,
                             const TruncationPolicy& policy = {});

/// |F(z)|^2 by the definition-based route.
double modsq_direct(const FunctionFamily& family, ComplexPoint z,
                    const TruncationPolicy& policy = {});

/// Default central-difference step for dy_fd.
double default_fd_step(int order, double y);

/// Central difference of modsq_direct in y: order 1 returns d/dy |F|^2,
/// order 2 returns d^2/dy^2 |F|^2.
double dy_fd(const FunctionFamily& family, ComplexPoint z, int order, double step,
             const TruncationPolicy& policy = {});
double dy_fd(const FunctionFamily& family, ComplexPoint z, int order,
             const TruncationPolicy& policy = {});

/// The same y-derivatives from F, F' and F'' (each by its own
/// closed-form derivative relation): d/dy |F|^2 = -2 Im(conj(F) F'),
/// d^2/dy^2 |F|^2 = 2 |F'|^2 - 2 Re(conj(F) F'').
double dy_analytic(const FunctionFamily& family, ComplexPoint z, int order,
                   const TruncationPolicy& policy = {});

}  // namespace sosz
