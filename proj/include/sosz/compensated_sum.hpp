#pragma once

#include <cmath>
#include <complex>

namespace sosz {

/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the error when an addend is larger than the accumulated sum,
/// which happens routinely in alternating series whose early terms grow.
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real initial) : sum_(initial) {}

  void add(Real value) {
    const Real t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    magnitude_ += std::abs(value);
  }

  CompensatedSum& operator+=(Real value) {
    add(value);
    return *this;
  }

  Real value() const { return sum_ + compensation_; }

  /// Sum of |addend|; bounds the rounding error of the result.
  Real magnitude() const { return magnitude_; }

 private:
  Real sum_ = Real{0};
  Real compensation_ = Real{0};
  Real magnitude_ = Real{0};
};

/// Component-wise compensated sum of complex addends.
template <typename Real>
class CompensatedComplexSum {
 public:
  void add(const std::complex<Real>& value) {
    re_.add(value.real());
    im_.add(value.imag());
  }

  CompensatedComplexSum& operator+=(const std::complex<Real>& value) {
    add(value);
    return *this;
  }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace sosz
