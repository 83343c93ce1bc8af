#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "sosz/zero_certifier.hpp"

using namespace sosz;
using sosz::test::Gen;

namespace {

double direct_quantity(const FunctionFamily& f, const Witness& w) {
  const ComplexPoint z(w.x, w.y);
  if (w.quantity == "ydy") return w.y * dy_fd(f, z, 1);
  if (w.quantity == "d2y") return dy_fd(f, z, 2);
  FAIL("unexpected witness quantity ", w.quantity);
  return 0.0;
}

void check_violation_is_sound(const FunctionFamily& f, const Certificate& c) {
  REQUIRE(c.status == CertificateStatus::Violated);
  REQUIRE(c.witness.has_value());
  const Witness& w = *c.witness;
  CHECK(w.value < -w.tolerance);
  const double again = direct_quantity(f, w);
  CHECK(again < -w.tolerance);
  CHECK(std::abs(again - w.value) <= 1e-5 * std::abs(w.value));
}

// Bisection on a sign change of calJ_alpha, independent of find_real_zeros.
double bisect_calJ(double alpha, double lo, double hi) {
  auto f = [alpha](double x) { return calJ(alpha, {x, 0.0}).value.real(); };
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ZeroList list_of(std::vector<double> xs) {
  ZeroList z;
  for (double x : xs) z.zeros.push_back(RealZero{x, x, x, 0.0, 1.0, true, 1});
  return z;
}

}  // namespace

TEST_CASE("grid lattice") {
  GridSpec g{-4.0, 4.0, -2.0, 2.0, 21, 11};
  CHECK_NOTHROW(g.validate());
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(20) == 4.0);
  CHECK(g.y(5) == 0.0);
  CHECK(g.x(10) == 0.0);
  CHECK(g.size() == 231);
  CHECK_THROWS_AS((GridSpec{1.0, 1.0, 0.0, 1.0, 3, 3}.validate()), InvalidParameter);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 0.0, 1.0, 0, 3}.validate()), InvalidParameter);
}

TEST_CASE("root bound encloses every zero") {
  Gen g(51);
  for (int t = 0; t < 200; ++t) {
    const int n = g.integer(1, 10);
    const double a = g.uniform(-3.0, 5.0), b = g.uniform(-0.99, 3.0);
    const auto lc = laguerre_coefficients(n, a);
    const double bound = polynomial_root_bound(lc);
    CHECK(effective_degree(lc) == n);
    // every real zero found on a wider interval lies inside the bound, which
    // is attained for n = 1
    const ZeroList z = find_real_zeros(FunctionFamily::laguerre(n, a), -3.0 * bound - 1.0, 3.0 * bound + 1.0, 4001);
    for (double x : z.locations()) CHECK(std::abs(x) <= bound * (1.0 + 1e-12));
    const auto jc = jacobi_shifted_coefficients(n, b, b);
    const double jb = polynomial_root_bound(jc);
    const ZeroList zj = find_real_zeros(FunctionFamily::jacobi(n, b, b), -3.0 * jb - 1.0, 3.0 * jb + 1.0, 4001);
    for (double x : zj.locations()) CHECK(std::abs(x) <= jb * (1.0 + 1e-12));
  }
  CHECK(polynomial_root_bound({3.0}) == 0.0);
  CHECK(polynomial_root_bound({0.0, 0.0}) == 0.0);
  CHECK(effective_degree({0.0, 0.0}) == -1);
  CHECK(effective_degree({1.0, 2.0, 1e-20}) == 1);
}

TEST_CASE("default grids") {
  CHECK(default_grid(FunctionFamily::sine()) == GridSpec{});
  const GridSpec p = default_grid(FunctionFamily::laguerre(3, 0.5));
  const double b = polynomial_root_bound(laguerre_coefficients(3, 0.5));
  CHECK(p.x_max == doctest::Approx(b + 1.0));
  CHECK(p.x_min == doctest::Approx(-(b + 1.0)));
  CHECK(p.y_max == 3.0);
  const GridSpec h = default_grid(FunctionFamily::hyp2f1(0.3, 0.4, 1.1));
  CHECK(std::hypot(h.x_max, h.y_max) <= 0.4);
}

TEST_CASE("jensen examples") {
  const GridSpec sq{-4.0, 4.0, -4.0, 4.0, 21, 21};
  const Certificate s = jensen_scan(FunctionFamily::sine(), sq);
  CHECK(s.status == CertificateStatus::Certified);
  CHECK(s.checks_run == 2 * 21 * 21);
  CHECK(s.route == "sos");

  const FunctionFamily l = FunctionFamily::laguerre(2, -2.5);
  const Certificate lv = jensen_scan(l, GridSpec{-2.0, 4.0, -2.0, 2.0, 41, 41});
  check_violation_is_sound(l, lv);

  const FunctionFamily j = FunctionFamily::jacobi(2, -1.6, -1.6);
  const Certificate jv = jensen_scan(j, default_grid(j));
  check_violation_is_sound(j, jv);
}

TEST_CASE("jensen scans certify the proven ranges") {
  std::vector<FunctionFamily> fams = {FunctionFamily::cosine(), FunctionFamily::bessel(-1.0),
                                      FunctionFamily::bessel(0.0), FunctionFamily::bessel(2.5),
                                      FunctionFamily::hyp0f1(-0.5, Normalization::CTimesCPlusOne),
                                      FunctionFamily::hyp0f1(0.0, Normalization::CTimesCPlusOne),
                                      FunctionFamily::hyp0f1(-1.0, Normalization::CTimesCPlusOne),
                                      FunctionFamily::hyp0f1(2.0),
                                      FunctionFamily::laguerre(4, -2.0),
                                      FunctionFamily::laguerre(3, -1.5),
                                      FunctionFamily::laguerre(5, 1.3),
                                      FunctionFamily::jacobi(3, -1.0, -1.0),
                                      FunctionFamily::jacobi(4, 0.5, -0.5)};
  for (const FunctionFamily& f : fams) {
    const Certificate c = jensen_scan(f, default_grid(f));
    CHECK_MESSAGE(c.status == CertificateStatus::Certified, f.describe(), " ", c.message);
  }
}

TEST_CASE("jensen scan is deterministic across thread counts") {
  const FunctionFamily f = FunctionFamily::laguerre(2, -2.5);
  JensenOptions one, four;
  four.threads = 4;
  CHECK(jensen_scan(f, default_grid(f), one) == jensen_scan(f, default_grid(f), four));
}

TEST_CASE("inequality examples") {
  const GridSpec g{-3.0, 3.0, -2.0, 2.0, 25, 17};
  CHECK(sos_lower_bound_check(InequalityId::Eq2_6, FunctionFamily::sine(), g).status == CertificateStatus::Certified);
  CHECK(sos_lower_bound_check(InequalityId::Eq3_10, FunctionFamily::bessel(0.0), g).status ==
        CertificateStatus::Certified);
  CHECK(sos_lower_bound_check(InequalityId::Eq4_8, FunctionFamily::laguerre(3, 0.5), g).status ==
        CertificateStatus::Certified);
  CHECK_THROWS_AS(sos_lower_bound_check(InequalityId::Eq3_10, FunctionFamily::sine(), g), InvalidParameter);
  CHECK(inequality_id_from_string("Eq5_11") == InequalityId::Eq5_11);
  CHECK(all_inequality_ids().size() == 16);
}

TEST_CASE("every applicable inequality certifies") {
  const std::vector<FunctionFamily> fams = {
      FunctionFamily::sine(),          FunctionFamily::cosine(),
      FunctionFamily::bessel(-1.0),    FunctionFamily::bessel(0.7),
      FunctionFamily::hyp0f1(-0.5),    FunctionFamily::hyp0f1(1.5),
      FunctionFamily::laguerre(3, -1.5), FunctionFamily::laguerre(4, 0.5),
      FunctionFamily::jacobi(3, 0.5, -0.5), FunctionFamily::jacobi(2, -1.0, 1.0)};
  for (const FunctionFamily& f : fams) {
    const auto ids = inequalities_for(f);
    CHECK_FALSE(ids.empty());
    for (InequalityId id : ids) {
      const Certificate c = sos_lower_bound_check(id, f, default_grid(f));
      CHECK_MESSAGE(c.status == CertificateStatus::Certified, to_string(id), " ", f.describe(), " ", c.message);
    }
  }
}

TEST_CASE("find_real_zeros examples") {
  const double pi = std::numbers::pi;
  const ZeroList s = find_real_zeros(FunctionFamily::sine(), 1.0, 7.0, 100);
  REQUIRE(s.zeros.size() == 2);
  CHECK(std::abs(s.zeros[0].location - pi) <= 1e-12);
  CHECK(std::abs(s.zeros[1].location - 2.0 * pi) <= 1e-12);

  const ZeroList j = find_real_zeros(FunctionFamily::bessel(0.0), 0.0, 10.0);
  REQUIRE(j.zeros.size() == 3);
  // zeros of J_0 from a 20-digit oracle
  CHECK(std::abs(j.zeros[0].location - 2.404825557695773) <= 1e-8);
  CHECK(std::abs(j.zeros[1].location - 5.520078110286311) <= 1e-8);
  CHECK(std::abs(j.zeros[2].location - 8.653727912911012) <= 1e-8);
  CHECK(std::abs(j.zeros[0].location - bisect_calJ(0.0, 2.0, 3.0)) <= 1e-12);

  const ZeroList l = find_real_zeros(FunctionFamily::laguerre(1, 0.5), 0.0, 5.0);
  REQUIRE(l.zeros.size() == 1);
  CHECK(l.zeros[0].location == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("double zeros are reported unconfirmed or by multiplicity") {
  // L_2^{-2}(z) = z^2 / 2
  const ZeroList d = find_real_zeros(FunctionFamily::laguerre(2, -2.0), -1.0, 1.3);
  REQUIRE(d.zeros.size() == 1);
  CHECK(std::abs(d.zeros[0].location) < 1e-6);
  CHECK(d.zeros[0].multiplicity == 2);
  CHECK(d.count_with_multiplicity() == 2);
}

TEST_CASE("zero list invariants") {
  Gen g(52);
  for (int t = 0; t < 40; ++t) {
    const FunctionFamily fams[] = {FunctionFamily::bessel(g.uniform(-0.9, 3.0)),
                                   FunctionFamily::laguerre(g.integer(1, 9), g.uniform(-0.9, 3.0)),
                                   FunctionFamily::jacobi(g.integer(1, 7), g.uniform(-0.9, 2.0), g.uniform(-0.9, 2.0)),
                                   FunctionFamily::hyp1f1(g.uniform(-5.0, -0.1), g.uniform(0.2, 3.0))};
    for (const FunctionFamily& f : fams) {
      const double lo = f.kind() == FamilyKind::Jacobi ? -1.0 : -2.0;
      // the Bessel series loses digits to cancellation beyond x ~ 22
      const double hi = f.kind() == FamilyKind::Bessel ? 20.0 : 25.0;
      const ZeroList z = find_real_zeros(f, lo, hi, 3001);
      for (std::size_t i = 0; i < z.zeros.size(); ++i) {
        const RealZero& r = z.zeros[i];
        if (i > 0) CHECK(r.location > z.zeros[i - 1].location);
        CHECK_MESSAGE(r.residual <= 1e-8 * r.local_scale + 1e-300, f.describe(), " at ", r.location, " ", r.bracket_hi - r.bracket_lo);
        if (r.confirmed && r.bracket_lo < r.bracket_hi) {
          const double a = direct_eval(f, {r.bracket_lo, 0.0}).value.real();
          const double b = direct_eval(f, {r.bracket_hi, 0.0}).value.real();
          CHECK(a * b <= 0.0);
          CHECK(r.bracket_hi - r.bracket_lo <= 1e-13 * (1.0 + std::abs(r.location)));
        }
      }
    }
  }
}

TEST_CASE("interlacing examples") {
  CHECK(interlacing_check({}, {}));
  CHECK_FALSE(interlacing_check(list_of({1.0, 2.0}), list_of({3.0})));
  CHECK(interlacing_check(list_of({1.0, 3.0}), list_of({2.0, 4.0})));
  CHECK_FALSE(interlacing_check(list_of({1.0, 2.0, 3.0}), list_of({1.5, 1.6, 2.5})));
  const ZeroList a = find_real_zeros(FunctionFamily::bessel(0.0), 0.0, 15.0);
  const ZeroList b = find_real_zeros(FunctionFamily::bessel(1.0), 0.0, 15.0);
  CHECK(interlacing_check(a, b));
}

TEST_CASE("bessel zeros interlace") {
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    const ZeroList a = find_real_zeros(FunctionFamily::bessel(alpha), 0.0, 20.0, 4001);
    const ZeroList b = find_real_zeros(FunctionFamily::bessel(alpha + 1.0), 0.0, 20.0, 4001);
    CHECK_FALSE(a.zeros.empty());
    CHECK_MESSAGE(interlacing_check(a, b), "alpha ", alpha);
  }
}

TEST_CASE("count_real_zeros_vs_degree examples") {
  const ZeroCount l5 = count_real_zeros_vs_degree(FunctionFamily::laguerre(5, -1.5));
  CHECK(l5.certificate.status == CertificateStatus::Certified);
  CHECK(l5.count == 5);
  CHECK(l5.degree == 5);

  const FunctionFamily bad = FunctionFamily::laguerre(2, -2.5);
  const ZeroCount l2 = count_real_zeros_vs_degree(bad);
  check_violation_is_sound(bad, l2.certificate);

  const ZeroCount l1 = count_real_zeros_vs_degree(FunctionFamily::laguerre(1, -3.0));
  CHECK(l1.certificate.status == CertificateStatus::Certified);
  REQUIRE(l1.zeros.zeros.size() == 1);
  CHECK(l1.zeros.zeros[0].location == doctest::Approx(-2.0).epsilon(1e-13));

  const ZeroCount j = count_real_zeros_vs_degree(FunctionFamily::jacobi(4, 0.5, -0.5));
  CHECK(j.certificate.status == CertificateStatus::Certified);
  CHECK(j.count == 4);
  CHECK_THROWS_AS(count_real_zeros_vs_degree(FunctionFamily::bessel(0.0)), InvalidParameter);
}
