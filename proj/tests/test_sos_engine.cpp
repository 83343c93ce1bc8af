#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "sosz/sos_engine.hpp"

using namespace sosz;
using sosz::test::Gen;
using sosz::test::rel_err;

namespace {

// Members inside the ranges where every coefficient of the requested order
// is asserted nonnegative.
std::vector<FunctionFamily> positive_members(Gen& g, int order) {
  const bool d = order > 0;
  std::vector<FunctionFamily> out = {
      FunctionFamily::sine(),
      FunctionFamily::cosine(),
      FunctionFamily::bessel(d ? g.uniform(-1.0, 3.0) : g.uniform(-0.99, 3.0)),
      FunctionFamily::hyp0f1(d ? g.uniform(-0.99, 3.0) : g.uniform(0.05, 3.0)),
      FunctionFamily::laguerre(g.integer(0, 7), d ? g.uniform(-1.99, 3.0) : g.uniform(-0.99, 3.0)),
  };
  if (!d) out.push_back(FunctionFamily::jacobi(g.integer(0, 6), g.uniform(-0.99, 2.0), g.uniform(-0.99, 2.0)));
  return out;
}

double pick(Gen& g, double lo, double hi) { return g.uniform(lo, hi); }

}  // namespace

TEST_CASE("sincos examples") {
  const double x = 0.83, y = -1.7;
  const auto s0 = sincos_sos(Trig::Sin, {x, 0.0}, 0);
  CHECK(s0.terms.size() == 2);
  CHECK(s0.total == doctest::Approx(std::sin(x) * std::sin(x)).epsilon(1e-15));
  const auto c0 = sincos_sos(Trig::Cos, {0.0, y}, 0);
  CHECK(c0.total == doctest::Approx(1.0 + std::sinh(y) * std::sinh(y)).epsilon(1e-15));
  const auto s2 = sincos_sos(Trig::Sin, {x, y}, 2);
  const double ch = std::cosh(y), sh = std::sinh(y);
  CHECK(s2.total == doctest::Approx(2.0 * ch * ch + 2.0 * sh * sh).epsilon(1e-14));
  const auto s1 = sincos_sos(Trig::Cos, {x, y}, 1);
  CHECK(s1.total == doctest::Approx(y * std::sinh(2.0 * y)).epsilon(1e-14));
}

TEST_CASE("bessel examples") {
  const double x = 1.37;
  const auto e = bessel_sos(0.4, {x, 0.0}, 0);
  const double j = calJ(0.4, {x, 0.0}).value.real();
  CHECK(rel_err(e.total, j * j) < 1e-14);
  int nonzero = 0;
  for (const SosTerm& t : e.terms) nonzero += t.contribution() != 0.0 ? 1 : 0;
  CHECK(nonzero == 1);
  // (2/pi)(cos^2 1 + sinh^2 1) from a 20-digit oracle
  CHECK(rel_err(bessel_sos(-0.5, {1.0, 1.0}, 0).total, 1.065080430052913) < 1e-9);
  const ComplexPoint z(0.5, 0.3);
  const auto e1 = bessel_sos(0.0, z, 1);
  const double fd = z.y() * dy_fd(FunctionFamily::bessel(0.0), z, 1);
  CHECK(std::abs(e1.total - fd) <= 1e-5 * std::abs(fd));
  CHECK_THROWS_AS(bessel_sos(-1.0, z, 0), InvalidParameter);
  CHECK_NOTHROW(bessel_sos(-1.0, z, 2));
}

TEST_CASE("hyp0f1 examples") {
  const double x = -2.2;
  const double f = hyp0f1(1.7, {x, 0.0}).value.real();
  CHECK(rel_err(hyp0f1_sos(1.7, {x, 0.0}, 0).total, f * f) < 1e-14);
  const double c = -0.5;
  const ComplexPoint z(0.2, 0.4);
  const double g = hyp0f1(c + 2.0, {z.x(), 0.0}).value.real();
  CHECK(hyp0f1_sos(c, z, 2).total >= 2.0 * (c + 1.0) * g * g);
  const ComplexPoint w(1.0, 0.5);
  const double c2 = 1.5;
  const auto fam = FunctionFamily::hyp0f1(c2, Normalization::CTimesCPlusOne);
  const double fd = w.y() * dy_fd(fam, w, 1);
  CHECK(std::abs(hyp0f1_sos(c2, w, 1).total - fd) <= 1e-5 * std::abs(fd));
  CHECK_THROWS_AS(hyp0f1_sos(-0.5, w, 0), InvalidParameter);
}

TEST_CASE("laguerre examples") {
  const double x = 2.1;
  const double l = laguerre_real(4, 0.6, x);
  CHECK(rel_err(laguerre_sos(4, 0.6, {x, 0.0}, 0).total, l * l) < 1e-13);
  Gen g(31);
  for (int t = 0; t < 50; ++t) {
    const double a = g.uniform(-0.99, 4.0);
    const ComplexPoint z = g.point(5.0);
    const double expect = (a + 1.0 - z.x()) * (a + 1.0 - z.x()) + z.y() * z.y();
    CHECK(std::abs(laguerre_sos(1, a, z, 0).total - expect) <= 1e-13 * (expect + 1.0));
  }
  const int n = 3;
  const double a = -1.5;
  const ComplexPoint z(0.7, 0.2);
  const double lo = laguerre_real(n - 1, a + 2.0, z.x());
  CHECK(laguerre_sos(n, a, z, 2).total >= 2.0 * (a + 2.0) / (n * (n + a + 1.0)) * lo * lo);
}

TEST_CASE("hyp1f1 examples") {
  const double x = 1.4;
  const double f = hyp1f1(-0.7, 1.2, {x, 0.0}).value.real();
  CHECK(rel_err(hyp1f1_sos(-0.7, 1.2, {x, 0.0}, 0).total, f * f) < 1e-13);
  // a = c + 2 terminates the derivative expansions after two steps
  const double c = -0.5;
  const ComplexPoint z(0.3, 0.3);
  const auto e = hyp1f1_sos(c + 2.0, c, z, 1);
  CHECK(e.min_coefficient() >= 0.0);
  const double fd = direct_counterpart(e, z);
  CHECK(std::abs(e.total - fd) <= 1e-5 * (std::abs(fd) + 1e-8));
}

TEST_CASE("hyp2f1 examples") {
  CHECK(hyp2f1_sos(0.3, 0.4, 1.1, {0.0, 0.0}).total == doctest::Approx(1.0).epsilon(1e-15));
  // |2F1(0.3, 0.4; 1.1; 0.2+0.1i)|^2 from a 20-digit oracle
  const auto e = hyp2f1_sos(0.3, 0.4, 1.1, {0.2, 0.1});
  CHECK(rel_err(e.total, 1.0472588646220115) < 1e-9);
  CHECK(rel_err(e.total, modsq_direct(FunctionFamily::hyp2f1(0.3, 0.4, 1.1), {0.2, 0.1})) < 1e-9);
  CHECK_THROWS_AS(hyp2f1_sos(0.3, 0.4, 1.1, {0.5, 0.1}), DomainError);
}

TEST_CASE("jacobi examples") {
  Gen g(32);
  for (int t = 0; t < 50; ++t) {
    const ComplexPoint z = g.point(3.0);
    const Complex w = 1.0 - 2.0 * z.value();
    CHECK(std::abs(jacobi_sos(1, 0.0, 0.0, z).total - std::norm(w)) <= 1e-14 * (std::norm(w) + 1.0));
  }
  const int n = 3;
  const double a = 0.5, b = -0.5;
  const ComplexPoint z(0.2, 0.1);
  const double scale = std::tgamma(n + 1.0) / pochhammer(a + 1.0, n);
  const double expect = std::norm(jacobi_shifted(n, a, b, z)) * scale * scale;
  CHECK(rel_err(jacobi_sos(n, a, b, z).total, expect) < 1e-10);
  const double x = 0.35;
  const double p = jacobi_shifted(n, a, b, {x, 0.0}).real() * scale;
  CHECK(rel_err(jacobi_sos(n, a, b, {x, 0.0}).total, p * p) < 1e-13);
}

TEST_CASE("order 0 totals match the direct oracle") {
  Gen g(33);
  for (int t = 0; t < 40; ++t) {
    std::vector<FunctionFamily> fams = positive_members(g, 0);
    fams.push_back(FunctionFamily::hyp1f1(pick(g, -3.0, 3.0), pick(g, 0.1, 3.0)));
    for (const FunctionFamily& f : fams) {
      const ComplexPoint z = g.point(5.0);
      const SosExpansion e = sos_expand(f, z, 0);
      const double d = direct_counterpart(e, z);
      CHECK_MESSAGE(std::abs(e.total - d) <= 1e-9 * (d + 1e-12), f.describe());
      CHECK(e.total >= 0.0);
    }
    const FunctionFamily h = FunctionFamily::hyp2f1(pick(g, -2.0, 2.0), pick(g, -2.0, 2.0), pick(g, 0.2, 3.0));
    const ComplexPoint z = g.disk_point(0.4);
    const SosExpansion e = sos_expand(h, z, 0);
    const double d = direct_counterpart(e, z);
    CHECK_MESSAGE(std::abs(e.total - d) <= 1e-9 * (d + 1e-12), h.describe());
  }
}

TEST_CASE("order 1 and 2 totals match the finite-difference oracle") {
  Gen g(34);
  for (int t = 0; t < 30; ++t) {
    std::vector<FunctionFamily> fams = positive_members(g, 1);
    fams.push_back(FunctionFamily::hyp1f1(pick(g, -3.0, 3.0), pick(g, -0.99, 3.0)));
    for (const FunctionFamily& f : fams) {
      for (int order : {1, 2}) {
        const ComplexPoint z = g.point(5.0);
        const SosExpansion e = sos_expand(f, z, order);
        const double d = direct_counterpart(e, z);
        CHECK_MESSAGE(std::abs(e.total - d) <= 1e-5 * (std::abs(d) + 1e-8), f.describe(), " order ", order);
      }
    }
  }
}

TEST_CASE("coefficients are nonnegative in the asserted ranges") {
  Gen g(35);
  for (int t = 0; t < 40; ++t) {
    for (int order : {0, 1, 2}) {
      for (const FunctionFamily& f : positive_members(g, order)) {
        const ComplexPoint z = g.point(5.0);
        const SosExpansion e = sos_expand(f, z, order);
        CHECK_MESSAGE(e.min_coefficient() >= 0.0, f.describe(), " order ", order);
      }
    }
  }
}

TEST_CASE("totals are even in y") {
  Gen g(36);
  for (int t = 0; t < 30; ++t) {
    for (int order : {0, 1, 2}) {
      for (const FunctionFamily& f : positive_members(g, order)) {
        const ComplexPoint z = g.point(5.0);
        CHECK(sos_expand(f, z, order).total == sos_expand(f, z.conj(), order).total);
      }
    }
  }
}

TEST_CASE("dropping terms lowers the total") {
  Gen g(37);
  for (int t = 0; t < 30; ++t) {
    for (int order : {0, 1, 2}) {
      for (const FunctionFamily& f : positive_members(g, order)) {
        const ComplexPoint z = g.point(5.0);
        const SosExpansion e = sos_expand(f, z, order);
        const std::size_t count = static_cast<std::size_t>(g.integer(0, static_cast<int>(e.terms.size())));
        CHECK(e.partial_sum(count) <= e.total + 1e-15 * e.term_magnitude);
      }
    }
  }
}

TEST_CASE("total is the sum of contributions") {
  Gen g(38);
  for (const FunctionFamily& f : positive_members(g, 0)) {
    const ComplexPoint z = g.point(4.0);
    const SosExpansion e = sos_expand(f, z, 0);
    double sum = 0.0;
    for (const SosTerm& term : e.terms) sum += term.contribution();
    CHECK(std::abs(sum - e.total) <= 1e-14 * e.term_magnitude);
    CHECK(e.partial_sum(e.terms.size()) == doctest::Approx(e.total).epsilon(1e-14));
  }
}

TEST_CASE("1F1 at a = -n reduces to the Laguerre expansion") {
  Gen g(39);
  for (int t = 0; t < 40; ++t) {
    const int n = g.integer(1, 7);
    const double a = g.uniform(-0.9, 3.0);
    const double c = a + 1.0;
    const ComplexPoint z = g.point(4.0);
    for (int order : {0, 1, 2}) {
      const SosExpansion h = hyp1f1_sos(-n, c, z, order);
      const SosExpansion l = laguerre_sos(n, a, z, order);
      double scale = std::tgamma(n + 1.0) / pochhammer(c, n);
      if (order > 0) scale *= c * (c + 1.0);
      scale *= scale;
      CHECK_MESSAGE(std::abs(h.total - scale * l.total) <= 1e-12 * (h.term_magnitude + scale * l.term_magnitude),
                    "order ", order);
      std::vector<double> hc, lc;
      for (const SosTerm& s : h.terms) {
        if (s.contribution() != 0.0) hc.push_back(s.contribution());
      }
      for (const SosTerm& s : l.terms) {
        if (s.contribution() != 0.0) lc.push_back(scale * s.contribution());
      }
      REQUIRE(hc.size() == lc.size());
      for (std::size_t i = 0; i < hc.size(); ++i) {
        CHECK(std::abs(hc[i] - lc[i]) <= 1e-12 * (std::abs(hc[i]) + 1e-300));
      }
    }
  }
}

TEST_CASE("jacobi expansion equals 2F1 at the terminating parameters") {
  Gen g(40);
  for (int t = 0; t < 40; ++t) {
    const int n = g.integer(0, 6);
    const double a = g.uniform(-0.9, 2.0), b = g.uniform(-0.9, 2.0);
    const ComplexPoint z = g.disk_point(0.4);
    const SosExpansion j = jacobi_sos(n, a, b, z);
    const SosExpansion h = hyp2f1_sos(-n, n + a + b + 1.0, a + 1.0, z);
    CHECK(std::abs(j.total - h.total) <= 1e-12 * (j.term_magnitude + h.term_magnitude));
  }
}

TEST_CASE("coefficient decomposition") {
  Gen g(41);
  for (int t = 0; t < 300; ++t) {
    const int n = g.integer(2, 12);
    double a = g.uniform(-0.99, 4.0);
    if (std::abs(a + 0.5) < 1e-3) a = 0.1;
    const double tt = g.uniform(0.0, 50.0);
    const auto d = bessel_coefficient_decomposition(n, a, tt);
    CHECK(std::abs(d.direct - d.decomposed) <= 1e-9 * (std::abs(d.decomposed) + 1.0));
    CHECK(d.terms_positive);
    CHECK(d.decomposed > 0.0);
  }
  CHECK(std::isnan(bessel_coefficient_decomposition(3, -0.5, 1.0).direct));
  CHECK_THROWS_AS(bessel_coefficient_decomposition(3, -1.0, 1.0), InvalidParameter);
}

TEST_CASE("chain identity examples") {
  ChainParams p;
  p.alpha = 0.5;
  CHECK(chain_check(ChainId::Eq3_4, p, {0.8, 0.6}).residual <= 1e-9);
  ChainParams q;
  q.n = 4;
  q.alpha = 0.3;
  const auto r = chain_check(ChainId::Eq4_4, q, {1.0, 0.5});
  CHECK(r.finite);
  CHECK(r.residual <= 1e-10);
  for (int k : {0, 1, 2}) {
    ChainParams s;
    s.alpha = 0.7;
    s.k = k;
    const auto e = chain_check(ChainId::Eq3_5, s, {0.0, 1.3});
    CHECK(e.residual <= 1e-12);
  }
  CHECK(chain_id_from_string("Eq5_7") == ChainId::Eq5_7);
  CHECK(all_chain_ids().size() == 15);
}

TEST_CASE("chain identities hold on random samples") {
  Gen g(42);
  for (int t = 0; t < 10; ++t) {
    ChainParams p;
    p.alpha = g.uniform(-0.4, 2.5);
    p.c = g.uniform(0.2, 3.0);
    p.n = g.integer(1, 6);
    p.k = g.integer(0, 2);
    const ComplexPoint z = g.point(3.0);
    for (ChainId id : {ChainId::Eq3_4, ChainId::Eq3_5, ChainId::Eq3_15, ChainId::Eq3_16, ChainId::Eq4_3,
                       ChainId::Eq4_4}) {
      const auto r = chain_check(id, p, z);
      const double tol = r.finite ? 1e-9 : 10.0 * r.error_estimate + 1e-9;
      CHECK_MESSAGE(r.residual <= tol, to_string(id));
    }
    ChainParams h;
    h.a = g.uniform(-1.5, 1.5);
    h.b = g.uniform(-1.5, 1.5);
    h.c = g.uniform(0.5, 3.0);
    const ComplexPoint w = g.disk_point(0.38);
    for (ChainId id : {ChainId::Eq5_3, ChainId::Eq5_5, ChainId::Eq5_6, ChainId::Eq5_7}) {
      const auto r = chain_check(id, h, w);
      const double tol = r.finite ? 1e-9 : 10.0 * r.error_estimate + 1e-9;
      CHECK_MESSAGE(r.residual <= tol, to_string(id));
    }
  }
}
