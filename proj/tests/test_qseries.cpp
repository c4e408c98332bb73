#include <cmath>
#include <random>

#include "doctest.h"
#include "wexc/qseries.hpp"

using namespace wexc;

namespace {

// independent product oracle for η
cplx eta_product(cplx tau, int nfac) {
  const cplx I(0, 1);
  cplx q = std::exp(2.0 * M_PI * I * tau);
  cplx r = std::exp(2.0 * M_PI * I * tau / 24.0);
  cplx qn = 1;
  for (int n = 1; n <= nfac; ++n) {
    qn *= q;
    r *= 1.0 - qn;
  }
  return r;
}

cplx f_product(cplx tau, cplx s, int nfac) {
  const cplx I(0, 1);
  cplx q = std::exp(2.0 * M_PI * I * tau), e = std::exp(2.0 * M_PI * I * s);
  cplx r = std::exp(M_PI * I * tau / 6.0) * std::exp(M_PI * I * s) * (1.0 - 1.0 / e);
  cplx qn = 1;
  for (int n = 1; n <= nfac; ++n) {
    qn *= q;
    r *= (1.0 - qn * e) * (1.0 - qn / e);
  }
  return r;
}

}  // namespace

TEST_SUITE("qseries") {
  TEST_CASE("arithmetic basics") {
    QSeries one = QSeries::one(0);
    QSeries geo = QSeries::zero(0, Rat(25));
    for (int n = 0; n <= 25; ++n) geo.add_term(n, 0, {}, 1);
    QSeries one_minus_q = one - QSeries::monomial(0, 1, 0, {});
    CHECK(same_series(one_minus_q * geo, one.truncated(25)));
    CHECK(same_series(one_minus_q.truncated(25).inverse(), geo));
    CHECK_THROWS_AS(one_minus_q.inverse(), DomainError);  // exact divisor, no order
    auto eta = eta_series(0, 20);
    CHECK(same_series(eta * eta / eta, eta));
    CHECK(*(eta * eta / eta).cut_rat() == rat(1, 24) + 20);
    CHECK_THROWS_AS(one / (QSeries::monomial(0, 0, 0, {}, 2)), DomainError);
    CHECK_THROWS_AS(geo.regrid(3, 1, 1).regrid(2, 1, 1), std::logic_error);
  }

  TEST_CASE("eta: pentagonal numbers") {
    const int N = 60;
    auto eta = eta_series(0, N);
    QSeries pent = QSeries::zero(0, rat(1, 24) + N);
    for (i64 k = -20; k <= 20; ++k) {
      i64 e = k * (3 * k - 1) / 2;
      if (e <= N) pent.add_term(rat(1, 24) + e, 0, {}, k % 2 ? -1 : 1);
    }
    std::string why;
    CHECK_MESSAGE(same_series(eta, pent, &why), why);
    CHECK(eta.coeff(rat(1, 24) + 1, 0, {}) == -1);
    CHECK(eta.coeff(rat(1, 24) + 5, 0, {}) == 1);
    CHECK(eta.coeff(rat(1, 24) + 3, 0, {}) == 0);
  }

  TEST_CASE("f leading term and unit part") {
    std::vector<Rat> s{rat(1, 3), rat(-2, 5)};
    auto f = f_series(s, 6);
    // q^{1/12}(ζ - ζ^{-1}) with ζ = e^{πis}
    CHECK(f.min_q() == rat(1, 12));
    CHECK(f.coeff(rat(1, 12), 0, s) == 1);
    CHECK(f.coeff(rat(1, 12), 0, {-s[0], -s[1]}) == -1);
    // the lowest grade is (1 - e^{-2πis}) times a monomial, so f is not a unit
    CHECK(!f.unit_leading());
    auto fu = f.div_binomial({-2 * s[0], -2 * s[1]});
    REQUIRE(fu);
    CHECK(fu->unit_leading());
    auto inv = fu->inverse();
    CHECK(same_series(*fu * inv, QSeries::one(2).truncated(6 + rat(1, 12) - rat(1, 12))));
  }

  TEST_CASE("binomial division and substitution") {
    std::vector<Rat> a{1, 0}, b{rat(1, 2), 1};
    QSeries p = QSeries::monomial(2, 0, 0, {0, 0}) + QSeries::monomial(2, 1, rat(1, 3), b, 3) +
                QSeries::monomial(2, 1, rat(1, 3), {2, 1}, -2);
    QSeries bin = QSeries::one(2) - QSeries::monomial(2, 0, 0, a);
    auto back = (p * bin).div_binomial(a);
    REQUIRE(back);
    CHECK(same_series(*back, p));
    CHECK(!p.div_binomial(a));
    // non-primitive exponent vector
    std::vector<Rat> a3{3, -3};
    QSeries bin3 = QSeries::one(2) - QSeries::monomial(2, 0, 0, a3);
    auto back3 = (p * bin3).div_binomial(a3);
    REQUIRE(back3);
    CHECK(same_series(*back3, p));
    // z = S w, evaluated numerically
    Mat S{{1, rat(1, 2)}, {rat(-1, 3), 2}, };
    auto ps = p.substitute_z(S);
    EvalPoint w{cplx(0.1, 0.7), {cplx(0.3, 0.1), cplx(-0.2, 0.05)}, cplx(0.4, 0)};
    EvalPoint z{w.tau, {w.z[0] + 0.5 * w.z[1], -w.z[0] / 3.0 + 2.0 * w.z[1]}, w.t};
    CHECK(std::abs(ps.evaluate(w).value - p.evaluate(z).value) < 1e-12);
    auto z0 = p.at_z_zero();
    CHECK(z0.nz == 0);
    CHECK(z0.coeff(1, rat(1, 3), {}) == 1);
  }

  TEST_CASE("Jacobi triple product") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
      int nz = 1 + trial % 3;
      std::vector<Rat> s(nz);
      for (auto& c : s) c = rat(long(rng() % 13) - 6, long(1 + rng() % 6));
      CAPTURE(trial);
      std::string why;
      CHECK_MESSAGE(same_series(theta_product(s, 30), theta_sum(s, 30), &why), why);
      // θ = η f
      CHECK(same_series(theta_product(s, 12), eta_series(nz, 12) * f_series(s, 12)));
    }
  }

  TEST_CASE("numeric evaluation") {
    auto eta = eta_series(0, 40);
    CHECK_THROWS_AS(eta.evaluate({cplx(0.3, 0), {}, 0}), DomainError);
    auto v = eta.evaluate({cplx(0, 1), {}, 0});
    double gam = std::tgamma(0.25) / (2 * std::pow(M_PI, 0.75));
    CHECK(std::abs(v.value - gam) < 1e-12);
    CHECK(std::abs(v.value - eta_product(cplx(0, 1), 200)) < 1e-12);
    CHECK(std::abs(v.value.real() - 0.768225) < 1e-6);
    // the error estimate covers the actual truncation error
    for (double y : {0.3, 0.5, 1.0}) {
      auto e10 = eta_series(0, 10).evaluate({cplx(0.2, y), {}, 0});
      double err = std::abs(e10.value - eta_product(cplx(0.2, y), 400));
      CAPTURE(y);
      CHECK(err <= e10.error_bound);
    }
    // η(-1/τ) = (-iτ)^{1/2} η(τ)
    cplx tau(0, 1.3);
    cplx lhs = eta.evaluate({-1.0 / tau, {}, 0}).value;
    cplx rhs = std::sqrt(-cplx(0, 1) * tau) * eta.evaluate({tau, {}, 0}).value;
    CHECK(std::abs(lhs - rhs) < 1e-10);
    // f(-1/τ, s/τ) = -i e^{πis²/τ} f(τ,s)
    auto f = f_series({1}, 40);
    cplx t2(0, 1.1), s = 0.3;
    cplx fl = f.evaluate({-1.0 / t2, {s / t2}, 0}).value;
    cplx fr = -cplx(0, 1) * std::exp(cplx(0, M_PI) * s * s / t2) * f.evaluate({t2, {s}, 0}).value;
    CHECK(std::abs(fl - fr) < 1e-8);
    CHECK(std::abs(f.evaluate({t2, {s}, 0}).value - f_product(t2, s, 200)) < 1e-12);
  }

  TEST_CASE("f asymptotics as tau -> 0") {
    // f(τ,-aτ) / (2 sin(πa) e^{-πi/6τ}) -> 1 along τ = iε
    const double a = 0.3;
    auto f = f_series({1}, 300);
    double prev = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
      cplx tau(0, eps);
      auto ev = f.evaluate({tau, {-a * tau}, 0});
      CHECK(ev.error_bound < 1e-6);
      cplx ratio = ev.value / (2 * std::sin(M_PI * a) * std::exp(-cplx(0, M_PI) / (6.0 * tau)));
      double dev = std::abs(ratio - 1.0);
      CAPTURE(eps);
      CHECK(dev < prev);
      prev = dev;
      // via the S-transform the ratio is e^{πa²ε} up to e^{-2π(1-a)/ε}
      CHECK(std::abs(ratio - std::exp(M_PI * a * a * eps)) < 1e-5);
    }
    CHECK(prev < 2e-2);
  }

  TEST_CASE("serialization") {
    QSeries s = QSeries::monomial(1, rat(1, 24), rat(3, 2), {rat(1, 2)}, -3).truncated(2);
    CHECK(s.serialize() == R"({"scale":2,"nz":1,"order":"2","terms":[["1/24",[1],"3/2",-3]]})");
  }
}
