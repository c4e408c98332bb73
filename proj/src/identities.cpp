#include "wexc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wexc {

namespace {

bool identity_weyl(const WeylElement& w) { return w.word.empty() || w.m == identity(int(w.m.size())); }

Rat ratio(const FinVec& v, const FinVec& b) {
  Rat s;
  bool have = false;
  for (size_t i = 0; i < v.size(); ++i) {
    if (b[i] == 0) {
      if (v[i] != 0) throw std::logic_error("vector is not a multiple of the h^f basis vector");
      continue;
    }
    Rat t = v[i] / b[i];
    if (have && t != s) throw std::logic_error("vector is not a multiple of the h^f basis vector");
    s = t;
    have = true;
  }
  return s;
}

}  // namespace

NilpotentDatum sl3_minimal_orbit() { return orbit_from_partition(Family::sl, parse_partition("2,1")); }

std::vector<PrincipalAdmissible> sl3_minimal_mp(i64 p) {
  auto rs = build_root_system("A2");
  std::vector<PrincipalAdmissible> out;
  for (auto& L : enumerate_principal_admissible(rs, p, 2).weights)
    if (identity_weyl(L.ybar) && L.beta == -rs.fund[0]) out.push_back(L);
  return out;
}

Rat sl3_lambda2_scale(const NilpotentDatum& d) { return ratio(d.wbar.apply(d.R().fund[1]), d.hf[0]); }

IdentityCheck sl3_denominator_identity(int order) {
  auto d = sl3_minimal_orbit();
  auto P = denominator_psi(d, order);
  auto S = d.psi_roots();
  IdentityCheck c;
  if (S.size() != 1) {
    c.detail = "expected a single root in ψ";
    return c;
  }
  // z Λ₂^R: the ψ root pairs to 1 with Λ₂^R
  if (d.res[S[0]][0] * sl3_lambda2_scale(d) != 1) {
    c.detail = "α(Λ₂^R) != 1";
    return c;
  }
  c.lhs = P.product_form;
  c.rhs = (eta_series(1, order) * theta_product(d.res[S[0]], order)).shifted(0, 3, {0});
  c.equal = same_series(c.lhs, c.rhs, &c.detail) && P.forms_agree;
  return c;
}

IdentityCheck sl3_extra_factor(const PrincipalAdmissible& L, int order) {
  auto d = sl3_minimal_orbit();
  IdentityCheck c;
  auto ef = extra_factor(L, d, order);
  c.lhs = ef.num;
  c.rhs = QSeries::monomial(1, 0, rat(-3, 2), {0});
  c.equal = ef.bins.empty() && same_series(c.lhs, c.rhs, &c.detail);
  if (!ef.bins.empty()) c.detail = "extra factor kept a z-denominator";
  return c;
}

QSeries recover_numerator(const NilpotentDatum& d, const Fraction& chi, int order) {
  auto P = denominator_psi(d, order);
  auto removed = P.bins;
  for (auto& b : chi.bins) {
    auto it = std::find(removed.begin(), removed.end(), b);
    if (it == removed.end()) throw DomainError("character denominator is not a sub-multiset of ψ's");
    removed.erase(it);
  }
  QSeries back = chi.num;
  for (auto& b : removed) back = back * (QSeries::one(back.nz) - QSeries::monomial(back.nz, 0, 0, b));
  return back * P.unit;
}

IdentityCheck sl3_character_identity(const PrincipalAdmissible& L, int order, const QSeries* numerator) {
  auto d = sl3_minimal_orbit();
  const RootSystem& rs = d.R();
  Rat s = sl3_lambda2_scale(d);
  // std-frame arguments (2τ, z Λ₂ - τΛ₁, (t + (τ - z)/3)/2)
  EvalMap em;
  em.a = 2;
  em.Z = {(Rat(1) / s) * rs.fund[1]};
  em.c = -rs.fund[0];
  em.t0 = rat(1, 2);
  em.ell = {-(Rat(1) / s) / 6};
  em.d = rat(1, 6);
  auto P = denominator_psi(d, order + 4);
  auto B = numerator ? *numerator : numerator_B(L, d, order);
  Rat qmax = numerator_B(L, d, 0).min_q() + order + 2;
  auto den = affine_denominator_product(rs, em, qmax);
  auto num = affine_numerator(rs, L.lam0 + rs.rho, Rat(L.p), em, qmax);
  IdentityCheck c;
  c.lhs = B * den;
  c.rhs = (P.product_form * num).shifted(0, rat(-3, 2), {0});
  c.equal = same_series(c.lhs, c.rhs, &c.detail);
  auto cut = c.lhs.cut_rat();
  if (c.equal && !c.lhs.empty() && (!cut || *cut < c.lhs.min_q() + order)) {
    c.equal = false;
    c.detail = "comparison window shorter than requested";
  }
  return c;
}

NilpotentDatum g2_short_root_orbit() {
  auto g2 = build_root_system("G2");
  FinVec a = g2.simple[0];
  if (g2.norm2(a) == 2) a = g2.simple[1];
  return orbit_from_root_vector(g2, a);
}

IdentityCheck g2_extra_factor(const PrincipalAdmissible& L, int order) {
  auto d = g2_short_root_orbit();
  IdentityCheck c;
  if (d.hf_dim() != 1) {
    c.detail = "h^f is not one-dimensional";
    return c;
  }
  auto P = denominator_psi(d, order);
  auto C = extra_C(L, d, order);
  Rat top = Rat(order) + 2;
  for (int i : d.psi_roots()) {
    auto sc = d.res[i];
    std::vector<Rat> s2{2 * sc[0]};
    // f(2τ, 2s) = q^{1/6} e^{2πis} Π_{n≥1}(1 - q^{2n} e^{4πis}) Π_{n≥0}(1 - q^{2n} e^{-4πis})
    QSeries f2 = QSeries::monomial(1, rat(1, 6), 0, {2 * sc[0]}).truncated(rat(1, 6) + top) *
                 q_pochhammer(s2, 2, 2, top) * q_pochhammer({-s2[0]}, 0, 2, top);
    auto lhs = C * f2;
    auto rhs = (P.product_form * f_series(sc, order)).shifted(0, -2, {0});
    std::string why;
    if (same_series(lhs, rhs, &why)) {
      c.equal = true;
      c.lhs = lhs;
      c.rhs = rhs;
      c.detail = "z normalised by α(b₁) = " + sc[0].get_str();
      return c;
    }
    c.detail = why;
  }
  return c;
}

Partition sln_fm_partition(int n, int m) {
  std::vector<int> parts(n / m, m);
  if (n % m) parts.push_back(n % m);
  return Partition{parts};
}

SlnExtraFactorCheck sln_extra_factor_check(int n, int u, int order, int max_weights) {
  SlnExtraFactorCheck R;
  R.n = n;
  R.u = u;
  auto d = orbit_from_partition(Family::sl, sln_fm_partition(n, u));
  i64 p = n;
  while (std::gcd(p, i64(u)) != 1) ++p;
  R.p = p;
  auto closed = sln_extra_factor_closed_form(n, u, order);
  for (auto& L : enumerate_principal_admissible(d.R(), p, u).weights) {
    if (numerator_B(L, d, 0).empty()) continue;
    auto ef = extra_factor(L, d, order);
    if (!ef.bins.empty()) R.z_free = false;
    for (auto& [k, c] : ef.num.terms)
      for (int j = 0; j < ef.num.nz; ++j)
        if (k[2 + j] != 0) R.z_free = false;
    int sg = 0;
    if (!match_up_to_sign(ef.num.at_z_zero(), closed, &sg)) R.all_match = false;
    R.signs.push_back(sg);
    if (++R.compared == max_weights) break;
  }
  if (R.compared == 0) R.all_match = false;
  return R;
}

std::vector<NumericCheck> s_transform_checks(cplx tau, double tol, int order) {
  std::vector<NumericCheck> out;
  const cplx I(0, 1);
  auto eta = eta_series(0, order);
  auto el = eta.evaluate({-1.0 / tau, {}, 0}), er = eta.evaluate({tau, {}, 0});
  cplx root = std::sqrt(-I * tau);
  NumericCheck e{"eta S-transform", std::abs(el.value - root * er.value), el.error_bound + std::abs(root) * er.error_bound};
  e.ok = e.deviation < tol + e.bound;
  out.push_back(e);
  auto f = f_series({1}, order);
  for (double s : {0.1, 0.3}) {
    auto fl = f.evaluate({-1.0 / tau, {s / tau}, 0}), fr = f.evaluate({tau, {s}, 0});
    cplx ph = -I * std::exp(I * M_PI * s * s / tau);
    NumericCheck c{"f S-transform at s=" + std::to_string(s).substr(0, 3), std::abs(fl.value - ph * fr.value),
                   fl.error_bound + std::abs(ph) * fr.error_bound};
    c.ok = c.deviation < tol + c.bound;
    out.push_back(c);
  }
  return out;
}

std::vector<NumericCheck> s_relation_checks(i64 p, i64 u, cplx tau, double tol, int order) {
  auto a1 = build_root_system("A1");
  auto pr = principal_orbit(a1);
  auto md = modular_data(pr, p, u);
  std::vector<QSeries> chis;
  for (auto& L : md.weights) chis.push_back(ep_character(L, pr, order).chi.num);
  std::vector<NumericCheck> out;
  for (size_t i = 0; i < chis.size(); ++i) {
    if (chis[i].empty()) continue;
    auto lhs = chis[i].evaluate({-1.0 / tau, {}, 0});
    cplx rhs = 0;
    double bound = lhs.error_bound;
    for (size_t j = 0; j < chis.size(); ++j) {
      if (chis[j].empty()) continue;
      auto e = chis[j].evaluate({tau, {}, 0});
      rhs += md.a[i][j] * e.value;
      bound += std::abs(md.a[i][j]) * e.error_bound;
    }
    rhs *= md.prefactor;
    NumericCheck c{"S-relation row lambda=" + to_str(md.weights[i].lam), std::abs(lhs.value - rhs), bound};
    c.ok = c.deviation < tol + bound;
    out.push_back(c);
  }
  return out;
}

bool t_phase_checks(i64 p, i64 u, int order) {
  auto a1 = build_root_system("A1");
  auto pr = principal_orbit(a1);
  int seen = 0;
  for (auto& L : enumerate_principal_admissible(a1, p, u).weights) {
    auto cb = ep_character(L, pr, order);
    if (cb.vanishes) continue;
    ++seen;
    if (!t_phase_exact(cb.chi.num, cb.sf)) return false;
  }
  return seen > 0;
}

}  // namespace wexc
