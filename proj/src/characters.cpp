#include "wexc/characters.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace wexc {

namespace {

const cplx I(0, 1);

Rat binom2(const Rat& s) { return s * (s - 1) / 2; }

FinVec winv_apply(const RootSystem& rs, const WeylElement& w, const FinVec& v) {
  return weyl_inverse(rs, w).apply(v);
}

std::vector<int> s_plus(const NilpotentDatum& d) {
  std::vector<int> out;
  for (size_t i = 0; i < d.grade.size(); ++i)
    if (d.grade[i] > 0) out.push_back(int(i));
  return out;
}

std::vector<Rat> twice(const FinVec& v) {
  std::vector<Rat> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = 2 * v[i];
  return r;
}

std::vector<Rat> negated(const std::vector<Rat>& v) {
  std::vector<Rat> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

Rat coroot_gram_det(const RootSystem& rs) {
  Mat g(rs.rank, FinVec(rs.rank));
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) g[i][j] = rs.form(rs.simple_coroots[i], rs.simple_coroots[j]);
  // Gaussian elimination for the determinant
  Rat det = 1;
  for (int c = 0; c < rs.rank; ++c) {
    int piv = -1;
    for (int r = c; r < rs.rank; ++r)
      if (g[r][c] != 0) piv = r;
    if (piv < 0) return 0;
    if (piv != c) std::swap(g[piv], g[c]), det = -det;
    det *= g[c][c];
    for (int r = c + 1; r < rs.rank; ++r) {
      Rat f = g[r][c] / g[c][c];
      for (int k = c; k < rs.rank; ++k) g[r][k] -= f * g[c][k];
    }
  }
  return det;
}

// integer points n with (n - t)^T G (n - t) <= R2, G positive definite
void fincke_pohst(const std::vector<std::vector<double>>& G, const std::vector<double>& t, double R2,
                  const std::function<void(const std::vector<i64>&)>& visit) {
  int r = int(G.size());
  // Cholesky G = U^T U, U upper triangular
  std::vector<std::vector<double>> U(r, std::vector<double>(r, 0));
  for (int i = 0; i < r; ++i) {
    double s = G[i][i];
    for (int k = 0; k < i; ++k) s -= U[k][i] * U[k][i];
    if (s <= 0) throw std::logic_error("Gram matrix not positive definite");
    U[i][i] = std::sqrt(s);
    for (int j = i + 1; j < r; ++j) {
      double a = G[i][j];
      for (int k = 0; k < i; ++k) a -= U[k][i] * U[k][j];
      U[i][j] = a / U[i][i];
    }
  }
  std::vector<i64> n(r);
  std::function<void(int, double)> rec = [&](int i, double rem) {
    if (i < 0) {
      visit(n);
      return;
    }
    double c = t[i];
    for (int j = i + 1; j < r; ++j) c -= U[i][j] * (double(n[j]) - t[j]) / U[i][i];
    double w = std::sqrt(std::max(rem, 0.0)) / U[i][i];
    i64 lo = i64(std::ceil(c - w)), hi = i64(std::floor(c + w));
    for (i64 v = lo; v <= hi; ++v) {
      n[i] = v;
      double e = U[i][i] * (double(v) - c);
      double left = rem - e * e;
      if (left < 0) continue;
      rec(i - 1, left);
    }
  };
  if (r == 0) {
    if (R2 >= 0) visit(n);
    return;
  }
  rec(r - 1, R2);
}

Rat map_qexp(const RootSystem& rs, const EvalMap& em, const Rat& m, const FinVec& v) {
  Rat q = em.a * rs.norm2(v) / (2 * m) + m * em.d;
  if (!em.c.empty()) q += rs.form(v, em.c);
  return q;
}

std::vector<Rat> map_zexp(const RootSystem& rs, const EvalMap& em, const Rat& m, const FinVec& v) {
  std::vector<Rat> zc(em.nz());
  for (int j = 0; j < em.nz(); ++j) {
    Rat a = rs.form(v, em.Z[j]);
    if (!em.ell.empty()) a += m * em.ell[j];
    zc[j] = 2 * a;
  }
  return zc;
}

}  // namespace

// ---------------------------------------------------------------- constants

Rat central_charge(const NilpotentDatum& d, const Rat& k) {
  const RootSystem& rs = d.R();
  Rat kh = k + rs.hv;
  if (kh == 0) throw DomainError("critical level k = -h∨");
  FinVec v = rs.rho - kh * d.x;
  return Rat(d.dim_g0) - Rat(d.dim_g12) / 2 - 12 * rs.norm2(v) / kh;
}

TwistConstants twist_constants(const NilpotentDatum& d, const Rat& k) {
  const RootSystem& rs = d.R();
  TwistConstants t;
  Rat kh = k + rs.hv;
  Rat sum_b = 0, sum_xs = 0;
  FinVec gp = zero_vec(rs.dim);
  for (int i : s_plus(d)) {
    sum_b += binom2(d.s[i]);
    sum_xs += d.grade[i] * d.s[i];
    gp = gp + d.s[i] * rs.roots[i];
  }
  t.s_g = kh == 0 ? Rat(0) : -k / kh * sum_b;
  t.s_ne = -Rat(d.dim_g12) / 16;
  Rat x2 = rs.norm2(d.x);
  t.s_ch = rs.form(rs.rho, d.x) - Rat(rs.hv) * x2 / 2;
  t.gamma_prime = gp - rs.rho;
  t.rho_hat_R = {-t.gamma_prime, sum_xs - rs.form(rs.rho, d.x) + Rat(rs.hv) * x2 / 2, Rat(rs.hv)};
  return t;
}

std::pair<Rat, Rat> lemma27b_sides(const NilpotentDatum& d, const Rat& k, const AffineVector& lam) {
  const RootSystem& rs = d.R();
  auto tc = twist_constants(d, k);
  Rat kh = k + rs.hv;
  const FinVec& lb = lam.fin;
  Rat lhs = rs.form(lb, lb + 2 * tc.rho_hat_R.fin) / (2 * kh) + tc.s_g;
  AffineVector two{lam.fin + 2 * tc.rho_hat_R.fin, lam.kc + 2 * tc.rho_hat_R.kc, lam.dc + 2 * tc.rho_hat_R.dc};
  Rat rhs = affine_form(rs, lam, two) / (2 * kh) - affine_form(rs, lam, {zero_vec(rs.dim), 0, 1});
  return {lhs, rhs};
}

// ---------------------------------------------------------------- theta engine

std::vector<AffineVector> standard_simple_coroots(const RootSystem& rs) {
  std::vector<AffineVector> s;
  for (auto& a : rs.simple_coroots) s.push_back({a, 0, 0});
  s.push_back({-rs.coroot(rs.theta), 1, 0});
  return s;
}

QSeries theta_orbit_series(const RootSystem& rs, const FinVec& mu0, const Rat& m,
                           const std::vector<AffineVector>& simple, const EvalMap& em, const Rat& qmax) {
  if (m <= 0) throw DomainError("theta function needs positive level");
  if (em.a <= 0) throw DomainError("theta function needs a > 0");
  int r = rs.rank;
  std::vector<Rat> pair0(simple.size());
  std::vector<FinVec> refl(simple.size());
  for (size_t k = 0; k < simple.size(); ++k) {
    pair0[k] = rs.form(mu0, simple[k].fin) + simple[k].kc * m;
    if (pair0[k] <= 0) throw std::logic_error("orbit representative not in the chamber");
    refl[k] = (Rat(2) / rs.norm2(simple[k].fin)) * simple[k].fin;
  }
  FinVec c = em.c.empty() ? zero_vec(rs.dim) : em.c;
  FinVec center = (-m / em.a) * c;
  FinVec delta = center - mu0;
  Mat gram(r, FinVec(r));
  FinVec rhs(r);
  for (int i = 0; i < r; ++i) {
    rhs[i] = rs.form(rs.simple[i], delta);
    for (int j = 0; j < r; ++j) gram[i][j] = rs.form(rs.simple[i], rs.simple[j]);
  }
  FinVec tt = r ? solve(gram, rhs) : FinVec();
  FinVec perp = delta;
  for (int i = 0; i < r; ++i) perp = perp - tt[i] * rs.simple[i];
  Rat R2 = 2 * m / em.a * (qmax + m / (2 * em.a) * rs.norm2(c) - m * em.d) - rs.norm2(perp);

  QSeries out = QSeries::zero(em.nz(), qmax);
  if (R2 < 0) return out;
  std::vector<std::vector<double>> G(r, std::vector<double>(r));
  std::vector<double> td(r);
  for (int i = 0; i < r; ++i) {
    td[i] = tt[i].get_d();
    for (int j = 0; j < r; ++j) G[i][j] = gram[i][j].get_d();
  }
  double slack = 1e-7 * (1 + R2.get_d());
  Rat te = m * em.t0;
  fincke_pohst(G, td, R2.get_d() + slack, [&](const std::vector<i64>& n) {
    FinVec v = mu0;
    for (int i = 0; i < r; ++i)
      if (n[i]) v = v + Rat(n[i]) * rs.simple[i];
    Rat qe = map_qexp(rs, em, m, v);
    if (qe > qmax) return;
    // walk to the chamber
    FinVec w = v;
    int sign = 1;
    for (long step = 0;; ++step) {
      if (step > 1000000) throw std::logic_error("orbit reduction did not terminate");
      int neg = -1;
      for (size_t k = 0; k < simple.size(); ++k) {
        Rat P = rs.form(w, simple[k].fin) + simple[k].kc * m;
        if (P == 0) return;  // on a wall: not in the orbit
        if (P < 0 && neg < 0) {
          neg = int(k);
          w = w - P * refl[k];
          sign = -sign;
          break;
        }
      }
      if (neg < 0) break;
    }
    if (w != mu0) return;
    out.add_term(qe, te, map_zexp(rs, em, m, v), sign);
  });
  return out;
}

QSeries affine_numerator(const RootSystem& rs, const FinVec& lam_plus_rho, const Rat& m, const EvalMap& em,
                         const Rat& qmax) {
  return theta_orbit_series(rs, lam_plus_rho, m, standard_simple_coroots(rs), em, qmax);
}

namespace {

struct ProductPlan {
  Rat lead;
  std::vector<Rat> lead_z;
  i64 sign = 1;
  bool zero = false;
  std::vector<std::pair<Rat, std::vector<Rat>>> factors;  // (1 - q^E e^{πi zc·z}), E >= 0
};

// Weyl denominator product for A_ρ̂ at the substitution em, factors with E <= qmax - lead
ProductPlan denominator_plan(const RootSystem& rs, const EvalMap& em, const Rat& qmax) {
  ProductPlan P;
  int nz = em.nz();
  Rat hv = rs.hv;
  FinVec c = em.c.empty() ? zero_vec(rs.dim) : em.c;
  P.lead = em.a * rs.norm2(rs.rho) / (2 * hv) + rs.form(rs.rho, c) + hv * em.d;
  P.lead_z.assign(nz, Rat(0));
  for (int j = 0; j < nz; ++j) {
    Rat a = rs.form(rs.rho, em.Z[j]);
    if (!em.ell.empty()) a += hv * em.ell[j];
    P.lead_z[j] = 2 * a;
  }
  // raw factors (E, A) with A in 2πi units; n counts the imaginary direction
  std::vector<std::pair<Rat, std::vector<Rat>>> raw;
  auto zpart = [&](const FinVec& al, int sgn) {
    std::vector<Rat> A(nz);
    for (int j = 0; j < nz; ++j) A[j] = Rat(sgn) * rs.form(al, em.Z[j]);
    return A;
  };
  // negative exponents occur for small n only; bound with |(α|c)|
  Rat cmax = 0;
  for (auto& al : rs.pos) cmax = std::max(cmax, Rat(abs(rs.form(al, c))));
  // first pass: collect negative E to fix the lead
  Rat neg_total = 0;
  for (auto& al : rs.pos) {
    Rat ac = rs.form(al, c);
    for (i64 n = 0; Rat(n) * em.a <= cmax; ++n) {
      Rat E1 = Rat(n) * em.a - ac, E2 = Rat(n) * em.a + ac;
      if (E1 < 0) neg_total += E1;
      if (n >= 1 && E2 < 0) neg_total += E2;
    }
  }
  Rat top = qmax - (P.lead + neg_total);
  auto push = [&](const Rat& E, std::vector<Rat> A) {
    if (E < 0) {
      // 1 - q^E ζ^A = -q^E ζ^A (1 - q^{-E} ζ^{-A})
      P.sign = -P.sign;
      P.lead += E;
      for (int j = 0; j < nz; ++j) P.lead_z[j] += 2 * A[j];
      raw.push_back({-E, negated(A)});
    } else {
      if (E == 0 && std::all_of(A.begin(), A.end(), [](const Rat& x) { return x == 0; })) P.zero = true;
      if (E <= top) raw.push_back({E, A});
    }
  };
  for (i64 n = 1; Rat(n) * em.a <= top; ++n)
    for (int i = 0; i < rs.rank; ++i) push(Rat(n) * em.a, std::vector<Rat>(nz));
  for (auto& al : rs.pos) {
    Rat ac = rs.form(al, c);
    for (i64 n = 0;; ++n) {
      Rat E1 = Rat(n) * em.a - ac, E2 = Rat(n) * em.a + ac;
      bool any = false;
      if (E1 <= top) push(E1, zpart(al, -1)), any = true;
      if (n >= 1 && E2 <= top) push(E2, zpart(al, 1)), any = true;
      if (!any && Rat(n) * em.a > cmax) break;
    }
  }
  for (auto& [E, A] : raw) P.factors.push_back({E, twice(A)});
  return P;
}

}  // namespace

QSeries affine_denominator_product(const RootSystem& rs, const EvalMap& em, const Rat& qmax) {
  ProductPlan P = denominator_plan(rs, em, qmax);
  int nz = em.nz();
  if (P.zero) return QSeries::zero(nz, qmax);
  Rat rel = qmax - P.lead;
  if (rel < 0) return QSeries::zero(nz, qmax);
  QSeries prod = QSeries::one(nz).truncated(rel);
  for (auto& [E, zc] : P.factors) {
    if (E > rel) continue;
    prod = prod * (QSeries::one(nz) - QSeries::monomial(nz, E, 0, zc));
  }
  return prod.shifted(P.lead, Rat(rs.hv) * em.t0, P.lead_z).scaled(P.sign);
}

// ---------------------------------------------------------------- ψ

PsiForms denominator_psi(const NilpotentDatum& d, int order) {
  if (!d.principal_type) throw DomainError("f is not of principal type; Euler–Poincaré characters undefined");
  const RootSystem& rs = d.R();
  int nz = d.hf_dim();
  auto S = d.psi_roots();
  PsiForms P;
  Rat lead = Rat(d.dim_gf) / 24;
  std::vector<Rat> zsum(nz);
  for (int i : S)
    for (int j = 0; j < nz; ++j) zsum[j] += d.res[i][j];
  QSeries u = QSeries::monomial(nz, lead, Rat(rs.hv), zsum).truncated(lead + order);
  for (int i = 0; i < rs.rank; ++i) u = u * q_pochhammer(std::vector<Rat>(nz), 1, 1, Rat(order));
  for (int i : S) {
    u = u * q_pochhammer(negated(d.res[i]), 1, 1, Rat(order)) * q_pochhammer(d.res[i], 1, 1, Rat(order));
    P.bins.push_back(negated(twice(d.res[i])));
  }
  P.unit = u;
  QSeries full = u;
  for (auto& b : P.bins) full = full * (QSeries::one(nz) - QSeries::monomial(nz, 0, 0, b));
  P.product_form = full;
  QSeries ef = QSeries::monomial(nz, 0, Rat(rs.hv), std::vector<Rat>(nz));
  for (int i = 0; i < rs.rank; ++i) ef = ef * eta_series(nz, order);
  for (int i : S) ef = ef * f_series(d.res[i], order);
  P.eta_f_form = ef;
  P.forms_agree = same_series(P.product_form, P.eta_f_form);
  return P;
}

DetCheck det_identity(const NilpotentDatum& d, int order) {
  if (!d.fmat || !d.rep) throw DomainError("determinant form needs a matrix realization of f");
  const RootSystem& rs = d.R();
  const NaturalRep& rep = *d.rep;
  const Mat& f = *d.fmat;
  int N = rep.N, nz = d.hf_dim();
  auto comm = [&](const Mat& X) {
    FinVec flat;
    flat.reserve(N * N);
    Mat a = matmul(f, X), b = matmul(X, f);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) flat.push_back(a[i][j] - b[i][j]);
    return flat;
  };
  std::map<std::vector<Rat>, std::vector<Mat>> spaces;
  for (size_t i = 0; i < rs.roots.size(); ++i) spaces[d.res[i]].push_back(root_vector(rs, rep, rs.roots[i]));
  for (auto& a : rs.simple) {
    Mat H(N, zero_vec(N));
    for (int i = 0; i < N; ++i) H[i][i] = rs.form(rep.wt[i], a);
    spaces[std::vector<Rat>(nz)].push_back(H);
  }
  DetCheck out;
  int total = 0;
  for (auto& [mu, basis] : spaces) {
    Mat img;
    for (auto& X : basis) img.push_back(comm(X));
    int ker = int(basis.size()) - rank(img);
    if (ker > 0) out.weights.push_back({mu, ker});
    total += ker;
  }
  if (total != d.dim_gf) throw std::logic_error("dim ker ad f disagrees with dim g0 + dim g1/2");
  QSeries det = QSeries::one(nz).truncated(order);
  for (auto& [mu, mult] : out.weights) {
    auto p = q_pochhammer(mu, 1, 1, Rat(order));
    for (int k = 0; k < mult; ++k) det = det * p;
  }
  QSeries rt = QSeries::one(nz).truncated(order);
  for (int i = 0; i < rs.rank; ++i) rt = rt * q_pochhammer(std::vector<Rat>(nz), 1, 1, Rat(order));
  for (int i : d.psi_roots())
    rt = rt * q_pochhammer(negated(d.res[i]), 1, 1, Rat(order)) * q_pochhammer(d.res[i], 1, 1, Rat(order));
  out.det_side = det;
  out.root_side = rt;
  out.equal = same_series(det, rt);
  return out;
}

// ---------------------------------------------------------------- B, C, χ

EvalMap numerator_map(const NilpotentDatum& d, const PrincipalAdmissible& L) {
  const RootSystem& rs = d.R();
  EvalMap em;
  Rat u = L.u;
  em.a = u;
  auto yinv = weyl_inverse(rs, L.ybar);
  for (auto& b : d.hf) {
    FinVec zb = winv_apply(rs, d.wbar, b);
    em.Z.push_back(yinv.apply(zb));
    em.ell.push_back(rs.form(zb, L.beta) / u);
  }
  em.c = yinv.apply(L.beta);
  em.t0 = Rat(1) / u;
  em.d = rs.norm2(L.beta) / (2 * u);
  return em;
}

namespace {

Rat b_lead(const RootSystem& rs, const PrincipalAdmissible& L) {
  Rat m = Rat(L.p) / Rat(L.u);
  return rs.norm2(L.lam + rs.rho) / (2 * m);
}

}  // namespace

QSeries numerator_B(const PrincipalAdmissible& L, const NilpotentDatum& d, int order, BRoute route) {
  const RootSystem& rs = d.R();
  Rat qmax = b_lead(rs, L) + order;
  if (route == BRoute::theta_sum) return affine_numerator(rs, L.lam0 + rs.rho, Rat(L.p), numerator_map(d, L), qmax);
  EvalMap em;
  for (auto& b : d.hf) em.Z.push_back(winv_apply(rs, d.wbar, b));
  Rat m = Rat(L.p) / Rat(L.u);
  return theta_orbit_series(rs, L.lam + rs.rho, m, L.simple_set, em, qmax);
}

QSeries extra_C(const PrincipalAdmissible& L, const NilpotentDatum& d, int order, bool use_product) {
  const RootSystem& rs = d.R();
  EvalMap em = numerator_map(d, L);
  Rat lead = denominator_plan(rs, em, Rat(0)).lead;
  Rat qmax = lead + order;
  if (use_product) return affine_denominator_product(rs, em, qmax);
  return affine_numerator(rs, rs.rho, Rat(rs.hv), em, qmax);
}

Fraction make_fraction(QSeries num, const std::vector<std::vector<Rat>>& bins) {
  Fraction F;
  std::vector<std::vector<Rat>> left = bins;
  if (num.empty()) {
    F.num = num;
    return F;
  }
  bool progress = true;
  while (progress && !left.empty()) {
    progress = false;
    for (size_t i = 0; i < left.size(); ++i) {
      auto q = num.div_binomial(left[i]);
      if (q) {
        num = *q;
        left.erase(left.begin() + long(i));
        progress = true;
        break;
      }
    }
  }
  F.num = num;
  F.bins = left;
  return F;
}

Rat minimal_eigenvalue(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  auto tc = twist_constants(d, L.k);
  Rat kh = L.k + rs.hv;
  return rs.form(L.lam, L.lam + 2 * rs.rho) / (2 * kh) + tc.s_ch + tc.s_ne - L.k / 2 * rs.norm2(d.x);
}

Rat sf_exponent(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  return b_lead(d.R(), L) - Rat(d.dim_gf) / 24;
}

bool t_phase_exact(const QSeries& s, const Rat& sf) {
  for (auto& [k, c] : s.terms)
    if (!is_int(s.q_of(k) - sf)) return false;
  return true;
}

CharacterBundle ep_character(const PrincipalAdmissible& L, const NilpotentDatum& d, int order) {
  CharacterBundle cb;
  cb.lam = L;
  auto P = denominator_psi(d, order);
  cb.psi = P.product_form;
  cb.B = numerator_B(L, d, order);
  cb.vanishes = cb.B.empty();
  QSeries num = cb.B.empty() ? cb.B : cb.B / P.unit;
  cb.chi = make_fraction(num, P.bins);
  cb.c = central_charge(d, L.k);
  cb.h = minimal_eigenvalue(L, d);
  cb.sf = sf_exponent(L, d);
  cb.lowest = cb.h - cb.c / 24;
  return cb;
}

Fraction extra_factor(const PrincipalAdmissible& L, const NilpotentDatum& d, int order) {
  auto P = denominator_psi(d, order);
  QSeries C = extra_C(L, d, order);
  return make_fraction(C / P.unit, P.bins);
}

QSeries sln_extra_factor_closed_form(int n, int u, int order) {
  int s = n % u, sp = std::min(s, u - s);
  Rat b = Rat((s - 1) * (u - s - 1) * (s * u - s * s + u)) / Rat(24 * u);
  Rat te = Rat(n) * (Rat(1) / u - 1);
  QSeries r = QSeries::monomial(0, b, te, {}).truncated(b + order);
  QSeries ratio = q_pochhammer({}, u, u, Rat(order)) / q_pochhammer({}, 1, 1, Rat(order)).truncated(order);
  int e = sp - 1;
  if (e < 0) {
    ratio = ratio.truncated(order).inverse();
    e = -e;
  }
  for (int i = 0; i < e; ++i) r = r * ratio;
  for (int i = 1; i <= sp; ++i) {
    QSeries m = q_pochhammer({}, i, u, Rat(order)) * q_pochhammer({}, u - i, u, Rat(order));
    for (int k = 0; k < sp - i; ++k) r = r * m;
  }
  return r;
}

bool match_up_to_sign(const QSeries& a, const QSeries& b, int* sign) {
  int sg = 0;
  if (same_series(a, b)) sg = 1;
  else if (same_series(a, -b)) sg = -1;
  if (sign) *sign = sg;
  return sg != 0;
}

// ---------------------------------------------------------------- modular data

std::complex<double> s_entry(const RootSystem& rs, const PrincipalAdmissible& L1, const PrincipalAdmissible& L2) {
  static thread_local std::map<std::string, std::vector<WeylElement>> cache;
  auto& W = cache[rs.label()];
  if (W.empty()) W = weyl_group(rs);
  Rat m = Rat(L1.p) / Rat(L1.u);
  int r = rs.rank;
  FinVec a = L1.lam0 + rs.rho, b = L2.lam0 + rs.rho;
  cplx pre = std::pow(I, double(rs.pos.size())) * std::pow(double(L1.u), -r) * std::pow(m.get_d(), -r / 2.0) *
             std::pow(coroot_gram_det(rs).get_d(), -0.5) * double(L1.ybar.sign() * L2.ybar.sign());
  Rat ph = rs.form(a, L2.beta) + rs.form(b, L1.beta) + m * rs.form(L1.beta, L2.beta);
  ph = frac_part(ph);
  pre *= std::exp(-2.0 * M_PI * I * ph.get_d());
  cplx sum = 0;
  for (auto& w : W) {
    Rat e = frac_part(rs.form(w.apply(a), b) / m);
    sum += double(w.sign()) * std::exp(-2.0 * M_PI * I * e.get_d());
  }
  return pre * sum;
}

Mat q_form(const NilpotentDatum& d, const Rat& k) {
  if (k == 0) throw DomainError("Q is defined for k != 0");
  const RootSystem& rs = d.R();
  int nz = d.hf_dim();
  Mat Q(nz, FinVec(nz));
  Rat kh = k + rs.hv;
  auto S = d.psi_roots();
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j) {
      Rat v = kh / k * rs.form(d.hf[i], d.hf[j]);
      for (int a : S) v -= d.res[a][i] * d.res[a][j] / k;
      Q[i][j] = v;
    }
  return Q;
}

ModularData modular_data(const NilpotentDatum& d, i64 p, i64 u) {
  const RootSystem& rs = d.R();
  ModularData md;
  auto set = enumerate_principal_admissible(rs, p, u);
  if (!set.reason.empty()) throw DomainError(set.reason);
  md.weights = set.weights;
  size_t n = md.weights.size();
  md.a.assign(n, std::vector<cplx>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) md.a[i][j] = s_entry(rs, md.weights[i], md.weights[j]);
  Rat k = Rat(p) / Rat(u) - rs.hv;
  if (k != 0) md.Q = q_form(d, k);
  int half = (rs.dim_g() - d.dim_gf) / 2;
  md.prefactor = std::pow(-I, double(half));
  return md;
}

Asymptotics asymptotics(const PrincipalAdmissible& L, const NilpotentDatum& d, const std::vector<cplx>& z) {
  const RootSystem& rs = d.R();
  int nz = d.hf_dim();
  if (int(z.size()) != nz) throw DomainError("z has the wrong dimension");
  Asymptotics A;
  FinVec betaR = d.wbar.apply(L.beta);
  auto alpha_z = [&](int i) {
    cplx s = 0;
    for (int j = 0; j < nz; ++j) s += d.res[i][j].get_d() * z[j];
    return s;
  };
  cplx num = 1, den = 1;
  for (size_t i = 0; i < rs.roots.size(); ++i) {
    if (!d.newpos[i]) continue;
    cplx arg = M_PI * (alpha_z(int(i)) - rs.form(rs.roots[i], betaR).get_d()) / double(L.u);
    num *= 2.0 * std::sin(arg);
  }
  for (int i : d.psi_roots()) {
    cplx s = 2.0 * std::sin(M_PI * alpha_z(i));
    if (std::abs(s) < 1e-12) throw DomainError("non-generic z: a denominator sine vanishes");
    den *= s;
  }
  A.A_beta = num / den;
  double a0 = std::pow(double(L.p), -rs.rank / 2.0) / std::sqrt(coroot_gram_det(rs).get_d());
  for (auto& al : rs.pos) a0 *= 2 * std::sin(M_PI * rs.form(L.lam0 + rs.rho, al).get_d() / double(L.p));
  A.a_lam0 = a0;
  Rat pu = Rat(L.p * L.u);
  A.g_k = (1 - Rat(rs.hv) / pu) * rs.dim_g();
  A.growth = Rat(d.dim_gf) - Rat(rs.hv) / pu * rs.dim_g();
  return A;
}

// ---------------------------------------------------------------- lowest coefficient

std::optional<Rat> zero_limit(const std::vector<std::pair<std::vector<Rat>, i64>>& num,
                              const std::vector<std::vector<Rat>>& den) {
  int nz = num.empty() ? (den.empty() ? 0 : int(den[0].size())) : int(num[0].first.size());
  size_t n = den.size();
  std::optional<Rat> result;
  // two generic directions; the limit must not depend on the direction
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<Rat> v(nz);
    for (int j = 0; j < nz; ++j) v[j] = Rat(1 + (trial + 1) * (7 * j + 3) + j * j * (11 + trial));
    std::vector<Rat> bs;
    for (auto& b : den) {
      Rat s = 0;
      for (int j = 0; j < nz; ++j) s += b[j] * v[j];
      if (s == 0) throw std::logic_error("direction not generic");
      bs.push_back(s);
    }
    std::vector<std::pair<Rat, i64>> pts;
    for (auto& [a, c] : num) {
      Rat s = 0;
      for (int j = 0; j < nz; ++j) s += a[j] * v[j];
      pts.push_back({s, c});
    }
    auto moment = [&](size_t j) {
      Rat m = 0;
      for (auto& [a, c] : pts) {
        Rat p = 1;
        for (size_t k = 0; k < j; ++k) p *= a;
        m += Rat(c) * p;
      }
      return m;
    };
    for (size_t j = 0; j < n; ++j)
      if (moment(j) != 0) return std::nullopt;
    Rat val = moment(n);
    Rat fact = 1;
    for (size_t j = 2; j <= n; ++j) fact *= Rat(long(j));
    for (auto& b : bs) val /= b;
    val /= fact;
    if (result && *result != val) return std::nullopt;
    result = val;
  }
  return result;
}

std::map<std::vector<Rat>, std::vector<Rat>> line_classes(const std::vector<std::vector<Rat>>& forms) {
  std::map<std::vector<Rat>, std::vector<Rat>> out;
  for (auto f : forms) {
    Rat lead = 0;
    for (auto& c : f)
      if (c != 0) {
        lead = c;
        break;
      }
    if (lead == 0) {
      out[f].push_back(0);
      continue;
    }
    // scale to a primitive integer vector with positive leading entry
    i64 den = 1;
    for (auto& c : f) den = lcm64(den, den_i64(c / lead));
    mpz_class g = 0;
    for (auto& c : f) {
      Rat v = c / lead * Rat(den);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num().get_mpz_t());
    }
    Rat scale = Rat(den) / Rat(g);
    std::vector<Rat> dir;
    for (auto& c : f) dir.push_back(c / lead * scale);
    out[dir].push_back(lead / scale);
  }
  return out;
}

LowestCoefficient lowest_coefficient(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  LowestCoefficient out;
  auto dl = delta_lambda(rs, L.beta, L.u);
  FinVec top = L.lam + rs.rho;
  std::vector<FinVec> zb;
  for (auto& b : d.hf) zb.push_back(winv_apply(rs, d.wbar, b));
  // W_Λ orbit of λ+ρ with signs
  std::map<FinVec, int> orbit{{top, 1}};
  std::vector<FinVec> queue{top};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    FinVec v = queue[qi];
    int sg = orbit[v];
    for (int i : dl) {
      if (!rs.is_positive(rs.roots[i])) continue;
      FinVec w = reflect(rs, rs.roots[i], v);
      if (!orbit.count(w)) {
        orbit[w] = -sg;
        queue.push_back(w);
      }
    }
  }
  std::map<std::vector<Rat>, i64> acc;
  for (auto& [v, sg] : orbit) {
    std::vector<Rat> e;
    for (auto& b : zb) e.push_back(rs.form(v, b));
    acc[e] += sg;
  }
  std::vector<std::pair<std::vector<Rat>, i64>> num;
  for (auto& [e, c] : acc)
    if (c) num.push_back({e, c});
  std::vector<std::vector<Rat>> den;
  for (int i : d.psi_roots()) den.push_back(d.res[i]);
  out.vanishes = num.empty();
  Rat prod = 1;
  for (int i : dl)
    if (rs.is_positive(rs.roots[i])) prod *= rs.form(top, rs.roots[i]) / rs.form(rs.rho, rs.roots[i]);
  out.naive_product = prod;
  {
    std::vector<FinVec> plus;
    FinVec rl(rs.dim);
    for (int i : dl)
      if (rs.is_positive(rs.roots[i])) {
        plus.push_back(rs.roots[i]);
        rl = rl + rs.roots[i];
      }
    rl = rat(1, 2) * rl;
    Rat wp = 1;
    std::vector<std::vector<Rat>> lf;
    for (auto& a : plus) {
      wp *= rs.form(top, a) / rs.form(rl, a);
      std::vector<Rat> e;
      for (auto& b : zb) e.push_back(rs.form(a, b));
      lf.push_back(e);
    }
    auto ca = line_classes(lf), cs = line_classes(den);
    bool ok = ca.size() == cs.size();
    for (auto& [v, sc] : ca) {
      auto it = cs.find(v);
      if (!ok || it == cs.end() || it->second.size() != sc.size()) {
        ok = false;
        break;
      }
      for (auto& c : sc) wp *= c;
      for (auto& c : it->second) wp /= c;
    }
    if (ok) out.weyl_product = wp;
  }
  if (out.vanishes) {
    out.finite_limit = true;
    out.limit = out.limit_series = 0;
    return out;
  }
  auto lim = zero_limit(num, den);
  out.finite_limit = bool(lim);
  if (lim) out.limit = *lim;
  // the same number from the lowest grade of the theta series
  QSeries B = numerator_B(L, d, 0);
  std::vector<std::pair<std::vector<Rat>, i64>> low;
  if (!B.empty()) {
    Rat q0 = B.min_q();
    for (auto& [k, c] : B.terms) {
      if (B.q_of(k) != q0) break;
      auto zc = B.z_of(k);
      for (auto& x : zc) x /= 2;
      low.push_back({zc, c});
    }
    auto ls = zero_limit(low, den);
    if (ls) out.limit_series = *ls;
    else out.finite_limit = false;
  }
  return out;
}

// ---------------------------------------------------------------- principal W

Rat principal_w_central_charge(const RootSystem& rs, i64 p, i64 u) {
  FinVec v = Rat(u) * rs.rho - Rat(p) * rs.rhov;
  return Rat(rs.rank) - 12 * rs.norm2(v) / Rat(p * u);
}

Rat principal_w_h(const RootSystem& rs, i64 p, i64 u, const PairLabel& lm) {
  FinVec a = Rat(u) * (lm.lam + rs.rho) - Rat(p) * (lm.mu + rs.rhov);
  FinVec b = Rat(u) * rs.rho - Rat(p) * rs.rhov;
  return (rs.norm2(a) - rs.norm2(b)) / Rat(2 * p * u);
}

PrincipalW principal_w_character(const RootSystem& rs, const PairLabel& lm, i64 p, i64 u, int order) {
  PrincipalW W;
  W.c = principal_w_central_charge(rs, p, u);
  W.h = principal_w_h(rs, p, u, lm);
  FinVec mr = lm.mu + rs.rhov;
  EvalMap em;
  em.a = u;
  em.c = -mr;
  em.t0 = 0;
  em.d = rs.norm2(mr) / Rat(2 * u);
  Rat lead = W.h - W.c / 24 + Rat(rs.rank) / 24;
  QSeries th = affine_numerator(rs, lm.lam + rs.rho, Rat(p), em, lead + order);
  QSeries eta = QSeries::one(0).truncated(order);
  for (int i = 0; i < rs.rank; ++i) eta = eta * eta_series(0, order);
  W.chi = th / eta;
  return W;
}

StrangeVerdict strange_formula_check(const NilpotentDatum& d, i64 p, i64 u, std::optional<bool> exceptional) {
  const RootSystem& rs = d.R();
  StrangeVerdict v;
  if (Rat(p * u) * d.dim_gf != Rat(rs.hv) * rs.dim_g()) v.reason = "pu dim g^f != h∨ dim g";
  else if (std::gcd(p, u) != 1) v.reason = "gcd(p,u) != 1";
  else if (p < rs.hv) v.reason = "p < h∨";
  else if (exceptional && !*exceptional) v.reason = "(k,f) is not exceptional";
  if (!v.reason.empty()) return v;
  v.applicable = true;
  Rat pu = Rat(p) / Rat(u);
  v.lhs = rs.norm2(rs.rho - pu * d.x);
  v.rhs = pu / 12 * (Rat(d.dim_g0) - Rat(d.dim_g12) / 2);
  v.holds = v.lhs == v.rhs;
  return v;
}

// ---------------------------------------------------------------- finite W

FiniteWCharacter finite_w_character(const NilpotentDatum& d, const FiniteWInput& in) {
  const RootSystem& rs = d.R();
  int nz = d.hf_dim();
  QSeries num(nz);
  for (auto& [lam, c] : in.numerator) {
    if (int(lam.size()) != rs.dim) throw DomainError("numerator weight has the wrong dimension");
    std::vector<Rat> e;
    for (auto& b : d.hf) e.push_back(2 * rs.form(lam, b));
    num.add_term(0, 0, e, c);
  }
  std::vector<std::vector<Rat>> bins;
  for (int i : d.psi_roots()) bins.push_back(negated(twice(d.res[i])));
  auto F = make_fraction(num, bins);
  FiniteWCharacter out;
  for (auto& [k, c] : F.num.terms) {
    auto z = F.num.z_of(k);
    for (auto& x : z) x /= 2;
    out.numerator.push_back({z, c});
  }
  for (auto& b : F.bins) {
    auto a = b;
    for (auto& x : a) x = -x / 2;
    out.denominator.push_back(a);
  }
  return out;
}

bool wf_restriction_invariant(const NilpotentDatum& d, const FiniteWInput& in) {
  const RootSystem& rs = d.R();
  FinVec rho_new = d.wbar.apply(rs.rho);
  for (auto& g : in.wf_generators) {
    for (auto& b : d.hf)
      if (rs.form(g, b) != 0) return false;
    for (auto& [lam, c] : in.numerator) {
      FinVec s = reflect(rs, g, lam + rho_new) - rho_new;
      for (auto& b : d.hf)
        if (rs.form(s - lam, b) != 0) return false;
    }
  }
  return true;
}

FiniteWInput kl_numerator(const RootSystem& rs, const FinVec& lam, const WeylElement& w,
                          const std::vector<std::pair<WeylElement, i64>>& ptilde,
                          const std::vector<FinVec>& wf_generators) {
  FiniteWInput in;
  in.wf_generators = wf_generators;
  for (auto& [y, pv] : ptilde) {
    FinVec dot = y.apply(lam + rs.rho) - rs.rho;
    in.numerator.push_back({dot, i64(y.sign() * w.sign()) * pv});
  }
  return in;
}

}  // namespace wexc
