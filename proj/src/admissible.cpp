#include "wexc/admissible.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace wexc {

namespace {

// integer vectors n ≥ 0 with Σ w_i n_i ≤ m
std::vector<std::vector<i64>> bounded_cone(const std::vector<i64>& w, i64 m) {
  std::vector<std::vector<i64>> out;
  if (m < 0) return out;
  std::vector<i64> cur(w.size(), 0);
  std::function<void(size_t, i64)> rec = [&](size_t i, i64 left) {
    if (i == w.size()) {
      out.push_back(cur);
      return;
    }
    for (i64 n = 0; n * w[i] <= left; ++n) {
      cur[i] = n;
      rec(i + 1, left - n * w[i]);
    }
    cur[i] = 0;
  };
  rec(0, m);
  return out;
}

i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

bool dominant_at_level(const RootSystem& rs, const FinVec& v, const Rat& level) {
  for (auto& cv : rs.simple_coroots) {
    Rat x = rs.form(v, cv);
    if (!is_int(x) || x < 0) return false;
  }
  Rat t = rs.form(v, rs.coroot(rs.theta));
  return t <= level;
}

FinVec apply_inv(const WeylElement& w, const FinVec& v) {
  // W acts orthogonally for the dot product
  return matvec(transpose(w.m), v);
}

std::string param_error(const RootSystem& rs, i64 p, i64 u) {
  if (p <= 0 || u <= 0) return "p and u must be positive";
  if (gcd64(p, u) != 1) return "(p,u) != 1";
  if (gcd64(u, rs.lacety) != 1) return "(u,l) != 1";
  if (p < rs.hv) return "p < h^vee";
  return "";
}

}  // namespace

Rat affine_form(const RootSystem& rs, const AffineVector& a, const AffineVector& b) {
  return rs.form(a.fin, b.fin) + a.kc * b.dc + a.dc * b.kc;
}

AffineVector translate(const RootSystem& rs, const FinVec& beta, const AffineVector& v) {
  AffineVector r = v;
  r.fin = v.fin + v.dc * beta;
  r.kc = v.kc - (rs.norm2(beta) * v.dc / 2 + rs.form(v.fin, beta));
  return r;
}

bool is_affine_coroot(const RootSystem& rs, const AffineVector& v) {
  if (v.dc != 0 || !is_int(v.kc)) return false;
  if (is_zero(v.fin)) return false;
  FinVec a = (Rat(2) / rs.norm2(v.fin)) * v.fin;  // the root whose coroot is v.fin
  if (!rs.is_root(a)) return false;
  if (rs.norm2(a) != 2) return (as_int(v.kc) % rs.lacety) == 0;
  return true;
}

bool is_positive_affine_coroot(const RootSystem& rs, const AffineVector& v) {
  if (!is_affine_coroot(rs, v)) return false;
  if (v.kc > 0) return true;
  return v.kc == 0 && rs.is_positive((Rat(2) / rs.norm2(v.fin)) * v.fin);
}

std::vector<i64> comarks(const RootSystem& rs) {
  std::vector<i64> c;
  FinVec tv = rs.coroot(rs.theta);
  for (auto& f : rs.fund) c.push_back(as_int(rs.form(f, tv)));
  return c;
}

std::vector<i64> marks(const RootSystem& rs) {
  std::vector<i64> c;
  for (auto& q : rs.qstar) c.push_back(as_int(rs.form(q, rs.theta)));
  return c;
}

std::vector<FinVec> dominant_integral(const RootSystem& rs, i64 level) {
  std::vector<FinVec> out;
  for (auto& n : bounded_cone(comarks(rs), level)) {
    FinVec v = zero_vec(rs.dim);
    for (int i = 0; i < rs.rank; ++i)
      if (n[i]) v = v + Rat(n[i]) * rs.fund[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FinVec> dominant_coweights(const RootSystem& rs, i64 level) {
  std::vector<FinVec> out;
  for (auto& n : bounded_cone(marks(rs), level)) {
    FinVec v = zero_vec(rs.dim);
    for (int i = 0; i < rs.rank; ++i)
      if (n[i]) v = v + Rat(n[i]) * rs.qstar[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

VacuumVerdict vacuum_admissible(const RootSystem& rs, const Rat& k) {
  Rat s = k + rs.hv;
  if (s == 0) throw DomainError("critical level k = -h^vee");
  VacuumVerdict v;
  if (s < 0) {
    v.reason = "k + h^vee < 0";
    return v;
  }
  v.p = num_i64(s);
  v.u = den_i64(s);
  if (gcd64(v.u, rs.lacety) == 1) {
    if (v.p >= rs.hv) {
      v.admissible = true;
      v.which = VacuumCase::i;
    } else {
      v.reason = "p < h^vee";
    }
  } else if (v.u % rs.lacety == 0) {
    if (v.p >= rs.h) {
      v.admissible = true;
      v.which = VacuumCase::ii;
    } else {
      v.reason = "p < h";
    }
  } else {
    v.reason = "u neither coprime to nor divisible by the lacety";
  }
  return v;
}

FinVec PrincipalAdmissible::beta_prime() const { return apply_inv(ybar, beta); }

std::vector<AffineVector> simple_set(const RootSystem& rs, const WeylElement& ybar, const FinVec& beta, i64 u) {
  std::vector<AffineVector> S;
  FinVec tv = rs.coroot(rs.theta);
  S.push_back({-tv, Rat(u), Rat(0)});
  for (auto& cv : rs.simple_coroots) S.push_back({cv, Rat(0), Rat(0)});
  for (auto& a : S) {
    a.fin = ybar.apply(a.fin);
    a = translate(rs, beta, a);
  }
  std::sort(S.begin(), S.end());
  return S;
}

bool admissible_on_window(const RootSystem& rs, const AffineVector& lam, i64 nmax) {
  AffineVector lr = lam;
  lr.fin = lam.fin + rs.rho;
  lr.dc = lam.dc + rs.hv;
  for (i64 n = 0; n <= nmax; ++n)
    for (auto& a : rs.roots) {
      AffineVector c{rs.coroot(a), Rat(n), Rat(0)};
      if (!is_positive_affine_coroot(rs, c)) continue;
      Rat v = affine_form(rs, lr, c);
      if (is_int(v) && v <= 0) return false;
    }
  return true;
}

AdmissibleSet enumerate_principal_admissible(const RootSystem& rs, i64 p, i64 u) {
  AdmissibleSet out;
  out.reason = param_error(rs, p, u);
  if (!out.reason.empty()) return out;
  Rat m = rat(p, u);
  Rat k = m - rs.hv;
  auto lam0s = dominant_integral(rs, p - rs.hv);
  auto mk = marks(rs);
  auto W = weyl_group(rs);
  std::map<FinVec, PrincipalAdmissible> found;
  // β' = ȳ⁻¹β = -Σ n_i ω*_i with Σ a_i n_i ≤ u
  auto cone = bounded_cone(mk, u);
  for (auto& y : W) {
    for (auto& n : cone) {
      FinVec bp = zero_vec(rs.dim);
      i64 tot = 0;
      bool ok = true;
      for (int i = 0; i < rs.rank; ++i) {
        if (n[i]) bp = bp - Rat(n[i]) * rs.qstar[i];
        tot += mk[i] * n[i];
        if (n[i] == 0 && !rs.is_positive(y.apply(rs.simple[i]))) ok = false;
      }
      if (tot == u && rs.is_positive(y.apply(rs.theta))) ok = false;
      if (!ok) continue;
      FinVec beta = y.apply(bp);
      for (i64 i = 0; i < rs.rank; ++i)
        if (n[i] > u * rs.h) throw std::logic_error("beta outside the [-uh, uh] box");
      auto S = simple_set(rs, y, beta, u);
      for (auto& s : S)
        if (!is_positive_affine_coroot(rs, s)) throw std::logic_error("simple set not positive");
      for (auto& l0 : lam0s) {
        FinVec lam = y.apply(l0 + rs.rho) + m * beta - rs.rho;
        if (found.count(lam)) continue;
        PrincipalAdmissible L;
        L.p = p;
        L.u = u;
        L.k = k;
        L.beta = beta;
        L.ybar = y;
        L.lam0 = l0;
        L.lam = lam;
        L.simple_set = S;
        found.emplace(lam, std::move(L));
      }
    }
  }
  for (auto& [_, L] : found) out.weights.push_back(std::move(L));
  return out;
}

bool nondegenerate_iii(const RootSystem& rs, const WeylElement& ybar, const FinVec& beta, i64 u) {
  FinVec bp = apply_inv(ybar, beta);
  for (auto& a : rs.pos) {
    Rat v = -rs.form(bp, a);
    if (!(v > 0 && v < u)) return false;
  }
  return true;
}

bool nondegenerate_iv(const RootSystem& rs, const FinVec& beta, i64 u) {
  for (auto& a : rs.roots) {
    Rat v = rs.form(beta, a) / u;
    if (is_int(v)) return false;
  }
  return true;
}

bool is_nondegenerate(const RootSystem& rs, const PrincipalAdmissible& L) {
  bool iv = nondegenerate_iv(rs, L.beta, L.u);
  bool iii = nondegenerate_iii(rs, L.ybar, L.beta, L.u);
  if (iii != iv) throw std::logic_error("non-degeneracy conditions (iii) and (iv) disagree");
  return iv;
}

std::vector<int> delta_lambda(const RootSystem& rs, const FinVec& beta, i64 u) {
  std::vector<int> out;
  for (size_t i = 0; i < rs.roots.size(); ++i)
    if (is_int(rs.form(rs.roots[i], beta) / u)) out.push_back(int(i));
  return out;
}

i64 center_order(const RootSystem& rs) {
  Mat c(rs.rank, FinVec(rs.rank));
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) c[i][j] = rs.form(rs.simple_coroots[i], rs.simple[j]);
  // determinant via elimination
  Rat det = 1;
  for (int col = 0; col < rs.rank; ++col) {
    int piv = -1;
    for (int r = col; r < rs.rank; ++r)
      if (c[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(c[piv], c[col]);
      det = -det;
    }
    det *= c[col][col];
    for (int r = col + 1; r < rs.rank; ++r) {
      Rat f = c[r][col] / c[col][col];
      for (int j = col; j < rs.rank; ++j) c[r][j] -= f * c[col][j];
    }
  }
  return as_int(det);
}

std::vector<ExtendedWeyl> wtilde_plus(const RootSystem& rs) {
  std::vector<AffineVector> pi;
  pi.push_back({-rs.coroot(rs.theta), Rat(1), Rat(0)});
  for (auto& cv : rs.simple_coroots) pi.push_back({cv, Rat(0), Rat(0)});
  std::set<AffineVector> target(pi.begin(), pi.end());
  std::vector<ExtendedWeyl> out;
  auto W = weyl_group(rs);
  std::vector<i64> c(rs.rank, 0);
  for (;;) {
    FinVec g = zero_vec(rs.dim);
    for (int i = 0; i < rs.rank; ++i)
      if (c[i]) g = g + Rat(c[i]) * rs.qstar[i];
    for (auto& w : W) {
      std::set<AffineVector> img;
      for (auto& a : pi) {
        AffineVector b{w.apply(a.fin), a.kc, a.dc};
        img.insert(translate(rs, g, b));
      }
      if (img == target) out.push_back({g, w});
    }
    int i = 0;
    while (i < rs.rank && c[i] == 1) c[i++] = 0;
    if (i == rs.rank) break;
    ++c[i];
  }
  if (i64(out.size()) != center_order(rs)) throw std::logic_error("W~+ search incomplete");
  return out;
}

std::optional<PairLabel> pair_phi(const RootSystem& rs, i64 p, i64 u, const FinVec& lam, const WeylElement& ybar) {
  if (u < rs.h) throw DomainError("(lambda, mu) parametrization needs u >= h");
  Rat m = rat(p, u);
  FinVec v = apply_inv(ybar, lam + rs.rho);
  std::optional<PairLabel> res;
  // β' = -Σ n_i ω*_i with n_i ≥ 1 and Σ a_i n_i ≤ u-1
  auto mk = marks(rs);
  i64 slack = u - 1;
  for (auto a : mk) slack -= a;
  for (auto& n : bounded_cone(mk, slack)) {
    FinVec bp = zero_vec(rs.dim);
    for (int i = 0; i < rs.rank; ++i) bp = bp - Rat(n[i] + 1) * rs.qstar[i];
    FinVec l0 = v - m * bp - rs.rho;
    if (!dominant_at_level(rs, l0, Rat(p - rs.hv))) continue;
    if (res) throw std::logic_error("(lambda, mu) preimage not unique");
    res = PairLabel{l0, -bp - rs.rhov};
  }
  return res;
}

FinVec pair_psi(const RootSystem& rs, i64 p, i64 u, const WeylElement& ybar, const PairLabel& img) {
  Rat m = rat(p, u);
  return ybar.apply(img.lam + rs.rho) - rs.rho - m * ybar.apply(img.mu + rs.rhov);
}

namespace {
PairLabel canonical_with(const RootSystem& rs, i64 p, i64 u, const PairLabel& img, const std::vector<ExtendedWeyl>& wp) {
  PairLabel best = img;
  for (auto& e : wp) {
    PairLabel o{e.w.apply(img.lam) + Rat(p - rs.hv) * e.gamma, e.w.apply(img.mu) + Rat(u - rs.h) * e.gamma};
    if (o < best) best = o;
  }
  return best;
}
}  // namespace

PairLabel pair_canonical(const RootSystem& rs, i64 p, i64 u, const PairLabel& img) {
  return canonical_with(rs, p, u, img, wtilde_plus(rs));
}

PairLabel pair_class(const RootSystem& rs, const PrincipalAdmissible& L) {
  if (!is_nondegenerate(rs, L)) throw DomainError("degenerate weight has no (lambda, mu) label");
  auto img = pair_phi(rs, L.p, L.u, L.lam, L.ybar);
  if (!img) throw std::logic_error("weight not in its own P_ybar");
  return pair_canonical(rs, L.p, L.u, *img);
}

std::vector<PairLabel> pair_index_set(const RootSystem& rs, i64 p, i64 u) {
  std::set<PairLabel> s;
  auto wp = wtilde_plus(rs);
  for (auto& l : dominant_integral(rs, p - rs.hv))
    for (auto& mu : dominant_coweights(rs, u - rs.h)) s.insert(canonical_with(rs, p, u, {l, mu}, wp));
  return {s.begin(), s.end()};
}

}  // namespace wexc
