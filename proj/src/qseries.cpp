#include "wexc/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wexc {

namespace {

i64 fdiv(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i64 scale_int(const Rat& r, i64 grid) {
  Rat v = r * grid;
  if (!is_int(v)) throw std::logic_error("exponent " + to_str(r) + " off grid " + std::to_string(grid));
  return num_i64(v);
}

void add_into(std::map<MonoKey, i64>& m, const MonoKey& k, i64 c) {
  if (c == 0) return;
  auto [it, fresh] = m.try_emplace(k, c);
  if (!fresh) {
    it->second = add_ck(it->second, c);
    if (it->second == 0) m.erase(it);
  }
}

std::optional<i64> min_opt(std::optional<i64> a, std::optional<i64> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

// grade -> (rest key [t, z...] -> coeff)
using Poly = std::map<MonoKey, i64>;
std::map<i64, Poly> by_grade(const QSeries& s) {
  std::map<i64, Poly> g;
  for (auto& [k, c] : s.terms) g[k[0]][MonoKey(k.begin() + 1, k.end())] = c;
  return g;
}

}  // namespace

QSeries QSeries::zero(int nz, std::optional<Rat> c) {
  QSeries s(nz);
  if (c) {
    s.L = den_i64(*c);
    s.cut = num_i64(*c);
  }
  return s;
}

QSeries QSeries::one(int nz) { return monomial(nz, 0, 0, std::vector<Rat>(nz), 1); }

QSeries QSeries::monomial(int nz, const Rat& qe, const Rat& te, const std::vector<Rat>& zc, i64 c) {
  QSeries s(nz);
  s.add_term(qe, te, zc, c);
  return s;
}

std::optional<Rat> QSeries::cut_rat() const {
  if (!cut) return std::nullopt;
  return rat(*cut, L);
}

Rat QSeries::min_q() const {
  if (terms.empty()) throw std::logic_error("min_q of empty series");
  return q_of(terms.begin()->first);
}

std::vector<Rat> QSeries::z_of(const MonoKey& k) const {
  std::vector<Rat> v(nz);
  for (int j = 0; j < nz; ++j) v[j] = rat(k[2 + j], M);
  return v;
}

void QSeries::add_term(const Rat& qe, const Rat& te, const std::vector<Rat>& zc, i64 c) {
  if (int(zc.size()) != nz) throw std::logic_error("z-exponent length mismatch");
  i64 L2 = lcm64(L, den_i64(qe)), T2 = lcm64(T, den_i64(te)), M2 = M;
  for (auto& a : zc) M2 = lcm64(M2, den_i64(a));
  if (L2 != L || T2 != T || M2 != M) *this = regrid(L2, T2, M2);
  MonoKey k(2 + nz);
  k[0] = scale_int(qe, L);
  if (cut && k[0] > *cut) return;
  k[1] = scale_int(te, T);
  for (int j = 0; j < nz; ++j) k[2 + j] = scale_int(zc[j], M);
  add_into(terms, k, c);
}

i64 QSeries::coeff(const Rat& qe, const Rat& te, const std::vector<Rat>& zc) const {
  Rat a = qe * L, b = te * T;
  if (!is_int(a) || !is_int(b)) return 0;
  MonoKey k(2 + nz);
  k[0] = num_i64(a);
  k[1] = num_i64(b);
  for (int j = 0; j < nz; ++j) {
    Rat e = zc[j] * M;
    if (!is_int(e)) return 0;
    k[2 + j] = num_i64(e);
  }
  auto it = terms.find(k);
  return it == terms.end() ? 0 : it->second;
}

QSeries QSeries::regrid(i64 L2, i64 T2, i64 M2) const {
  if (L2 % L || T2 % T || M2 % M) throw std::logic_error("regrid to a non-multiple grid");
  QSeries s(nz);
  s.L = L2;
  s.T = T2;
  s.M = M2;
  i64 fl = L2 / L, ft = T2 / T, fm = M2 / M;
  if (cut) s.cut = mul_ck(*cut, fl);
  for (auto& [k, c] : terms) {
    MonoKey n(k.size());
    n[0] = mul_ck(k[0], fl);
    n[1] = mul_ck(k[1], ft);
    for (int j = 0; j < nz; ++j) n[2 + j] = mul_ck(k[2 + j], fm);
    s.terms.emplace_hint(s.terms.end(), n, c);
  }
  return s;
}

void unify(QSeries& a, QSeries& b) {
  if (a.nz != b.nz) throw std::logic_error("series over different z-spaces");
  i64 L = lcm64(a.L, b.L), T = lcm64(a.T, b.T), M = lcm64(a.M, b.M);
  if (a.L != L || a.T != T || a.M != M) a = a.regrid(L, T, M);
  if (b.L != L || b.T != T || b.M != M) b = b.regrid(L, T, M);
}

QSeries QSeries::truncated(const Rat& qmax) const {
  QSeries s = *this;
  i64 L2 = lcm64(L, den_i64(qmax));
  if (L2 != L) s = s.regrid(L2, T, M);
  i64 c = scale_int(qmax, s.L);
  if (s.cut && *s.cut <= c) return s;
  s.cut = c;
  s.terms.erase(s.terms.upper_bound(MonoKey{c, std::numeric_limits<i64>::max()}), s.terms.end());
  return s;
}

QSeries QSeries::operator-() const { return scaled(-1); }

QSeries QSeries::scaled(i64 c) const {
  QSeries s = *this;
  if (c == 0) {
    s.terms.clear();
    return s;
  }
  for (auto& [k, v] : s.terms) v = mul_ck(v, c);
  return s;
}

QSeries QSeries::shifted(const Rat& qe, const Rat& te, const std::vector<Rat>& zc) const {
  return *this * monomial(nz, qe, te, zc);
}

QSeries operator+(const QSeries& a0, const QSeries& b0) {
  QSeries a = a0, b = b0;
  unify(a, b);
  a.cut = min_opt(a.cut, b.cut);
  for (auto& [k, c] : b.terms) add_into(a.terms, k, c);
  if (a.cut) a.terms.erase(a.terms.upper_bound(MonoKey{*a.cut, std::numeric_limits<i64>::max()}), a.terms.end());
  return a;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a0, const QSeries& b0) {
  QSeries a = a0, b = b0;
  unify(a, b);
  QSeries r(a.nz);
  r.L = a.L;
  r.T = a.T;
  r.M = a.M;
  // a = a_k + O(q^{>ca}), b = b_k + O(q^{>cb})
  std::optional<i64> c;
  if (a.cut) c = min_opt(c, *a.cut + (b.empty() ? (b.cut ? *b.cut : *a.cut) : b.terms.begin()->first[0]));
  if (b.cut) c = min_opt(c, *b.cut + (a.empty() ? (a.cut ? *a.cut : *b.cut) : a.terms.begin()->first[0]));
  if (a.cut && !b.cut && b.empty()) c = std::nullopt;  // exact zero factor
  if (b.cut && !a.cut && a.empty()) c = std::nullopt;
  r.cut = c;
  if (a.empty() || b.empty()) return r;
  i64 bmin = b.terms.begin()->first[0];
  MonoKey k(2 + a.nz);
  for (auto& [ka, ca] : a.terms) {
    if (c && ka[0] + bmin > *c) break;
    for (auto& [kb, cb] : b.terms) {
      if (c && ka[0] + kb[0] > *c) break;
      for (size_t j = 0; j < k.size(); ++j) k[j] = ka[j] + kb[j];
      add_into(r.terms, k, mul_ck(ca, cb));
    }
  }
  return r;
}

bool QSeries::unit_leading() const {
  if (terms.empty()) return false;
  auto it = terms.begin();
  auto nx = std::next(it);
  if (nx != terms.end() && nx->first[0] == it->first[0]) return false;
  return it->second == 1 || it->second == -1;
}

QSeries operator/(const QSeries& a0, const QSeries& b0) {
  if (!b0.unit_leading()) throw DomainError("division by a series without a unit leading term");
  QSeries a = a0, b = b0;
  unify(a, b);
  auto lead = b.terms.begin();
  MonoKey lk = lead->first;
  i64 lc = lead->second, eb = lk[0];
  QSeries r(a.nz);
  r.L = a.L;
  r.T = a.T;
  r.M = a.M;
  if (b.terms.size() == 1 && !b.cut) {
    r.cut = a.cut ? std::optional<i64>(*a.cut - eb) : std::nullopt;
    for (auto& [k, c] : a.terms) {
      MonoKey n = k;
      for (size_t j = 0; j < n.size(); ++j) n[j] -= lk[j];
      r.terms.emplace(n, c * lc);
    }
    return r;
  }
  std::optional<i64> c;
  if (a.cut) c = *a.cut - eb;
  if (b.cut) {
    i64 amin = a.empty() ? (a.cut ? *a.cut : 0) : a.terms.begin()->first[0];
    c = min_opt(c, amin - eb + *b.cut - eb);
  }
  if (!c) throw DomainError("series division needs a truncation order");
  r.cut = c;
  if (a.empty()) return r;
  auto ag = by_grade(a), bg = by_grade(b);
  std::vector<std::pair<i64, const Poly*>> tail;  // b grades above the leading one, relative
  for (auto& [g, p] : bg)
    if (g != eb) tail.push_back({g - eb, &p});
  MonoKey lrest(lk.begin() + 1, lk.end());
  std::map<i64, Poly> xg;
  i64 g0 = ag.begin()->first - eb;
  for (i64 g = g0; g <= *c; ++g) {
    Poly acc;
    auto ai = ag.find(g + eb);
    if (ai != ag.end()) acc = ai->second;
    for (auto& [d, bp] : tail) {
      auto xi = xg.find(g - d);
      if (xi == xg.end()) continue;
      for (auto& [kb, cb] : *bp)
        for (auto& [kx, cx] : xi->second) {
          MonoKey s(kb.size());
          for (size_t j = 0; j < s.size(); ++j) s[j] = kb[j] + kx[j];
          add_into(acc, s, -mul_ck(cb, cx));
        }
    }
    if (acc.empty()) continue;
    Poly out;
    for (auto& [k, v] : acc) {
      MonoKey s(k.size());
      for (size_t j = 0; j < s.size(); ++j) s[j] = k[j] - lrest[j];
      out.emplace(s, v * lc);
    }
    xg.emplace(g, std::move(out));
  }
  for (auto& [g, p] : xg)
    for (auto& [k, v] : p) {
      MonoKey full(k.size() + 1);
      full[0] = g;
      std::copy(k.begin(), k.end(), full.begin() + 1);
      r.terms.emplace(full, v);
    }
  return r;
}

QSeries QSeries::inverse() const {
  QSeries one_ = one(nz);
  return one_ / *this;
}

std::optional<QSeries> QSeries::div_binomial(const std::vector<Rat>& zc) const {
  QSeries s = *this;
  i64 M2 = M;
  for (auto& a : zc) M2 = lcm64(M2, den_i64(a));
  if (M2 != M) s = s.regrid(L, T, M2);
  std::vector<i64> e(nz);
  int piv = -1;
  for (int j = 0; j < nz; ++j) {
    e[j] = scale_int(zc[j], s.M);
    if (e[j] != 0 && piv < 0) piv = j;
  }
  if (piv < 0) throw DomainError("division by 1 - 1");
  // classes modulo Z e inside each (q, t) grade
  std::map<MonoKey, std::map<i64, i64>> cls;
  for (auto& [k, c] : s.terms) {
    i64 m = fdiv(k[2 + piv], e[piv]);
    MonoKey base = k;
    for (int j = 0; j < nz; ++j) base[2 + j] -= m * e[j];
    cls[base][m] += c;
  }
  QSeries r = s;
  r.terms.clear();
  for (auto& [base, line] : cls) {
    i64 run = 0;
    auto it = line.begin();
    i64 m = it->first;
    i64 last = line.rbegin()->first;
    for (; m <= last; ++m) {
      auto f = line.find(m);
      if (f != line.end()) run = add_ck(run, f->second);
      if (run != 0 && m < last) {
        MonoKey k = base;
        for (int j = 0; j < nz; ++j) k[2 + j] += m * e[j];
        r.terms.emplace(k, run);
      }
    }
    if (run != 0) return std::nullopt;
  }
  return r;
}

QSeries QSeries::substitute_z(const Mat& S) const {
  if (int(S.size()) != nz) throw std::logic_error("substitution matrix rows != nz");
  int n2 = S.empty() ? 0 : int(S[0].size());
  i64 f = 1;
  for (auto& row : S)
    for (auto& v : row) f = lcm64(f, den_i64(v));
  QSeries r(n2);
  r.L = L;
  r.T = T;
  r.M = mul_ck(M, f);
  r.cut = cut;
  for (auto& [k, c] : terms) {
    MonoKey n(2 + n2);
    n[0] = k[0];
    n[1] = k[1];
    for (int i = 0; i < n2; ++i) {
      Rat a = 0;
      for (int j = 0; j < nz; ++j) a += Rat(k[2 + j]) * S[j][i];
      n[2 + i] = scale_int(a, f);
    }
    add_into(r.terms, n, c);
  }
  return r;
}

QSeries QSeries::at_z_zero() const { return substitute_z(Mat(nz)); }

bool QSeries::single_t(Rat* te) const {
  if (terms.empty()) return true;
  i64 t0 = terms.begin()->first[1];
  for (auto& [k, c] : terms)
    if (k[1] != t0) return false;
  if (te) *te = rat(t0, T);
  return true;
}

Evaluation QSeries::evaluate(const EvalPoint& pt) const {
  if (!(pt.tau.imag() > 0)) throw DomainError("evaluation needs Im tau > 0");
  if (int(pt.z.size()) != nz) throw std::logic_error("evaluation point has wrong z-dimension");
  const cplx I(0, 1);
  Evaluation ev{0, 0};
  double absq = std::exp(-2 * M_PI * pt.tau.imag());
  double top_abs = 0, prev_abs = 0, zmax = 0, mag = 0;
  for (auto& [k, c] : terms) {
    Rat qe = rat(k[0], L);
    cplx ex = 2.0 * M_PI * I * (Rat(qe).get_d() * pt.tau + rat(k[1], T).get_d() * pt.t);
    cplx zpart = 0;
    for (int j = 0; j < nz; ++j) zpart += M_PI * I * double(k[2 + j]) / double(M) * pt.z[j];
    cplx term = double(c) * std::exp(ex + zpart);
    ev.value += term;
    mag += std::abs(term);
    if (cut) {
      double d = double(*cut - k[0]) / double(L);
      if (d < 1) {
        top_abs += std::abs(double(c));
        zmax = std::max(zmax, std::abs(std::exp(zpart + 2.0 * M_PI * I * rat(k[1], T).get_d() * pt.t)));
      } else if (d < 2) {
        prev_abs += std::abs(double(c));
      }
    }
  }
  if (cut) {
    // tail estimate: coefficient mass grows by at most g per unit of q
    double g = std::max(1.0, prev_abs > 0 ? top_abs / prev_abs : 2.0);
    double mass = std::max(top_abs, 1.0) * std::max(zmax, 1.0);
    double r = g * absq;
    double qc = std::pow(absq, double(*cut) / double(L));
    ev.error_bound = r < 1 ? 2 * mass * qc * r / (1 - r) : INFINITY;
  }
  ev.error_bound += 8 * std::numeric_limits<double>::epsilon() * (mag + double(terms.size()));
  return ev;
}

std::string QSeries::serialize() const {
  std::ostringstream o;
  o << "{\"scale\":" << M << ",\"nz\":" << nz << ",\"order\":" << (cut ? "\"" + to_str(rat(*cut, L)) + "\"" : "null")
    << ",\"terms\":[";
  bool first = true;
  for (auto& [k, c] : terms) {
    if (!first) o << ",";
    first = false;
    o << "[\"" << to_str(rat(k[0], L)) << "\",[";
    for (int j = 0; j < nz; ++j) o << (j ? "," : "") << k[2 + j];
    o << "],\"" << to_str(rat(k[1], T)) << "\"," << c << "]";
  }
  o << "]}";
  return o.str();
}

std::string QSeries::str(int max_terms) const {
  std::ostringstream o;
  int n = 0;
  for (auto& [k, c] : terms) {
    if (n++ == max_terms) {
      o << " + ...";
      break;
    }
    o << (n > 1 ? (c < 0 ? " - " : " + ") : (c < 0 ? "-" : "")) << std::llabs(c) << "*q^" << to_str(rat(k[0], L));
    if (k[1]) o << "*t^" << to_str(rat(k[1], T));
    bool anyz = false;
    for (int j = 0; j < nz; ++j) anyz |= k[2 + j] != 0;
    if (anyz) {
      o << "*z^(";
      for (int j = 0; j < nz; ++j) o << (j ? "," : "") << to_str(rat(k[2 + j], M));
      o << ")";
    }
  }
  if (cut) o << " + O(q^" << to_str(rat(*cut, L)) << "+)";
  return o.str();
}

bool same_series(const QSeries& a0, const QSeries& b0, std::string* why) {
  QSeries a = a0, b = b0;
  unify(a, b);
  auto c = min_opt(a.cut, b.cut);
  auto in = [&](const MonoKey& k) { return !c || k[0] <= *c; };
  for (auto& [k, v] : a.terms) {
    if (!in(k)) continue;
    auto it = b.terms.find(k);
    i64 w = it == b.terms.end() ? 0 : it->second;
    if (v != w) {
      if (why) *why = "coefficient mismatch at q^" + to_str(a.q_of(k)) + ": " + std::to_string(v) + " vs " + std::to_string(w);
      return false;
    }
  }
  for (auto& [k, v] : b.terms)
    if (in(k) && !a.terms.count(k)) {
      if (why) *why = "coefficient mismatch at q^" + to_str(b.q_of(k)) + ": 0 vs " + std::to_string(v);
      return false;
    }
  return true;
}

QSeries q_pochhammer(const std::vector<Rat>& sc, const Rat& n0, const Rat& step, const Rat& qmax) {
  int nz = int(sc.size());
  std::vector<Rat> zc(nz);
  for (int j = 0; j < nz; ++j) zc[j] = 2 * sc[j];
  QSeries r = QSeries::one(nz).truncated(qmax);
  for (Rat n = n0; n <= qmax; n += step) r = r * (QSeries::one(nz) - QSeries::monomial(nz, n, 0, zc));
  return r;
}

QSeries eta_series(int nz, int order) {
  Rat lead = rat(1, 24), top = lead + order;
  QSeries r = QSeries::monomial(nz, lead, 0, std::vector<Rat>(nz)).truncated(top);
  return r * q_pochhammer(std::vector<Rat>(nz), 1, 1, Rat(order));
}

QSeries f_series(const std::vector<Rat>& sc, int order) {
  int nz = int(sc.size());
  Rat lead = rat(1, 12);
  std::vector<Rat> neg(nz);
  for (int j = 0; j < nz; ++j) neg[j] = -sc[j];
  QSeries r = QSeries::monomial(nz, lead, 0, sc).truncated(lead + order);
  return r * q_pochhammer(sc, 1, 1, Rat(order)) * q_pochhammer(neg, 0, 1, Rat(order));
}

QSeries theta_product(const std::vector<Rat>& sc, int order) {
  int nz = int(sc.size());
  Rat lead = rat(1, 8);
  std::vector<Rat> neg(nz);
  for (int j = 0; j < nz; ++j) neg[j] = -sc[j];
  QSeries r = QSeries::monomial(nz, lead, 0, sc).truncated(lead + order);
  return r * q_pochhammer(std::vector<Rat>(nz), 1, 1, Rat(order)) * q_pochhammer(sc, 1, 1, Rat(order)) *
         q_pochhammer(neg, 0, 1, Rat(order));
}

QSeries theta_sum(const std::vector<Rat>& sc, int order) {
  int nz = int(sc.size());
  Rat top = rat(1, 8) + order;
  QSeries r = QSeries::zero(nz, top);
  for (i64 n = -order - 2; n <= order + 3; ++n) {
    Rat h = Rat(n) - rat(1, 2);
    Rat qe = h * h / 2;
    if (qe > top) continue;
    std::vector<Rat> zc(nz);
    for (int j = 0; j < nz; ++j) zc[j] = 2 * sc[j] * h;
    r.add_term(qe, 0, zc, (n % 2 == 0) ? -1 : 1);
  }
  return r;
}

}  // namespace wexc
