#include "wexc/nilpotent.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace wexc {

int Partition::N() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::vector<int> Partition::dual() const {
  std::vector<int> d;
  if (parts.empty()) return d;
  for (int k = 1; k <= parts.front(); ++k) {
    int c = 0;
    for (int m : parts) c += (m >= k);
    d.push_back(c);
  }
  return d;
}

int Partition::mult(int m) const { return int(std::count(parts.begin(), parts.end(), m)); }

std::string Partition::str() const {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
  return s;
}

Partition parse_partition(const std::string& s) {
  Partition p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (...) {
      throw DomainError("bad partition: " + s);
    }
    if (v <= 0) throw DomainError("bad partition: " + s);
    p.parts.push_back(v);
  }
  if (p.parts.empty()) throw DomainError("empty partition");
  std::sort(p.parts.rbegin(), p.parts.rend());
  return p;
}

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int maxp) -> void {
    if (left == 0) {
      out.push_back({cur});
      return;
    }
    for (int m = std::min(left, maxp); m >= 1; --m) {
      cur.push_back(m);
      self(self, left - m, m);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

std::string family_name(Family fam) {
  switch (fam) {
    case Family::sl: return "sl";
    case Family::so: return "so";
    case Family::sp: return "sp";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "sl") return Family::sl;
  if (s == "so") return Family::so;
  if (s == "sp") return Family::sp;
  throw DomainError("unknown algebra family: " + s);
}

bool partition_valid(Family fam, const Partition& p, std::string* why) {
  if (fam == Family::sl) return true;
  int bad_parity = fam == Family::sp ? 1 : 0;  // sp: odd parts paired, so: even parts paired
  for (int m : p.parts)
    if (m % 2 == bad_parity && p.mult(m) % 2) {
      if (why)
        *why = std::string(fam == Family::sp ? "odd" : "even") + " part " + std::to_string(m) +
               " has odd multiplicity";
      return false;
    }
  return true;
}

RootSystem classical_algebra(Family fam, int N) {
  switch (fam) {
    case Family::sl:
      if (N < 2) break;
      return build_root_system('A', N - 1);
    case Family::sp:
      if (N % 2 || N < 4) break;
      return build_root_system('C', N / 2);
    case Family::so:
      if (N % 2 && N >= 5) return build_root_system('B', (N - 1) / 2);
      if (N % 2 == 0 && N >= 6) return build_root_system('D', N / 2);
      break;
  }
  throw DomainError("unsupported algebra: " + family_name(fam) + std::to_string(N));
}

bool dominates(const Partition& p, const Partition& q) {
  if (p.N() != q.N()) throw DomainError("partitions of different integers");
  int sp = 0, sq = 0;
  size_t n = std::max(p.parts.size(), q.parts.size());
  for (size_t i = 0; i < n; ++i) {
    sp += i < p.parts.size() ? p.parts[i] : 0;
    sq += i < q.parts.size() ? q.parts[i] : 0;
    if (sp < sq) return false;
  }
  return true;
}

NaturalRep natural_rep(const RootSystem& rs) {
  NaturalRep rep;
  if (rs.type == 'A') {
    rep.fam = Family::sl;
    rep.N = rs.dim;
    for (int i = 0; i < rep.N; ++i) {
      FinVec v = zero_vec(rs.dim);
      v[i] = 1;
      rep.wt.push_back(v);
    }
    return rep;
  }
  if (rs.type == 'G') throw DomainError("no natural matrix realization for G2");
  int n = rs.rank;
  rep.fam = rs.type == 'C' ? Family::sp : Family::so;
  rep.N = rs.type == 'B' ? 2 * n + 1 : 2 * n;
  rep.wt.assign(rep.N, zero_vec(n));
  rep.J.assign(rep.N, zero_vec(rep.N));
  for (int j = 0; j < n; ++j) {
    int p = j, q = rep.N - 1 - j;
    rep.wt[p][j] = 1;
    rep.wt[q][j] = -1;
    rep.J[p][q] = 1;
    rep.J[q][p] = rep.fam == Family::sp ? -1 : 1;
  }
  if (rs.type == 'B') rep.J[n][n] = 1;
  return rep;
}

Mat root_vector(const RootSystem& rs, const NaturalRep& rep, const FinVec& alpha) {
  if (!rs.is_root(alpha)) throw DomainError("not a root: " + to_str(alpha));
  std::vector<std::pair<int, int>> cand;
  for (int a = 0; a < rep.N; ++a)
    for (int b = 0; b < rep.N; ++b)
      if (a != b && rep.wt[a] - rep.wt[b] == alpha) cand.push_back({a, b});
  Mat M0(rep.N, zero_vec(rep.N));
  if (rep.J.empty()) {
    if (cand.size() != 1) throw std::logic_error("unexpected root space");
    M0[cand[0].first][cand[0].second] = 1;
    return M0;
  }
  // X = Σ c_k E_{a_k b_k} with X^T J + J X = 0
  Mat sys;
  for (int i = 0; i < rep.N; ++i)
    for (int l = 0; l < rep.N; ++l) {
      FinVec row = zero_vec(int(cand.size()));
      bool any = false;
      for (size_t k = 0; k < cand.size(); ++k) {
        auto [a, b] = cand[k];
        Rat v = 0;
        if (i == b) v += rep.J[a][l];
        if (l == b) v += rep.J[i][a];
        if (v != 0) {
          row[k] = v;
          any = true;
        }
      }
      if (any) sys.push_back(row);
    }
  auto ns = sys.empty() ? std::vector<FinVec>{FinVec(cand.size(), Rat(1))} : nullspace(sys);
  if (ns.size() != 1) throw std::logic_error("root space is not one-dimensional");
  FinVec c = ns[0];
  Rat lead = 0;
  for (auto& v : c)
    if (v != 0) {
      lead = v;
      break;
    }
  for (size_t k = 0; k < cand.size(); ++k) M0[cand[k].first][cand[k].second] = c[k] / lead;
  return M0;
}

Partition jordan_type(const Mat& f) {
  int N = int(f.size());
  std::vector<int> rk{N};
  Mat pw = f;
  for (int k = 1; k <= N; ++k) {
    rk.push_back(rank(pw));
    if (rk.back() == 0) break;
    pw = matmul(pw, f);
  }
  if (rk.back() != 0) throw DomainError("matrix is not nilpotent");
  // number of blocks of size >= k is rk[k-1] - rk[k]
  Partition p;
  for (size_t k = 1; k < rk.size(); ++k) {
    int ge = rk[k - 1] - rk[k];
    int ge_next = k + 1 < rk.size() ? rk[k] - rk[k + 1] : 0;
    for (int t = 0; t < ge - ge_next; ++t) p.parts.push_back(int(k));
  }
  std::sort(p.parts.rbegin(), p.parts.rend());
  return p;
}

bool principal_type_rule(Family fam, const Partition& p) {
  std::set<int> odd_mult;
  for (int m : p.parts)
    if (p.mult(m) % 2) odd_mult.insert(m);
  if (odd_mult.empty()) return true;
  if (fam == Family::sl) return true;
  if (fam == Family::sp) {
    int even = 0;
    for (int m : odd_mult) even += (m % 2 == 0);
    return even == 1 && odd_mult.size() == 1;
  }
  if (p.N() % 2) return odd_mult.size() == 1 && (*odd_mult.begin() % 2 == 1);
  return odd_mult.size() == 2 && odd_mult.count(1);
}

int reductive_centralizer_rank(Family fam, const Partition& p) {
  if (fam == Family::sl) return int(p.parts.size()) - 1;
  // factors Sp(k) or O(k), one per distinct part of multiplicity k; both have rank k/2
  std::set<int> distinct(p.parts.begin(), p.parts.end());
  int r = 0;
  for (int m : distinct) r += p.mult(m) / 2;
  return r;
}

namespace {

struct VRef {
  int coord;
  int sign;  // +1, -1, or 0 for the zero-weight vector of so_{odd}
};

struct Step {
  VRef src;
  std::vector<std::pair<VRef, int>> tgt;
};

struct ChainPlan {
  std::vector<Rat> coordval;
  std::vector<Step> steps;
  int new_coord(const Rat& v) {
    coordval.push_back(v);
    return int(coordval.size()) - 1;
  }
};

// vectors of a Jordan chain with eigenvalues a, a-1, ..., -a realized on fresh coordinates
std::vector<VRef> fresh_chain(ChainPlan& plan, int m, bool allow_negative) {
  std::vector<VRef> ch;
  for (int t = 0; t < m; ++t) {
    Rat v = Rat(m - 1, 2) - t;
    v.canonicalize();
    if (v >= 0 || !allow_negative) ch.push_back({plan.new_coord(v), +1});
    else ch.push_back({plan.new_coord(-v), -1});
  }
  return ch;
}

void chain_steps(ChainPlan& plan, const std::vector<VRef>& ch) {
  for (size_t t = 0; t + 1 < ch.size(); ++t) plan.steps.push_back({ch[t], {{ch[t + 1], 1}}});
}

ChainPlan plan_classical(Family fam, const Partition& p) {
  ChainPlan plan;
  std::set<int, std::greater<int>> distinct(p.parts.begin(), p.parts.end());
  if (fam == Family::sl) {
    for (int m : p.parts) {
      std::vector<VRef> ch;
      for (int t = 0; t < m; ++t) {
        Rat v = Rat(m - 1, 2) - t;
        v.canonicalize();
        ch.push_back({plan.new_coord(v), +1});
      }
      chain_steps(plan, ch);
    }
    return plan;
  }
  std::vector<int> singles;
  for (int m : distinct) {
    int k = p.mult(m);
    for (int t = 0; t < k / 2; ++t) chain_steps(plan, fresh_chain(plan, m, true));
    if (k % 2) singles.push_back(m);
  }
  if (fam == Family::sp) {
    for (int m : singles) {  // even, self-dual
      std::vector<VRef> half;
      for (int t = 0; t < m / 2; ++t) {
        Rat v = Rat(m - 1, 2) - t;
        v.canonicalize();
        half.push_back({plan.new_coord(v), +1});
      }
      chain_steps(plan, half);
      VRef last = half.back();
      plan.steps.push_back({last, {{{last.coord, -1}, 1}}});
    }
    return plan;
  }
  // so: odd self-dual blocks
  auto positive_half = [&](int m) {
    std::vector<VRef> half;
    for (int t = 0; t < (m - 1) / 2; ++t) half.push_back({plan.new_coord(Rat((m - 1) / 2 - t)), +1});
    chain_steps(plan, half);
    return half;
  };
  size_t i = 0;
  if (p.N() % 2) {
    auto half = positive_half(singles[0]);
    if (!half.empty()) plan.steps.push_back({half.back(), {{{-1, 0}, 1}}});
    i = 1;
  }
  for (; i + 1 < singles.size(); i += 2) {
    auto h1 = positive_half(singles[i]);
    auto h2 = positive_half(singles[i + 1]);
    int z = plan.new_coord(0);
    if (!h1.empty()) plan.steps.push_back({h1.back(), {{{z, +1}, 1}, {{z, -1}, 1}}});
    if (!h2.empty()) plan.steps.push_back({h2.back(), {{{z, +1}, 1}, {{z, -1}, -1}}});
  }
  if (i != singles.size()) throw std::logic_error("unpaired odd block");
  return plan;
}

void finalize(NilpotentDatum& d);

}  // namespace

NilpotentDatum orbit_from_partition(Family fam, const Partition& p, int very_even_class) {
  std::string why;
  if (!partition_valid(fam, p, &why))
    throw DomainError("invalid partition " + p.str() + " for " + family_name(fam) + ": " + why);
  auto rs = std::make_shared<const RootSystem>(classical_algebra(fam, p.N()));
  NilpotentDatum d;
  d.rs = rs;
  d.partition = p;
  d.label = "[" + p.str() + "]";
  NaturalRep rep = natural_rep(*rs);

  ChainPlan plan = plan_classical(fam, p);
  int ncoord = int(plan.coordval.size());
  int expect_coords = fam == Family::sl ? rs->dim : rs->rank;
  if (ncoord != expect_coords) throw std::logic_error("coordinate count mismatch");
  std::vector<int> order(ncoord);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return plan.coordval[a] > plan.coordval[b]; });
  std::vector<int> newidx(ncoord);
  for (int k = 0; k < ncoord; ++k) newidx[order[k]] = k;
  auto basis_index = [&](VRef v) {
    if (fam == Family::sl) return newidx[v.coord];
    if (v.sign == 0) return rs->rank;
    return v.sign > 0 ? newidx[v.coord] : rep.N - 1 - newidx[v.coord];
  };

  FinVec a = zero_vec(rs->dim);
  for (int k = 0; k < ncoord; ++k) a[newidx[k]] = plan.coordval[k];
  d.x = Rat(1) / rs->c * a;

  Mat f(rep.N, zero_vec(rep.N));
  std::map<FinVec, Rat> used;
  for (auto& st : plan.steps) {
    int s = basis_index(st.src);
    for (auto& [tv, coeff] : st.tgt) {
      int t = basis_index(tv);
      FinVec g = rep.wt[t] - rep.wt[s];
      Mat E = root_vector(*rs, rep, g);
      Rat scale = Rat(coeff) / E[t][s];
      if (used.count(g)) throw std::logic_error("root reused in chain plan");
      used[g] = scale;
      for (int i = 0; i < rep.N; ++i)
        for (int j = 0; j < rep.N; ++j)
          if (E[i][j] != 0) f[i][j] += scale * E[i][j];
    }
  }
  for (auto& [g, sc] : used) d.gammas.push_back(g);

  bool very_even = fam == Family::so && p.N() % 4 == 0 &&
                   std::all_of(p.parts.begin(), p.parts.end(), [](int m) { return m % 2 == 0; });
  if (very_even) {
    d.very_even_class = very_even_class;
    d.label += very_even_class == 2 ? "II" : "I";
    if (very_even_class == 2) {
      int n = rs->rank, i = n - 1, j = rep.N - n;
      std::swap(f[i], f[j]);
      for (auto& row : f) std::swap(row[i], row[j]);
      d.x[n - 1] = -d.x[n - 1];
      for (auto& g : d.gammas) g[n - 1] = -g[n - 1];
    }
  }
  if (jordan_type(f).parts != p.parts)
    throw DomainError("non-standard f representative: Jordan type " + jordan_type(f).str());
  d.fmat = f;
  d.rep = rep;
  d.expected_hf_rank = reductive_centralizer_rank(fam, p);
  finalize(d);
  return d;
}

NilpotentDatum orbit_from_root_vector(const RootSystem& rs0, const FinVec& gamma0) {
  if (!rs0.is_root(gamma0)) throw DomainError("not a root: " + to_str(gamma0));
  auto rs = std::make_shared<const RootSystem>(rs0);
  auto w = to_dominant(*rs, rs->coroot(gamma0));
  FinVec gamma = w.apply(gamma0);
  NilpotentDatum d;
  d.rs = rs;
  d.label = std::string("root:") + (rs->norm2(gamma) == 2 ? "long" : "short");
  d.x = rat(1, 2) * rs->coroot(gamma);
  d.gammas = {-gamma};
  if (rs->type != 'G') {
    d.rep = natural_rep(*rs);
    d.fmat = root_vector(*rs, *d.rep, -gamma);
  }
  d.expected_hf_rank = rs->rank - 1;
  finalize(d);
  return d;
}

NilpotentDatum principal_orbit(const RootSystem& rs) {
  if (rs.type != 'G') {
    Family fam = rs.type == 'A' ? Family::sl : rs.type == 'C' ? Family::sp : Family::so;
    int N = natural_rep(rs).N;
    Partition p{{N}};
    if (rs.type == 'D') p.parts = {N - 1, 1};
    auto d = orbit_from_partition(fam, p);
    d.label = "principal";
    return d;
  }
  NilpotentDatum d;
  d.rs = std::make_shared<const RootSystem>(rs);
  d.label = "principal";
  d.x = rs.rhov;
  for (auto& a : rs.simple) d.gammas.push_back(-a);
  d.expected_hf_rank = 0;
  finalize(d);
  return d;
}

NilpotentDatum zero_orbit(const RootSystem& rs) {
  if (rs.type != 'G') {
    Family fam = rs.type == 'A' ? Family::sl : rs.type == 'C' ? Family::sp : Family::so;
    int N = natural_rep(rs).N;
    auto d = orbit_from_partition(fam, Partition{std::vector<int>(N, 1)});
    d.label = "zero";
    return d;
  }
  NilpotentDatum d;
  d.rs = std::make_shared<const RootSystem>(rs);
  d.label = "zero";
  d.x = zero_vec(rs.dim);
  d.expected_hf_rank = rs.rank;
  finalize(d);
  return d;
}

std::vector<NilpotentDatum> all_orbits(Family fam, int N) {
  std::vector<NilpotentDatum> out;
  for (auto& p : partitions_of(N)) {
    if (!partition_valid(fam, p)) continue;
    bool very_even = fam == Family::so && N % 4 == 0 &&
                     std::all_of(p.parts.begin(), p.parts.end(), [](int m) { return m % 2 == 0; });
    out.push_back(orbit_from_partition(fam, p, 1));
    if (very_even) out.push_back(orbit_from_partition(fam, p, 2));
  }
  return out;
}

NilpotentDatum orbit_by_name(Family fam, int N, const std::string& name) {
  if (name == "principal") return principal_orbit(classical_algebra(fam, N));
  if (name == "zero") return zero_orbit(classical_algebra(fam, N));
  std::string s = name;
  int cls = 1;
  if (s.size() > 3 && s.substr(s.size() - 3) == ":II") cls = 2, s = s.substr(0, s.size() - 3);
  else if (s.size() > 2 && s.substr(s.size() - 2) == ":I") s = s.substr(0, s.size() - 2);
  return orbit_from_partition(fam, parse_partition(s), cls);
}

std::vector<int> NilpotentDatum::roots_with_grade(const Rat& j) const {
  std::vector<int> out;
  for (size_t i = 0; i < grade.size(); ++i)
    if (grade[i] == j) out.push_back(int(i));
  return out;
}

std::vector<int> NilpotentDatum::psi_roots() const {
  std::vector<int> out;
  for (size_t i = 0; i < grade.size(); ++i)
    if (newpos[i] && (grade[i] == 0 || grade[i] == rat(1, 2))) out.push_back(int(i));
  return out;
}

std::vector<int> NilpotentDatum::delta00() const {
  std::vector<int> out;
  for (size_t i = 0; i < grade.size(); ++i)
    if (grade[i] == 0 && in_f[i]) out.push_back(int(i));
  return out;
}

int NilpotentDatum::dim_g(const Rat& j) const {
  int n = int(roots_with_grade(j).size());
  return j == 0 ? n + rs->rank : n;
}

namespace {

std::vector<FinVec> hf_from_constraints(const RootSystem& rs, const std::vector<FinVec>& cons) {
  Mat sys = cons;
  if (rs.type == 'A' || rs.type == 'G') sys.push_back(FinVec(rs.dim, Rat(1)));
  if (sys.empty()) sys.push_back(zero_vec(rs.dim));
  std::vector<FinVec> out;
  for (auto& v : nullspace(sys)) out.push_back(primitive(v));
  return out;
}

bool same_span(const std::vector<FinVec>& a, const std::vector<FinVec>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Mat m = a;
  m.insert(m.end(), b.begin(), b.end());
  return rank(m) == int(a.size());
}

void finalize(NilpotentDatum& d) {
  const RootSystem& rs = *d.rs;
  size_t nr = rs.roots.size();
  d.grade.resize(nr);
  for (size_t i = 0; i < nr; ++i) d.grade[i] = rs.form(rs.roots[i], d.x);
  for (auto& g : d.gammas)
    if (rs.form(g, d.x) != -1) throw std::logic_error("gamma not in grade -1");

  d.hf = hf_from_constraints(rs, d.gammas);
  if (d.fmat) {
    std::vector<FinVec> cons;
    const Mat& f = *d.fmat;
    for (int a = 0; a < d.rep->N; ++a)
      for (int b = 0; b < d.rep->N; ++b)
        if (f[a][b] != 0) cons.push_back(d.rep->wt[a] - d.rep->wt[b]);
    auto hf2 = hf_from_constraints(rs, cons);
    if (!same_span(d.hf, hf2)) throw std::logic_error("h^f from matrix and from gammas differ");
    d.hf = hf2;
  }
  if (d.expected_hf_rank >= 0 && d.hf_dim() != d.expected_hf_rank)
    throw DomainError("non-standard f representative: dim h^f = " + std::to_string(d.hf_dim()) +
                      ", expected " + std::to_string(d.expected_hf_rank));

  d.res.assign(nr, FinVec());
  d.in_f.assign(nr, true);
  for (size_t i = 0; i < nr; ++i) {
    for (auto& b : d.hf) d.res[i].push_back(rs.form(rs.roots[i], b));
    d.in_f[i] = is_zero(d.res[i]);
  }
  // h0 = Σ c^j b_j with c escalated until generic
  for (long c = 1;; ++c) {
    if (c > 1000) throw std::logic_error("genericity not achievable");
    FinVec h0 = zero_vec(rs.dim);
    Rat pw = 1;
    for (auto& b : d.hf) {
      h0 = h0 + pw * b;
      pw *= c;
    }
    bool ok = true;
    for (size_t i = 0; i < nr && ok; ++i) ok = (rs.form(rs.roots[i], h0) == 0) == d.in_f[i];
    if (ok) {
      d.h0 = h0;
      break;
    }
  }
  d.newpos.assign(nr, false);
  FinVec zero = zero_vec(rs.dim);
  for (size_t i = 0; i < nr; ++i) {
    const FinVec& a = rs.roots[i];
    Rat v = rs.form(a, d.h0);
    if (d.grade[i] == 0 && d.in_f[i]) d.newpos[i] = a > zero;
    else d.newpos[i] = v > 0 || (v == 0 && d.grade[i] < 0);
  }
  d.s.assign(nr, Rat(0));
  for (size_t i = 0; i < nr; ++i) d.s[i] = d.newpos[i] ? Rat(-d.grade[i]) : Rat(1 - d.grade[i]);
  d.dim_g0 = d.dim_g(0);
  d.dim_g12 = d.dim_g(rat(1, 2));
  d.dim_gf = d.dim_g0 + d.dim_g12;
  d.principal_type = d.delta00().empty();

  FinVec rho_new = zero_vec(rs.dim);
  for (size_t i = 0; i < nr; ++i)
    if (d.newpos[i]) rho_new = rho_new + rat(1, 2) * rs.roots[i];
  auto w = to_dominant(rs, rho_new);
  if (w.apply(rho_new) != rs.rho) throw std::logic_error("new positive system is not a positive system");
  d.wbar = weyl_inverse(rs, w);
  for (size_t i = 0; i < rs.pos.size(); ++i)
    if (!d.newpos[rs.root_index(d.wbar.apply(rs.pos[i]))]) throw std::logic_error("wbar check failed");
}

}  // namespace

}  // namespace wexc
