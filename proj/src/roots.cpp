#include "wexc/roots.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace wexc {

namespace {

FinVec unit(int n, int i, long s = 1) {
  FinVec v = zero_vec(n);
  v[i] = s;
  return v;
}

}  // namespace

FinVec RootSystem::simple_coords(const FinVec& v) const {
  FinVec n(rank);
  for (int i = 0; i < rank; ++i) n[i] = form(v, qstar[i]);
  return n;
}

FinVec RootSystem::from_simple_coords(const FinVec& n) const {
  FinVec v = zero_vec(dim);
  for (int i = 0; i < rank; ++i)
    if (n[i] != 0) v = v + n[i] * simple[i];
  return v;
}

FinVec RootSystem::from_qstar_coords(const FinVec& n) const {
  FinVec v = zero_vec(dim);
  for (int i = 0; i < rank; ++i)
    if (n[i] != 0) v = v + n[i] * qstar[i];
  return v;
}

Mat RootSystem::reflection_matrix(const FinVec& a) const {
  FinVec av = coroot(a);
  Mat m = identity(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m[i][j] -= a[i] * c * av[j];
  return m;
}

FinVec RootSystem::project(const FinVec& v) const { return from_simple_coords(simple_coords(v)); }

const std::vector<FinVec>& RootSystem::basis(Lattice l) const {
  switch (l) {
    case Lattice::Q: return simple;
    case Lattice::Qv: return simple_coroots;
    case Lattice::P: return fund;
    case Lattice::Qstar: return qstar;
  }
  return simple;
}

RootSystem build_root_system(char type, int r) {
  RootSystem rs;
  rs.type = type;
  rs.rank = r;
  std::vector<FinVec>& s = rs.simple;
  switch (type) {
    case 'A':
      if (r < 1) throw DomainError("unsupported algebra: A" + std::to_string(r));
      rs.dim = r + 1;
      rs.c = 1;
      for (int i = 0; i < r; ++i) s.push_back(unit(r + 1, i) - unit(r + 1, i + 1));
      break;
    case 'B':
    case 'C':
    case 'D':
      if ((type != 'D' && r < 2) || (type == 'D' && r < 3))
        throw DomainError(std::string("unsupported algebra: ") + type + std::to_string(r));
      rs.dim = r;
      rs.c = type == 'C' ? rat(1, 2) : Rat(1);
      for (int i = 0; i + 1 < r; ++i) s.push_back(unit(r, i) - unit(r, i + 1));
      if (type == 'B') s.push_back(unit(r, r - 1));
      if (type == 'C') s.push_back(unit(r, r - 1, 2));
      if (type == 'D') s.push_back(unit(r, r - 2) + unit(r, r - 1));
      break;
    case 'G':
      if (r != 2) throw DomainError("unsupported algebra: G" + std::to_string(r));
      rs.dim = 3;
      rs.c = rat(1, 3);
      s.push_back(FinVec{0, 1, -1});
      s.push_back(FinVec{1, -2, 1});
      break;
    default:
      throw DomainError(std::string("unsupported algebra: ") + type + std::to_string(r));
  }

  // dual bases inside span(Δ)
  Mat gram(r, FinVec(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) gram[i][j] = rs.form(s[i], s[j]);
  Mat ginv = inverse(gram);
  for (int i = 0; i < r; ++i) {
    FinVec w = zero_vec(rs.dim);
    for (int j = 0; j < r; ++j) w = w + ginv[i][j] * s[j];
    rs.qstar.push_back(w);
    rs.fund.push_back((rs.norm2(s[i]) / 2) * w);
    rs.simple_coroots.push_back(rs.coroot(s[i]));
  }
  for (int i = 0; i < r; ++i) rs.sref.push_back(rs.reflection_matrix(s[i]));

  // Δ as the W-orbit of the simple roots
  std::set<FinVec> all(s.begin(), s.end());
  std::deque<FinVec> todo(s.begin(), s.end());
  while (!todo.empty()) {
    FinVec v = todo.front();
    todo.pop_front();
    for (int i = 0; i < r; ++i) {
      FinVec w = matvec(rs.sref[i], v);
      if (all.insert(w).second) todo.push_back(w);
    }
  }
  std::vector<std::pair<FinVec, FinVec>> posc;  // (coords, root)
  for (auto& a : all) {
    FinVec n = rs.simple_coords(a);
    bool positive = std::all_of(n.begin(), n.end(), [](const Rat& x) { return x >= 0; });
    if (positive) posc.push_back({n, a});
  }
  std::sort(posc.begin(), posc.end(), [](auto& a, auto& b) {
    Rat ha = 0, hb = 0;
    for (auto& x : a.first) ha += x;
    for (auto& x : b.first) hb += x;
    if (ha != hb) return ha < hb;
    return a.second > b.second;
  });
  for (auto& [n, a] : posc) {
    rs.pos.push_back(a);
    std::vector<i64> ni;
    for (auto& x : n) ni.push_back(as_int(x));
    rs.pos_coeffs.push_back(ni);
  }
  if (2 * rs.pos.size() != all.size()) throw std::logic_error("root closure failed");
  rs.roots = rs.pos;
  for (auto& a : rs.pos) rs.roots.push_back(-a);
  for (size_t i = 0; i < rs.roots.size(); ++i) rs.index[rs.roots[i]] = int(i);

  rs.rho = zero_vec(rs.dim);
  rs.rhov = zero_vec(rs.dim);
  for (auto& a : rs.pos) {
    rs.rho = rs.rho + rat(1, 2) * a;
    rs.rhov = rs.rhov + rat(1, 2) * rs.coroot(a);
  }
  // highest root and highest short root: maximal height within each length class
  Rat longest = 0;
  for (auto& a : rs.pos) longest = std::max(longest, rs.norm2(a));
  for (auto& a : rs.pos) {
    if (rs.norm2(a) == longest) rs.theta = a;
    else rs.theta_s = a;
  }
  if (rs.theta_s.empty()) rs.theta_s = rs.theta;
  Rat shortest = rs.norm2(rs.theta_s);
  rs.lacety = as_int(longest / shortest);
  if (longest != 2) throw std::logic_error("form normalization failed");
  rs.h = as_int(rs.form(rs.rhov, rs.theta)) + 1;
  rs.hv = as_int(rs.form(rs.rho, rs.coroot(rs.theta))) + 1;
  return rs;
}

RootSystem build_root_system(const std::string& label) {
  if (label.size() < 2) throw DomainError("unsupported algebra: " + label);
  char t = char(std::toupper(label[0]));
  int r = 0;
  try {
    r = std::stoi(label.substr(1));
  } catch (...) {
    throw DomainError("unsupported algebra: " + label);
  }
  return build_root_system(t, r);
}

FinVec reflect(const RootSystem& rs, const FinVec& alpha, const FinVec& v) {
  if (!rs.is_root(alpha)) throw DomainError("not a root: " + to_str(alpha));
  return v - rs.form(v, rs.coroot(alpha)) * alpha;
}

WeylElement weyl_identity(const RootSystem& rs) { return {{}, identity(rs.dim)}; }

WeylElement weyl_from_word(const RootSystem& rs, const std::vector<int>& word) {
  WeylElement w{word, identity(rs.dim)};
  for (int i : word) w.m = matmul(w.m, rs.sref[i]);
  return w;
}

WeylElement weyl_mul(const RootSystem&, const WeylElement& a, const WeylElement& b) {
  WeylElement w{a.word, matmul(a.m, b.m)};
  w.word.insert(w.word.end(), b.word.begin(), b.word.end());
  return w;
}

WeylElement weyl_inverse(const RootSystem& rs, const WeylElement& a) {
  std::vector<int> rw(a.word.rbegin(), a.word.rend());
  return weyl_from_word(rs, rw);
}

WeylElement to_dominant(const RootSystem& rs, const FinVec& v0) {
  FinVec v = v0;
  std::vector<int> applied;  // s_{i_k} ... s_{i_1} v is dominant
  for (;;) {
    int bad = -1;
    for (int i = 0; i < rs.rank; ++i)
      if (rs.form(v, rs.simple[i]) < 0) {
        bad = i;
        break;
      }
    if (bad < 0) break;
    v = matvec(rs.sref[bad], v);
    applied.push_back(bad);
  }
  std::vector<int> word(applied.rbegin(), applied.rend());
  return weyl_from_word(rs, word);
}

WeylElement longest_element(const RootSystem& rs) { return to_dominant(rs, -rs.rho); }

std::vector<WeylElement> weyl_group(const RootSystem& rs, size_t limit) {
  std::map<FinVec, size_t> seen;
  std::vector<WeylElement> out{weyl_identity(rs)};
  seen[rs.rho] = 0;
  for (size_t k = 0; k < out.size(); ++k) {
    for (int i = 0; i < rs.rank; ++i) {
      WeylElement w{out[k].word, matmul(out[k].m, rs.sref[i])};
      w.word.push_back(i);
      FinVec img = w.apply(rs.rho);
      if (seen.count(img)) continue;
      seen[img] = out.size();
      out.push_back(std::move(w));
      if (out.size() > limit) throw DomainError("Weyl group exceeds enumeration limit");
    }
  }
  return out;
}

std::vector<FinVec> lattice_members(const RootSystem& rs, Lattice l, long lo, long hi) {
  const auto& b = rs.basis(l);
  std::vector<FinVec> out;
  if (hi < lo) return out;
  std::vector<long> c(rs.rank, lo);
  for (;;) {
    FinVec v = zero_vec(rs.dim);
    for (int i = 0; i < rs.rank; ++i)
      if (c[i]) v = v + Rat(c[i]) * b[i];
    out.push_back(v);
    int i = 0;
    while (i < rs.rank && c[i] == hi) c[i++] = lo;
    if (i == rs.rank) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace wexc
