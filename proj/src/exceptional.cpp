#include "wexc/exceptional.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wexc/characters.hpp"

namespace wexc {

namespace {

int r_index(const NilpotentDatum& d, const FinVec& std_root) {
  const RootSystem& rs = d.R();
  int i = rs.root_index(d.wbar.apply(std_root));
  if (i < 0) throw std::logic_error("w̄ does not map roots to roots");
  return i;
}

int target_size(const NilpotentDatum& d) { return d.dim_gf - d.R().rank; }

std::string algebra_name(const RootSystem& rs) {
  switch (rs.type) {
    case 'A': return "sl" + std::to_string(rs.rank + 1);
    case 'B': return "so" + std::to_string(2 * rs.rank + 1);
    case 'C': return "sp" + std::to_string(2 * rs.rank);
    case 'D': return "so" + std::to_string(2 * rs.rank);
    default: return rs.label();
  }
}

}  // namespace

bool vanishing_form_b(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  for (int i : delta_lambda(rs, L.beta, L.u))
    if (d.in_f[r_index(d, rs.roots[i])]) return true;
  return false;
}

bool vanishing_form_c(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  // Δ_Λ,+ ⊂ Δ₊ \ Δ^f fails for some integral root of λ
  for (auto& a : rs.pos) {
    Rat v = rs.form(L.lam, rs.coroot(a));
    if (v.get_den() != 1) continue;
    if (d.in_f[r_index(d, a)]) return true;
  }
  return false;
}

bool vanishing_test(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  bool b = vanishing_form_b(L, d), c = vanishing_form_c(L, d);
  if (b != c) throw std::logic_error("vanishing forms (b) and (c) disagree");
  return b;
}

std::vector<std::vector<Rat>> integral_restrictions(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  std::vector<std::vector<Rat>> out;
  for (int i : delta_lambda(rs, L.beta, L.u))
    if (rs.is_positive(rs.roots[i])) out.push_back(d.res[r_index(d, rs.roots[i])]);
  return out;
}

MultisetMatch multiset_match(const PrincipalAdmissible& L, const NilpotentDatum& d) {
  MultisetMatch m;
  std::vector<std::vector<Rat>> s;
  for (int i : d.psi_roots()) s.push_back(d.res[i]);
  auto a = line_classes(integral_restrictions(L, d)), b = line_classes(s);
  if (a.size() != b.size()) return m;
  bool pos = true;
  for (auto& [dir, sa] : a) {
    auto it = b.find(dir);
    if (it == b.end() || it->second.size() != sa.size()) return m;
    if (std::all_of(dir.begin(), dir.end(), [](const Rat& x) { return x == 0; })) return m;
    auto npos = [](const std::vector<Rat>& v) { return std::count_if(v.begin(), v.end(), [](const Rat& x) { return x > 0; }); };
    if (npos(sa) != npos(it->second)) pos = false;
  }
  m.matched = true;
  m.multipliers_positive = pos;
  return m;
}

bool almost_convergence_test(const PrincipalAdmissible& L, const NilpotentDatum& d, ConvergenceMode mode) {
  if (mode == ConvergenceMode::multiset) return multiset_match(L, d).matched;
  if (vanishing_form_b(L, d)) return false;
  return int(delta_lambda(d.R(), L.beta, L.u).size()) == target_size(d);
}

std::vector<int> torus_delta(const RootSystem& rs, const FinVec& lam) {
  std::vector<int> out;
  for (size_t i = 0; i < rs.roots.size(); ++i)
    if (rs.form(lam, rs.roots[i]).get_den() == 1) out.push_back(int(i));
  return out;
}

TorusScan torus_scan(const NilpotentDatum& d, i64 u, OrderMode mode, std::uint64_t budget) {
  const RootSystem& rs = d.R();
  if (u < 1) throw DomainError("u must be positive");
  if (std::gcd(u, i64(rs.lacety)) != 1) throw DomainError("u must be coprime to the lacety");
  int r = rs.rank;
  long double total = std::pow((long double)u, r);
  if (total > (long double)budget)
    throw DomainError("scan too large: u^r = " + std::to_string(u) + "^" + std::to_string(r) + " exceeds budget " +
                      std::to_string(budget));
  TorusScan T;
  T.u = u;
  T.mode = mode;
  T.target = target_size(d);
  size_t np = rs.pos.size();
  // (ω*_i|α) are integers; residues of Σ n_i (ω*_i|α) mod u decide integrality
  std::vector<std::vector<i64>> M(np, std::vector<i64>(r));
  std::vector<char> inf(np);
  for (size_t a = 0; a < np; ++a) {
    for (int i = 0; i < r; ++i) {
      Rat v = rs.form(rs.qstar[i], rs.pos[a]);
      if (v.get_den() != 1) throw std::logic_error("Q* pairing is not integral");
      M[a][i] = (to_i64(v.get_num()) % u + u) % u;
    }
    inf[a] = d.in_f[a];
  }
  std::vector<i64> n(r, 0), res(np, 0);
  std::uint64_t count = std::uint64_t(total + 0.5L);
  for (std::uint64_t it = 0; it < count; ++it) {
    ++T.scanned;
    bool ok = true;
    if (mode == OrderMode::exact) {
      i64 g = u;
      for (int i = 0; i < r; ++i) g = std::gcd(g, n[i]);
      ok = g == 1;
    }
    int size = 0;
    if (ok)
      for (size_t a = 0; a < np; ++a)
        if (res[a] == 0) {
          if (inf[a]) {
            ok = false;
            break;
          }
          size += 2;
        }
    if (ok) {
      ++T.kept;
      if (size < T.target) ++T.below;
      if (size == T.target) ++T.attaining;
      if (!T.min_size || size < *T.min_size) {
        T.min_size = size;
        T.witness = FinVec(r);
        for (int i = 0; i < r; ++i) T.witness[i] = n[i];
      }
    }
    // odometer step
    for (int i = 0; i < r; ++i) {
      ++n[i];
      for (size_t a = 0; a < np; ++a) res[a] = (res[a] + M[a][i]) % u;
      if (n[i] < u) break;
      n[i] = 0;
    }
  }
  T.cond_i = T.below == 0;
  T.cond_ii = T.attaining > 0;
  T.exceptional = T.cond_i && T.cond_ii;
  return T;
}

std::set<int> sln_closed_form(int n, const Partition& p) {
  if (p.N() != n) throw DomainError("partition does not sum to n");
  int m = p.parts.front();
  size_t j = 0;
  while (j < p.parts.size() && p.parts[j] == m) ++j;
  if (p.parts.size() - j > 1) return {};
  if (j < p.parts.size() && p.parts[j] >= m) return {};
  return {m};
}

SheetData sheet_data_sln(int n, const Partition& p, int max_n) {
  if (n > max_n) throw DomainError("set-partition scan too large: n = " + std::to_string(n) + " > " + std::to_string(max_n));
  auto d = orbit_from_partition(Family::sl, p);
  const RootSystem& rs = d.R();
  SheetData S;
  S.part = p;
  S.dual = Partition{p.dual()};
  S.m = p.parts.front();
  S.extremal = !sln_closed_form(n, p).empty();
  S.eigen_mults = S.dual.parts;
  S.target = target_size(d);
  std::vector<std::vector<char>> bad(n, std::vector<char>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        FinVec a(rs.dim);
        a[i] = 1;
        a[j] = -1;
        bad[i][j] = d.in_f[rs.root_index(a)];
      }
  std::vector<std::vector<int>> blocks;
  int top = n - S.m;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      ++S.subsystems;
      int rank = n - int(blocks.size()), size = 0;
      for (auto& b : blocks) size += int(b.size() * (b.size() - 1));
      S.max_rank = std::max(S.max_rank, rank);
      if (rank > top || size > S.target) S.bound_holds = false;
      if (rank == top && size == S.target) S.equality_attained = true;
      if (rank == top && size < S.target && !S.smaller_at_top_rank) {
        S.smaller_at_top_rank = true;
        S.witness = blocks;
      }
      return;
    }
    for (size_t k = 0; k < blocks.size(); ++k) {
      bool ok = std::none_of(blocks[k].begin(), blocks[k].end(), [&](int j) { return bad[i][j]; });
      if (!ok) continue;
      blocks[k].push_back(i);
      rec(i + 1);
      blocks[k].pop_back();
    }
    blocks.push_back({i});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
  return S;
}

std::vector<i64> scan_denominators(const NilpotentDatum& d) {
  const RootSystem& rs = d.R();
  Rat tx = *std::max_element(d.grade.begin(), d.grade.end());
  std::vector<i64> out;
  for (i64 u = 1; u < std::max(rs.h, 2); ++u)
    if (std::gcd(u, i64(rs.lacety)) == 1 && Rat(u) > tx) out.push_back(u);
  return out;
}

ExceptionalReport exceptional_report(const NilpotentDatum& d, std::uint64_t budget,
                                     const std::optional<std::vector<i64>>& us) {
  const RootSystem& rs = d.R();
  ExceptionalReport R;
  R.algebra = algebra_name(rs);
  R.orbit = d.label;
  R.partition = d.partition;
  R.principal = d.dim_gf == rs.rank;
  R.theta_x = *std::max_element(d.grade.begin(), d.grade.end());
  if (rs.type == 'A' && d.partition) R.closed_form = sln_closed_form(rs.rank + 1, *d.partition);
  try {
    for (i64 u : us ? *us : scan_denominators(d)) {
      auto t = torus_scan(d, u, OrderMode::exact, budget);
      auto t2 = torus_scan(d, u, OrderMode::divides, budget);
      R.verdicts.push_back({u, t.cond_i, t.cond_ii, t.exceptional, t2.exceptional});
    }
  } catch (const DomainError& e) {
    R.error = e.what();
  }
  std::vector<i64> ex;
  for (auto& v : R.verdicts)
    if (v.exceptional) ex.push_back(v.u);
  R.in_E0 = !R.principal && !ex.empty();
  if (ex.size() == 1) R.phi = ex[0];
  return R;
}

FamilyScan family_scan(Family fam, int N, int threads, std::uint64_t budget) {
  if (fam == Family::sl) throw DomainError("family scan covers so and sp only");
  if (N > 13) throw DomainError("family scan is limited to N <= 13");
  FamilyScan C;
  C.algebra = family_name(fam) + std::to_string(N);
  std::vector<NilpotentDatum> orbits;
  for (auto& d : all_orbits(fam, N))
    if (d.principal_type && d.very_even_class != 2) orbits.push_back(d);
  C.rows.resize(orbits.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next++) < orbits.size();) C.rows[i] = exceptional_report(orbits[i], budget);
  };
  int nt = std::max(1, std::min<int>(threads, int(orbits.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& a : C.rows)
    for (auto& b : C.rows) {
      if (!a.in_E0 || !b.in_E0 || !a.phi || !b.phi || !a.partition || !b.partition) continue;
      if (dominates(*a.partition, *b.partition) && *a.phi < *b.phi) C.phi_order_preserving = false;
    }
  return C;
}

std::vector<std::string> report_json_rows(const ExceptionalReport& r) {
  std::vector<std::string> out;
  for (auto& v : r.verdicts) {
    nlohmann::ordered_json j;
    j["algebra"] = r.algebra;
    j["partition"] = r.partition ? r.partition->str() : r.orbit;
    j["u"] = v.u;
    j["cond_i"] = v.cond_i;
    j["cond_ii"] = v.cond_ii;
    j["exceptional"] = v.exceptional;
    j["phi"] = r.phi ? nlohmann::ordered_json(*r.phi) : nlohmann::ordered_json(nullptr);
    if (r.closed_form) j["closed_form_match"] = v.exceptional == (r.closed_form->count(int(v.u)) > 0);
    else j["closed_form_match"] = nullptr;
    out.push_back(j.dump());
  }
  return out;
}

}  // namespace wexc
