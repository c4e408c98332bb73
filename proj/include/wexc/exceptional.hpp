#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wexc/admissible.hpp"
#include "wexc/nilpotent.hpp"

namespace wexc {

// vanishing: some α with α|h^f = 0 has (α|β) ∈ uℤ
bool vanishing_form_b(const PrincipalAdmissible& L, const NilpotentDatum& d);
// the same, read off the integral roots of the weight itself
bool vanishing_form_c(const PrincipalAdmissible& L, const NilpotentDatum& d);
// both forms; throws std::logic_error if they disagree
bool vanishing_test(const PrincipalAdmissible& L, const NilpotentDatum& d);

// restrictions of Δ^R_{Λ,+} to h^f, in the hf basis
std::vector<std::vector<Rat>> integral_restrictions(const PrincipalAdmissible& L, const NilpotentDatum& d);

struct MultisetMatch {
  bool matched = false;
  bool multipliers_positive = false;
};
MultisetMatch multiset_match(const PrincipalAdmissible& L, const NilpotentDatum& d);

enum class ConvergenceMode { multiset, positivity };
bool almost_convergence_test(const PrincipalAdmissible& L, const NilpotentDatum& d, ConvergenceMode mode);

enum class OrderMode { exact, divides };

struct TorusScan {
  i64 u = 0;
  OrderMode mode = OrderMode::exact;
  int target = 0;                   // |Δ⁰ ∪ Δ^{1/2}|
  std::uint64_t scanned = 0, kept = 0, below = 0, attaining = 0;
  std::optional<int> min_size;      // min |Δ_Λ| over kept Λ
  FinVec witness;                   // a kept Λ of minimal |Δ_Λ|, in Q* coordinates times u
  bool cond_i = true, cond_ii = false, exceptional = false;
};
constexpr std::uint64_t default_scan_budget = 10'000'000;
TorusScan torus_scan(const NilpotentDatum& d, i64 u, OrderMode mode = OrderMode::exact,
                     std::uint64_t budget = default_scan_budget);
// roots α with (Λ|α) ∈ ℤ
std::vector<int> torus_delta(const RootSystem& rs, const FinVec& lam);

// exceptional denominators u <= n predicted for an sl_n partition: {m} for (m,...,m,s), 0 <= s < m
std::set<int> sln_closed_form(int n, const Partition& p);

struct SheetData {
  Partition part, dual;
  int m = 0;
  bool extremal = false;          // f = f_m
  std::vector<int> eigen_mults;   // Sh⁰_f: m distinct eigenvalues with these multiplicities
  int target = 0;                 // |Δ⁰ ∪ Δ^{1/2}|
  std::uint64_t subsystems = 0;   // Φ ⊂ Δ \ Δ^f scanned
  int max_rank = 0;
  bool bound_holds = true;        // rank Φ <= n-m and |Φ| <= target for all Φ
  bool equality_attained = false;
  bool smaller_at_top_rank = false;
  std::vector<std::vector<int>> witness;  // blocks of a top-rank Φ with |Φ| < target
};
SheetData sheet_data_sln(int n, const Partition& p, int max_n = 12);

struct UVerdict {
  i64 u = 0;
  bool cond_i = false, cond_ii = false, exceptional = false;
  bool divides_exceptional = false;  // verdict under the "s^u = 1" reading
};

struct ExceptionalReport {
  std::string algebra, orbit;
  std::optional<Partition> partition;
  bool principal = false;
  Rat theta_x;  // (θ|x)
  std::vector<UVerdict> verdicts;
  std::optional<std::set<int>> closed_form;  // sl only
  bool in_E0 = false;
  std::optional<i64> phi;  // the exceptional denominator when it is unique
  std::string error;       // budget or other failure for this orbit
};

// u ∈ I₀ ∪ {1} with u > (θ|x)
std::vector<i64> scan_denominators(const NilpotentDatum& d);
// denominators default to scan_denominators(d)
ExceptionalReport exceptional_report(const NilpotentDatum& d, std::uint64_t budget = default_scan_budget,
                                     const std::optional<std::vector<i64>>& us = std::nullopt);

struct FamilyScan {
  std::string algebra;
  std::vector<ExceptionalReport> rows;
  bool phi_order_preserving = true;  // with respect to dominance on E₀
};
// every principal-type orbit of so_N or sp_N (very even pairs identified)
FamilyScan family_scan(Family fam, int N, int threads = 1, std::uint64_t budget = default_scan_budget);

// one JSON object per (orbit, u)
std::vector<std::string> report_json_rows(const ExceptionalReport& r);

}  // namespace wexc
