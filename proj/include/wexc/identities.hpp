#pragma once

#include <string>
#include <vector>

#include "wexc/characters.hpp"

namespace wexc {

// Worked examples with closed-form answers, shared by the CLI and the acceptance run.

struct IdentityCheck {
  bool equal = false;
  int sign = 0;  // for comparisons up to sign
  QSeries lhs, rhs;
  std::string detail;
};

NilpotentDatum sl3_minimal_orbit();
// M_p: ȳ = 1, β = -Λ₁, u = 2
std::vector<PrincipalAdmissible> sl3_minimal_mp(i64 p);
// s with w̄Λ₂ = s·b₁
Rat sl3_lambda2_scale(const NilpotentDatum& d);

// ψ(τ, zΛ₂^R, t) = e^{6πit} η(τ) θ(τ, z)
IdentityCheck sl3_denominator_identity(int order);
// C/ψ = e^{-3πit}
IdentityCheck sl3_extra_factor(const PrincipalAdmissible& L, int order);
// χ_{H(L(Λ))}(τ, zΛ₂^R, t) = e^{-3πit} χ_{L(Λ⁰)}(2τ, zΛ₂^R - τΛ₁^R, ·), cross-multiplied by both denominators
// numerator defaults to numerator_B(L, ·, order)
IdentityCheck sl3_character_identity(const PrincipalAdmissible& L, int order, const QSeries* numerator = nullptr);
// B = χ ψ, multiplying back the binomials that were cancelled from χ
QSeries recover_numerator(const NilpotentDatum& d, const Fraction& chi, int order);

NilpotentDatum g2_short_root_orbit();
// C/ψ = e^{-4πit} f(τ,z)/f(2τ,2z), with z normalised by some α(b₁), α ∈ S; cross-multiplied
IdentityCheck g2_extra_factor(const PrincipalAdmissible& L, int order);

// f_u orbit (u,...,u,s) of sl_n
Partition sln_fm_partition(int n, int m);
struct SlnExtraFactorCheck {
  int n = 0, u = 0;
  i64 p = 0;
  int compared = 0;
  bool z_free = true, all_match = true;
  std::vector<int> signs;
};
SlnExtraFactorCheck sln_extra_factor_check(int n, int u, int order, int max_weights = 3);

struct NumericCheck {
  std::string name;
  double deviation = 0, bound = 0;  // |lhs - rhs| and the truncation error allowed on top of the tolerance
  bool ok = false;
};
// η(-1/τ) = (-iτ)^{1/2} η(τ) and f(-1/τ, s/τ) = -i e^{πis²/τ} f(τ, s)
std::vector<NumericCheck> s_transform_checks(cplx tau, double tol, int order = 40);
// χ_i(-1/τ) = prefactor Σ_j a_ij χ_j(τ) for the principal sl₂ orbit
std::vector<NumericCheck> s_relation_checks(i64 p, i64 u, cplx tau, double tol, int order);
// every non-zero character of the principal sl₂ (p,u) family has exponents in s^f + ℤ
bool t_phase_checks(i64 p, i64 u, int order);

}  // namespace wexc
