#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wexc/admissible.hpp"
#include "wexc/nilpotent.hpp"
#include "wexc/qseries.hpp"

namespace wexc {

Rat central_charge(const NilpotentDatum& d, const Rat& k);

struct TwistConstants {
  Rat s_g, s_ch, s_ne;
  FinVec gamma_prime;
  AffineVector rho_hat_R;  // h∨D - γ' + (...)K
};
TwistConstants twist_constants(const NilpotentDatum& d, const Rat& k);
// (Λ̄|Λ̄+2ρ̄̂^R)/2(k+h∨) + s_g and (Λ|Λ+2ρ̂^R)/2(k+h∨) - Λ(D), for comparison
std::pair<Rat, Rat> lemma27b_sides(const NilpotentDatum& d, const Rat& k, const AffineVector& lam);

// Substitution used to evaluate an affine theta function on h^f:
//   τ' = aτ,  z' = Σ_j z_j Z_j + τ c,  t' = t0 t + Σ_j ℓ_j z_j + d τ
// Z_j, c live in the ambient space of the root system.
struct EvalMap {
  Rat a = 1;
  std::vector<FinVec> Z;
  FinVec c;
  Rat t0 = 1;
  std::vector<Rat> ell;
  Rat d = 0;
  int nz() const { return int(Z.size()); }
};

// Σ_w ε(w) e^{w(μ̂)} over the group generated by reflections in `simple` (affine coroots
// fin + kc K), at level m, evaluated through `em`, complete for q-exponents <= qmax.
// μ0 must pair strictly positively with every element of `simple`.
QSeries theta_orbit_series(const RootSystem& rs, const FinVec& mu0, const Rat& m,
                           const std::vector<AffineVector>& simple, const EvalMap& em, const Rat& qmax);
std::vector<AffineVector> standard_simple_coroots(const RootSystem& rs);
// A_{λ+ρ̂}(em) for λ̂ = λ + pD ... with λ+ρ at level m in the standard alcove
QSeries affine_numerator(const RootSystem& rs, const FinVec& lam_plus_rho, const Rat& m, const EvalMap& em,
                         const Rat& qmax);
// A_ρ̂(em) from the Weyl denominator product, an independent route to the denominator
QSeries affine_denominator_product(const RootSystem& rs, const EvalMap& em, const Rat& qmax);

// ψ pieces; z is given in the basis d.hf
struct PsiForms {
  QSeries unit;                         // ψ with the (1 - e^{-2πiα(z)}) factors removed
  std::vector<std::vector<Rat>> bins;   // z-exponents (πi units) of those factors
  QSeries product_form, eta_f_form;        // product over roots and the η^r Π f form
  bool forms_agree = false;
};
PsiForms denominator_psi(const NilpotentDatum& d, int order);
// Π_{n=1..} det_{g^f}(1 - q^n e^{2πiz}) versus (1-q^n)^r Π_S (1-q^n e^{∓2πiα(z)}), to q^order
struct DetCheck {
  QSeries det_side, root_side;
  bool equal = false;
  std::vector<std::pair<std::vector<Rat>, int>> weights;  // h^f weights of g^f with multiplicity
};
DetCheck det_identity(const NilpotentDatum& d, int order);

enum class BRoute { theta_sum, alternating_sum };
// standard-frame numerator restricted to h^f (z in hf coordinates)
EvalMap numerator_map(const NilpotentDatum& d, const PrincipalAdmissible& L);
QSeries numerator_B(const PrincipalAdmissible& L, const NilpotentDatum& d, int order,
                    BRoute route = BRoute::alternating_sum);
QSeries extra_C(const PrincipalAdmissible& L, const NilpotentDatum& d, int order, bool use_product = false);

// num / Π_b (1 - e^{πi b·z})
struct Fraction {
  QSeries num;
  std::vector<std::vector<Rat>> bins;
  bool is_zero() const { return num.empty(); }
};
Fraction make_fraction(QSeries num, const std::vector<std::vector<Rat>>& bins);

struct CharacterBundle {
  PrincipalAdmissible lam;
  QSeries psi, B;
  Fraction chi;
  Rat h, c, sf;
  Rat lowest;  // h - c/24
  bool vanishes = false;
};
CharacterBundle ep_character(const PrincipalAdmissible& L, const NilpotentDatum& d, int order);
Rat minimal_eigenvalue(const PrincipalAdmissible& L, const NilpotentDatum& d);
Rat sf_exponent(const PrincipalAdmissible& L, const NilpotentDatum& d);
// every exponent of the series minus s^f is an integer
bool t_phase_exact(const QSeries& s, const Rat& sf);

// C/ψ as a fraction
Fraction extra_factor(const PrincipalAdmissible& L, const NilpotentDatum& d, int order);
// closed form for sl_n, f = f_u: returns a(t) q^b (...)^{s'-1} M(q) without the sign
QSeries sln_extra_factor_closed_form(int n, int u, int order);
// equal up to an overall sign; sign reported in *sign (0 when neither)
bool match_up_to_sign(const QSeries& a, const QSeries& b, int* sign);

struct ModularData {
  std::vector<PrincipalAdmissible> weights;
  std::vector<std::vector<std::complex<double>>> a;
  Mat Q;  // Gram matrix of Q on the basis hf
  cplx prefactor;  // (-i)^{(dim g - dim g^f)/2}
};
std::complex<double> s_entry(const RootSystem& rs, const PrincipalAdmissible& L1, const PrincipalAdmissible& L2);
ModularData modular_data(const NilpotentDatum& d, i64 p, i64 u);
Mat q_form(const NilpotentDatum& d, const Rat& k);

struct Asymptotics {
  cplx A_beta;
  double a_lam0 = 0;
  Rat g_k, growth;
};
// z in hf coordinates; throws DomainError for non-generic z
Asymptotics asymptotics(const PrincipalAdmissible& L, const NilpotentDatum& d, const std::vector<cplx>& z);

struct LowestCoefficient {
  bool vanishes = false;
  bool finite_limit = false;
  Rat limit;            // from the W_Λ sum
  Rat limit_series;     // from the series lowest grade
  Rat naive_product;    // Π (λ+ρ|α)/(ρ|α) over Δ_{Λ,+}; not the limit in general
  // Π (λ+ρ|α)/(ρ_Λ|α) times the limit of Π_{Δ_{Λ,+}} α(z) / Π_S α(z); set when the latter is direction free
  std::optional<Rat> weyl_product;
};
// restrictions grouped by line: direction (primitive, first nonzero > 0) -> scalars
std::map<std::vector<Rat>, std::vector<Rat>> line_classes(const std::vector<std::vector<Rat>>& forms);
LowestCoefficient lowest_coefficient(const PrincipalAdmissible& L, const NilpotentDatum& d);
// z -> 0 limit of Σ c_i e^{2πi(a_i|z)} / Π_b (1 - e^{-2πi(b|z)}) along generic lines; nullopt if infinite
std::optional<Rat> zero_limit(const std::vector<std::pair<std::vector<Rat>, i64>>& num,
                              const std::vector<std::vector<Rat>>& den);

struct PrincipalW {
  QSeries chi;  // q only
  Rat h, c;
};
Rat principal_w_central_charge(const RootSystem& rs, i64 p, i64 u);
Rat principal_w_h(const RootSystem& rs, i64 p, i64 u, const PairLabel& lm);
PrincipalW principal_w_character(const RootSystem& rs, const PairLabel& lm, i64 p, i64 u, int order);

struct StrangeVerdict {
  bool applicable = false;
  std::string reason;
  Rat lhs, rhs;
  bool holds = false;
};
// `exceptional` is supplied by the caller (torus scan); nullopt skips that precondition
StrangeVerdict strange_formula_check(const NilpotentDatum& d, i64 p, i64 u, std::optional<bool> exceptional);

// finite W-algebra character
struct FiniteWInput {
  std::vector<std::pair<FinVec, i64>> numerator;  // Σ c e^{λ}
  std::vector<FinVec> wf_generators;              // γ_i
};
struct FiniteWCharacter {
  std::vector<std::pair<std::vector<Rat>, i64>> numerator;  // exponents λ(b_j)
  std::vector<std::vector<Rat>> denominator;                 // α(b_j), factors (1 - e^{-α})
};
FiniteWCharacter finite_w_character(const NilpotentDatum& d, const FiniteWInput& in);
// e^{s.λ}|h^f = e^{λ}|h^f for each generator reflection s and each numerator weight
bool wf_restriction_invariant(const NilpotentDatum& d, const FiniteWInput& in);
// Σ_y ε(y)ε(w) P̃_{y,w}(1) e^{y.Λ}
FiniteWInput kl_numerator(const RootSystem& rs, const FinVec& lam, const WeylElement& w,
                          const std::vector<std::pair<WeylElement, i64>>& ptilde,
                          const std::vector<FinVec>& wf_generators);

}  // namespace wexc
