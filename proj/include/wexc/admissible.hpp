#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wexc/roots.hpp"

namespace wexc {

// fin + kc*K + dc*D; (K|D) = 1, (K|K) = (D|D) = 0
struct AffineVector {
  FinVec fin;
  Rat kc, dc;
  Rat level() const { return dc; }
  bool operator==(const AffineVector& o) const { return fin == o.fin && kc == o.kc && dc == o.dc; }
  bool operator<(const AffineVector& o) const {
    if (fin != o.fin) return fin < o.fin;
    if (kc != o.kc) return kc < o.kc;
    return dc < o.dc;
  }
};

Rat affine_form(const RootSystem& rs, const AffineVector& a, const AffineVector& b);
// t_β(v) = v + (v|K)β - (|β|²(v|K)/2 + (v|β))K
AffineVector translate(const RootSystem& rs, const FinVec& beta, const AffineVector& v);
// real affine coroot α∨ + nK (n ∈ ℓℤ when α is short)
bool is_affine_coroot(const RootSystem& rs, const AffineVector& v);
bool is_positive_affine_coroot(const RootSystem& rs, const AffineVector& v);

// comarks (Λ_i|θ∨) and marks (ω*_i|θ)
std::vector<i64> comarks(const RootSystem& rs);
std::vector<i64> marks(const RootSystem& rs);
// finite parts of P̂₊ at the given level
std::vector<FinVec> dominant_integral(const RootSystem& rs, i64 level);
// finite parts of the dominant integral coweights P̂∨₊ at the given level
std::vector<FinVec> dominant_coweights(const RootSystem& rs, i64 level);

enum class VacuumCase { none, i, ii };
struct VacuumVerdict {
  bool admissible = false;
  VacuumCase which = VacuumCase::none;
  i64 p = 0, u = 0;
  std::string reason;
};
VacuumVerdict vacuum_admissible(const RootSystem& rs, const Rat& k);

struct PrincipalAdmissible {
  i64 p = 0, u = 0;
  Rat k;
  FinVec beta;   // in Q*
  WeylElement ybar;
  FinVec lam0;   // finite part of Λ⁰, level p - h∨
  FinVec lam;    // finite part of Λ, level k, Λ(D) = 0
  std::vector<AffineVector> simple_set;  // y(Ŝ_(u)), sorted

  AffineVector weight() const { return {lam, Rat(0), k}; }
  FinVec beta_prime() const;  // ȳ⁻¹β
};

struct AdmissibleSet {
  std::vector<PrincipalAdmissible> weights;  // sorted by lam
  std::string reason;                        // non-empty when the triple is rejected
};

AdmissibleSet enumerate_principal_admissible(const RootSystem& rs, i64 p, i64 u);
// y(Ŝ_(u)) for y = t_β ȳ
std::vector<AffineVector> simple_set(const RootSystem& rs, const WeylElement& ybar, const FinVec& beta, i64 u);
// (λ+ρ̂|α∨) ∉ -ℤ₊ for positive affine coroots with |K-coefficient| ≤ nmax
bool admissible_on_window(const RootSystem& rs, const AffineVector& lam, i64 nmax);

bool nondegenerate_iii(const RootSystem& rs, const WeylElement& ybar, const FinVec& beta, i64 u);
bool nondegenerate_iv(const RootSystem& rs, const FinVec& beta, i64 u);
// condition (iv), cross-checked against (iii)
bool is_nondegenerate(const RootSystem& rs, const PrincipalAdmissible& L);

// {α ∈ Δ : (α|β) ∈ uℤ} as indices into rs.roots
std::vector<int> delta_lambda(const RootSystem& rs, const FinVec& beta, i64 u);

// (lambda, mu) parametrization of non-degenerate weights
struct PairLabel {
  FinVec lam;  // P̂₊^{p-h∨}
  FinVec mu;   // P̂∨₊^{u-h}
  bool operator==(const PairLabel& o) const { return lam == o.lam && mu == o.mu; }
  bool operator<(const PairLabel& o) const { return lam != o.lam ? lam < o.lam : mu < o.mu; }
};

// t_γ w̄ preserving Π̂∨
struct ExtendedWeyl {
  FinVec gamma;
  WeylElement w;
};
std::vector<ExtendedWeyl> wtilde_plus(const RootSystem& rs);
i64 center_order(const RootSystem& rs);  // |Q*/Q∨|

// φ_ȳ applied to a weight of level k = p/u - h∨; nullopt if Λ ∉ P̂_ȳ
std::optional<PairLabel> pair_phi(const RootSystem& rs, i64 p, i64 u, const FinVec& lam, const WeylElement& ybar);
FinVec pair_psi(const RootSystem& rs, i64 p, i64 u, const WeylElement& ybar, const PairLabel& img);
PairLabel pair_canonical(const RootSystem& rs, i64 p, i64 u, const PairLabel& img);
// global φ: canonical class of Λ in I_{p,u}
PairLabel pair_class(const RootSystem& rs, const PrincipalAdmissible& L);
std::vector<PairLabel> pair_index_set(const RootSystem& rs, i64 p, i64 u);

}  // namespace wexc
