#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wexc/roots.hpp"

namespace wexc {

enum class Family { sl, so, sp };

struct Partition {
  std::vector<int> parts;  // weakly decreasing
  int N() const;
  std::vector<int> dual() const;
  int mult(int m) const;
  std::string str() const;
};

Partition parse_partition(const std::string& s);  // "3,2,2,1"
std::vector<Partition> partitions_of(int n);
bool partition_valid(Family fam, const Partition& p, std::string* why = nullptr);
// root system of sl_N, so_N, sp_N
RootSystem classical_algebra(Family fam, int N);
std::string family_name(Family fam);
Family parse_family(const std::string& s);

// closure of orbit(p) contains orbit(q)
bool dominates(const Partition& p, const Partition& q);

struct NaturalRep {
  int N = 0;
  std::vector<FinVec> wt;  // weight of each basis vector (ambient coordinates)
  Mat J;                   // invariant form, empty for sl
  Family fam = Family::sl;
};

NaturalRep natural_rep(const RootSystem& rs);
Mat root_vector(const RootSystem& rs, const NaturalRep& rep, const FinVec& alpha);

struct NilpotentDatum {
  std::shared_ptr<const RootSystem> rs;
  std::string label;
  std::optional<Partition> partition;
  int very_even_class = 0;  // 1 or 2 for so_{4n} very even orbits
  FinVec x;                 // in h* via the form: α(x) = (α|x)
  std::vector<FinVec> gammas;
  std::optional<Mat> fmat;
  std::optional<NaturalRep> rep;

  // derived
  std::vector<Rat> grade;         // α(x) per root index
  std::vector<FinVec> hf;         // integer basis of h^f (as vectors in h*)
  std::vector<FinVec> res;        // α|h^f in the basis hf: ((α|b_j))_j
  std::vector<bool> in_f;         // α ∈ Δ^f
  FinVec h0;
  std::vector<bool> newpos;       // α ∈ Δ^new₊
  std::vector<Rat> s;             // s_α
  WeylElement wbar;               // Δ^new₊ = w̄(Δ₊)
  int dim_g0 = 0, dim_g12 = 0, dim_gf = 0;
  bool principal_type = false;
  int expected_hf_rank = -1;

  const RootSystem& R() const { return *rs; }
  int hf_dim() const { return int(hf.size()); }
  std::vector<int> roots_with_grade(const Rat& j) const;
  // α ∈ Δ^new₊ with α(x) ∈ {0, 1/2}
  std::vector<int> psi_roots() const;
  std::vector<int> delta00() const;
  int dim_g(const Rat& j) const;
};

NilpotentDatum orbit_from_partition(Family fam, const Partition& p, int very_even_class = 1);
NilpotentDatum orbit_from_root_vector(const RootSystem& rs, const FinVec& gamma);
NilpotentDatum principal_orbit(const RootSystem& rs);
NilpotentDatum zero_orbit(const RootSystem& rs);
// all orbits of a classical algebra, very even ones split in two
std::vector<NilpotentDatum> all_orbits(Family fam, int N);
// parse "2,1" / "principal" / "zero" / "root:<i>" for a given algebra
NilpotentDatum orbit_by_name(Family fam, int N, const std::string& name);

bool principal_type_rule(Family fam, const Partition& p);
int reductive_centralizer_rank(Family fam, const Partition& p);

// Jordan block sizes of a nilpotent matrix
Partition jordan_type(const Mat& f);

}  // namespace wexc
