#pragma once

#include <map>
#include <string>
#include <vector>

#include "wexc/rational.hpp"

namespace wexc {

enum class Lattice { Q, Qv, P, Qstar };

struct RootSystem {
  char type = 'A';
  int rank = 0;
  int dim = 0;  // ambient dimension of the realization
  Rat c;        // (v|w) = c * dot(v, w)
  std::vector<FinVec> simple;
  std::vector<FinVec> pos;    // Δ₊, sorted by height then lex
  std::vector<FinVec> roots;  // Δ = Δ₊ followed by -Δ₊
  std::vector<std::vector<i64>> pos_coeffs;  // simple-root coordinates of Δ₊
  FinVec rho, rhov, theta, theta_s;
  int h = 0, hv = 0, lacety = 1;
  std::vector<FinVec> simple_coroots;  // basis of Q∨
  std::vector<FinVec> fund;            // Λ_i, basis of P
  std::vector<FinVec> qstar;           // ω*_i, basis of Q*
  std::vector<Mat> sref;
  std::map<FinVec, int> index;  // root -> position in roots

  std::string label() const { return std::string(1, type) + std::to_string(rank); }
  Rat form(const FinVec& a, const FinVec& b) const { return c * dot(a, b); }
  Rat norm2(const FinVec& a) const { return form(a, a); }
  FinVec coroot(const FinVec& a) const { return (Rat(2) / norm2(a)) * a; }
  int root_index(const FinVec& a) const {
    auto it = index.find(a);
    return it == index.end() ? -1 : it->second;
  }
  bool is_root(const FinVec& a) const { return index.count(a) > 0; }
  bool is_positive(const FinVec& a) const { return root_index(a) >= 0 && root_index(a) < int(pos.size()); }
  // coordinates in the basis of simple roots
  FinVec simple_coords(const FinVec& v) const;
  FinVec from_simple_coords(const FinVec& n) const;
  FinVec from_qstar_coords(const FinVec& n) const;
  int dim_g() const { return rank + int(roots.size()); }
  Mat reflection_matrix(const FinVec& a) const;
  FinVec project(const FinVec& v) const;  // orthogonal projection onto span(Δ)
  const std::vector<FinVec>& basis(Lattice l) const;
};

RootSystem build_root_system(char type, int rank);
RootSystem build_root_system(const std::string& label);  // e.g. "A2", "G2"

FinVec reflect(const RootSystem& rs, const FinVec& alpha, const FinVec& v);

struct WeylElement {
  std::vector<int> word;  // w = s_{word[0]} s_{word[1]} ...
  Mat m;
  int sign() const { return (word.size() % 2) ? -1 : 1; }
  FinVec apply(const FinVec& v) const { return matvec(m, v); }
};

WeylElement weyl_identity(const RootSystem& rs);
WeylElement weyl_from_word(const RootSystem& rs, const std::vector<int>& word);
WeylElement weyl_mul(const RootSystem& rs, const WeylElement& a, const WeylElement& b);
WeylElement weyl_inverse(const RootSystem& rs, const WeylElement& a);
// w with w(v) dominant, built by greedy descent
WeylElement to_dominant(const RootSystem& rs, const FinVec& v);
WeylElement longest_element(const RootSystem& rs);
// all of W via breadth-first search on the orbit of rho
std::vector<WeylElement> weyl_group(const RootSystem& rs, size_t limit = 100000);

std::vector<FinVec> lattice_members(const RootSystem& rs, Lattice l, long lo, long hi);

}  // namespace wexc
