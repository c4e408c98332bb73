#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wexc/rational.hpp"

namespace wexc {

using cplx = std::complex<double>;

// One term q^{q/L} e^{2πi (t/T) t} Π_j e^{πi z_j a_j / M}.
// Keys are laid out as [q, t, a_1, ..., a_nz] so that maps iterate in q order.
using MonoKey = std::vector<i64>;

struct EvalPoint {
  cplx tau;
  std::vector<cplx> z;
  cplx t = 0;
};

struct Evaluation {
  cplx value;
  double error_bound = 0;
};

class QSeries {
 public:
  i64 L = 1, T = 1, M = 1;
  int nz = 0;
  // terms are exact for q-exponents <= cut/L; nullopt means exact everywhere
  std::optional<i64> cut;
  std::map<MonoKey, i64> terms;

  QSeries() = default;
  explicit QSeries(int nz_) : nz(nz_) {}

  static QSeries zero(int nz, std::optional<Rat> cut = std::nullopt);
  static QSeries one(int nz);
  // c q^qe e^{2πi te t} e^{πi Σ zc_j z_j}
  static QSeries monomial(int nz, const Rat& qe, const Rat& te, const std::vector<Rat>& zc, i64 c = 1);

  bool empty() const { return terms.empty(); }
  size_t size() const { return terms.size(); }
  std::optional<Rat> cut_rat() const;
  Rat min_q() const;  // lowest q-exponent present; requires non-empty
  Rat q_of(const MonoKey& k) const { return rat(k[0], L); }
  Rat t_of(const MonoKey& k) const { return rat(k[1], T); }
  // z exponent of a key as coefficients of πi z_j
  std::vector<Rat> z_of(const MonoKey& k) const;

  void add_term(const Rat& qe, const Rat& te, const std::vector<Rat>& zc, i64 c);
  i64 coeff(const Rat& qe, const Rat& te, const std::vector<Rat>& zc) const;

  QSeries regrid(i64 L2, i64 T2, i64 M2) const;
  QSeries truncated(const Rat& qmax) const;
  QSeries operator-() const;
  QSeries scaled(i64 c) const;
  // multiply by q^qe e^{2πi te t} e^{πi Σ zc_j z_j}
  QSeries shifted(const Rat& qe, const Rat& te, const std::vector<Rat>& zc) const;

  // unit-leading inverse and quotient; throws DomainError if the lowest q-grade is not ±monomial
  bool unit_leading() const;
  QSeries inverse() const;

  // exact quotient by (1 - e^{πi Σ zc_j z_j}); nullopt when not divisible
  std::optional<QSeries> div_binomial(const std::vector<Rat>& zc) const;
  // z = S w with S an nz x n' rational matrix
  QSeries substitute_z(const Mat& S) const;
  // z -> 0: sum coefficients over z exponents
  QSeries at_z_zero() const;
  // keep only the given t exponent, dropping t
  bool single_t(Rat* te = nullptr) const;

  Evaluation evaluate(const EvalPoint& pt) const;

  // records (q, z, t, coeff) in canonical order
  std::string serialize() const;
  std::string str(int max_terms = 40) const;
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const QSeries& a, const QSeries& b);
QSeries operator/(const QSeries& a, const QSeries& b);
// equal on the common range of validity
bool same_series(const QSeries& a, const QSeries& b, std::string* why = nullptr);

// bring two series to common grids
void unify(QSeries& a, QSeries& b);

// special series; s = Σ sc_j z_j, order counts q-powers beyond the leading exponent
QSeries eta_series(int nz, int order);
QSeries f_series(const std::vector<Rat>& sc, int order);
QSeries theta_product(const std::vector<Rat>& sc, int order);
QSeries theta_sum(const std::vector<Rat>& sc, int order);
// Π_{n>=n0, step} (1 - q^{n} e^{2πi s}) with s = Σ sc_j z_j (n0 may be 0), truncated at qmax
QSeries q_pochhammer(const std::vector<Rat>& sc, const Rat& n0, const Rat& step, const Rat& qmax);

}  // namespace wexc
