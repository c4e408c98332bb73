#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wexc {

using Rat = mpq_class;
using i64 = std::int64_t;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat rat(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_int(const Rat& r) { return r.get_den() == 1; }

inline i64 to_i64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return z.get_si();
}

inline i64 num_i64(const Rat& r) { return to_i64(r.get_num()); }
inline i64 den_i64(const Rat& r) { return to_i64(r.get_den()); }

inline i64 as_int(const Rat& r) {
  if (!is_int(r)) throw std::logic_error("expected integer, got " + r.get_str());
  return num_i64(r);
}

inline mpz_class floor_rat(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rat frac_part(const Rat& r) { return r - Rat(floor_rat(r)); }

inline std::string to_str(const Rat& r) {
  if (is_int(r)) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline i64 lcm64(i64 a, i64 b) { return std::lcm(a, b); }

// overflow-checked helpers for series coefficients
inline i64 add_ck(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow (add)");
  return r;
}
inline i64 mul_ck(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow (mul)");
  return r;
}

using FinVec = std::vector<Rat>;
using Mat = std::vector<FinVec>;  // row-major

FinVec zero_vec(int n);
FinVec operator+(const FinVec& a, const FinVec& b);
FinVec operator-(const FinVec& a, const FinVec& b);
FinVec operator-(const FinVec& a);
FinVec operator*(const Rat& s, const FinVec& a);
Rat dot(const FinVec& a, const FinVec& b);
bool is_zero(const FinVec& a);
std::string to_str(const FinVec& v);

Mat identity(int n);
Mat matmul(const Mat& a, const Mat& b);
FinVec matvec(const Mat& a, const FinVec& v);
Mat transpose(const Mat& a);

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(Mat& a);
int rank(Mat a);
// basis of {x : A x = 0}, one vector per free column
std::vector<FinVec> nullspace(const Mat& a);
// solve A x = b (A square, invertible)
FinVec solve(const Mat& a, const FinVec& b);
Mat inverse(const Mat& a);

// smallest positive multiple with coprime integer entries, first nonzero entry positive
FinVec primitive(const FinVec& v);
i64 common_den(const FinVec& v);

}  // namespace wexc
