#include "wexc/rational.hpp"

#include <sstream>

namespace wexc {

FinVec zero_vec(int n) { return FinVec(n, Rat(0)); }

FinVec operator+(const FinVec& a, const FinVec& b) {
  FinVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

FinVec operator-(const FinVec& a, const FinVec& b) {
  FinVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

FinVec operator-(const FinVec& a) {
  FinVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

FinVec operator*(const Rat& s, const FinVec& a) {
  FinVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Rat dot(const FinVec& a, const FinVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const FinVec& a) {
  for (auto& x : a)
    if (x != 0) return false;
  return true;
}

std::string to_str(const FinVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_str(v[i]);
  os << ")";
  return os.str();
}

Mat identity(int n) {
  Mat m(n, zero_vec(n));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat matmul(const Mat& a, const Mat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat r(n, FinVec(m, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (size_t l = 0; l < m; ++l) r[i][l] += a[i][j] * b[j][l];
    }
  return r;
}

FinVec matvec(const Mat& a, const FinVec& v) {
  FinVec r(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], v);
  return r;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), FinVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<int> rref(Mat& a) {
  std::vector<int> piv;
  if (a.empty()) return piv;
  size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rat inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    piv.push_back(int(c));
    ++r;
  }
  return piv;
}

int rank(Mat a) { return int(rref(a).size()); }

std::vector<FinVec> nullspace(const Mat& a0) {
  Mat a = a0;
  if (a.empty()) return {};
  int cols = int(a[0].size());
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<FinVec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    FinVec v = zero_vec(cols);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
    basis.push_back(v);
  }
  return basis;
}

Mat inverse(const Mat& a) {
  int n = int(a.size());
  Mat aug(n, FinVec(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (int(piv.size()) < n || piv[n - 1] != n - 1) throw std::logic_error("singular matrix");
  Mat inv(n, FinVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

FinVec solve(const Mat& a, const FinVec& b) { return matvec(inverse(a), b); }

i64 common_den(const FinVec& v) {
  i64 d = 1;
  for (auto& x : v) d = lcm64(d, den_i64(x));
  return d;
}

FinVec primitive(const FinVec& v) {
  if (is_zero(v)) return v;
  Rat d = Rat(common_den(v));
  FinVec w = d * v;
  mpz_class g = 0;
  for (auto& x : w) g = gcd(g, x.get_num());
  for (auto& x : w) x /= Rat(g);
  for (auto& x : w) {
    if (x == 0) continue;
    if (x < 0) w = -w;
    break;
  }
  return w;
}

}  // namespace wexc
