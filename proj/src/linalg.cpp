#include "permucat/linalg.hpp"

#include <stdexcept>

namespace permucat {

int rank_q(QMatrix m) {
  int rows = static_cast<int>(m.size());
  if (!rows) return 0;
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = r + 1; i < rows; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j)
        if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

QMatrix identity_q(int n) {
  QMatrix id(n, std::vector<mpq_class>(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

QMatrix inverse_q(const QMatrix& a) {
  int n = static_cast<int>(a.size());
  QMatrix m = a, inv = identity_q(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (sgn(m[i][c]) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::runtime_error("singular matrix");
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    mpq_class p = m[c][c];
    for (int j = 0; j < n; ++j) {
      m[c][j] /= p;
      inv[c][j] /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      mpq_class f = m[i][c];
      for (int j = 0; j < n; ++j) {
        m[i][j] -= f * m[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

QMatrix multiply_q(const QMatrix& a, const QMatrix& b) {
  std::size_t n = a.size(), k = b.size(), p = k ? b[0].size() : 0;
  QMatrix out(n, std::vector<mpq_class>(p, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (sgn(a[i][l]) == 0) continue;
      for (std::size_t j = 0; j < p; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

mpq_class det_q(QMatrix m) {
  int n = static_cast<int>(m.size());
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (sgn(m[i][c]) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace permucat
