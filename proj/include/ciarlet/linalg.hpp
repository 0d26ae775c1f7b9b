#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciarlet/common.hpp"

namespace ciarlet::linalg {

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
  DenseMatrix() = default;

  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0)
  {
    if (rows <= 0 || cols <= 0)
      throw std::invalid_argument("DenseMatrix: dimensions must be positive");
  }

  static DenseMatrix identity(int n)
  {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j)
  {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const
  {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const
  {
    return a_.data() + static_cast<std::size_t>(i) * cols_;
  }

  DenseMatrix transposed() const
  {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const
  {
    double m = 0.0;
    for (double v : a_)
      m = std::max(m, std::abs(v));
    return m;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// C = A * B (ikj loop order).
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b)
{
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  const int n = a.rows(), k = a.cols(), m = b.cols();
  for (int i = 0; i < n; ++i)
  {
    double* ci = c.row(i);
    for (int l = 0; l < k; ++l)
    {
      const double ail = a(i, l);
      if (ail == 0.0)
        continue;
      const double* bl = b.row(l);
      for (int j = 0; j < m; ++j)
        ci[j] += ail * bl[j];
    }
  }
  return c;
}

inline std::vector<double> matvec(const DenseMatrix& a,
                                  const std::vector<double>& x)
{
  if (a.cols() != static_cast<int>(x.size()))
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
  {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j)
      s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline double norm2(const std::vector<double>& x)
{
  double s = 0.0;
  for (double v : x)
    s += v * v;
  return std::sqrt(s);
}

/// Thrown when elimination hits a pivot below the singularity threshold.
class singular_matrix_error : public std::runtime_error {
public:
  singular_matrix_error(int pivot, const std::string& what)
      : std::runtime_error(what), pivot_(pivot)
  {
  }
  int pivot_index() const { return pivot_; }

private:
  int pivot_;
};

/// LU factorization with partial pivoting. Pivots smaller than
/// 1e-14 * max|A| are treated as singular.
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix a) : lu_(std::move(a))
  {
    if (lu_.rows() != lu_.cols())
      throw std::invalid_argument("lu_factor: matrix must be square");
    const int n = lu_.rows();
    const double scale = lu_.max_abs();
    const double tiny = 1e-14 * (scale > 0.0 ? scale : 1.0);
    perm_.resize(n);
    for (int k = 0; k < n; ++k)
    {
      int prow = k;
      double pmax = std::abs(lu_(k, k));
      for (int i = k + 1; i < n; ++i)
      {
        const double v = std::abs(lu_(i, k));
        if (v > pmax)
        {
          pmax = v;
          prow = i;
        }
      }
      if (!(pmax > tiny))
        throw singular_matrix_error(
            k, "lu_factor: singular matrix, pivot " + std::to_string(k) +
                   " below threshold");
      perm_[k] = prow;
      if (prow != k)
        for (int j = 0; j < n; ++j)
          std::swap(lu_(k, j), lu_(prow, j));
      const double inv = 1.0 / lu_(k, k);
      for (int i = k + 1; i < n; ++i)
      {
        const double m = lu_(i, k) * inv;
        lu_(i, k) = m;
        if (m == 0.0)
          continue;
        for (int j = k + 1; j < n; ++j)
          lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  int size() const { return lu_.rows(); }

  std::vector<double> solve(std::vector<double> b) const
  {
    const int n = size();
    if (static_cast<int>(b.size()) != n)
      throw std::invalid_argument("lu_solve: dimension mismatch");
    // apply the full pivot sequence first; the stored multipliers refer
    // to the final row order
    for (int k = 0; k < n; ++k)
      if (perm_[k] != k)
        std::swap(b[k], b[perm_[k]]);
    for (int k = 0; k < n; ++k)
      for (int i = k + 1; i < n; ++i)
        b[i] -= lu_(i, k) * b[k];
    for (int i = n - 1; i >= 0; --i)
    {
      double s = b[i];
      for (int j = i + 1; j < n; ++j)
        s -= lu_(i, j) * b[j];
      b[i] = s / lu_(i, i);
    }
    return b;
  }

  /// Solve for every column of B.
  DenseMatrix solve_many(const DenseMatrix& b) const
  {
    const int n = size();
    if (b.rows() != n)
      throw std::invalid_argument("lu_solve: dimension mismatch");
    DenseMatrix x(n, b.cols());
    std::vector<double> col(n);
    for (int j = 0; j < b.cols(); ++j)
    {
      for (int i = 0; i < n; ++i)
        col[i] = b(i, j);
      col = solve(std::move(col));
      for (int i = 0; i < n; ++i)
        x(i, j) = col[i];
    }
    return x;
  }

private:
  DenseMatrix lu_;
  std::vector<int> perm_;
};

inline LuFactorization lu_factor(DenseMatrix a)
{
  return LuFactorization(std::move(a));
}

inline DenseMatrix invert(const DenseMatrix& a)
{
  LuFactorization f(a);
  return f.solve_many(DenseMatrix::identity(a.rows()));
}

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulated transformations (tred2, EISPACK lineage).
inline void tred2(DenseMatrix& v, std::vector<double>& d,
                  std::vector<double>& e)
{
  const int n = v.rows();
  for (int j = 0; j < n; ++j)
    d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i)
  {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k)
      scale += std::abs(d[k]);
    if (scale == 0.0)
    {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j)
      {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    }
    else
    {
      for (int k = 0; k < i; ++k)
      {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0)
        g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j)
        e[j] = 0.0;

      for (int j = 0; j < i; ++j)
      {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k)
        {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j)
      {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j)
        e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j)
      {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k)
          v(k, j) -= f * e[k] + g * d[k];
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i)
  {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0)
    {
      for (int k = 0; k <= i; ++k)
        d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j)
      {
        double g = 0.0;
        for (int k = 0; k <= i; ++k)
          g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k)
          v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k)
      v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j)
  {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix with
// accumulated eigenvectors (tql2, EISPACK lineage).
inline void tql2(DenseMatrix& v, std::vector<double>& d,
                 std::vector<double>& e)
{
  const int n = v.rows();
  for (int i = 1; i < n; ++i)
    e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l)
  {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n)
    {
      if (std::abs(e[m]) <= eps * tst1)
        break;
      ++m;
    }
    if (m > l)
    {
      int iter = 0;
      do
      {
        if (++iter > 100)
          throw std::runtime_error("sym_eig: QL iteration failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0)
          r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i)
          d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i)
        {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k)
          {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // Sort ascending, permuting eigenvector columns along.
  for (int i = 0; i < n - 1; ++i)
  {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j)
      if (d[j] < p)
      {
        k = j;
        p = d[j];
      }
    if (k != i)
    {
      d[k] = d[i];
      d[i] = p;
      for (int j = 0; j < n; ++j)
        std::swap(v(j, i), v(j, k));
    }
  }
}

} // namespace detail

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
struct SymEig {
  std::vector<double> values;
  DenseMatrix vectors;
};

inline SymEig sym_eig(const DenseMatrix& a)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("sym_eig: matrix must be square");
  const int n = a.rows();
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > 1e-12 * std::max(a.max_abs(), 1.0))
    throw std::invalid_argument("sym_eig: matrix is not symmetric");

  SymEig out{std::vector<double>(n), a};
  std::vector<double> e(n, 0.0);
  detail::tred2(out.vectors, out.values, e);
  detail::tql2(out.vectors, out.values, e);
  return out;
}

/// Lower Cholesky factor of an SPD matrix.
inline DenseMatrix cholesky(const DenseMatrix& a)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("cholesky: matrix must be square");
  const int n = a.rows();
  DenseMatrix l(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j <= i; ++j)
    {
      double s = a(i, j);
      for (int k = 0; k < j; ++k)
        s -= l(i, k) * l(j, k);
      if (i == j)
      {
        if (!(s > 0.0))
          throw singular_matrix_error(
              i, "cholesky: non-positive pivot " + std::to_string(i) +
                     ", matrix is not SPD");
        l(i, i) = std::sqrt(s);
      }
      else
        l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// 2-norm condition number sigma_max/sigma_min, computed from the
/// eigenvalues of A^T A. Returns +infinity when the smallest singular
/// value vanishes at working precision.
inline double condition_2norm(const DenseMatrix& a)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("condition_2norm: matrix must be square");
  const int n = a.rows();
  DenseMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
    {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += a(k, i) * a(k, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  SymEig eig = sym_eig(g);
  const double lmax = eig.values.back();
  const double lmin = eig.values.front();
  if (!(lmin > 0.0))
    return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

} // namespace ciarlet::linalg
