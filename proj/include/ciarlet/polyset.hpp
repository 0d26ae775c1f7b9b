#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ciarlet/common.hpp"
#include "ciarlet/linalg.hpp"
#include "ciarlet/quadrature.hpp"
#include "ciarlet/reference_cell.hpp"

namespace ciarlet::polyset {

/// Number of partial-derivative slots for all derivatives up to `order`.
constexpr int num_derivative_slots(int dim, int order)
{
  return polyspace_dim(dim, order);
}

/// Values of every basis function (and derivative) at every point.
/// Derivative slots are indexed by the multi-index pairing idx2/idx3, so
/// slot 0 is the value, slots 1..dim the first partials, and so on.
class TabulationTable {
public:
  TabulationTable(int dim, int order, int nfuncs, int npoints)
      : dim_(dim), order_(order), nfuncs_(nfuncs), npoints_(npoints),
        data_(static_cast<std::size_t>(num_derivative_slots(dim, order)) *
                  nfuncs * npoints,
              0.0)
  {
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  int num_functions() const { return nfuncs_; }
  int num_points() const { return npoints_; }
  int num_derivatives() const { return num_derivative_slots(dim_, order_); }

  double& operator()(int deriv, int func, int point)
  {
    return data_[(static_cast<std::size_t>(deriv) * nfuncs_ + func) *
                     npoints_ +
                 point];
  }
  double operator()(int deriv, int func, int point) const
  {
    return data_[(static_cast<std::size_t>(deriv) * nfuncs_ + func) *
                     npoints_ +
                 point];
  }

  /// Slot of the first partial in the given direction.
  int first_derivative_slot(int direction) const
  {
    if (dim_ == 1)
      return 1;
    if (dim_ == 2)
      return direction == 0 ? idx2(1, 0) : idx2(0, 1);
    return direction == 0 ? idx3(1, 0, 0)
                          : direction == 1 ? idx3(0, 1, 0) : idx3(0, 0, 1);
  }

private:
  int dim_, order_, nfuncs_, npoints_;
  std::vector<double> data_;
};

namespace detail {

// Coefficients of the Jacobi three-term recurrence with weight (1-x)^a:
// P_{n+1} = (an x + bn) P_n - cn P_{n-1}.
inline std::array<double, 3> jrc(int a, int n)
{
  const double an = (a + 2 * n + 1) * (a + 2 * n + 2) /
                    static_cast<double>(2 * (n + 1) * (a + n + 1));
  const double bn = a * a * (a + 2 * n + 1) /
                    static_cast<double>(2 * (n + 1) * (a + n + 1) * (a + 2 * n));
  const double cn = n * (a + n) * (a + 2 * n + 2) /
                    static_cast<double>((n + 1) * (a + n + 1) * (a + 2 * n));
  return {an, bn, cn};
}

// Shifted Legendre set on [0, 1] with all derivatives up to `order`.
inline void tabulate_interval(TabulationTable& P, int n, int order,
                              const std::vector<Vec>& pts)
{
  const int np = static_cast<int>(pts.size());
  for (int i = 0; i < np; ++i)
    P(0, 0, i) = 1.0;

  for (int k = 0; k <= order; ++k)
    for (int p = 1; p <= n; ++p)
    {
      const double a = 1.0 - 1.0 / p;
      for (int i = 0; i < np; ++i)
      {
        const double x = pts[i][0];
        double v = (2.0 * x - 1.0) * P(k, p - 1, i) * (a + 1.0);
        if (k > 0)
          v += 2.0 * k * P(k - 1, p - 1, i) * (a + 1.0);
        if (p > 1)
          v -= P(k, p - 2, i) * a;
        P(k, p, i) = v;
      }
    }

  for (int p = 0; p <= n; ++p)
  {
    const double s = std::sqrt(2.0 * p + 1.0);
    for (int k = 0; k <= order; ++k)
      for (int i = 0; i < np; ++i)
        P(k, p, i) *= s;
  }
}

// Orthonormal set on the unit triangle. The degree recurrence runs along
// q = 0 first and is then extended in q with Jacobi coefficients; each
// recurrence is differentiated term by term, so values and derivatives
// stay finite at every point of the closed cell.
inline void tabulate_triangle(TabulationTable& P, int n, int order,
                              const std::vector<Vec>& pts)
{
  const int np = static_cast<int>(pts.size());
  for (int i = 0; i < np; ++i)
    P(0, 0, i) = 1.0;

  for (int kx = 0; kx <= order; ++kx)
    for (int ky = 0; ky <= order - kx; ++ky)
    {
      const int kf = idx2(kx, ky);
      for (int p = 1; p <= n; ++p)
      {
        const double a = (2.0 * p - 1.0) / p;
        const int cur = idx2(p, 0), m1 = idx2(p - 1, 0);
        for (int i = 0; i < np; ++i)
        {
          const double x = pts[i][0], y = pts[i][1];
          double v = (2.0 * x + y - 1.0) * P(kf, m1, i) * a;
          if (kx > 0)
            v += 2.0 * kx * a * P(idx2(kx - 1, ky), m1, i);
          if (ky > 0)
            v += ky * a * P(idx2(kx, ky - 1), m1, i);
          if (p > 1)
          {
            const int m2 = idx2(p - 2, 0);
            const double f = 1.0 - y;
            v -= f * f * P(kf, m2, i) * (a - 1.0);
            if (ky > 0)
              v -= ky * (2.0 * y - 2.0) * P(idx2(kx, ky - 1), m2, i) *
                   (a - 1.0);
            if (ky > 1)
              v -= ky * (ky - 1.0) * P(idx2(kx, ky - 2), m2, i) * (a - 1.0);
          }
          P(kf, cur, i) = v;
        }
      }

      for (int p = 0; p < n; ++p)
      {
        const int base = idx2(p, 0), cur = idx2(p, 1);
        for (int i = 0; i < np; ++i)
        {
          const double y = pts[i][1];
          double v = P(kf, base, i) *
                     ((2.0 * y - 1.0) * (1.5 + p) + 0.5 + p);
          if (ky > 0)
            v += 2.0 * ky * (1.5 + p) * P(idx2(kx, ky - 1), base, i);
          P(kf, cur, i) = v;
        }
        for (int q = 1; q < n - p; ++q)
        {
          const auto [a1, a2, a3] = jrc(2 * p + 1, q);
          const int qq = idx2(p, q), qm = idx2(p, q - 1), qp = idx2(p, q + 1);
          for (int i = 0; i < np; ++i)
          {
            const double y = pts[i][1];
            double v = P(kf, qq, i) * ((2.0 * y - 1.0) * a1 + a2) -
                       P(kf, qm, i) * a3;
            if (ky > 0)
              v += 2.0 * ky * a1 * P(idx2(kx, ky - 1), qq, i);
            P(kf, qp, i) = v;
          }
        }
      }
    }

  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n - p; ++q)
    {
      const double s = 2.0 * std::sqrt((p + 0.5) * (p + q + 1.0));
      const int f = idx2(p, q);
      for (int k = 0; k < P.num_derivatives(); ++k)
        for (int i = 0; i < np; ++i)
          P(k, f, i) *= s;
    }
}

// Orthonormal set on the unit tetrahedron; same scheme with one more
// recurrence direction.
inline void tabulate_tetrahedron(TabulationTable& P, int n, int order,
                                 const std::vector<Vec>& pts)
{
  const int np = static_cast<int>(pts.size());
  for (int i = 0; i < np; ++i)
    P(0, 0, i) = 1.0;

  for (int kx = 0; kx <= order; ++kx)
    for (int ky = 0; ky <= order - kx; ++ky)
      for (int kz = 0; kz <= order - kx - ky; ++kz)
      {
        const int kf = idx3(kx, ky, kz);
        for (int p = 1; p <= n; ++p)
        {
          const double a = (2.0 * p - 1.0) / p;
          const int cur = idx3(p, 0, 0), m1 = idx3(p - 1, 0, 0);
          for (int i = 0; i < np; ++i)
          {
            const double x = pts[i][0], y = pts[i][1], z = pts[i][2];
            double v = (2.0 * x + y + z - 1.0) * a * P(kf, m1, i);
            if (kx > 0)
              v += 2.0 * kx * a * P(idx3(kx - 1, ky, kz), m1, i);
            if (ky > 0)
              v += ky * a * P(idx3(kx, ky - 1, kz), m1, i);
            if (kz > 0)
              v += kz * a * P(idx3(kx, ky, kz - 1), m1, i);
            if (p > 1)
            {
              const int m2 = idx3(p - 2, 0, 0);
              const double f2 = y + z - 1.0;
              v -= f2 * f2 * P(kf, m2, i) * (a - 1.0);
              if (ky > 0)
                v -= ky * (2.0 * (y + z) - 2.0) * P(idx3(kx, ky - 1, kz), m2, i) *
                     (a - 1.0);
              if (ky > 1)
                v -= ky * (ky - 1.0) * P(idx3(kx, ky - 2, kz), m2, i) *
                     (a - 1.0);
              if (kz > 0)
                v -= kz * (2.0 * (y + z) - 2.0) * P(idx3(kx, ky, kz - 1), m2, i) *
                     (a - 1.0);
              if (kz > 1)
                v -= kz * (kz - 1.0) * P(idx3(kx, ky, kz - 2), m2, i) *
                     (a - 1.0);
              if (ky > 0 && kz > 0)
                v -= 2.0 * ky * kz * P(idx3(kx, ky - 1, kz - 1), m2, i) *
                     (a - 1.0);
            }
            P(kf, cur, i) = v;
          }
        }

        for (int p = 0; p < n; ++p)
        {
          const int base = idx3(p, 0, 0), cur = idx3(p, 1, 0);
          for (int i = 0; i < np; ++i)
          {
            const double y = pts[i][1], z = pts[i][2];
            double v = P(kf, base, i) *
                       (2.0 * p * y + 3.0 * y + z - 1.0);
            if (ky > 0)
              v += 2.0 * ky * (1.5 + p) * P(idx3(kx, ky - 1, kz), base, i);
            if (kz > 0)
              v += kz * P(idx3(kx, ky, kz - 1), base, i);
            P(kf, cur, i) = v;
          }
          for (int q = 1; q < n - p; ++q)
          {
            const auto [aq, bq, cq] = jrc(2 * p + 1, q);
            const int qq = idx3(p, q, 0), qm = idx3(p, q - 1, 0),
                      qp = idx3(p, q + 1, 0);
            for (int i = 0; i < np; ++i)
            {
              const double y = pts[i][1], z = pts[i][2];
              const double f4 = 1.0 - z;
              const double f3 = 2.0 * y - 1.0 + z;
              double v = P(kf, qq, i) * (f3 * aq + f4 * bq) -
                         P(kf, qm, i) * f4 * f4 * cq;
              if (ky > 0)
                v += 2.0 * ky * aq * P(idx3(kx, ky - 1, kz), qq, i);
              if (kz > 0)
                v += kz * (aq - bq) * P(idx3(kx, ky, kz - 1), qq, i) +
                     kz * 2.0 * (1.0 - z) * cq * P(idx3(kx, ky, kz - 1), qm, i);
              if (kz > 1)
                v -= kz * (kz - 1.0) * cq * P(idx3(kx, ky, kz - 2), qm, i);
              P(kf, qp, i) = v;
            }
          }
        }

        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n - p; ++q)
          {
            const int base = idx3(p, q, 0), cur = idx3(p, q, 1);
            for (int i = 0; i < np; ++i)
            {
              const double z = pts[i][2];
              double v = P(kf, base, i) *
                         ((1.0 + p + q) + (2.0 * z - 1.0) * (2.0 + p + q));
              if (kz > 0)
                v += 2.0 * kz * (2.0 + p + q) * P(idx3(kx, ky, kz - 1), base, i);
              P(kf, cur, i) = v;
            }
          }

        for (int p = 0; p + 1 < n; ++p)
          for (int q = 0; q + 1 < n - p; ++q)
            for (int r = 1; r < n - p - q; ++r)
            {
              const auto [ar, br, cr] = jrc(2 * p + 2 * q + 2, r);
              const int rr = idx3(p, q, r), rm = idx3(p, q, r - 1),
                        rp = idx3(p, q, r + 1);
              for (int i = 0; i < np; ++i)
              {
                const double z = pts[i][2];
                double v = P(kf, rr, i) * ((2.0 * z - 1.0) * ar + br) -
                           P(kf, rm, i) * cr;
                if (kz > 0)
                  v += 2.0 * kz * ar * P(idx3(kx, ky, kz - 1), rr, i);
                P(kf, rp, i) = v;
              }
            }
      }

  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n - p; ++q)
      for (int r = 0; r <= n - p - q; ++r)
      {
        const double s =
            2.0 * std::sqrt(2.0 * (p + 0.5) * (p + q + 1.0) *
                            (p + q + r + 1.5));
        const int f = idx3(p, q, r);
        for (int k = 0; k < P.num_derivatives(); ++k)
          for (int i = 0; i < np; ++i)
            P(k, f, i) *= s;
      }
}

} // namespace detail

/// Orthonormal expansion set over the reference cell with unit weight: the
/// quadrature Gram matrix of the basis is the identity. Values and
/// derivatives are produced directly by recurrence on the simplex, with no
/// collapsed-coordinate singularity, so evaluation is well-defined at
/// every point of the closed cell including the vertices.
class ExpansionSet {
public:
  ExpansionSet(const cells::ReferenceCell& cell, int degree)
      : cell_(cell), degree_(degree)
  {
    if (degree < 0)
      throw std::invalid_argument("ExpansionSet: degree must be >= 0");
  }

  const cells::ReferenceCell& cell() const { return cell_; }
  int dim() const { return cell_.dim(); }
  int degree() const { return degree_; }
  int size() const { return polyspace_dim(cell_.dim(), degree_); }

  /// Tabulate values and all partial derivatives up to `order` (at most
  /// two; higher derivatives go through differentiation matrices).
  TabulationTable tabulate(const std::vector<Vec>& points, int order) const
  {
    if (order < 0)
      throw std::invalid_argument("tabulate: order must be >= 0");
    if (order > 2)
      throw std::invalid_argument(
          "tabulate: order > 2 not supported; compose differentiation "
          "matrices instead");
    TabulationTable table(dim(), order, size(), static_cast<int>(points.size()));
    if (points.empty())
      return table;
    if (dim() == 1)
      detail::tabulate_interval(table, degree_, order, points);
    else if (dim() == 2)
      detail::tabulate_triangle(table, degree_, order, points);
    else
      detail::tabulate_tetrahedron(table, degree_, order, points);
    return table;
  }

  /// Matrix mapping expansion coefficients of f to the coefficients of
  /// df/dx_direction. Computed as D_ij = <phi_i, d_dir phi_j> under a rule
  /// exact for the integrand, which makes D vanish on every block with
  /// block(i) >= block(j) in the total-degree grading.
  linalg::DenseMatrix differentiation_matrix(int direction) const
  {
    if (direction < 0 || direction >= dim())
      throw std::invalid_argument("differentiation_matrix: bad direction");
    const quadrature::QuadratureRule rule =
        quadrature::stroud_conical(cell_, 2 * degree_);
    const TabulationTable t = tabulate(rule.points, 1);
    const int slot = t.first_derivative_slot(direction);
    const int n = size();
    linalg::DenseMatrix d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
      {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * t(0, i, q) * t(slot, j, q);
        d(i, j) = s;
      }
    return d;
  }

private:
  cells::ReferenceCell cell_;
  int degree_;
};

/// binomial(n + dim, dim), the dimension of total-degree-n polynomials.
inline int expansion_size(int dim, int n) { return polyspace_dim(dim, n); }

/// Total degree of the expansion function with the given flat index.
inline int expansion_block_degree(int dim, int flat)
{
  int l = 0;
  while (polyspace_dim(dim, l) <= flat)
    ++l;
  return l;
}

} // namespace ciarlet::polyset
