#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciarlet/common.hpp"

namespace ciarlet::nodes {

enum class Variant { equispaced, spectral };

inline Variant parse_variant(const std::string& s)
{
  if (s == "equispaced")
    return Variant::equispaced;
  if (s == "spectral")
    return Variant::spectral;
  throw std::invalid_argument("unknown node variant: " + s);
}

/// Interpolation nodes on the reference d-simplex in barycentric form.
struct NodeFamily {
  Variant variant;
  int dim;
  int degree;
  std::vector<Bary> points;
};

namespace detail {

// Legendre value and first/second derivative at x by recurrence.
struct Legendre {
  double p, dp, ddp;
};

inline Legendre legendre_eval(int n, double x)
{
  double p0 = 1.0, p1 = x;
  if (n == 0)
    return {1.0, 0.0, 0.0};
  for (int k = 1; k < n; ++k)
  {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  // (1 - x^2) P' = n (P_{n-1} - x P_n); the ODE gives P''.
  const double omx2 = 1.0 - x * x;
  double dp, ddp;
  if (std::abs(omx2) > 1e-14)
  {
    dp = n * (p0 - x * p1) / omx2;
    ddp = (2.0 * x * dp - n * (n + 1) * p1) / omx2;
  }
  else
  {
    const double sgn = x > 0 ? 1.0 : (n % 2 == 0 ? -1.0 : 1.0);
    dp = sgn * 0.5 * n * (n + 1);
    ddp = 0.0;
  }
  return {p1, dp, ddp};
}

// Roots of P_n, ascending, by Newton from Chebyshev initial guesses.
inline std::vector<double> legendre_roots(int n)
{
  std::vector<double> roots(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i)
  {
    double x = -std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it)
    {
      const Legendre l = legendre_eval(n, x);
      const double dx = l.p / l.dp;
      x -= dx;
      if (std::abs(dx) < 1e-15)
        break;
    }
    roots[i] = x;
  }
  return roots;
}

} // namespace detail

/// Gauss-Lobatto points on [-1, 1]: the endpoints plus the roots of the
/// derivative of the Legendre polynomial of degree m-1, sorted ascending.
/// Interior roots are found by a bisection/Newton hybrid on brackets
/// supplied by the interlacing Legendre roots, converged to 1e-14.
inline std::vector<double> gauss_lobatto_1d(int m)
{
  if (m < 2)
    throw std::invalid_argument("gauss_lobatto_1d: need at least 2 points");
  std::vector<double> pts(m);
  pts.front() = -1.0;
  pts.back() = 1.0;
  if (m == 2)
    return pts;

  const int n = m - 1; // roots of P_n'
  const std::vector<double> brackets = detail::legendre_roots(n);
  for (int i = 0; i + 1 < n; ++i)
  {
    double lo = brackets[i], hi = brackets[i + 1];
    double flo = detail::legendre_eval(n, lo).dp;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it)
    {
      const detail::Legendre l = detail::legendre_eval(n, x);
      if ((l.dp > 0) == (flo > 0))
        lo = x;
      else
        hi = x;
      double xn = x - l.dp / l.ddp;
      if (!(xn > lo && xn < hi))
        xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) < 1e-15)
      {
        x = xn;
        break;
      }
      x = xn;
    }
    pts[i + 1] = x;
  }
  // Symmetrize so x and -x agree to the last bit.
  for (int i = 0; i < m / 2; ++i)
  {
    const double v = 0.5 * (pts[i] - pts[m - 1 - i]);
    pts[i] = v;
    pts[m - 1 - i] = -v;
  }
  if (m % 2 == 1)
    pts[m / 2] = 0.0;
  return pts;
}

namespace detail {

// Lobatto nodes of degree n rescaled to [0, 1]; the degree-0 stub keeps
// the recursion total.
inline const std::vector<double>& lobatto01(int n,
                                            std::map<int, std::vector<double>>& cache)
{
  auto it = cache.find(n);
  if (it != cache.end())
    return it->second;
  std::vector<double> t;
  if (n == 0)
    t = {0.5};
  else
  {
    t = gauss_lobatto_1d(n + 1);
    for (double& x : t)
      x = 0.5 * (x + 1.0);
    t.front() = 0.0;
    t.back() = 1.0;
  }
  return cache.emplace(n, std::move(t)).first->second;
}

// Barycentric multi-indices with d+1 parts summing to n, lexicographic
// ascending on the full tuple.
inline std::vector<std::array<int, 4>> multi_indices(int nparts, int n)
{
  std::vector<std::array<int, 4>> out;
  std::array<int, 4> a{0, 0, 0, 0};
  auto rec = [&](auto&& self, int part, int rem) -> void {
    if (part == nparts - 1)
    {
      a[part] = rem;
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= rem; ++v)
    {
      a[part] = v;
      self(self, part + 1, rem - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// One node of the recursive family: a facet-weighted blend of the
// lower-dimensional constructions, bottoming out at the Lobatto nodes.
inline std::array<double, 4> recursive_point(int d, int n, const int* alpha,
                                             std::map<int, std::vector<double>>& cache)
{
  std::array<double, 4> b{0, 0, 0, 0};
  if (d == 1)
  {
    const std::vector<double>& t = lobatto01(n, cache);
    b[0] = t[alpha[0]];
    b[1] = t[alpha[1]];
    return b;
  }
  const std::vector<double>& t = lobatto01(n, cache);
  double wsum = 0.0;
  for (int i = 0; i <= d; ++i)
  {
    if (alpha[i] == n)
      continue; // weight t[0] = 0
    const double w = t[n - alpha[i]];
    int sub[4];
    for (int k = 0, j = 0; k <= d; ++k)
      if (k != i)
        sub[j++] = alpha[k];
    const std::array<double, 4> sb =
        recursive_point(d - 1, n - alpha[i], sub, cache);
    for (int k = 0, j = 0; k <= d; ++k)
      if (k != i)
        b[k] += w * sb[j++];
    wsum += w;
  }
  for (int k = 0; k <= d; ++k)
    b[k] /= wsum;
  return b;
}

} // namespace detail

/// The barycentric lattice { alpha / n : |alpha| = n }.
inline NodeFamily equispaced_simplex(int dim, int n)
{
  if (n < 1)
    throw std::invalid_argument("equispaced_simplex: degree must be >= 1");
  NodeFamily fam{Variant::equispaced, dim, n, {}};
  for (const auto& a : detail::multi_indices(dim + 1, n))
  {
    Bary b{0, 0, 0, 0};
    for (int k = 0; k <= dim; ++k)
      b[k] = static_cast<double>(a[k]) / n;
    fam.points.push_back(b);
  }
  return fam;
}

/// Recursively constructed Lobatto-type simplex nodes: vertex-symmetric,
/// the restriction to any facet is the (dim-1)-dimensional family, and the
/// 1D case reduces to the Gauss-Lobatto points.
inline NodeFamily recursive_simplex(int dim, int n)
{
  if (n < 1)
    throw std::invalid_argument("recursive_simplex: degree must be >= 1");
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("recursive_simplex: dim must be 1..3");
  NodeFamily fam{Variant::spectral, dim, n, {}};
  std::map<int, std::vector<double>> cache;
  for (const auto& a : detail::multi_indices(dim + 1, n))
  {
    const std::array<double, 4> b =
        detail::recursive_point(dim, n, a.data(), cache);
    fam.points.push_back(Bary{b[0], b[1], b[2], b[3]});
  }
  return fam;
}

inline NodeFamily make_family(Variant v, int dim, int n)
{
  return v == Variant::equispaced ? equispaced_simplex(dim, n)
                                  : recursive_simplex(dim, n);
}

} // namespace ciarlet::nodes
