#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ciarlet {

/// Point or vector with up to three coordinates; unused trailing
/// coordinates are kept at zero so the same type serves dim 1..3.
using Vec = std::array<double, 3>;

/// Barycentric tuple; the first dim+1 entries are used.
using Bary = std::array<double, 4>;

constexpr std::int64_t binomial(int n, int k)
{
  if (k < 0 || k > n)
    return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i)
    out = out * (n - k + i) / i;
  return out;
}

/// Dimension of the space of polynomials of total degree <= n in dim
/// variables.
constexpr int polyspace_dim(int dim, int n)
{
  return n < 0 ? 0 : static_cast<int>(binomial(n + dim, dim));
}

/// Flat index of a bivariate multi-index, grouped by total degree:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
constexpr int idx2(int p, int q)
{
  return (p + q) * (p + q + 1) / 2 + q;
}

/// Flat index of a trivariate multi-index, grouped by total degree; within
/// a block the first exponent decreases, then the last increases.
constexpr int idx3(int p, int q, int r)
{
  const int l = p + q + r;
  const int m = q + r;
  return l * (l + 1) * (l + 2) / 6 + m * (m + 1) / 2 + r;
}

inline double dot(const Vec& a, const Vec& b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec operator+(const Vec& a, const Vec& b)
{
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec operator-(const Vec& a, const Vec& b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec operator*(double s, const Vec& a)
{
  return {s * a[0], s * a[1], s * a[2]};
}

inline Vec cross(const Vec& a, const Vec& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec& a)
{
  double s = dot(a, a);
  return s > 0 ? std::sqrt(s) : 0.0;
}

/// Compensated (Kahan) accumulator; keeps reductions insensitive to the
/// visitation order at the 1e-12 level required by the mesh reductions.
class KahanSum {
public:
  void add(double x)
  {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

} // namespace ciarlet
