#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ciarlet/polyset.hpp"
#include "ciarlet/rng.hpp"

using namespace ciarlet;
using cells::ReferenceCell;
using polyset::ExpansionSet;
using polyset::TabulationTable;
using quadrature::QuadratureRule;
using quadrature::stroud_conical;

namespace {

// Exponent lists in total-degree blocks, the same grading the expansion
// set uses.
std::vector<std::array<int, 3>> exponents(int dim, int n)
{
  std::vector<std::array<int, 3>> out;
  for (int total = 0; total <= n; ++total)
  {
    if (dim == 1)
      out.push_back({total, 0, 0});
    else if (dim == 2)
    {
      for (int q = 0; q <= total; ++q)
        out.push_back({total - q, q, 0});
    }
    else
      for (int m = 0; m <= total; ++m)
        for (int r = 0; r <= m; ++r)
          out.push_back({total - m, m - r, r});
  }
  return out;
}

double eval_monomial(const std::array<int, 3>& e, const Vec& p, int dim)
{
  double v = 1.0;
  for (int d = 0; d < dim; ++d)
    for (int k = 0; k < e[d]; ++k)
      v *= p[d];
  return v;
}

// Independent oracle: modified Gram-Schmidt orthonormalization of the
// monomial basis in the quadrature inner product, two passes.
struct GramSchmidtOracle {
  QuadratureRule rule;
  std::vector<std::vector<double>> values; // [func][point]

  GramSchmidtOracle(const ReferenceCell& cell, int n)
      : rule(stroud_conical(cell, 2 * n + 2))
  {
    const auto exps = exponents(cell.dim(), n);
    for (const auto& e : exps)
    {
      std::vector<double> v(rule.size());
      for (int q = 0; q < rule.size(); ++q)
        v[q] = eval_monomial(e, rule.points[q], cell.dim());
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& prev : values)
        {
          const double proj = inner(prev, v);
          for (int q = 0; q < rule.size(); ++q)
            v[q] -= proj * prev[q];
        }
      const double nrm = std::sqrt(inner(v, v));
      for (double& x : v)
        x /= nrm;
      values.push_back(std::move(v));
    }
  }

  double inner(const std::vector<double>& a, const std::vector<double>& b) const
  {
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      s += rule.weights[q] * a[q] * b[q];
    return s;
  }
};

std::vector<Vec> random_points(const ReferenceCell& cell, int count,
                               SplitMix64& rng, double margin = 0.0)
{
  std::vector<Vec> pts;
  const int d = cell.dim();
  while (static_cast<int>(pts.size()) < count)
  {
    Vec p{0, 0, 0};
    double sum = 0.0;
    for (int i = 0; i < d; ++i)
    {
      p[i] = rng.uniform();
      sum += p[i];
    }
    if (sum > 1.0 - margin)
      continue;
    bool ok = true;
    for (int i = 0; i < d; ++i)
      ok = ok && p[i] > margin;
    if (ok)
      pts.push_back(p);
  }
  return pts;
}

} // namespace

TEST_CASE("expansion_size")
{
  CHECK(polyset::expansion_size(2, 3) == 10);
  CHECK(polyset::expansion_size(3, 2) == 10);
  CHECK(polyset::expansion_size(1, 5) == 6);
}

TEST_CASE("constant expansion values")
{
  const ReferenceCell tri(2);
  const ExpansionSet set(tri, 0);
  const auto t = set.tabulate({Vec{0.2, 0.3, 0}}, 0);
  CHECK(t(0, 0, 0) == Catch::Approx(std::sqrt(2.0)));

  const ReferenceCell tet(3);
  const ExpansionSet set3(tet, 0);
  const auto t3 = set3.tabulate({Vec{0.2, 0.3, 0.1}}, 0);
  CHECK(t3(0, 0, 0) == Catch::Approx(std::sqrt(6.0)));
}

TEST_CASE("interval degree-1 function vanishes at the midpoint")
{
  const ReferenceCell line(1);
  const ExpansionSet set(line, 1);
  const auto t = set.tabulate({Vec{0.5, 0, 0}}, 0);
  CHECK(t(0, 1, 0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("second derivatives are finite at the vertices")
{
  for (int dim = 2; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const ExpansionSet set(cell, 6);
    std::vector<Vec> verts = cell.vertices();
    const auto t = set.tabulate(verts, 2);
    for (int d = 0; d < t.num_derivatives(); ++d)
      for (int f = 0; f < set.size(); ++f)
        for (int p = 0; p < t.num_points(); ++p)
          CHECK(std::isfinite(t(d, f, p)));
  }
}

TEST_CASE("orthonormality: quadrature Gram matrix is the identity")
{
  struct Case {
    int dim, maxdeg;
  };
  for (const Case c : {Case{1, 20}, Case{2, 12}, Case{3, 8}})
  {
    const ReferenceCell cell(c.dim);
    for (int n : {0, 1, c.maxdeg / 2, c.maxdeg})
    {
      const ExpansionSet set(cell, n);
      const QuadratureRule rule = stroud_conical(cell, 2 * n);
      const auto t = set.tabulate(rule.points, 0);
      double dev = 0.0;
      for (int i = 0; i < set.size(); ++i)
        for (int j = i; j < set.size(); ++j)
        {
          double s = 0.0;
          for (int q = 0; q < rule.size(); ++q)
            s += rule.weights[q] * t(0, i, q) * t(0, j, q);
          dev = std::max(dev, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
      CHECK(dev <= 1e-12);
    }
  }
}

TEST_CASE("expansion sets match the Gram-Schmidt oracle up to degree 8")
{
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const int n = dim == 3 ? 6 : 8;
    const GramSchmidtOracle oracle(cell, n);
    const ExpansionSet set(cell, n);
    const auto t = set.tabulate(oracle.rule.points, 0);

    // T_ij = <GS_i, D_j>; equal spans and orthonormality on both sides
    // make T orthogonal.
    const int sz = set.size();
    std::vector<std::vector<double>> trans(sz, std::vector<double>(sz));
    for (int i = 0; i < sz; ++i)
      for (int j = 0; j < sz; ++j)
      {
        double s = 0.0;
        for (int q = 0; q < oracle.rule.size(); ++q)
          s += oracle.rule.weights[q] * oracle.values[i][q] * t(0, j, q);
        trans[i][j] = s;
      }
    double dev = 0.0;
    for (int i = 0; i < sz; ++i)
      for (int j = 0; j < sz; ++j)
      {
        double s = 0.0;
        for (int k = 0; k < sz; ++k)
          s += trans[k][i] * trans[k][j];
        dev = std::max(dev, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    CHECK(dev <= 1e-7);
  }
}

TEST_CASE("block structure: degree-l functions stay degree-l under the oracle")
{
  // the transfer matrix is block diagonal in the total-degree grading,
  // both bases being graded orthonormal sets
  const ReferenceCell tri(2);
  const int n = 5;
  const GramSchmidtOracle oracle(tri, n);
  const ExpansionSet set(tri, n);
  const auto t = set.tabulate(oracle.rule.points, 0);
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.size(); ++j)
    {
      const int bi = polyset::expansion_block_degree(2, i);
      const int bj = polyset::expansion_block_degree(2, j);
      double s = 0.0;
      for (int q = 0; q < oracle.rule.size(); ++q)
        s += oracle.rule.weights[q] * oracle.values[i][q] * t(0, j, q);
      if (bi != bj)
        CHECK(std::abs(s) <= 1e-9);
    }
}

TEST_CASE("first and second derivatives match finite differences")
{
  SplitMix64 rng(20240601);
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const int n = dim == 3 ? 4 : 5;
    const ExpansionSet set(cell, n);
    const std::vector<Vec> pts = random_points(cell, 50, rng, 0.02);
    const auto t = set.tabulate(pts, 2);
    const double h = 1e-6;

    for (int d = 0; d < dim; ++d)
    {
      std::vector<Vec> plus = pts, minus = pts;
      for (std::size_t p = 0; p < pts.size(); ++p)
      {
        plus[p][d] += h;
        minus[p][d] -= h;
      }
      const auto tp = set.tabulate(plus, 0);
      const auto tm = set.tabulate(minus, 0);
      const int slot = t.first_derivative_slot(d);
      for (int f = 0; f < set.size(); ++f)
        for (std::size_t p = 0; p < pts.size(); ++p)
        {
          const double fd = (tp(0, f, p) - tm(0, f, p)) / (2.0 * h);
          const double ex = t(slot, f, p);
          CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
        }
    }

    // second partials: the second-difference stencil amplifies roundoff
    // by eps/h^2, so it needs a step near eps^(1/4)
    const double h2 = 2e-4;
    for (int d = 0; d < dim; ++d)
    {
      std::vector<Vec> plus = pts, minus = pts;
      for (std::size_t p = 0; p < pts.size(); ++p)
      {
        plus[p][d] += h2;
        minus[p][d] -= h2;
      }
      const auto tp = set.tabulate(plus, 0);
      const auto tm = set.tabulate(minus, 0);
      int slot;
      if (dim == 1)
        slot = 2;
      else if (dim == 2)
        slot = d == 0 ? idx2(2, 0) : idx2(0, 2);
      else
        slot = d == 0 ? idx3(2, 0, 0) : d == 1 ? idx3(0, 2, 0) : idx3(0, 0, 2);
      for (int f = 0; f < set.size(); ++f)
      {
        // the 1e-4 bound is relative to the derivative's scale: the
        // second-difference stencil itself carries eps/h^2 noise
        double scale = 1.0;
        for (std::size_t p = 0; p < pts.size(); ++p)
          scale = std::max(scale, std::abs(t(slot, f, p)));
        for (std::size_t p = 0; p < pts.size(); ++p)
        {
          const double fd =
              (tp(0, f, p) - 2.0 * t(0, f, p) + tm(0, f, p)) / (h2 * h2);
          CHECK(std::abs(fd - t(slot, f, p)) <= 1e-4 * scale);
        }
      }
    }
  }
}

TEST_CASE("mixed second partials match finite differences")
{
  SplitMix64 rng(5);
  const ReferenceCell tri(2);
  const ExpansionSet set(tri, 5);
  const std::vector<Vec> pts = random_points(tri, 20, rng, 0.05);
  const auto t = set.tabulate(pts, 2);
  const double h = 1e-5;
  for (int f = 0; f < set.size(); ++f)
  {
    double scale = 1.0;
    for (std::size_t p = 0; p < pts.size(); ++p)
      scale = std::max(scale, std::abs(t(idx2(1, 1), f, p)));
    for (std::size_t p = 0; p < pts.size(); ++p)
    {
      auto shifted = [&](double sx, double sy) {
        Vec q = pts[p];
        q[0] += sx;
        q[1] += sy;
        return set.tabulate({q}, 0)(0, f, 0);
      };
      const double fd = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) +
                         shifted(-h, -h)) /
                        (4.0 * h * h);
      CHECK(std::abs(fd - t(idx2(1, 1), f, p)) <= 2e-4 * scale);
    }
  }
}

TEST_CASE("tabulate rejects order above two")
{
  const ReferenceCell tri(2);
  const ExpansionSet set(tri, 3);
  CHECK_THROWS_AS(set.tabulate({Vec{0.1, 0.1, 0}}, 3), std::invalid_argument);
}

TEST_CASE("differentiation matrix on the interval at degree 1")
{
  const ReferenceCell line(1);
  const ExpansionSet set(line, 1);
  const auto d = set.differentiation_matrix(0);
  // phi_1 = sqrt(3) (2x - 1); phi_1' = 2 sqrt(3) = 2 sqrt(3) * phi_0
  CHECK(d(0, 1) == Catch::Approx(2.0 * std::sqrt(3.0)));
  CHECK(d(0, 0) == Catch::Approx(0.0).margin(1e-13));
  CHECK(d(1, 0) == Catch::Approx(0.0).margin(1e-13));
  CHECK(d(1, 1) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("differentiation matrix annihilates constants")
{
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const ExpansionSet set(cell, 4);
    for (int dir = 0; dir < dim; ++dir)
    {
      const auto d = set.differentiation_matrix(dir);
      for (int i = 0; i < set.size(); ++i)
        CHECK(std::abs(d(i, 0)) <= 1e-12);
    }
    CHECK_THROWS_AS(set.differentiation_matrix(dim), std::invalid_argument);
  }
}

TEST_CASE("differentiation matrices commute")
{
  const ReferenceCell tri(2);
  const ExpansionSet set(tri, 4);
  const auto dx = set.differentiation_matrix(0);
  const auto dy = set.differentiation_matrix(1);
  const auto xy = linalg::matmul(dx, dy);
  const auto yx = linalg::matmul(dy, dx);
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.size(); ++j)
      CHECK(std::abs(xy(i, j) - yx(i, j)) <= 1e-12 * std::max(1.0, xy.max_abs()));
}

TEST_CASE("differentiation matrix is strictly block triangular")
{
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const ExpansionSet set(cell, 5);
    for (int dir = 0; dir < dim; ++dir)
    {
      const auto d = set.differentiation_matrix(dir);
      const double scale = d.max_abs();
      for (int i = 0; i < set.size(); ++i)
        for (int j = 0; j < set.size(); ++j)
        {
          const int bi = polyset::expansion_block_degree(dim, i);
          const int bj = polyset::expansion_block_degree(dim, j);
          if (bi >= bj)
            CHECK(std::abs(d(i, j)) <= 1e-12 * scale);
        }
    }
  }
}

TEST_CASE("coefficients through D match direct derivative tabulation")
{
  SplitMix64 rng(17);
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const int n = dim == 3 ? 6 : 10;
    const ExpansionSet set(cell, n);
    std::vector<double> coeffs(set.size());
    for (double& c : coeffs)
      c = rng.symmetric();
    const std::vector<Vec> pts = random_points(cell, 20, rng);
    const auto t = set.tabulate(pts, 1);

    for (int dir = 0; dir < dim; ++dir)
    {
      const auto d = set.differentiation_matrix(dir);
      const std::vector<double> dcoeffs = linalg::matvec(d, coeffs);
      const int slot = t.first_derivative_slot(dir);
      for (std::size_t p = 0; p < pts.size(); ++p)
      {
        double via_d = 0.0, direct = 0.0;
        for (int e = 0; e < set.size(); ++e)
        {
          via_d += dcoeffs[e] * t(0, e, p);
          direct += coeffs[e] * t(slot, e, p);
        }
        CHECK(std::abs(via_d - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("projection reproduces polynomials of full degree")
{
  SplitMix64 rng(31);
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    const int n = dim == 3 ? 5 : 8;
    const ExpansionSet set(cell, n);
    const auto exps = exponents(dim, n);
    std::vector<double> mono(exps.size());
    for (double& c : mono)
      c = rng.symmetric();

    const QuadratureRule rule = stroud_conical(cell, 2 * n);
    const auto t = set.tabulate(rule.points, 0);
    std::vector<double> proj(set.size(), 0.0);
    for (int e = 0; e < set.size(); ++e)
      for (int q = 0; q < rule.size(); ++q)
      {
        double f = 0.0;
        for (std::size_t m = 0; m < exps.size(); ++m)
          f += mono[m] * eval_monomial(exps[m], rule.points[q], dim);
        proj[e] += rule.weights[q] * t(0, e, q) * f;
      }

    const std::vector<Vec> pts = random_points(cell, 25, rng);
    const auto te = set.tabulate(pts, 0);
    for (std::size_t p = 0; p < pts.size(); ++p)
    {
      double direct = 0.0, via = 0.0;
      for (std::size_t m = 0; m < exps.size(); ++m)
        direct += mono[m] * eval_monomial(exps[m], pts[p], dim);
      for (int e = 0; e < set.size(); ++e)
        via += proj[e] * te(0, e, p);
      CHECK(std::abs(direct - via) <= 1e-11 * std::max(1.0, std::abs(direct)));
    }
  }
}
