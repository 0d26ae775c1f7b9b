#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ciarlet/common.hpp"
#include "ciarlet/linalg.hpp"
#include "ciarlet/reference_cell.hpp"

namespace ciarlet::quadrature {

enum class Provenance { gauss, stroud, tabulated, handcoded };

/// Quadrature rule on the unit reference simplex of the stated dimension.
struct QuadratureRule {
  int dim;
  std::vector<Vec> points;
  std::vector<double> weights;
  int exactness_degree;
  Provenance provenance;

  int size() const { return static_cast<int>(points.size()); }
};

/// 1D rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta, exact for
/// integrands of degree <= 2m-1. Nodes are the eigenvalues of the
/// symmetric tridiagonal Jacobi matrix; weights come from the squared
/// first components of its eigenvectors, scaled by the zeroth moment
/// (Golub-Welsch).
struct GaussJacobi1D {
  std::vector<double> points;
  std::vector<double> weights;
};

inline GaussJacobi1D gauss_jacobi(double alpha, double beta, int m)
{
  if (m < 1)
    throw std::invalid_argument("gauss_jacobi: need at least one point");
  const double ab = alpha + beta;
  linalg::DenseMatrix jac(m, m);
  jac(0, 0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < m; ++k)
  {
    const double den = (2 * k + ab) * (2 * k + ab + 2.0);
    jac(k, k) = (beta * beta - alpha * alpha) / den;
    const double b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                      ((2 * k + ab) * (2 * k + ab) * (2 * k + ab + 1.0) *
                       (2 * k + ab - 1.0));
    jac(k, k - 1) = jac(k - 1, k) = std::sqrt(b2);
  }
  const linalg::SymEig eig = linalg::sym_eig(jac);
  const double mu0 =
      std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
      std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  GaussJacobi1D rule;
  rule.points = eig.values;
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i)
  {
    const double q0 = eig.vectors(0, i);
    rule.weights[i] = mu0 * q0 * q0;
  }
  return rule;
}

/// Stroud conical rule: tensor products of Gauss-Jacobi rules with the
/// weights that absorb the Jacobian of the Duffy map collapsing the cube
/// onto the simplex. Uses m = floor(degree/2)+1 points per direction.
inline QuadratureRule stroud_conical(const cells::ReferenceCell& cell,
                                     int degree)
{
  if (degree < 0)
    throw std::invalid_argument("stroud_conical: degree must be >= 0");
  const int dim = cell.dim();
  const int m = degree / 2 + 1;
  QuadratureRule rule{dim, {}, {}, 2 * m - 1, Provenance::stroud};

  const GaussJacobi1D g0 = gauss_jacobi(0.0, 0.0, m);
  if (dim == 1)
  {
    for (int i = 0; i < m; ++i)
    {
      rule.points.push_back(Vec{0.5 * (g0.points[i] + 1.0), 0, 0});
      rule.weights.push_back(0.5 * g0.weights[i]);
    }
    return rule;
  }
  const GaussJacobi1D g1 = gauss_jacobi(1.0, 0.0, m);
  if (dim == 2)
  {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
      {
        const double x1 = 0.5 * (g0.points[i] + 1.0);
        const double x2 = 0.5 * (g1.points[j] + 1.0);
        rule.points.push_back(Vec{x1 * (1.0 - x2), x2, 0});
        rule.weights.push_back(g0.weights[i] * g1.weights[j] / 8.0);
      }
    return rule;
  }
  const GaussJacobi1D g2 = gauss_jacobi(2.0, 0.0, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
      {
        const double x1 = 0.5 * (g0.points[i] + 1.0);
        const double x2 = 0.5 * (g1.points[j] + 1.0);
        const double x3 = 0.5 * (g2.points[k] + 1.0);
        rule.points.push_back(
            Vec{x1 * (1.0 - x2) * (1.0 - x3), x2 * (1.0 - x3), x3});
        rule.weights.push_back(g0.weights[i] * g1.weights[j] * g2.weights[k] /
                               64.0);
      }
  return rule;
}

namespace detail {

inline double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

// Exact integral of prod x_i^{a_i} over the unit simplex:
// prod a_i! / (|a| + dim)!.
inline double simplex_monomial_integral(int dim, const std::array<int, 3>& a)
{
  int total = 0;
  double num = 1.0;
  for (int i = 0; i < dim; ++i)
  {
    num *= factorial(a[i]);
    total += a[i];
  }
  return num / factorial(total + dim);
}

inline std::string monomial_name(int dim, const std::array<int, 3>& a)
{
  static const char* vars[3] = {"x", "y", "z"};
  std::string s;
  for (int i = 0; i < dim; ++i)
  {
    if (a[i] == 0)
      continue;
    if (!s.empty())
      s += "*";
    s += vars[i];
    if (a[i] > 1)
      s += "^" + std::to_string(a[i]);
  }
  return s.empty() ? "1" : s;
}

} // namespace detail

/// Check a rule against the closed-form simplex monomial integrals up to
/// its declared exactness degree. Returns the name of the first failing
/// monomial, or nothing if the rule verifies.
inline std::optional<std::string> exactness_failure(const QuadratureRule& r)
{
  for (int total = 0; total <= r.exactness_degree; ++total)
  {
    std::array<int, 3> a{0, 0, 0};
    // enumerate exponents of the given total degree, lexicographic
    auto rec = [&](auto&& self, int i, int rem) -> std::optional<std::string> {
      if (i == r.dim - 1)
      {
        a[i] = rem;
        const double exact = detail::simplex_monomial_integral(r.dim, a);
        double approx = 0.0;
        for (int q = 0; q < r.size(); ++q)
        {
          double v = r.weights[q];
          for (int c = 0; c < r.dim; ++c)
            for (int e = 0; e < a[c]; ++e)
              v *= r.points[q][c];
          approx += v;
        }
        const double err = std::abs(approx - exact);
        const double tol =
            std::abs(exact) < 1e-6 ? 1e-13 : 1e-12 * std::abs(exact);
        if (err > tol)
          return detail::monomial_name(r.dim, a);
        return std::nullopt;
      }
      for (int v = 0; v <= rem; ++v)
      {
        a[i] = v;
        if (auto fail = self(self, i + 1, rem - v))
          return fail;
      }
      return std::nullopt;
    };
    if (auto fail = rec(rec, 0, total))
      return fail;
  }
  return std::nullopt;
}

/// Parse rule tables: header `simplex <dim> degree <q> npoints <k>`
/// followed by k lines of dim+1 numbers (coordinates then weight).
/// '#' starts a comment. Every parsed rule is verified against the
/// monomial-exactness gate before it is accepted.
inline std::vector<QuadratureRule> load_tabulated(std::istream& in)
{
  std::vector<QuadratureRule> rules;
  std::string line;
  QuadratureRule cur;
  int expected = 0;

  auto finish = [&]() {
    if (expected != 0 && cur.size() != expected)
      throw std::runtime_error("load_tabulated: rule declares " +
                               std::to_string(expected) + " points but has " +
                               std::to_string(cur.size()));
    if (expected != 0)
    {
      if (auto fail = exactness_failure(cur))
        throw std::runtime_error(
            "load_tabulated: rule of declared degree " +
            std::to_string(cur.exactness_degree) +
            " fails exactness for monomial \"" + *fail + "\"");
      rules.push_back(cur);
    }
    cur = QuadratureRule{};
    expected = 0;
  };

  while (std::getline(in, line))
  {
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first))
      continue;
    if (first == "simplex")
    {
      finish();
      std::string kw_degree, kw_npoints;
      int dim = 0, deg = -1, npts = 0;
      if (!(ls >> dim >> kw_degree >> deg >> kw_npoints >> npts) ||
          kw_degree != "degree" || kw_npoints != "npoints" || dim < 1 ||
          dim > 3 || deg < 0 || npts < 1)
        throw std::runtime_error("load_tabulated: malformed header: " + line);
      cur = QuadratureRule{dim, {}, {}, deg, Provenance::tabulated};
      expected = npts;
    }
    else
    {
      if (expected == 0)
        throw std::runtime_error("load_tabulated: data before header: " +
                                 line);
      std::istringstream ps(line);
      Vec x{0, 0, 0};
      double w = 0.0;
      for (int c = 0; c < cur.dim; ++c)
        if (!(ps >> x[c]))
          throw std::runtime_error("load_tabulated: malformed point line: " +
                                   line);
      if (!(ps >> w))
        throw std::runtime_error("load_tabulated: malformed point line: " +
                                 line);
      cur.points.push_back(x);
      cur.weights.push_back(w);
      if (cur.size() > expected)
        throw std::runtime_error("load_tabulated: too many points in rule");
    }
  }
  finish();
  return rules;
}

/// Verified tabulated rules, grouped by dimension. Filled once at startup
/// (e.g. from the --quad-tables directory) and read-only afterwards.
class RuleRegistry {
public:
  void add(QuadratureRule rule)
  {
    rules_[rule.dim].push_back(std::move(rule));
  }

  void add_stream(std::istream& in)
  {
    for (QuadratureRule& r : load_tabulated(in))
      add(std::move(r));
  }

  /// Smallest verified rule with exactness >= degree, if any.
  const QuadratureRule* best(int dim, int degree) const
  {
    const auto it = rules_.find(dim);
    if (it == rules_.end())
      return nullptr;
    const QuadratureRule* out = nullptr;
    for (const QuadratureRule& r : it->second)
      if (r.exactness_degree >= degree && (!out || r.size() < out->size()))
        out = &r;
    return out;
  }

private:
  std::map<int, std::vector<QuadratureRule>> rules_;
};

namespace detail {

inline std::vector<QuadratureRule> handcoded_rules(int dim)
{
  std::vector<QuadratureRule> rules;
  if (dim == 2)
  {
    rules.push_back(QuadratureRule{2,
                                   {Vec{1.0 / 3.0, 1.0 / 3.0, 0}},
                                   {0.5},
                                   1,
                                   Provenance::handcoded});
    rules.push_back(QuadratureRule{
        2,
        {Vec{0.5, 0.0, 0}, Vec{0.5, 0.5, 0}, Vec{0.0, 0.5, 0}},
        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
        2,
        Provenance::handcoded});
  }
  return rules;
}

} // namespace detail

/// Rule-selection policy: among the tabulated, hand-coded and Stroud
/// candidates with sufficient exactness, take the smallest point count;
/// ties prefer tabulated rules, then the Stroud fall-back.
inline QuadratureRule create_quadrature(const cells::ReferenceCell& cell,
                                        int degree,
                                        const RuleRegistry* tables = nullptr)
{
  if (degree < 0)
    throw std::invalid_argument("create_quadrature: degree must be >= 0");
  QuadratureRule best = stroud_conical(cell, degree);
  int best_rank = 1; // tabulated 0, stroud 1, handcoded 2
  for (const QuadratureRule& r : detail::handcoded_rules(cell.dim()))
    if (r.exactness_degree >= degree &&
        (r.size() < best.size() || (r.size() == best.size() && 2 < best_rank)))
    {
      best = r;
      best_rank = 2;
    }
  if (tables)
    if (const QuadratureRule* r = tables->best(cell.dim(), degree))
      if (r->size() < best.size() ||
          (r->size() == best.size() && 0 < best_rank))
      {
        best = *r;
        best_rank = 0;
      }
  return best;
}

} // namespace ciarlet::quadrature
