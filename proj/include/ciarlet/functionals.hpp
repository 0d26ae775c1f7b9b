#pragma once

#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ciarlet/common.hpp"
#include "ciarlet/polyset.hpp"
#include "ciarlet/quadrature.hpp"
#include "ciarlet/reference_cell.hpp"

namespace ciarlet::functionals {

enum class Kind { point_eval, point_normal, point_tangential, integral_moment };

/// One weighted point/component evaluation.
struct Term {
  Vec point;
  int component;
  double weight;
};

/// Vector (or scalar, with only [0] used) value of a target function.
using Value = std::array<double, 3>;
using ValueFn = std::function<Value(const Vec&)>;

/// A degree of freedom materialized as a finite weighted sum of component
/// evaluations at points. The same representation serves point
/// evaluations, point normal/tangential components and quadrature-backed
/// integral moments, so one `apply` path drives both Vandermonde assembly
/// and interpolation.
class Functional {
public:
  Functional(Kind kind, cells::EntityRef attachment, int value_size,
             std::vector<Term> terms, int quad_degree = -1)
      : kind_(kind), attachment_(attachment), value_size_(value_size),
        terms_(std::move(terms)), quad_degree_(quad_degree)
  {
    for (const Term& t : terms_)
      if (t.component < 0 || t.component >= value_size_)
        throw std::invalid_argument("Functional: component out of range");
  }

  Kind kind() const { return kind_; }
  cells::EntityRef attachment() const { return attachment_; }
  int value_size() const { return value_size_; }
  const std::vector<Term>& terms() const { return terms_; }
  int quad_degree() const { return quad_degree_; }

  double apply(const ValueFn& f) const
  {
    double s = 0.0;
    for (const Term& t : terms_)
      s += t.weight * f(t.point)[t.component];
    return s;
  }

  /// Apply to a table of precomputed values, one entry per term.
  double apply_values(const std::vector<double>& values) const
  {
    if (values.size() != terms_.size())
      throw std::invalid_argument(
          "Functional: evaluation table does not cover every term");
    double s = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      s += terms_[i].weight * values[i];
    return s;
  }

private:
  Kind kind_;
  cells::EntityRef attachment_;
  int value_size_;
  std::vector<Term> terms_;
  int quad_degree_;
};

namespace detail {

inline Bary barycentric(const cells::ReferenceCell& cell, const Vec& x)
{
  Bary b{0, 0, 0, 0};
  double rest = 1.0;
  for (int i = 0; i < cell.dim(); ++i)
  {
    b[i + 1] = x[i];
    rest -= x[i];
  }
  b[0] = rest;
  return b;
}

inline void check_in_cell(const cells::ReferenceCell& cell, const Vec& x)
{
  const Bary b = barycentric(cell, x);
  for (int i = 0; i <= cell.dim(); ++i)
    if (b[i] < -1e-12)
      throw std::invalid_argument("Functional: point outside reference cell");
}

inline void check_on_facet(const cells::ReferenceCell& cell, int facet_id,
                           const Vec& x)
{
  check_in_cell(cell, x);
  const Bary b = barycentric(cell, x);
  const auto& fverts =
      cell.entity_vertices(cells::EntityRef{cell.dim() - 1, facet_id});
  for (int v = 0; v <= cell.dim(); ++v)
  {
    bool in_facet = false;
    for (int fv : fverts)
      in_facet = in_facet || fv == v;
    if (!in_facet && std::abs(b[v]) > 1e-12)
      throw std::invalid_argument("Functional: point not on facet");
  }
}

} // namespace detail

/// Evaluation of the (scalar) target at a point.
inline Functional point_evaluation(const cells::ReferenceCell& cell,
                                   cells::EntityRef attachment, const Vec& p)
{
  detail::check_in_cell(cell, p);
  return Functional(Kind::point_eval, attachment, 1, {Term{p, 0, 1.0}});
}

/// u(p) . n for the outward unit normal of a facet.
inline Functional point_normal(const cells::ReferenceCell& cell, int facet_id,
                               const Vec& p)
{
  detail::check_on_facet(cell, facet_id, p);
  const Vec n = cell.facet_normal(facet_id);
  std::vector<Term> terms;
  for (int c = 0; c < cell.dim(); ++c)
    terms.push_back(Term{p, c, n[c]});
  return Functional(Kind::point_normal,
                    cells::EntityRef{cell.dim() - 1, facet_id}, cell.dim(),
                    std::move(terms));
}

/// u(p) . t for a unit facet tangent; tangents point from the lower- to
/// the higher-numbered vertex.
inline Functional point_tangential(const cells::ReferenceCell& cell,
                                   int facet_id, const Vec& p,
                                   int tangent_index = 0)
{
  detail::check_on_facet(cell, facet_id, p);
  const std::vector<Vec> ts = cell.facet_tangents(facet_id);
  if (tangent_index < 0 || tangent_index >= static_cast<int>(ts.size()))
    throw std::invalid_argument("point_tangential: bad tangent index");
  std::vector<Term> terms;
  for (int c = 0; c < cell.dim(); ++c)
    terms.push_back(Term{p, c, ts[tangent_index][c]});
  return Functional(Kind::point_tangential,
                    cells::EntityRef{cell.dim() - 1, facet_id}, cell.dim(),
                    std::move(terms));
}

/// u(p) . t for an edge of a 3D cell.
inline Functional point_edge_tangential(const cells::ReferenceCell& cell,
                                        int edge_id, const Vec& p)
{
  detail::check_in_cell(cell, p);
  const Vec t = cell.edge_tangent(edge_id);
  std::vector<Term> terms;
  for (int c = 0; c < cell.dim(); ++c)
    terms.push_back(Term{p, c, t[c]});
  return Functional(Kind::point_tangential, cells::EntityRef{1, edge_id},
                    cell.dim(), std::move(terms));
}

/// Quadrature rule on an entity, embedded into cell coordinates with the
/// measure scaling |entity| / |reference simplex| folded into the weights.
struct EntityRule {
  cells::EntityRef entity;
  std::vector<Vec> ref_points;  // on the entity's own reference simplex
  std::vector<Vec> cell_points; // embedded in cell coordinates
  std::vector<double> weights;  // scaled quadrature weights
  int degree;
};

inline EntityRule make_entity_rule(const cells::ReferenceCell& cell,
                                   cells::EntityRef entity, int degree)
{
  if (entity.dim < 1)
    throw std::invalid_argument("make_entity_rule: entity must have dim >= 1");
  EntityRule er;
  er.entity = entity;
  er.degree = degree;
  const cells::ReferenceCell sub(entity.dim);
  const quadrature::QuadratureRule rule =
      quadrature::stroud_conical(sub, degree);
  const double scaling = cell.entity_measure(entity) /
                         cells::ReferenceCell::simplex_measure(entity.dim);
  for (int q = 0; q < rule.size(); ++q)
  {
    er.ref_points.push_back(rule.points[q]);
    er.cell_points.push_back(cell.entity_embed(entity, rule.points[q]));
    er.weights.push_back(rule.weights[q] * scaling);
  }
  return er;
}

/// Integral moment against a prescribed per-component weight function.
/// `weight` is evaluated in the entity's own reference coordinates and
/// returns the weight applied to each component of the target.
inline Functional integral_moment_weighted(const EntityRule& rule,
                                           const std::function<Value(const Vec&)>& weight,
                                           int value_size)
{
  std::vector<Term> terms;
  for (std::size_t q = 0; q < rule.ref_points.size(); ++q)
  {
    const Value w = weight(rule.ref_points[q]);
    for (int c = 0; c < value_size; ++c)
      if (w[c] != 0.0)
        terms.push_back(Term{rule.cell_points[q], c, rule.weights[q] * w[c]});
  }
  return Functional(Kind::integral_moment, rule.entity, value_size,
                    std::move(terms), rule.degree);
}

/// Component selector for the public integral-moment builder.
struct SelectScalar {};
struct SelectNormal {};
struct SelectTangential {
  int index = 0;
};
struct SelectComponent {
  int component = 0;
};
using Selector =
    std::variant<SelectScalar, SelectNormal, SelectTangential, SelectComponent>;

/// Build the moment of (a component of) the target against a scalar
/// weight polynomial on an entity. The quadrature rule is exact to
/// weight_degree + embedded_degree + q, so `q` buys extra exactness for
/// non-polynomial targets.
inline Functional integral_moment(const cells::ReferenceCell& cell,
                                  cells::EntityRef entity,
                                  const std::function<double(const Vec&)>& weight_fn,
                                  int weight_degree, const Selector& sel,
                                  int embedded_degree, int q = 0)
{
  if (q < 0)
    throw std::invalid_argument("integral_moment: q must be >= 0");
  const EntityRule rule =
      make_entity_rule(cell, entity, weight_degree + embedded_degree + q);

  Vec dir{1, 0, 0};
  int value_size = 1;
  if (std::holds_alternative<SelectNormal>(sel))
  {
    if (entity.dim != cell.dim() - 1)
      throw std::invalid_argument("integral_moment: normal needs a facet");
    dir = cell.facet_normal(entity.id);
    value_size = cell.dim();
  }
  else if (const auto* t = std::get_if<SelectTangential>(&sel))
  {
    if (entity.dim == 1)
      dir = cell.edge_tangent(entity.id);
    else if (entity.dim == cell.dim() - 1)
      dir = cell.facet_tangents(entity.id).at(t->index);
    else
      throw std::invalid_argument(
          "integral_moment: tangential needs an edge or facet");
    value_size = cell.dim();
  }
  else if (const auto* c = std::get_if<SelectComponent>(&sel))
  {
    value_size = cell.dim();
    dir = Vec{0, 0, 0};
    dir[c->component] = 1.0;
  }

  return integral_moment_weighted(
      rule,
      [&](const Vec& xi) {
        const double w = weight_fn(xi);
        return Value{w * dir[0], w * dir[1], w * dir[2]};
      },
      value_size);
}

} // namespace ciarlet::functionals
