#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ciarlet/common.hpp"
#include "ciarlet/nodes.hpp"

namespace ciarlet::cells {

/// Reference to one topological entity of a cell.
struct EntityRef {
  int dim;
  int id;
};

/// The unit right simplex in dimension 1, 2 or 3 together with its entity
/// topology. Entities of each dimension are the sorted vertex tuples in
/// lexicographic order, so entity numbering is deterministic.
class ReferenceCell {
public:
  explicit ReferenceCell(int dim) : dim_(dim)
  {
    if (dim < 1 || dim > 3)
      throw std::invalid_argument("ReferenceCell: dim must be 1, 2 or 3");
    vertices_.assign(dim + 1, Vec{0, 0, 0});
    for (int i = 0; i < dim; ++i)
      vertices_[i + 1][i] = 1.0;

    topology_.resize(dim + 1);
    for (int e = 0; e <= dim; ++e)
    {
      // all (e+1)-subsets of {0..dim}, lexicographic
      std::vector<int> pick(e + 1);
      auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == e + 1)
        {
          topology_[e].push_back(pick);
          return;
        }
        for (int v = start; v <= dim; ++v)
        {
          pick[pos] = v;
          self(self, pos + 1, v + 1);
        }
      };
      rec(rec, 0, 0);
    }
  }

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  const std::vector<std::vector<int>>& entities(int edim) const
  {
    check_entity_dim(edim);
    return topology_[edim];
  }

  int num_entities(int edim) const
  {
    check_entity_dim(edim);
    return static_cast<int>(topology_[edim].size());
  }

  const std::vector<int>& entity_vertices(EntityRef e) const
  {
    check_entity(e);
    return topology_[e.dim][e.id];
  }

  /// Measure of the reference cell: 1, 1/2 or 1/6.
  double measure() const
  {
    return dim_ == 1 ? 1.0 : dim_ == 2 ? 0.5 : 1.0 / 6.0;
  }

  static double simplex_measure(int d)
  {
    return d == 0 ? 1.0 : d == 1 ? 1.0 : d == 2 ? 0.5 : 1.0 / 6.0;
  }

  Vec centroid() const
  {
    Vec c{0, 0, 0};
    for (const Vec& v : vertices_)
      c = c + v;
    return (1.0 / (dim_ + 1)) * c;
  }

  Vec entity_centroid(EntityRef e) const
  {
    const auto& verts = entity_vertices(e);
    Vec c{0, 0, 0};
    for (int v : verts)
      c = c + vertices_[v];
    return (1.0 / static_cast<double>(verts.size())) * c;
  }

  /// Measure (length/area) of an entity as a flat simplex.
  double entity_measure(EntityRef e) const
  {
    const auto& verts = entity_vertices(e);
    if (e.dim == 0)
      return 1.0;
    if (e.dim == 1)
      return norm(vertices_[verts[1]] - vertices_[verts[0]]);
    if (e.dim == 2)
    {
      const Vec a = vertices_[verts[1]] - vertices_[verts[0]];
      const Vec b = vertices_[verts[2]] - vertices_[verts[0]];
      return 0.5 * norm(cross(a, b));
    }
    return measure();
  }

  /// Embed a point given in the coordinates of the entity's own reference
  /// simplex into cell coordinates.
  Vec entity_embed(EntityRef e, const Vec& xi) const
  {
    const auto& verts = entity_vertices(e);
    Vec x = vertices_[verts[0]];
    for (int k = 0; k < e.dim; ++k)
      x = x + xi[k] * (vertices_[verts[k + 1]] - vertices_[verts[0]]);
    return x;
  }

  /// Unit outward normal of a facet (entity of dimension dim-1).
  Vec facet_normal(int facet_id) const
  {
    const EntityRef f{dim_ - 1, facet_id};
    const auto& verts = entity_vertices(f);
    Vec n{0, 0, 0};
    if (dim_ == 1)
      n = Vec{1, 0, 0};
    else if (dim_ == 2)
    {
      const Vec d = vertices_[verts[1]] - vertices_[verts[0]];
      n = Vec{d[1], -d[0], 0};
    }
    else
    {
      const Vec a = vertices_[verts[1]] - vertices_[verts[0]];
      const Vec b = vertices_[verts[2]] - vertices_[verts[0]];
      n = cross(a, b);
    }
    n = (1.0 / norm(n)) * n;
    if (dot(n, entity_centroid(f) - centroid()) < 0)
      n = -1.0 * n;
    return n;
  }

  /// Orthonormal tangents spanning a facet. The leading tangent points
  /// from the lower-numbered to the higher-numbered vertex.
  std::vector<Vec> facet_tangents(int facet_id) const
  {
    const EntityRef f{dim_ - 1, facet_id};
    const auto& verts = entity_vertices(f);
    std::vector<Vec> ts;
    if (dim_ == 1)
      return ts;
    Vec t1 = vertices_[verts[1]] - vertices_[verts[0]];
    t1 = (1.0 / norm(t1)) * t1;
    ts.push_back(t1);
    if (dim_ == 3)
    {
      Vec t2 = vertices_[verts[2]] - vertices_[verts[0]];
      t2 = t2 - dot(t2, t1) * t1;
      t2 = (1.0 / norm(t2)) * t2;
      ts.push_back(t2);
    }
    return ts;
  }

  /// Edge tangent (from lower- to higher-numbered vertex), unit length.
  Vec edge_tangent(int edge_id) const
  {
    const auto& verts = entity_vertices(EntityRef{1, edge_id});
    Vec t = vertices_[verts[1]] - vertices_[verts[0]];
    return (1.0 / norm(t)) * t;
  }

  /// Points of the degree-`degree` lattice strictly interior to an entity,
  /// embedded in cell coordinates. Vertices return the vertex itself;
  /// degree 0 on the cell entity returns the centroid.
  std::vector<Vec> make_points(EntityRef e, int degree,
                               nodes::Variant variant) const
  {
    check_entity(e);
    if (e.dim == 0)
      return {vertices_[entity_vertices(e)[0]]};
    if (degree == 0 && e.dim == dim_)
      return {centroid()};
    if (degree < 1)
      throw std::invalid_argument("make_points: degree must be >= 1");

    const auto& verts = entity_vertices(e);
    std::vector<Vec> out;
    const nodes::NodeFamily fam = nodes::make_family(variant, e.dim, degree);
    for (const Bary& b : fam.points)
    {
      bool interior = true;
      for (int k = 0; k <= e.dim; ++k)
        interior = interior && b[k] > 1e-12;
      if (!interior)
        continue;
      Vec x{0, 0, 0};
      for (int k = 0; k <= e.dim; ++k)
        x = x + b[k] * vertices_[verts[k]];
      out.push_back(x);
    }
    return out;
  }

private:
  void check_entity_dim(int edim) const
  {
    if (edim < 0 || edim > dim_)
      throw std::invalid_argument("ReferenceCell: bad entity dimension");
  }
  void check_entity(EntityRef e) const
  {
    check_entity_dim(e.dim);
    if (e.id < 0 || e.id >= static_cast<int>(topology_[e.dim].size()))
      throw std::invalid_argument("ReferenceCell: bad entity id");
  }

  int dim_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<std::vector<int>>> topology_;
};

inline ReferenceCell make_cell(int dim) { return ReferenceCell(dim); }

} // namespace ciarlet::cells
