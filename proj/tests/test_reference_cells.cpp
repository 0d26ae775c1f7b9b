#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "ciarlet/reference_cell.hpp"

using namespace ciarlet;
using cells::EntityRef;
using cells::ReferenceCell;

TEST_CASE("entity counts match the simplex combinatorics")
{
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    REQUIRE(static_cast<int>(cell.vertices().size()) == dim + 1);
    for (int e = 0; e <= dim; ++e)
      CHECK(cell.num_entities(e) == binomial(dim + 1, e + 1));
    // top entity contains all vertices
    CHECK(cell.entity_vertices(EntityRef{dim, 0}).size() ==
          static_cast<std::size_t>(dim + 1));
  }
  CHECK_THROWS_AS(ReferenceCell(0), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceCell(4), std::invalid_argument);
}

TEST_CASE("interval topology")
{
  const ReferenceCell cell(1);
  CHECK(cell.vertices()[0][0] == 0.0);
  CHECK(cell.vertices()[1][0] == 1.0);
  CHECK(cell.entity_vertices(EntityRef{1, 0}) == std::vector<int>{0, 1});
}

TEST_CASE("triangle edges are lexicographic and strictly increasing")
{
  const ReferenceCell cell(2);
  CHECK(cell.entities(1) ==
        std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  for (int e = 0; e <= 2; ++e)
    for (const auto& ent : cell.entities(e))
      CHECK(std::is_sorted(ent.begin(), ent.end(),
                           [](int a, int b) { return a <= b; }));
}

TEST_CASE("tetrahedron has 4 vertices, 6 edges, 4 faces, 1 cell")
{
  const ReferenceCell cell(3);
  CHECK(cell.num_entities(0) == 4);
  CHECK(cell.num_entities(1) == 6);
  CHECK(cell.num_entities(2) == 4);
  CHECK(cell.num_entities(3) == 1);
}

TEST_CASE("facet normals are outward and unit")
{
  for (int dim = 2; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    for (int f = 0; f < cell.num_entities(dim - 1); ++f)
    {
      const Vec n = cell.facet_normal(f);
      CHECK(std::abs(norm(n) - 1.0) < 1e-14);
      const EntityRef fe{dim - 1, f};
      CHECK(dot(n, cell.entity_centroid(fe) - cell.centroid()) > 0.0);
      // orthogonal to every facet edge
      const auto& verts = cell.entity_vertices(fe);
      for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 1; b < verts.size(); ++b)
          CHECK(std::abs(dot(n, cell.vertices()[verts[a]] -
                                    cell.vertices()[verts[b]])) < 1e-14);
    }
  }
}

TEST_CASE("specific normals")
{
  const ReferenceCell tri(2);
  // edges in lex order: (0,1) bottom, (0,2) left, (1,2) hypotenuse
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(tri.facet_normal(0)[0] == Catch::Approx(0.0).margin(1e-15));
  CHECK(tri.facet_normal(0)[1] == Catch::Approx(-1.0));
  CHECK(tri.facet_normal(2)[0] == Catch::Approx(s));
  CHECK(tri.facet_normal(2)[1] == Catch::Approx(s));

  const ReferenceCell tet(3);
  // face (1,2,3) is opposite vertex 0, the plane x+y+z = 1
  const double t = 1.0 / std::sqrt(3.0);
  const Vec n = tet.facet_normal(3);
  CHECK(n[0] == Catch::Approx(t));
  CHECK(n[1] == Catch::Approx(t));
  CHECK(n[2] == Catch::Approx(t));
}

TEST_CASE("facet tangents are orthonormal and span the facet")
{
  const ReferenceCell tet(3);
  for (int f = 0; f < 4; ++f)
  {
    const auto ts = tet.facet_tangents(f);
    REQUIRE(ts.size() == 2);
    CHECK(std::abs(norm(ts[0]) - 1.0) < 1e-14);
    CHECK(std::abs(norm(ts[1]) - 1.0) < 1e-14);
    CHECK(std::abs(dot(ts[0], ts[1])) < 1e-14);
    CHECK(std::abs(dot(ts[0], tet.facet_normal(f))) < 1e-14);
    CHECK(std::abs(dot(ts[1], tet.facet_normal(f))) < 1e-14);
  }
}

TEST_CASE("make_points on entities")
{
  const ReferenceCell tri(2);

  // vertices return themselves, any degree
  for (int v = 0; v < 3; ++v)
  {
    const auto pts = tri.make_points(EntityRef{0, v}, 4,
                                     nodes::Variant::equispaced);
    REQUIRE(pts.size() == 1);
    CHECK(norm(pts[0] - tri.vertices()[v]) == 0.0);
  }

  // cell entity, degree 3: single interior point (1/3, 1/3)
  const auto inner =
      tri.make_points(EntityRef{2, 0}, 3, nodes::Variant::equispaced);
  REQUIRE(inner.size() == 1);
  CHECK(inner[0][0] == Catch::Approx(1.0 / 3.0));
  CHECK(inner[0][1] == Catch::Approx(1.0 / 3.0));

  // edge (0,1), degree 2: midpoint (1/2, 0)
  const auto mid =
      tri.make_points(EntityRef{1, 0}, 2, nodes::Variant::equispaced);
  REQUIRE(mid.size() == 1);
  CHECK(mid[0][0] == Catch::Approx(0.5));
  CHECK(mid[0][1] == Catch::Approx(0.0).margin(1e-15));

  // degree 0 on the cell entity: centroid
  const auto c = tri.make_points(EntityRef{2, 0}, 0, nodes::Variant::equispaced);
  REQUIRE(c.size() == 1);
  CHECK(c[0][0] == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("interior point counts sum to the lattice size")
{
  for (int dim = 1; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    for (int n = 1; n <= 10; ++n)
      for (const auto variant :
           {nodes::Variant::equispaced, nodes::Variant::spectral})
      {
        std::size_t total = 0;
        for (int e = 0; e <= dim; ++e)
          for (int id = 0; id < cell.num_entities(e); ++id)
            total += cell.make_points(EntityRef{e, id}, n, variant).size();
        CHECK(total == static_cast<std::size_t>(binomial(n + dim, dim)));
      }
  }
}

TEST_CASE("equispaced entity points concatenate to the full lattice")
{
  const int n = 5;
  for (int dim = 2; dim <= 3; ++dim)
  {
    const ReferenceCell cell(dim);
    std::vector<Vec> all;
    for (int e = 0; e <= dim; ++e)
      for (int id = 0; id < cell.num_entities(e); ++id)
        for (const Vec& p :
             cell.make_points(EntityRef{e, id}, n, nodes::Variant::equispaced))
          all.push_back(p);

    // the full lattice: barycentric multiples of 1/n
    std::set<std::array<long, 3>> expected, got;
    const auto key = [&](const Vec& p) {
      return std::array<long, 3>{std::lround(p[0] * n * 6),
                                 std::lround(p[1] * n * 6),
                                 std::lround(p[2] * n * 6)};
    };
    for (const auto& a : nodes::detail::multi_indices(dim + 1, n))
    {
      Vec p{0, 0, 0};
      for (int k = 0; k < dim; ++k)
        p[k] = static_cast<double>(a[k + 1]) / n;
      expected.insert(key(p));
    }
    for (const Vec& p : all)
      got.insert(key(p));
    CHECK(expected == got);
  }
}
