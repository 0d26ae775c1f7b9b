#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciarlet/common.hpp"
#include "ciarlet/functionals.hpp"
#include "ciarlet/linalg.hpp"
#include "ciarlet/polyset.hpp"
#include "ciarlet/quadrature.hpp"
#include "ciarlet/reference_cell.hpp"

namespace ciarlet::elements {

enum class MappingKind { affine, contravariant_piola, covariant_piola };

/// Element variant: node placement for Lagrange, DOF style for the vector
/// elements. integral(q) requests quadrature with degree q more than the
/// basis itself requires.
struct Variant {
  enum class Kind { equispaced, spectral, point, integral } kind;
  int extra_degree = 0;
};

inline Variant parse_variant(const std::string& s)
{
  if (s == "equispaced")
    return {Variant::Kind::equispaced, 0};
  if (s == "spectral")
    return {Variant::Kind::spectral, 0};
  if (s == "point")
    return {Variant::Kind::point, 0};
  if (s == "integral")
    return {Variant::Kind::integral, 0};
  if (s.rfind("integral(", 0) == 0 && s.back() == ')')
  {
    const int q = std::stoi(s.substr(9, s.size() - 10));
    if (q < 0)
      throw std::invalid_argument("variant: q must be >= 0");
    return {Variant::Kind::integral, q};
  }
  throw std::invalid_argument("unknown element variant: " + s);
}

/// Raised when the generalized Vandermonde matrix is numerically
/// singular, i.e. the dual set does not determine the space.
class unisolvence_error : public std::runtime_error {
public:
  unisolvence_error(int pivot, const std::string& what)
      : std::runtime_error(what), pivot_(pivot)
  {
  }
  int pivot_index() const { return pivot_; }

private:
  int pivot_;
};

/// Nodal-basis values laid out as [derivative][dof][component][point].
class ElementTabulation {
public:
  ElementTabulation(int dim, int order, int ndofs, int value_size, int npoints)
      : dim_(dim), order_(order), ndofs_(ndofs), vs_(value_size),
        npts_(npoints),
        data_(static_cast<std::size_t>(polyset::num_derivative_slots(dim, order)) *
                  ndofs * value_size * npoints,
              0.0)
  {
  }

  int num_derivatives() const
  {
    return polyset::num_derivative_slots(dim_, order_);
  }
  int num_dofs() const { return ndofs_; }
  int value_size() const { return vs_; }
  int num_points() const { return npts_; }

  double& operator()(int d, int i, int c, int p)
  {
    return data_[((static_cast<std::size_t>(d) * ndofs_ + i) * vs_ + c) *
                     npts_ +
                 p];
  }
  double operator()(int d, int i, int c, int p) const
  {
    return data_[((static_cast<std::size_t>(d) * ndofs_ + i) * vs_ + c) *
                     npts_ +
                 p];
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
  int dim_, order_, ndofs_, vs_, npts_;
  std::vector<double> data_;
};

/// A finite element as the triple (cell, space, dual basis). The space is
/// stored as coefficients over the scalar expansion set per component; the
/// nodal basis is synthesized by inverting the generalized Vandermonde
/// matrix V_ij = n_i(phi_j).
class CiarletElement {
public:
  CiarletElement(const cells::ReferenceCell& cell, int value_size,
                 int embedded_degree, linalg::DenseMatrix space_coeffs,
                 std::vector<functionals::Functional> dual,
                 std::vector<std::vector<std::vector<int>>> entity_dofs,
                 MappingKind mapping)
      : cell_(cell), value_size_(value_size), degree_(embedded_degree),
        expansion_(cell, embedded_degree), coeffs_(std::move(space_coeffs)),
        dual_(std::move(dual)), entity_dofs_(std::move(entity_dofs)),
        mapping_(mapping)
  {
    const int ndofs = static_cast<int>(dual_.size());
    if (coeffs_.rows() != ndofs)
      throw std::invalid_argument(
          "CiarletElement: dual size does not match space dimension");
    if (coeffs_.cols() != value_size_ * expansion_.size())
      throw std::invalid_argument("CiarletElement: bad coefficient width");
    check_entity_dofs();

    // Tabulate the expansion set at all functional points at once.
    std::vector<Vec> pts;
    for (const auto& f : dual_)
      for (const auto& t : f.terms())
        pts.push_back(t.point);
    const polyset::TabulationTable table = expansion_.tabulate(pts, 0);

    const int es = expansion_.size();
    dual_matrix_ = linalg::DenseMatrix(ndofs, value_size_ * es);
    int off = 0;
    for (int i = 0; i < ndofs; ++i)
    {
      for (const auto& t : dual_[i].terms())
      {
        for (int e = 0; e < es; ++e)
          dual_matrix_(i, t.component * es + e) += t.weight * table(0, e, off);
        ++off;
      }
    }

    vandermonde_ = linalg::matmul(dual_matrix_, coeffs_.transposed());
    try
    {
      linalg::LuFactorization lu(vandermonde_);
      vandermonde_inverse_ = lu.solve_many(linalg::DenseMatrix::identity(ndofs));
    }
    catch (const linalg::singular_matrix_error& e)
    {
      throw unisolvence_error(e.pivot_index(),
                              "unisolvence failure: pivot " +
                                  std::to_string(e.pivot_index()) +
                                  " of the Vandermonde matrix is negligible");
    }
    nodal_coeffs_ = linalg::matmul(vandermonde_inverse_.transposed(), coeffs_);
  }

  const cells::ReferenceCell& cell() const { return cell_; }
  int dim() const { return cell_.dim(); }
  int value_size() const { return value_size_; }
  int embedded_degree() const { return degree_; }
  int space_dim() const { return static_cast<int>(dual_.size()); }
  MappingKind mapping() const { return mapping_; }
  const std::vector<functionals::Functional>& dual() const { return dual_; }
  const std::vector<std::vector<std::vector<int>>>& entity_dofs() const
  {
    return entity_dofs_;
  }
  const linalg::DenseMatrix& vandermonde() const { return vandermonde_; }
  const linalg::DenseMatrix& vandermonde_inverse() const
  {
    return vandermonde_inverse_;
  }
  /// Expansion coefficients of the nodal basis (row per basis function).
  const linalg::DenseMatrix& nodal_coefficients() const
  {
    return nodal_coeffs_;
  }

  /// kappa_2 of the Vandermonde matrix; computed on first use.
  double vandermonde_condition() const
  {
    if (!kappa_)
      kappa_ = linalg::condition_2norm(vandermonde_);
    return *kappa_;
  }

  /// n_i(psi_j) for the synthesized nodal basis; identity when the
  /// element is sound.
  linalg::DenseMatrix duality_matrix() const
  {
    return linalg::matmul(dual_matrix_, nodal_coeffs_.transposed());
  }

  /// Tabulate the nodal basis with derivatives up to order <= 2.
  ElementTabulation tabulate(const std::vector<Vec>& points, int order) const
  {
    const polyset::TabulationTable t = expansion_.tabulate(points, order);
    const int es = expansion_.size();
    const int np = static_cast<int>(points.size());
    ElementTabulation out(dim(), order, space_dim(), value_size_, np);
    for (int d = 0; d < t.num_derivatives(); ++d)
      for (int i = 0; i < space_dim(); ++i)
        for (int c = 0; c < value_size_; ++c)
        {
          for (int e = 0; e < es; ++e)
          {
            const double w = nodal_coeffs_(i, c * es + e);
            if (w == 0.0)
              continue;
            for (int p = 0; p < np; ++p)
              out(d, i, c, p) += w * t(d, e, p);
          }
        }
    return out;
  }

  /// Coefficient vector of the nodal interpolant: n_i(u).
  std::vector<double> interpolate(const functionals::ValueFn& u) const
  {
    std::vector<double> coeffs(space_dim());
    for (int i = 0; i < space_dim(); ++i)
      coeffs[i] = dual_[i].apply(u);
    return coeffs;
  }

  /// Number of DOFs on each entity of the given dimension (uniform across
  /// entities of one dimension for every catalog element).
  int entity_dof_count(int edim) const
  {
    return entity_dofs_[edim].empty()
               ? 0
               : static_cast<int>(entity_dofs_[edim][0].size());
  }

private:
  void check_entity_dofs() const
  {
    std::vector<int> seen(dual_.size(), 0);
    if (static_cast<int>(entity_dofs_.size()) != dim() + 1)
      throw std::invalid_argument("CiarletElement: bad entity_dofs shape");
    for (int edim = 0; edim <= dim(); ++edim)
    {
      if (static_cast<int>(entity_dofs_[edim].size()) !=
          cell_.num_entities(edim))
        throw std::invalid_argument("CiarletElement: bad entity_dofs shape");
      for (const auto& dofs : entity_dofs_[edim])
        for (int d : dofs)
          ++seen.at(d);
    }
    for (int c : seen)
      if (c != 1)
        throw std::invalid_argument(
            "CiarletElement: entity dofs do not partition the dof range");
  }

  cells::ReferenceCell cell_;
  int value_size_;
  int degree_;
  polyset::ExpansionSet expansion_;
  linalg::DenseMatrix coeffs_;
  std::vector<functionals::Functional> dual_;
  std::vector<std::vector<std::vector<int>>> entity_dofs_;
  MappingKind mapping_;
  linalg::DenseMatrix dual_matrix_;
  linalg::DenseMatrix vandermonde_;
  linalg::DenseMatrix vandermonde_inverse_;
  linalg::DenseMatrix nodal_coeffs_;
  mutable std::optional<double> kappa_;
};

namespace detail {

/// A polynomial vector space stored as coefficient rows over the scalar
/// expansion set of the stated embedding degree.
struct VectorSpace {
  int value_size;
  int embedded_degree;
  linalg::DenseMatrix coeffs;
};

// (P_m)^d expressed over the expansion set of degree n_embed.
inline VectorSpace full_vector_space(const cells::ReferenceCell& cell, int m,
                                     int n_embed)
{
  const int d = cell.dim();
  const int es = polyspace_dim(d, n_embed);
  const int nm = polyspace_dim(d, m);
  linalg::DenseMatrix c(d * nm, d * es);
  for (int comp = 0; comp < d; ++comp)
    for (int e = 0; e < nm; ++e)
      c(comp * nm + e, comp * es + e) = 1.0;
  return {d, n_embed, std::move(c)};
}

// Moments of coordinate-weighted expansion products: out(row, f) with
// rows (c, e-tail) = <x_c * D_e, D_f> for e of degree exactly m.
inline linalg::DenseMatrix coordinate_products(const cells::ReferenceCell& cell,
                                               int m, int n_embed)
{
  const polyset::ExpansionSet set(cell, n_embed);
  const quadrature::QuadratureRule rule =
      quadrature::stroud_conical(cell, 2 * n_embed + 2);
  const polyset::TabulationTable t = set.tabulate(rule.points, 0);
  const int d = cell.dim();
  const int lo = polyspace_dim(d, m - 1), hi = polyspace_dim(d, m);
  linalg::DenseMatrix out(d * (hi - lo), set.size());
  for (int c = 0; c < d; ++c)
    for (int e = lo; e < hi; ++e)
      for (int f = 0; f < set.size(); ++f)
      {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * rule.points[q][c] * t(0, e, q) * t(0, f, q);
        out(c * (hi - lo) + (e - lo), f) = s;
      }
  return out;
}

// Raviart-Thomas space (P_{k-1})^d + x * (degree-(k-1) expansion span),
// embedded at degree k. The tail is built by multiplying expansion
// functions by the coordinates and re-projecting, which is exact here.
inline VectorSpace rt_space(const cells::ReferenceCell& cell, int k)
{
  const int d = cell.dim();
  const int es = polyspace_dim(d, k);
  const VectorSpace full = full_vector_space(cell, k - 1, k);
  const int ntail = polyspace_dim(d, k - 1) - polyspace_dim(d, k - 2);
  const linalg::DenseMatrix prod = coordinate_products(cell, k - 1, k);

  linalg::DenseMatrix c(full.coeffs.rows() + ntail, d * es);
  for (int r = 0; r < full.coeffs.rows(); ++r)
    for (int j = 0; j < d * es; ++j)
      c(r, j) = full.coeffs(r, j);
  for (int e = 0; e < ntail; ++e)
    for (int comp = 0; comp < d; ++comp)
      for (int f = 0; f < es; ++f)
        c(full.coeffs.rows() + e, comp * es + f) = prod(comp * ntail + e, f);
  return {d, k, std::move(c)};
}

// First-kind Nedelec space. On the triangle this is the rotated
// Raviart-Thomas space; on the tetrahedron the tail is the null space of
// p |-> x . p restricted to the top-degree block, found by an
// eigendecomposition of the Gram matrix of that map.
inline VectorSpace ned1_space(const cells::ReferenceCell& cell, int k)
{
  const int d = cell.dim();
  const int es = polyspace_dim(d, k);
  const VectorSpace full = full_vector_space(cell, k - 1, k);

  if (d == 2)
  {
    const int ntail = polyspace_dim(2, k - 1) - polyspace_dim(2, k - 2);
    const linalg::DenseMatrix prod = coordinate_products(cell, k - 1, k);
    linalg::DenseMatrix c(full.coeffs.rows() + ntail, 2 * es);
    for (int r = 0; r < full.coeffs.rows(); ++r)
      for (int j = 0; j < 2 * es; ++j)
        c(r, j) = full.coeffs(r, j);
    // perpendicular tail (-y, x) * span
    for (int e = 0; e < ntail; ++e)
      for (int f = 0; f < es; ++f)
      {
        c(full.coeffs.rows() + e, 0 * es + f) = -prod(1 * ntail + e, f);
        c(full.coeffs.rows() + e, 1 * es + f) = prod(0 * ntail + e, f);
      }
    return {2, k, std::move(c)};
  }

  // Tail basis: vectors with components of degree exactly k whose radial
  // product x . p has no degree-(k+1) part.
  const int lo = polyspace_dim(3, k - 1), hi = polyspace_dim(3, k);
  const int nw = hi - lo;
  const polyset::ExpansionSet set1(cell, k + 1);
  const quadrature::QuadratureRule rule =
      quadrature::stroud_conical(cell, 2 * k + 2);
  const polyset::TabulationTable t = set1.tabulate(rule.points, 0);
  const int flo = polyspace_dim(3, k), fhi = polyspace_dim(3, k + 1);
  linalg::DenseMatrix a(fhi - flo, 3 * nw);
  for (int F = flo; F < fhi; ++F)
    for (int c = 0; c < 3; ++c)
      for (int e = 0; e < nw; ++e)
      {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * rule.points[q][c] * t(0, F, q) *
               t(0, lo + e, q);
        a(F - flo, c * nw + e) = s;
      }
  linalg::DenseMatrix g(3 * nw, 3 * nw);
  for (int i = 0; i < 3 * nw; ++i)
    for (int j = i; j < 3 * nw; ++j)
    {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r)
        s += a(r, i) * a(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  const linalg::SymEig eig = linalg::sym_eig(g);
  const double lmax = std::max(eig.values.back(), 1.0);
  const int expected = k * (k + 2);
  int nker = 0;
  while (nker < 3 * nw && eig.values[nker] < 1e-12 * lmax)
    ++nker;
  if (nker != expected)
    throw std::runtime_error("ned1_space: radial null space has dimension " +
                             std::to_string(nker) + ", expected " +
                             std::to_string(expected));

  linalg::DenseMatrix c(full.coeffs.rows() + expected, 3 * es);
  for (int r = 0; r < full.coeffs.rows(); ++r)
    for (int j = 0; j < 3 * es; ++j)
      c(r, j) = full.coeffs(r, j);
  for (int v = 0; v < expected; ++v)
    for (int comp = 0; comp < 3; ++comp)
      for (int e = 0; e < nw; ++e)
        c(full.coeffs.rows() + v, comp * es + (lo + e)) =
            eig.vectors(comp * nw + e, v);
  return {3, k, std::move(c)};
}

/// Evaluate the members of a vector space at given points (in the space's
/// own cell coordinates): values[row][component][point].
inline std::vector<double> evaluate_space(const cells::ReferenceCell& cell,
                                          const VectorSpace& space,
                                          const std::vector<Vec>& pts)
{
  const polyset::ExpansionSet set(cell, space.embedded_degree);
  const polyset::TabulationTable t = set.tabulate(pts, 0);
  const int es = set.size();
  const int np = static_cast<int>(pts.size());
  const int vs = space.value_size;
  std::vector<double> vals(static_cast<std::size_t>(space.coeffs.rows()) * vs *
                               np,
                           0.0);
  for (int r = 0; r < space.coeffs.rows(); ++r)
    for (int c = 0; c < vs; ++c)
      for (int e = 0; e < es; ++e)
      {
        const double w = space.coeffs(r, c * es + e);
        if (w == 0.0)
          continue;
        for (int p = 0; p < np; ++p)
          vals[(static_cast<std::size_t>(r) * vs + c) * np + p] +=
              w * t(0, e, p);
      }
  return vals;
}

/// Scalar moments against the orthonormal expansion set of degree m on an
/// entity, applied to the selected direction (or to all components when
/// dirs is empty, giving d moments per weight).
inline void add_expansion_moments(const cells::ReferenceCell& cell,
                                  cells::EntityRef entity, int m,
                                  int embedded_degree, int q,
                                  const std::vector<Vec>& dirs,
                                  std::vector<functionals::Functional>& dual,
                                  std::vector<int>& dofs)
{
  const functionals::EntityRule rule =
      functionals::make_entity_rule(cell, entity, m + embedded_degree + q);
  const cells::ReferenceCell sub(entity.dim);
  const polyset::ExpansionSet wset(sub, m);
  const polyset::TabulationTable t = wset.tabulate(rule.ref_points, 0);
  const int np = static_cast<int>(rule.ref_points.size());
  for (int e = 0; e < wset.size(); ++e)
    for (const Vec& dir : dirs)
    {
      std::vector<functionals::Term> terms;
      for (int p = 0; p < np; ++p)
        for (int c = 0; c < cell.dim(); ++c)
          if (dir[c] != 0.0)
            terms.push_back(functionals::Term{rule.cell_points[p], c,
                                              rule.weights[p] * t(0, e, p) *
                                                  dir[c]});
      dofs.push_back(static_cast<int>(dual.size()));
      dual.emplace_back(functionals::Kind::integral_moment, entity, cell.dim(),
                        std::move(terms), rule.degree);
    }
}

/// Vector moments against the members of a weight space living on the
/// entity. For facet weights the in-plane components are carried into the
/// cell along the chart direction vectors.
inline void add_vector_space_moments(const cells::ReferenceCell& cell,
                                     cells::EntityRef entity,
                                     const VectorSpace& wspace,
                                     int weight_degree, int embedded_degree,
                                     int q,
                                     std::vector<functionals::Functional>& dual,
                                     std::vector<int>& dofs)
{
  const functionals::EntityRule rule = functionals::make_entity_rule(
      cell, entity, weight_degree + embedded_degree + q);
  const cells::ReferenceCell sub(entity.dim);
  const std::vector<double> wvals =
      evaluate_space(sub, wspace, rule.ref_points);
  const int np = static_cast<int>(rule.ref_points.size());

  // chart direction vectors carrying entity components to cell components
  std::vector<Vec> chart(wspace.value_size);
  if (entity.dim == cell.dim())
  {
    for (int a = 0; a < wspace.value_size; ++a)
    {
      chart[a] = Vec{0, 0, 0};
      chart[a][a] = 1.0;
    }
  }
  else
  {
    const auto& verts = cell.entity_vertices(entity);
    for (int a = 0; a < wspace.value_size; ++a)
      chart[a] =
          cell.vertices()[verts[a + 1]] - cell.vertices()[verts[0]];
  }

  for (int r = 0; r < wspace.coeffs.rows(); ++r)
  {
    std::vector<functionals::Term> terms;
    for (int p = 0; p < np; ++p)
    {
      Vec w{0, 0, 0};
      for (int a = 0; a < wspace.value_size; ++a)
      {
        const double wa =
            wvals[(static_cast<std::size_t>(r) * wspace.value_size + a) * np +
                  p];
        w = w + wa * chart[a];
      }
      for (int c = 0; c < cell.dim(); ++c)
        if (w[c] != 0.0)
          terms.push_back(
              functionals::Term{rule.cell_points[p], c, rule.weights[p] * w[c]});
    }
    dofs.push_back(static_cast<int>(dual.size()));
    dual.emplace_back(functionals::Kind::integral_moment, entity, cell.dim(),
                      std::move(terms), rule.degree);
  }
}

/// Points for the point-style facet DOFs: a Gauss-Legendre lattice on
/// edges, the interior of a shrunken equispaced lattice on faces. Both
/// are unisolvent for traces of degree m.
inline std::vector<Vec> facet_point_lattice(const cells::ReferenceCell& cell,
                                            int facet_id, int m)
{
  const cells::EntityRef f{cell.dim() - 1, facet_id};
  std::vector<Vec> out;
  if (cell.dim() == 2)
  {
    const quadrature::GaussJacobi1D gl = quadrature::gauss_jacobi(0, 0, m + 1);
    for (double x : gl.points)
      out.push_back(cell.entity_embed(f, Vec{0.5 * (x + 1.0), 0, 0}));
  }
  else
  {
    const int lat = m + 3;
    for (const auto& a : nodes::detail::multi_indices(3, lat))
    {
      if (a[0] < 1 || a[1] < 1 || a[2] < 1)
        continue;
      out.push_back(cell.entity_embed(
          f, Vec{static_cast<double>(a[1]) / lat,
                 static_cast<double>(a[2]) / lat, 0}));
    }
  }
  return out;
}

inline std::vector<std::vector<std::vector<int>>>
empty_entity_dofs(const cells::ReferenceCell& cell)
{
  std::vector<std::vector<std::vector<int>>> ed(cell.dim() + 1);
  for (int e = 0; e <= cell.dim(); ++e)
    ed[e].resize(cell.num_entities(e));
  return ed;
}

inline nodes::Variant node_variant(const Variant& v)
{
  if (v.kind == Variant::Kind::equispaced)
    return nodes::Variant::equispaced;
  if (v.kind == Variant::Kind::spectral)
    return nodes::Variant::spectral;
  throw std::invalid_argument("expected a node variant");
}

} // namespace detail

/// Continuous Lagrange element with point-evaluation DOFs on the
/// equispaced or recursively constructed spectral nodes.
inline CiarletElement lagrange(const cells::ReferenceCell& cell, int degree,
                               Variant variant = {Variant::Kind::equispaced, 0})
{
  if (degree < 1)
    throw std::invalid_argument("lagrange: degree must be >= 1");
  const nodes::Variant nv = detail::node_variant(variant);
  const int es = polyspace_dim(cell.dim(), degree);

  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  for (int edim = 0; edim <= cell.dim(); ++edim)
    for (int id = 0; id < cell.num_entities(edim); ++id)
    {
      const cells::EntityRef e{edim, id};
      for (const Vec& p : cell.make_points(e, degree, nv))
      {
        ed[edim][id].push_back(static_cast<int>(dual.size()));
        dual.push_back(functionals::point_evaluation(cell, e, p));
      }
    }
  return CiarletElement(cell, 1, degree, linalg::DenseMatrix::identity(es),
                        std::move(dual), std::move(ed), MappingKind::affine);
}

/// Discontinuous Lagrange element: the same point evaluations, all
/// attached to the cell; degree 0 evaluates at the centroid.
inline CiarletElement discontinuous_lagrange(const cells::ReferenceCell& cell,
                                             int degree)
{
  if (degree < 0)
    throw std::invalid_argument("discontinuous_lagrange: degree must be >= 0");
  const int es = polyspace_dim(cell.dim(), degree);
  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  const cells::EntityRef cell_entity{cell.dim(), 0};
  if (degree == 0)
  {
    ed[cell.dim()][0].push_back(0);
    dual.push_back(
        functionals::point_evaluation(cell, cell_entity, cell.centroid()));
  }
  else
  {
    for (int edim = 0; edim <= cell.dim(); ++edim)
      for (int id = 0; id < cell.num_entities(edim); ++id)
        for (const Vec& p : cell.make_points(cells::EntityRef{edim, id}, degree,
                                             nodes::Variant::equispaced))
        {
          ed[cell.dim()][0].push_back(static_cast<int>(dual.size()));
          dual.push_back(functionals::point_evaluation(cell, cell_entity, p));
        }
  }
  return CiarletElement(cell, 1, degree, linalg::DenseMatrix::identity(es),
                        std::move(dual), std::move(ed), MappingKind::affine);
}

/// Raviart-Thomas element of degree k: facet normal DOFs (integral
/// moments against facet polynomials of degree k-1, or normal components
/// at facet points) plus interior moments against (P_{k-2})^d.
inline CiarletElement raviart_thomas(const cells::ReferenceCell& cell, int k,
                                     Variant variant = {Variant::Kind::integral,
                                                        0})
{
  if (k < 1)
    throw std::invalid_argument("raviart_thomas: degree must be >= 1");
  const int d = cell.dim();
  if (d < 2)
    throw std::invalid_argument("raviart_thomas: needs a triangle or tet");
  detail::VectorSpace space = detail::rt_space(cell, k);

  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  const int q = variant.extra_degree;
  for (int f = 0; f < cell.num_entities(d - 1); ++f)
  {
    const cells::EntityRef facet{d - 1, f};
    if (variant.kind == Variant::Kind::point)
    {
      for (const Vec& p : detail::facet_point_lattice(cell, f, k - 1))
      {
        ed[d - 1][f].push_back(static_cast<int>(dual.size()));
        dual.push_back(functionals::point_normal(cell, f, p));
      }
    }
    else
      detail::add_expansion_moments(cell, facet, k - 1, k, q,
                                    {cell.facet_normal(f)}, dual, ed[d - 1][f]);
  }
  if (k >= 2)
  {
    std::vector<Vec> axes(d);
    for (int c = 0; c < d; ++c)
    {
      axes[c] = Vec{0, 0, 0};
      axes[c][c] = 1.0;
    }
    detail::add_expansion_moments(cell, cells::EntityRef{d, 0}, k - 2, k, q,
                                  axes, dual, ed[d][0]);
  }
  return CiarletElement(cell, d, k, std::move(space.coeffs), std::move(dual),
                        std::move(ed), MappingKind::contravariant_piola);
}

/// Brezzi-Douglas-Marini element of degree k: full (P_k)^d with facet
/// normal moments against facet P_k and interior moments against the
/// first-kind Nedelec space of degree k-1.
inline CiarletElement brezzi_douglas_marini(const cells::ReferenceCell& cell,
                                            int k,
                                            Variant variant = {Variant::Kind::integral,
                                                               0})
{
  if (k < 1)
    throw std::invalid_argument("brezzi_douglas_marini: degree must be >= 1");
  const int d = cell.dim();
  if (d < 2)
    throw std::invalid_argument("brezzi_douglas_marini: needs a triangle or tet");
  detail::VectorSpace space = detail::full_vector_space(cell, k, k);

  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  const int q = variant.extra_degree;
  for (int f = 0; f < cell.num_entities(d - 1); ++f)
  {
    const cells::EntityRef facet{d - 1, f};
    if (variant.kind == Variant::Kind::point)
    {
      for (const Vec& p : detail::facet_point_lattice(cell, f, k))
      {
        ed[d - 1][f].push_back(static_cast<int>(dual.size()));
        dual.push_back(functionals::point_normal(cell, f, p));
      }
    }
    else
      detail::add_expansion_moments(cell, facet, k, k, q,
                                    {cell.facet_normal(f)}, dual, ed[d - 1][f]);
  }
  if (k >= 2)
    detail::add_vector_space_moments(cell, cells::EntityRef{d, 0},
                                     detail::ned1_space(cell, k - 1), k - 1, k,
                                     q, dual, ed[d][0]);
  return CiarletElement(cell, d, k, std::move(space.coeffs), std::move(dual),
                        std::move(ed), MappingKind::contravariant_piola);
}

/// First-kind Nedelec element of degree k: the rotated Raviart-Thomas
/// space on the triangle, the standard curl space on the tetrahedron,
/// with tangential edge DOFs, face moments (3D, k >= 2) and interior
/// moments.
inline CiarletElement nedelec_first_kind(const cells::ReferenceCell& cell,
                                         int k,
                                         Variant variant = {Variant::Kind::integral,
                                                            0})
{
  if (k < 1)
    throw std::invalid_argument("nedelec_first_kind: degree must be >= 1");
  const int d = cell.dim();
  if (d < 2)
    throw std::invalid_argument("nedelec_first_kind: needs a triangle or tet");
  detail::VectorSpace space = detail::ned1_space(cell, k);

  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  const int q = variant.extra_degree;

  for (int e = 0; e < cell.num_entities(1); ++e)
  {
    const cells::EntityRef edge{1, e};
    if (variant.kind == Variant::Kind::point)
    {
      const quadrature::GaussJacobi1D gl = quadrature::gauss_jacobi(0, 0, k);
      for (double x : gl.points)
      {
        const Vec p = cell.entity_embed(edge, Vec{0.5 * (x + 1.0), 0, 0});
        ed[1][e].push_back(static_cast<int>(dual.size()));
        dual.push_back(d == 2 ? functionals::point_tangential(cell, e, p)
                              : functionals::point_edge_tangential(cell, e, p));
      }
    }
    else
      detail::add_expansion_moments(cell, edge, k - 1, k, q,
                                    {cell.edge_tangent(e)}, dual, ed[1][e]);
  }
  if (d == 3 && k >= 2)
    for (int f = 0; f < cell.num_entities(2); ++f)
    {
      const auto& verts = cell.entity_vertices(cells::EntityRef{2, f});
      const Vec d1 = cell.vertices()[verts[1]] - cell.vertices()[verts[0]];
      const Vec d2 = cell.vertices()[verts[2]] - cell.vertices()[verts[0]];
      detail::add_expansion_moments(cell, cells::EntityRef{2, f}, k - 2, k, q,
                                    {d1, d2}, dual, ed[2][f]);
    }
  if (k >= 2 + (d == 3 ? 1 : 0))
  {
    const int m = d == 2 ? k - 2 : k - 3;
    std::vector<Vec> axes(d);
    for (int c = 0; c < d; ++c)
    {
      axes[c] = Vec{0, 0, 0};
      axes[c][c] = 1.0;
    }
    detail::add_expansion_moments(cell, cells::EntityRef{d, 0}, m, k, q, axes,
                                  dual, ed[d][0]);
  }
  return CiarletElement(cell, d, k, std::move(space.coeffs), std::move(dual),
                        std::move(ed), MappingKind::covariant_piola);
}

/// Second-kind Nedelec element of degree k: full (P_k)^d with tangential
/// edge moments against P_k, face moments against the in-plane
/// Raviart-Thomas space of degree k-1 (3D) and interior moments against
/// the Raviart-Thomas space two degrees down.
inline CiarletElement nedelec_second_kind(const cells::ReferenceCell& cell,
                                          int k,
                                          Variant variant = {Variant::Kind::integral,
                                                             0})
{
  if (k < 1)
    throw std::invalid_argument("nedelec_second_kind: degree must be >= 1");
  const int d = cell.dim();
  if (d < 2)
    throw std::invalid_argument("nedelec_second_kind: needs a triangle or tet");
  detail::VectorSpace space = detail::full_vector_space(cell, k, k);

  std::vector<functionals::Functional> dual;
  auto ed = detail::empty_entity_dofs(cell);
  const int q = variant.extra_degree;

  for (int e = 0; e < cell.num_entities(1); ++e)
  {
    const cells::EntityRef edge{1, e};
    if (variant.kind == Variant::Kind::point)
    {
      const quadrature::GaussJacobi1D gl =
          quadrature::gauss_jacobi(0, 0, k + 1);
      for (double x : gl.points)
      {
        const Vec p = cell.entity_embed(edge, Vec{0.5 * (x + 1.0), 0, 0});
        ed[1][e].push_back(static_cast<int>(dual.size()));
        dual.push_back(d == 2 ? functionals::point_tangential(cell, e, p)
                              : functionals::point_edge_tangential(cell, e, p));
      }
    }
    else
      detail::add_expansion_moments(cell, edge, k, k, q,
                                    {cell.edge_tangent(e)}, dual, ed[1][e]);
  }
  if (d == 2)
  {
    if (k >= 2)
      detail::add_vector_space_moments(cell, cells::EntityRef{2, 0},
                                       detail::rt_space(cell, k - 1), k - 1, k,
                                       q, dual, ed[2][0]);
  }
  else
  {
    if (k >= 2)
    {
      const cells::ReferenceCell tri(2);
      const detail::VectorSpace face_rt = detail::rt_space(tri, k - 1);
      for (int f = 0; f < cell.num_entities(2); ++f)
        detail::add_vector_space_moments(cell, cells::EntityRef{2, f}, face_rt,
                                         k - 1, k, q, dual, ed[2][f]);
    }
    if (k >= 3)
      detail::add_vector_space_moments(cell, cells::EntityRef{3, 0},
                                       detail::rt_space(cell, k - 2), k - 2, k,
                                       q, dual, ed[3][0]);
  }
  return CiarletElement(cell, d, k, std::move(space.coeffs), std::move(dual),
                        std::move(ed), MappingKind::covariant_piola);
}

} // namespace ciarlet::elements
