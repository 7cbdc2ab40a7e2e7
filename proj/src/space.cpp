#include "framesurf/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace framesurf {

Vec3Field make_vec3(Eigen::Index rows, Eigen::Index cols) {
  return {Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols),
          Eigen::MatrixXd::Zero(rows, cols)};
}

Eigen::MatrixXd dot(const Vec3Field& a, const Vec3Field& b) {
  return (a[0].array() * b[0].array() + a[1].array() * b[1].array() +
          a[2].array() * b[2].array())
      .matrix();
}

Vec3Field cross(const Vec3Field& a, const Vec3Field& b) {
  return {(a[1].array() * b[2].array() - a[2].array() * b[1].array()).matrix(),
          (a[2].array() * b[0].array() - a[0].array() * b[2].array()).matrix(),
          (a[0].array() * b[1].array() - a[1].array() * b[0].array()).matrix()};
}

Vec3Field scale(const Eigen::MatrixXd& s, const Vec3Field& v) {
  return {(s.array() * v[0].array()).matrix(), (s.array() * v[1].array()).matrix(),
          (s.array() * v[2].array()).matrix()};
}

Vec3Field add(const Vec3Field& a, const Vec3Field& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Vec3Field sub(const Vec3Field& a, const Vec3Field& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

void normalize_in_place(Vec3Field& v) {
  const Eigen::ArrayXXd n = dot(v, v).array().sqrt();
  for (auto& c : v) c = (c.array() / n).matrix();
}

Eigen::Vector3d at(const Vec3Field& v, Eigen::Index i, Eigen::Index k) {
  return {v[0](i, k), v[1](i, k), v[2](i, k)};
}

DgSpace::DgSpace(std::shared_ptr<const SurfaceMesh> mesh, int p)
    : mesh_(std::move(mesh)), ref_(build_reference_element(p)) {
  if (!mesh_) throw std::invalid_argument("DgSpace: null mesh");
  const int nel = mesh_->num_elements();
  const int ne = ref_.num_edge_quad();

  fill_points(ref_.nodes, node_);
  fill_points(ref_.quad_points, quad_);

  Eigen::MatrixX2d epts(3 * ne, 2);
  for (int e = 0; e < 3; ++e) {
    for (int m = 0; m < ne; ++m) {
      epts.row(e * ne + m) = ReferenceElement::edge_point(e, ref_.edge_quad_points(m)).transpose();
    }
  }
  fill_points(epts, edge_);
  edge_.tangent = make_vec3(3 * ne, nel);
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d dir = ReferenceElement::edge_direction(e);
    for (int c = 0; c < 3; ++c) {
      edge_.tangent[c].middleRows(e * ne, ne) =
          dir(0) * edge_.t1[c].middleRows(e * ne, ne) + dir(1) * edge_.t2[c].middleRows(e * ne, ne);
    }
  }
  edge_.line = dot(edge_.tangent, edge_.tangent).array().sqrt().matrix();
  edge_.conormal = cross(edge_.tangent, edge_.normal);
  normalize_in_place(edge_.conormal);

  quad_wj_ = (quad_.jac.array().colwise() * ref_.quad_weights.array()).matrix();
  Eigen::VectorXd ew(3 * ne);
  for (int e = 0; e < 3; ++e) ew.segment(e * ne, ne) = ref_.edge_quad_weights;
  edge_wl_ = (edge_.line.array().colwise() * ew.array()).matrix();

  edge_interp_all_ = Eigen::MatrixXd::Zero(3 * ne, ref_.num_nodes);
  for (int e = 0; e < 3; ++e) {
    for (int j = 0; j <= p; ++j) {
      edge_interp_all_.block(e * ne, ref_.edge_nodes[e][j], ne, 1) = ref_.edge_interp.col(j);
    }
  }

  inv_mass_.resize(nel);
  for (int k = 0; k < nel; ++k) {
    const Eigen::MatrixXd m =
        ref_.quad_interp.transpose() * quad_wj_.col(k).asDiagonal() * ref_.quad_interp;
    inv_mass_[k] = m.llt().solve(Eigen::MatrixXd::Identity(ref_.num_nodes, ref_.num_nodes));
  }

  nbr_elem_.resize(nel);
  nbr_edge_.resize(nel);
  for (int k = 0; k < nel; ++k) {
    for (int e = 0; e < 3; ++e) {
      const auto& link = mesh_->adjacency.at(k)[e];
      if (link.element < 0 || !link.reversed) {
        throw std::invalid_argument("DgSpace: mesh must be closed and consistently oriented");
      }
      nbr_elem_[k][e] = link.element;
      nbr_edge_[k][e] = link.edge;
    }
  }
}

void DgSpace::fill_points(const Eigen::MatrixX2d& pts, PointGeometry& g) const {
  const int nel = mesh_->num_elements();
  const Eigen::Index np = pts.rows();
  const Eigen::MatrixXd interp = geometry_interpolation(mesh_->q, pts);
  Eigen::MatrixXd dgr, dgs;
  geometry_derivatives(mesh_->q, pts, dgr, dgs);
  g.x = make_vec3(np, nel);
  g.t1 = make_vec3(np, nel);
  g.t2 = make_vec3(np, nel);
  for (int k = 0; k < nel; ++k) {
    const Eigen::MatrixX3d& gn = mesh_->geom_nodes[k];
    const Eigen::MatrixX3d x = interp * gn;
    const Eigen::MatrixX3d a = dgr * gn;
    const Eigen::MatrixX3d b = dgs * gn;
    for (int c = 0; c < 3; ++c) {
      g.x[c].col(k) = x.col(c);
      g.t1[c].col(k) = a.col(c);
      g.t2[c].col(k) = b.col(c);
    }
  }
  g.normal = cross(g.t1, g.t2);
  g.jac = dot(g.normal, g.normal).array().sqrt().matrix();
  if ((g.jac.array() <= 0.0).any()) {
    throw std::domain_error("DgSpace: non-positive Jacobian (degenerate or inverted element)");
  }
  for (auto& c : g.normal) c = (c.array() / g.jac.array()).matrix();
  const Eigen::ArrayXXd g11 = dot(g.t1, g.t1).array();
  const Eigen::ArrayXXd g12 = dot(g.t1, g.t2).array();
  const Eigen::ArrayXXd g22 = dot(g.t2, g.t2).array();
  const Eigen::ArrayXXd det = g11 * g22 - g12 * g12;
  g.dual1 = make_vec3(np, nel);
  g.dual2 = make_vec3(np, nel);
  for (int c = 0; c < 3; ++c) {
    g.dual1[c] = ((g22 * g.t1[c].array() - g12 * g.t2[c].array()) / det).matrix();
    g.dual2[c] = ((g11 * g.t2[c].array() - g12 * g.t1[c].array()) / det).matrix();
  }
}

int DgSpace::neighbour_element(int k, int row) const {
  return nbr_elem_[k][row / ref_.num_edge_quad()];
}

int DgSpace::neighbour_row(int k, int row) const {
  const int ne = ref_.num_edge_quad();
  const int e = row / ne, m = row % ne;
  return nbr_edge_[k][e] * ne + (ne - 1 - m);
}

Eigen::MatrixXd DgSpace::zeros() const {
  return Eigen::MatrixXd::Zero(ref_.num_nodes, num_elements());
}

Eigen::MatrixXd DgSpace::to_quad(const Eigen::MatrixXd& nodal) const {
  return ref_.quad_interp * nodal;
}

Eigen::MatrixXd DgSpace::to_edges(const Eigen::MatrixXd& nodal) const {
  return edge_interp_all_ * nodal;
}

Eigen::MatrixXd DgSpace::test_quad(const Eigen::MatrixXd& quad_data) const {
  return ref_.quad_interp.transpose() * (quad_wj_.array() * quad_data.array()).matrix();
}

Eigen::MatrixXd DgSpace::test_quad_grad(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& g2) const {
  return ref_.quad_dr.transpose() * (quad_wj_.array() * g1.array()).matrix() +
         ref_.quad_ds.transpose() * (quad_wj_.array() * g2.array()).matrix();
}

Eigen::MatrixXd DgSpace::test_edges(const Eigen::MatrixXd& edge_data) const {
  return edge_interp_all_.transpose() * (edge_wl_.array() * edge_data.array()).matrix();
}

Eigen::MatrixXd DgSpace::apply_inv_mass(const Eigen::MatrixXd& residual) const {
  Eigen::MatrixXd out(residual.rows(), residual.cols());
  for (int k = 0; k < num_elements(); ++k) out.col(k).noalias() = inv_mass_[k] * residual.col(k);
  return out;
}

double DgSpace::integrate(const Eigen::MatrixXd& nodal) const {
  return integrate_quad(to_quad(nodal));
}

double DgSpace::integrate_quad(const Eigen::MatrixXd& quad_data) const {
  // Fixed order: element by element, point by point.
  double total = 0.0;
  for (int k = 0; k < num_elements(); ++k) {
    total += (quad_wj_.col(k).array() * quad_data.col(k).array()).sum();
  }
  return total;
}

Vec3Field DgSpace::surface_gradient(const Eigen::MatrixXd& nodal) const {
  const Eigen::MatrixXd fr = ref_.dr * nodal;
  const Eigen::MatrixXd fs = ref_.ds * nodal;
  Vec3Field g;
  for (int c = 0; c < 3; ++c) {
    g[c] = (node_.dual1[c].array() * fr.array() + node_.dual2[c].array() * fs.array()).matrix();
  }
  return g;
}

double DgSpace::area() const {
  return integrate_quad(Eigen::MatrixXd::Ones(num_quad(), num_elements()));
}

double rms_norm(const DgSpace& space, const Eigen::MatrixXd& nodal, const ElementMask& mask) {
  const Eigen::MatrixXd fq = space.to_quad(nodal);
  const Eigen::MatrixXd& wj = space.quad_weight_jac();
  double num = 0.0, den = 0.0;
  for (int k = 0; k < space.num_elements(); ++k) {
    if (!mask.empty() && !mask[k]) continue;
    num += (wj.col(k).array() * fq.col(k).array().square()).sum();
    den += wj.col(k).sum();
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double max_norm(const Eigen::MatrixXd& nodal, const ElementMask& mask) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < nodal.cols(); ++k) {
    if (!mask.empty() && !mask[k]) continue;
    m = std::max(m, nodal.col(k).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace framesurf
