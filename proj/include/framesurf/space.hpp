#pragma once

#include "framesurf/mesh.hpp"
#include "framesurf/refelem.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <vector>

namespace framesurf {

// Columns are elements, rows are points within an element.
using Nodal = Eigen::MatrixXd;
using Vec3Field = std::array<Eigen::MatrixXd, 3>;

Vec3Field make_vec3(Eigen::Index rows, Eigen::Index cols);
Eigen::MatrixXd dot(const Vec3Field& a, const Vec3Field& b);
Vec3Field cross(const Vec3Field& a, const Vec3Field& b);
Vec3Field scale(const Eigen::MatrixXd& s, const Vec3Field& v);
Vec3Field add(const Vec3Field& a, const Vec3Field& b);
Vec3Field sub(const Vec3Field& a, const Vec3Field& b);
void normalize_in_place(Vec3Field& v);
Eigen::Vector3d at(const Vec3Field& v, Eigen::Index i, Eigen::Index k);

// Geometry of the frozen degree-q element map sampled at one point set.
struct PointGeometry {
  Vec3Field x;       // mapped position
  Vec3Field t1, t2;  // dc/ds1, dc/ds2
  Vec3Field normal;  // unit normal of the discrete surface
  Vec3Field dual1, dual2;  // contravariant tangents, grad f = dual1 f_s1 + dual2 f_s2
  Eigen::MatrixXd jac;     // |t1 x t2|
};

struct EdgeGeometry : PointGeometry {
  Vec3Field tangent;   // dc/dt along the counterclockwise edge parameter
  Vec3Field conormal;  // outward in-surface unit normal
  Eigen::MatrixXd line;  // |dc/dt|
};

// Discretization of a surface mesh at polynomial order p.
class DgSpace {
 public:
  DgSpace(std::shared_ptr<const SurfaceMesh> mesh, int p);

  const SurfaceMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const SurfaceMesh> mesh_ptr() const { return mesh_; }
  const ReferenceElement& ref() const { return ref_; }
  int order() const { return ref_.order; }
  int num_elements() const { return mesh_->num_elements(); }
  int num_nodes() const { return ref_.num_nodes; }
  int num_quad() const { return ref_.num_quad(); }
  int num_edge_points() const { return 3 * ref_.num_edge_quad(); }

  const PointGeometry& nodes() const { return node_; }
  const PointGeometry& quad() const { return quad_; }
  const EdgeGeometry& edges() const { return edge_; }
  const Eigen::MatrixXd& quad_weight_jac() const { return quad_wj_; }
  const Eigen::MatrixXd& edge_weight_line() const { return edge_wl_; }

  // Neighbour element and matching point row for edge point row `row` of element k.
  int neighbour_element(int k, int row) const;
  int neighbour_row(int k, int row) const;

  Eigen::MatrixXd zeros() const;
  Eigen::MatrixXd to_quad(const Eigen::MatrixXd& nodal) const;
  Eigen::MatrixXd to_edges(const Eigen::MatrixXd& nodal) const;
  // Weighted residual sum_q w J phi_i g(q) for quadrature data g.
  Eigen::MatrixXd test_quad(const Eigen::MatrixXd& quad_data) const;
  // Weighted residual sum_q w J (d phi_i/ds_a) g_a(q).
  Eigen::MatrixXd test_quad_grad(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& g2) const;
  // Weighted residual from edge-point data, including the line element.
  Eigen::MatrixXd test_edges(const Eigen::MatrixXd& edge_data) const;
  Eigen::MatrixXd apply_inv_mass(const Eigen::MatrixXd& residual) const;
  double integrate(const Eigen::MatrixXd& nodal) const;
  double integrate_quad(const Eigen::MatrixXd& quad_data) const;
  // Surface gradient of a nodal scalar at the nodes.
  Vec3Field surface_gradient(const Eigen::MatrixXd& nodal) const;
  double area() const;

 private:
  void fill_points(const Eigen::MatrixX2d& pts, PointGeometry& g) const;

  std::shared_ptr<const SurfaceMesh> mesh_;
  ReferenceElement ref_;
  PointGeometry node_, quad_;
  EdgeGeometry edge_;
  Eigen::MatrixXd quad_wj_, edge_wl_;
  Eigen::MatrixXd edge_interp_all_;  // 3ne x Np
  std::vector<Eigen::MatrixXd> inv_mass_;
  std::vector<std::array<int, 3>> nbr_elem_, nbr_edge_;
};

// Element selection for norms; empty means every element.
using ElementMask = std::vector<char>;

// sqrt( integral f^2 / integral 1 ) over the selected elements.
double rms_norm(const DgSpace& space, const Eigen::MatrixXd& nodal, const ElementMask& mask = {});
// Largest nodal magnitude over the selected elements.
double max_norm(const Eigen::MatrixXd& nodal, const ElementMask& mask = {});

}  // namespace framesurf
