#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace framesurf {

// 1D Jacobi machinery, exposed for tests and the node construction.
Eigen::VectorXd jacobi_p(const Eigen::VectorXd& x, double alpha, double beta, int n);
Eigen::VectorXd grad_jacobi_p(const Eigen::VectorXd& x, double alpha, double beta, int n);
void jacobi_gauss(double alpha, double beta, int n, Eigen::VectorXd& x, Eigen::VectorXd& w);
Eigen::VectorXd jacobi_gauss_lobatto(double alpha, double beta, int n);

enum class Axis { s1, s2 };

// Standard triangle with vertices (-1,-1), (1,-1), (-1,1).
// Edge j runs counterclockwise from vertex j to vertex (j+1)%3.
struct ReferenceElement {
  int order = 0;
  int quad_order = 0;
  int num_nodes = 0;
  Eigen::MatrixX2d nodes;

  Eigen::MatrixXd vandermonde;
  Eigen::MatrixXd inv_vandermonde;
  Eigen::MatrixXd dr, ds;  // nodal -> nodal derivatives
  Eigen::MatrixXd mass;    // reference mass matrix

  // volume quadrature
  Eigen::MatrixX2d quad_points;
  Eigen::VectorXd quad_weights;
  Eigen::MatrixXd quad_interp;           // Nq x Np
  Eigen::MatrixXd quad_dr, quad_ds;      // Nq x Np

  // edges: node indices ordered along the counterclockwise direction
  std::array<std::vector<int>, 3> edge_nodes;
  Eigen::VectorXd edge_quad_points;   // on [-1,1]
  Eigen::VectorXd edge_quad_weights;
  Eigen::MatrixXd edge_interp;        // ne x (p+1): edge nodes -> edge quadrature points

  int num_quad() const { return static_cast<int>(quad_weights.size()); }
  int num_edge_quad() const { return static_cast<int>(edge_quad_weights.size()); }

  // Reference coordinates of edge j at parameter t in [-1,1].
  static Eigen::Vector2d edge_point(int edge, double t);
  // Tangent d(r,s)/dt along edge j.
  static Eigen::Vector2d edge_direction(int edge);

  // Values of the nodal basis at arbitrary points (rows) -> npts x Np.
  Eigen::MatrixXd interpolation_matrix(const Eigen::MatrixX2d& pts) const;
  void derivative_matrices(const Eigen::MatrixX2d& pts, Eigen::MatrixXd& d_r,
                           Eigen::MatrixXd& d_s) const;

  Eigen::VectorXd differentiate(const Eigen::VectorXd& u, Axis axis) const;
  // Quadrature sum of u*J where u and J are nodal; J must be positive at quadrature points.
  double integrate(const Eigen::VectorXd& u, const Eigen::VectorXd& jacobian) const;
  // Values of a nodal field on edge j at the edge nodes.
  Eigen::VectorXd edge_trace(const Eigen::VectorXd& u, int edge) const;
  // Edge-quadrature data (ne) on edge j weighted into a volume residual (Np).
  Eigen::VectorXd lift(const Eigen::VectorXd& edge_data, int edge) const;
};

ReferenceElement build_reference_element(int p, int quad_order = -1);

// Orthonormal simplex basis and its Vandermonde at arbitrary points.
Eigen::MatrixXd simplex_vandermonde(int p, const Eigen::MatrixX2d& pts);
void simplex_grad_vandermonde(int p, const Eigen::MatrixX2d& pts, Eigen::MatrixXd& vr,
                              Eigen::MatrixXd& vs);
Eigen::MatrixX2d warp_blend_nodes(int p);
void triangle_quadrature(int degree, Eigen::MatrixX2d& pts, Eigen::VectorXd& w);

}  // namespace framesurf
