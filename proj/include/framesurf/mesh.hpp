#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace framesurf {

enum class SurfaceKind { sphere, ellipsoid };

struct Surface {
  SurfaceKind kind = SurfaceKind::sphere;
  double radius = 1.0;            // sphere
  double a = 1.0, b = 1.0, c = 1.0;  // ellipsoid semi-axes

  static Surface sphere(double r = 1.0);
  static Surface ellipsoid(double a, double b, double c);

  double residual(const Eigen::Vector3d& x) const;
  // Unit outward normal of the exact surface through the nearest point along the ray.
  Eigen::Vector3d normal(const Eigen::Vector3d& x) const;
  // Image of a unit-sphere point on this surface.
  Eigen::Vector3d from_unit_sphere(const Eigen::Vector3d& xhat) const;
};

struct EdgeLink {
  int element = -1;  // -1 marks a boundary edge
  int edge = -1;
  bool reversed = true;  // neighbour traverses the edge in the opposite direction
};

struct SurfaceMesh {
  Surface surface;
  int q = 1;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> elements;
  // Per element: (q+1)(q+2)/2 geometry nodes ordered like the order-q reference nodes.
  std::vector<Eigen::MatrixX3d> geom_nodes;
  std::vector<std::array<EdgeLink, 3>> adjacency;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
};

SurfaceMesh generate_sphere_mesh(int refine_level, int q);
SurfaceMesh generate_ellipsoid_mesh(int refine_level, int q, double ratio);

// Fills mesh.adjacency; throws std::runtime_error on non-manifold or mis-oriented edges.
void build_adjacency(SurfaceMesh& mesh);

struct MeshValidation {
  double max_vertex_residual = 0.0;
  int boundary_edges = 0;
  int euler_characteristic = 0;
  bool adjacency_involution = true;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

MeshValidation validate_mesh(const SurfaceMesh& mesh, double vertex_tol = 1e-13);

struct MeshStats {
  int p = 0;
  long node_count = 0;
  double l2 = 0.0;
  double linf = 0.0;
};

MeshStats mesh_error_stats(const SurfaceMesh& mesh, int p);

// Maps order-q geometry nodes to arbitrary reference points.
Eigen::MatrixXd geometry_interpolation(int q, const Eigen::MatrixX2d& pts);
void geometry_derivatives(int q, const Eigen::MatrixX2d& pts, Eigen::MatrixXd& d_r,
                          Eigen::MatrixXd& d_s);

class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

void write_mesh(const SurfaceMesh& mesh, std::ostream& os);
void write_mesh(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_mesh(std::istream& is);
SurfaceMesh read_mesh(const std::string& path);

}  // namespace framesurf
