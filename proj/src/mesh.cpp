#include "framesurf/mesh.hpp"

#include "framesurf/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace framesurf {

Surface Surface::sphere(double r) {
  Surface s;
  s.kind = SurfaceKind::sphere;
  s.radius = r;
  return s;
}

Surface Surface::ellipsoid(double a, double b, double c) {
  Surface s;
  s.kind = SurfaceKind::ellipsoid;
  s.a = a;
  s.b = b;
  s.c = c;
  return s;
}

double Surface::residual(const Eigen::Vector3d& x) const {
  if (kind == SurfaceKind::sphere) return std::abs(x.norm() - radius);
  const double v = (x(0) / a) * (x(0) / a) + (x(1) / b) * (x(1) / b) + (x(2) / c) * (x(2) / c);
  return std::abs(v - 1.0);
}

Eigen::Vector3d Surface::normal(const Eigen::Vector3d& x) const {
  if (kind == SurfaceKind::sphere) return x / x.norm();
  Eigen::Vector3d g(x(0) / (a * a), x(1) / (b * b), x(2) / (c * c));
  return g / g.norm();
}

Eigen::Vector3d Surface::from_unit_sphere(const Eigen::Vector3d& xhat) const {
  if (kind == SurfaceKind::sphere) return radius * xhat;
  return {a * xhat(0), b * xhat(1), c * xhat(2)};
}

namespace {

using Tri = std::array<int, 3>;

// Rotation taking unit vector d onto +z.
Eigen::Matrix3d rotation_to_pole(const Eigen::Vector3d& d) {
  const Eigen::Vector3d z(0.0, 0.0, 1.0);
  return Eigen::Quaterniond::FromTwoVectors(d, z).toRotationMatrix();
}

void base_icosahedron(std::vector<Eigen::Vector3d>& v, std::vector<Tri>& f) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
       {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
       {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
       {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  // Poles are placed at a generic interior point of a face, away from every node.
  const Eigen::Vector3d d =
      (0.5 * v[f[0][0]] + 0.3 * v[f[0][1]] + 0.2 * v[f[0][2]]).normalized();
  const Eigen::Matrix3d rot = rotation_to_pole(d);
  for (auto& x : v) x = (rot * x).normalized();
  for (auto& t : f) {
    const Eigen::Vector3d n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
    if (n.dot(v[t[0]] + v[t[1]] + v[t[2]]) < 0.0) std::swap(t[1], t[2]);
  }
}

void subdivide(std::vector<Eigen::Vector3d>& v, std::vector<Tri>& f) {
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const Eigen::Vector3d m = (v[key.first] + v[key.second]).normalized();
    v.push_back(m);
    const int id = static_cast<int>(v.size()) - 1;
    mid.emplace(key, id);
    return id;
  };
  std::vector<Tri> out;
  out.reserve(f.size() * 4);
  for (const auto& t : f) {
    const int ab = midpoint(t[0], t[1]);
    const int bc = midpoint(t[1], t[2]);
    const int ca = midpoint(t[2], t[0]);
    out.push_back({t[0], ab, ca});
    out.push_back({ab, t[1], bc});
    out.push_back({ca, bc, t[2]});
    out.push_back({ab, bc, ca});
  }
  f = std::move(out);
}

// Great-arc point between unit vectors a and b at fraction lam.
Eigen::Vector3d arc_point(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double lam) {
  return ((1.0 - lam) * a + lam * b).normalized();
}

// Degree-q geometry nodes on the unit sphere for every element.
std::vector<Eigen::MatrixX3d> build_unit_geometry(const std::vector<Eigen::Vector3d>& v,
                                                  const std::vector<Tri>& f, int q) {
  const Eigen::MatrixX2d rs = warp_blend_nodes(q);
  const int nq = static_cast<int>(rs.rows());

  // Parameters of the edge nodes along reference edge 0 (shared by all three edges).
  std::vector<double> edge_t;
  std::array<std::vector<int>, 3> edge_idx;
  {
    const ReferenceElement re = build_reference_element(std::max(q, 1), 2 * q + 2);
    edge_idx = re.edge_nodes;
    for (int k : re.edge_nodes[0]) edge_t.push_back(re.nodes(k, 0));
  }

  // Canonical edge samples from the lower to the higher vertex id.
  std::map<std::pair<int, int>, std::vector<Eigen::Vector3d>> canon;
  for (const auto& t : f) {
    for (int e = 0; e < 3; ++e) {
      const auto key = std::minmax(t[e], t[(e + 1) % 3]);
      if (canon.count(key)) continue;
      std::vector<Eigen::Vector3d> pts(q + 1);
      pts[0] = v[key.first];
      pts[q] = v[key.second];
      for (int k = 1; k < q; ++k) {
        pts[k] = arc_point(v[key.first], v[key.second], 0.5 * (edge_t[k] + 1.0));
      }
      canon.emplace(key, std::move(pts));
    }
  }

  std::vector<Eigen::MatrixX3d> geom(f.size(), Eigen::MatrixX3d(nq, 3));
  for (std::size_t el = 0; el < f.size(); ++el) {
    const auto& t = f[el];
    const Eigen::Vector3d X[3] = {v[t[0]], v[t[1]], v[t[2]]};
    auto& g = geom[el];
    for (int i = 0; i < nq; ++i) {
      const double r = rs(i, 0), s = rs(i, 1);
      const double lam[3] = {-0.5 * (r + s), 0.5 * (1.0 + r), 0.5 * (1.0 + s)};
      Eigen::Vector3d x = lam[0] * X[0] + lam[1] * X[1] + lam[2] * X[2];
      // Transfinite blend of the three edge arcs.
      for (int e = 0; e < 3; ++e) {
        const int a = e, b = (e + 1) % 3;
        const double w = 4.0 * lam[a] * lam[b];
        if (w <= 0.0) continue;
        const double tt = lam[b] - lam[a];
        const double denom = 1.0 - tt * tt;
        if (denom <= 0.0) continue;
        const double lt = 0.5 * (tt + 1.0);
        const Eigen::Vector3d bubble =
            arc_point(X[a], X[b], lt) - ((1.0 - lt) * X[a] + lt * X[b]);
        x += (w / denom) * bubble;
      }
      g.row(i) = x.normalized().transpose();
    }
    // Edge nodes are taken from the canonical samples so neighbours agree bitwise.
    for (int e = 0; e < 3; ++e) {
      const int va = t[e], vb = t[(e + 1) % 3];
      const auto& pts = canon.at(std::minmax(va, vb));
      const bool forward = va < vb;
      for (int k = 0; k <= q; ++k) {
        g.row(edge_idx[e][k]) = pts[forward ? k : q - k].transpose();
      }
    }
  }
  return geom;
}

SurfaceMesh generate_on(const Surface& surf, int refine_level, int q) {
  if (refine_level < 0) throw std::invalid_argument("refine_level must be >= 0");
  if (q < 1 || q > 10) throw std::invalid_argument("geometric order q must be in [1,10]");
  std::vector<Eigen::Vector3d> v;
  std::vector<Tri> f;
  base_icosahedron(v, f);
  for (int i = 0; i < refine_level; ++i) subdivide(v, f);

  SurfaceMesh mesh;
  mesh.surface = surf;
  mesh.q = q;
  mesh.elements = f;
  auto geom = build_unit_geometry(v, f, q);
  mesh.vertices.reserve(v.size());
  for (const auto& x : v) mesh.vertices.push_back(surf.from_unit_sphere(x));
  for (auto& g : geom) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      g.row(i) = surf.from_unit_sphere(g.row(i).transpose()).transpose();
    }
  }
  mesh.geom_nodes = std::move(geom);
  build_adjacency(mesh);
  return mesh;
}

}  // namespace

SurfaceMesh generate_sphere_mesh(int refine_level, int q) {
  return generate_on(Surface::sphere(1.0), refine_level, q);
}

SurfaceMesh generate_ellipsoid_mesh(int refine_level, int q, double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("ellipsoid ratio must be positive");
  return generate_on(Surface::ellipsoid(ratio, ratio, 1.0), refine_level, q);
}

void build_adjacency(SurfaceMesh& mesh) {
  const int ne = mesh.num_elements();
  mesh.adjacency.assign(ne, {});
  std::map<std::pair<int, int>, std::pair<int, int>> directed;
  for (int el = 0; el < ne; ++el) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.elements[el][e], b = mesh.elements[el][(e + 1) % 3];
      if (a == b) throw std::runtime_error("degenerate element " + std::to_string(el));
      if (!directed.emplace(std::make_pair(a, b), std::make_pair(el, e)).second) {
        throw std::runtime_error("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") used twice in the same direction; inconsistent orientation");
      }
    }
  }
  for (const auto& [key, owner] : directed) {
    auto it = directed.find({key.second, key.first});
    if (it == directed.end()) continue;
    mesh.adjacency[owner.first][owner.second] = {it->second.first, it->second.second, true};
  }
}

MeshValidation validate_mesh(const SurfaceMesh& mesh, double vertex_tol) {
  MeshValidation out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double r = mesh.surface.residual(mesh.vertices[i]);
    out.max_vertex_residual = std::max(out.max_vertex_residual, r);
    if (r > vertex_tol) {
      out.problems.push_back("vertex " + std::to_string(i) + " off surface by " +
                             std::to_string(r));
    }
  }
  std::map<std::pair<int, int>, int> edges;
  for (int el = 0; el < mesh.num_elements(); ++el) {
    for (int e = 0; e < 3; ++e) {
      const auto& link = mesh.adjacency.at(el)[e];
      if (link.element < 0) {
        ++out.boundary_edges;
      } else {
        const auto& back = mesh.adjacency.at(link.element)[link.edge];
        if (back.element != el || back.edge != e) out.adjacency_involution = false;
      }
      edges[std::minmax(mesh.elements[el][e], mesh.elements[el][(e + 1) % 3])]++;
    }
  }
  out.euler_characteristic = mesh.num_vertices() - static_cast<int>(edges.size()) +
                             mesh.num_elements();
  if (out.boundary_edges > 0) {
    out.problems.push_back(std::to_string(out.boundary_edges) + " boundary edges on closed surface");
  }
  if (!out.adjacency_involution) out.problems.push_back("adjacency is not an involution");
  if (out.euler_characteristic != 2) {
    out.problems.push_back("Euler characteristic " + std::to_string(out.euler_characteristic));
  }
  return out;
}

Eigen::MatrixXd geometry_interpolation(int q, const Eigen::MatrixX2d& pts) {
  const Eigen::MatrixX2d rs = warp_blend_nodes(q);
  return simplex_vandermonde(q, pts) * simplex_vandermonde(q, rs).inverse();
}

void geometry_derivatives(int q, const Eigen::MatrixX2d& pts, Eigen::MatrixXd& d_r,
                          Eigen::MatrixXd& d_s) {
  const Eigen::MatrixXd vinv = simplex_vandermonde(q, warp_blend_nodes(q)).inverse();
  Eigen::MatrixXd vr, vs;
  simplex_grad_vandermonde(q, pts, vr, vs);
  d_r = vr * vinv;
  d_s = vs * vinv;
}

MeshStats mesh_error_stats(const SurfaceMesh& mesh, int p) {
  if (mesh.surface.kind != SurfaceKind::sphere) {
    throw std::invalid_argument("mesh_error_stats: only defined for spheres");
  }
  const Eigen::MatrixXd interp = geometry_interpolation(mesh.q, warp_blend_nodes(p));
  MeshStats st;
  st.p = p;
  double sum = 0.0;
  for (const auto& g : mesh.geom_nodes) {
    const Eigen::MatrixX3d x = interp * g;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double d = mesh.surface.radius - x.row(i).norm();
      sum += d * d;
      st.linf = std::max(st.linf, std::abs(d));
      ++st.node_count;
    }
  }
  st.l2 = std::sqrt(sum / static_cast<double>(st.node_count));
  return st;
}

MeshParseError::MeshParseError(int line, const std::string& what)
    : std::runtime_error("mesh parse error at line " + std::to_string(line) + ": " + what),
      line_(line) {}

void write_mesh(const SurfaceMesh& mesh, std::ostream& os) {
  os << std::setprecision(17);
  if (mesh.surface.kind == SurfaceKind::sphere) {
    os << "SURFACE sphere " << mesh.surface.radius << "\n";
  } else {
    os << "ELLIPSOID " << mesh.surface.a << " " << mesh.surface.b << " " << mesh.surface.c
       << "\n";
  }
  os << "GEOMORDER " << mesh.q << "\n";
  os << "VERTICES " << mesh.vertices.size() << "\n";
  for (const auto& x : mesh.vertices) os << x(0) << " " << x(1) << " " << x(2) << "\n";
  os << "ELEMENTS " << mesh.elements.size() << "\n";
  for (const auto& t : mesh.elements) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  const int nq = (mesh.q + 1) * (mesh.q + 2) / 2;
  os << "GEOMNODES " << mesh.geom_nodes.size() << " " << nq << "\n";
  for (const auto& g : mesh.geom_nodes) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      os << g(i, 0) << " " << g(i, 1) << " " << g(i, 2) << "\n";
    }
  }
  os << "END\n";
}

void write_mesh(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(mesh, os);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::istringstream next(const char* expect) {
    std::string s;
    while (std::getline(is_, s)) {
      ++line_;
      if (s.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(s);
    }
    throw MeshParseError(line_ + 1, std::string("unexpected end of file, expected ") + expect);
  }

  int line() const { return line_; }

 private:
  std::istream& is_;
  int line_ = 0;
};

std::size_t read_count(LineReader& rd, const std::string& keyword) {
  auto ls = rd.next(keyword.c_str());
  std::string kw;
  long n = -1;
  ls >> kw >> n;
  if (kw != keyword || !ls || n < 0) throw MeshParseError(rd.line(), "expected '" + keyword + " <count>'");
  return static_cast<std::size_t>(n);
}

Eigen::Vector3d read_point(LineReader& rd) {
  auto ls = rd.next("coordinates");
  Eigen::Vector3d x;
  if (!(ls >> x(0) >> x(1) >> x(2))) throw MeshParseError(rd.line(), "expected three coordinates");
  return x;
}

}  // namespace

SurfaceMesh read_mesh(std::istream& is) {
  LineReader rd(is);
  SurfaceMesh mesh;
  {
    auto ls = rd.next("surface header");
    std::string kw;
    ls >> kw;
    if (kw == "SURFACE") {
      std::string kind;
      double r = 0.0;
      ls >> kind >> r;
      if (kind != "sphere" || !ls || r <= 0.0) throw MeshParseError(rd.line(), "bad SURFACE line");
      mesh.surface = Surface::sphere(r);
    } else if (kw == "ELLIPSOID") {
      double a = 0, b = 0, c = 0;
      ls >> a >> b >> c;
      if (!ls || a <= 0 || b <= 0 || c <= 0) throw MeshParseError(rd.line(), "bad ELLIPSOID line");
      mesh.surface = Surface::ellipsoid(a, b, c);
    } else {
      throw MeshParseError(rd.line(), "expected SURFACE or ELLIPSOID header");
    }
  }
  {
    auto ls = rd.next("GEOMORDER");
    std::string kw;
    ls >> kw >> mesh.q;
    if (kw != "GEOMORDER" || !ls || mesh.q < 1 || mesh.q > 10) {
      throw MeshParseError(rd.line(), "expected 'GEOMORDER <q>'");
    }
  }
  const std::size_t nv = read_count(rd, "VERTICES");
  mesh.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) mesh.vertices.push_back(read_point(rd));
  const std::size_t ne = read_count(rd, "ELEMENTS");
  for (std::size_t i = 0; i < ne; ++i) {
    auto ls = rd.next("element");
    std::array<int, 3> t{};
    if (!(ls >> t[0] >> t[1] >> t[2])) throw MeshParseError(rd.line(), "expected three vertex ids");
    for (int id : t) {
      if (id < 0 || static_cast<std::size_t>(id) >= nv) {
        throw MeshParseError(rd.line(), "vertex id " + std::to_string(id) + " out of range");
      }
    }
    mesh.elements.push_back(t);
  }
  {
    auto ls = rd.next("GEOMNODES");
    std::string kw;
    long n = -1, nq = -1;
    ls >> kw >> n >> nq;
    const long expect = (mesh.q + 1) * (mesh.q + 2) / 2;
    if (kw != "GEOMNODES" || !ls || n != static_cast<long>(ne) || nq != expect) {
      throw MeshParseError(rd.line(), "expected 'GEOMNODES " + std::to_string(ne) + " " +
                                          std::to_string(expect) + "'");
    }
    mesh.geom_nodes.assign(ne, Eigen::MatrixX3d(nq, 3));
    for (auto& g : mesh.geom_nodes) {
      for (long i = 0; i < nq; ++i) g.row(i) = read_point(rd).transpose();
    }
  }
  {
    auto ls = rd.next("END");
    std::string kw;
    ls >> kw;
    if (kw != "END") throw MeshParseError(rd.line(), "expected END");
  }
  try {
    build_adjacency(mesh);
  } catch (const std::runtime_error& e) {
    throw MeshParseError(rd.line(), std::string("adjacency: ") + e.what());
  }
  for (int el = 0; el < mesh.num_elements(); ++el) {
    for (int e = 0; e < 3; ++e) {
      if (mesh.adjacency[el][e].element < 0) {
        throw MeshParseError(rd.line(), "element " + std::to_string(el) + " edge " +
                                            std::to_string(e) + " has no neighbour");
      }
    }
  }
  return mesh;
}

SurfaceMesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MeshParseError(0, "cannot open " + path);
  return read_mesh(is);
}

}  // namespace framesurf
