#include "framesurf/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace framesurf {

namespace {

Eigen::MatrixXd vandermonde_1d(int n, const Eigen::VectorXd& x) {
  Eigen::MatrixXd v(x.size(), n + 1);
  for (int j = 0; j <= n; ++j) v.col(j) = jacobi_p(x, 0.0, 0.0, j);
  return v;
}

void rs_to_ab(const Eigen::MatrixX2d& rs, Eigen::VectorXd& a, Eigen::VectorXd& b) {
  const Eigen::Index n = rs.rows();
  a.resize(n);
  b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rs(i, 0), s = rs(i, 1);
    a(i) = (s != 1.0) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
    b(i) = s;
  }
}

Eigen::VectorXd warp_factor(int n, const Eigen::VectorXd& rout) {
  const Eigen::VectorXd lgl = jacobi_gauss_lobatto(0.0, 0.0, n);
  const Eigen::VectorXd req = Eigen::VectorXd::LinSpaced(n + 1, -1.0, 1.0);
  const Eigen::MatrixXd veq = vandermonde_1d(n, req);
  const Eigen::MatrixXd pmat = vandermonde_1d(n, rout).transpose();
  const Eigen::MatrixXd lmat = veq.transpose().lu().solve(pmat);
  Eigen::VectorXd warp = lmat.transpose() * (lgl - req);
  for (Eigen::Index i = 0; i < rout.size(); ++i) {
    const bool inside = std::abs(rout(i)) < 1.0 - 1e-10;
    warp(i) = inside ? warp(i) / (1.0 - rout(i) * rout(i)) : 0.0;
  }
  return warp;
}

double edge_parameter(int edge, double r, double s) {
  switch (edge) {
    case 0: return r;
    case 1: return s;
    default: return -s;
  }
}

}  // namespace

Eigen::VectorXd jacobi_p(const Eigen::VectorXd& x, double alpha, double beta, int n) {
  const double gamma0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                        std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                        std::tgamma(alpha + beta + 1.0);
  Eigen::VectorXd p0 = Eigen::VectorXd::Constant(x.size(), 1.0 / std::sqrt(gamma0));
  if (n == 0) return p0;
  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * gamma0;
  Eigen::VectorXd p1 =
      (((alpha + beta + 2.0) * x.array() / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1))
          .matrix();
  if (n == 1) return p1;
  double aold = 2.0 / (2.0 + alpha + beta) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                  (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    Eigen::VectorXd p2 = ((-aold * p0.array() + (x.array() - bnew) * p1.array()) / anew).matrix();
    p0 = std::move(p1);
    p1 = std::move(p2);
    aold = anew;
  }
  return p1;
}

Eigen::VectorXd grad_jacobi_p(const Eigen::VectorXd& x, double alpha, double beta, int n) {
  if (n == 0) return Eigen::VectorXd::Zero(x.size());
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

// Golub-Welsch: n Gauss points for the weight (1-x)^alpha (1+x)^beta.
void jacobi_gauss(double alpha, double beta, int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  if (n < 1) throw std::invalid_argument("jacobi_gauss: need at least one point");
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                     std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(alpha + beta + 1.0);
  if (n == 1) {
    x = Eigen::VectorXd::Constant(1, -(alpha - beta) / (alpha + beta + 2.0));
    w = Eigen::VectorXd::Constant(1, mu0);
    return;
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    jac(i, i) = (i == 0 && std::abs(alpha + beta) < 1e-15)
                    ? (beta - alpha) / (alpha + beta + 2.0)
                    : -(alpha * alpha - beta * beta) / (h1 + 2.0) / h1;
    if (i + 1 < n) {
      const double k = i + 1.0;
      const double off = 2.0 / (h1 + 2.0) *
                         std::sqrt(k * (k + alpha + beta) * (k + alpha) * (k + beta) /
                                   (h1 + 1.0) / (h1 + 3.0));
      jac(i, i + 1) = off;
      jac(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  x = eig.eigenvalues();
  w = eig.eigenvectors().row(0).transpose().array().square() * mu0;
}

Eigen::VectorXd jacobi_gauss_lobatto(double alpha, double beta, int n) {
  Eigen::VectorXd x(n + 1);
  x(0) = -1.0;
  x(n) = 1.0;
  if (n == 1) return x;
  Eigen::VectorXd xi, wi;
  jacobi_gauss(alpha + 1.0, beta + 1.0, n - 1, xi, wi);
  x.segment(1, n - 1) = xi;
  return x;
}

Eigen::MatrixXd simplex_vandermonde(int p, const Eigen::MatrixX2d& pts) {
  Eigen::VectorXd a, b;
  rs_to_ab(pts, a, b);
  const int np = (p + 1) * (p + 2) / 2;
  Eigen::MatrixXd v(pts.rows(), np);
  int col = 0;
  for (int i = 0; i <= p; ++i) {
    const Eigen::VectorXd h1 = jacobi_p(a, 0.0, 0.0, i);
    for (int j = 0; j <= p - i; ++j) {
      const Eigen::VectorXd h2 = jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
      v.col(col++) = (std::sqrt(2.0) * h1.array() * h2.array() *
                      (1.0 - b.array()).pow(static_cast<double>(i)))
                         .matrix();
    }
  }
  return v;
}

void simplex_grad_vandermonde(int p, const Eigen::MatrixX2d& pts, Eigen::MatrixXd& vr,
                              Eigen::MatrixXd& vs) {
  Eigen::VectorXd a, b;
  rs_to_ab(pts, a, b);
  const int np = (p + 1) * (p + 2) / 2;
  vr.resize(pts.rows(), np);
  vs.resize(pts.rows(), np);
  int col = 0;
  const Eigen::ArrayXd half_1mb = 0.5 * (1.0 - b.array());
  for (int id = 0; id <= p; ++id) {
    const Eigen::ArrayXd fa = jacobi_p(a, 0.0, 0.0, id).array();
    const Eigen::ArrayXd dfa = grad_jacobi_p(a, 0.0, 0.0, id).array();
    for (int jd = 0; jd <= p - id; ++jd) {
      const Eigen::ArrayXd gb = jacobi_p(b, 2.0 * id + 1.0, 0.0, jd).array();
      const Eigen::ArrayXd dgb = grad_jacobi_p(b, 2.0 * id + 1.0, 0.0, jd).array();
      Eigen::ArrayXd dr = dfa * gb;
      if (id > 0) dr *= half_1mb.pow(id - 1.0);
      Eigen::ArrayXd dsv = dfa * (gb * (0.5 * (1.0 + a.array())));
      if (id > 0) dsv *= half_1mb.pow(id - 1.0);
      Eigen::ArrayXd tmp = dgb * half_1mb.pow(static_cast<double>(id));
      if (id > 0) tmp -= 0.5 * id * gb * half_1mb.pow(id - 1.0);
      dsv += fa * tmp;
      const double scale = std::pow(2.0, id + 0.5);
      vr.col(col) = (scale * dr).matrix();
      vs.col(col) = (scale * dsv).matrix();
      ++col;
    }
  }
}

Eigen::MatrixX2d warp_blend_nodes(int p) {
  static const double alpopt[] = {0.0000, 0.0000, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999,
                                  1.2832, 1.3648, 1.4773, 1.4959, 1.5743, 1.5770, 1.6223,
                                  1.6258};
  const double alpha = (p < 16) ? alpopt[p - 1] : 5.0 / 3.0;
  const int np = (p + 1) * (p + 2) / 2;
  Eigen::VectorXd l1(np), l2(np), l3(np), x(np), y(np);
  int sk = 0;
  for (int n = 1; n <= p + 1; ++n) {
    for (int m = 1; m <= p + 2 - n; ++m) {
      l1(sk) = (n - 1.0) / p;
      l3(sk) = (m - 1.0) / p;
      l2(sk) = 1.0 - l1(sk) - l3(sk);
      x(sk) = -l2(sk) + l3(sk);
      y(sk) = (-l2(sk) - l3(sk) + 2.0 * l1(sk)) / std::sqrt(3.0);
      ++sk;
    }
  }
  const Eigen::ArrayXd blend1 = 4.0 * l2.array() * l3.array();
  const Eigen::ArrayXd blend2 = 4.0 * l1.array() * l3.array();
  const Eigen::ArrayXd blend3 = 4.0 * l1.array() * l2.array();
  const Eigen::ArrayXd wf1 = warp_factor(p, l3 - l2).array();
  const Eigen::ArrayXd wf2 = warp_factor(p, l1 - l3).array();
  const Eigen::ArrayXd wf3 = warp_factor(p, l2 - l1).array();
  const Eigen::ArrayXd w1 = blend1 * wf1 * (1.0 + (alpha * l1.array()).square());
  const Eigen::ArrayXd w2 = blend2 * wf2 * (1.0 + (alpha * l2.array()).square());
  const Eigen::ArrayXd w3 = blend3 * wf3 * (1.0 + (alpha * l3.array()).square());
  const double c2 = std::cos(2.0 * M_PI / 3.0), c4 = std::cos(4.0 * M_PI / 3.0);
  const double s2 = std::sin(2.0 * M_PI / 3.0), s4 = std::sin(4.0 * M_PI / 3.0);
  const Eigen::ArrayXd xx = x.array() + w1 + c2 * w2 + c4 * w3;
  const Eigen::ArrayXd yy = y.array() + s2 * w2 + s4 * w3;

  Eigen::MatrixX2d rs(np, 2);
  const double sq3 = std::sqrt(3.0);
  for (int i = 0; i < np; ++i) {
    const double b1 = (sq3 * yy(i) + 1.0) / 3.0;
    const double b2 = (-3.0 * xx(i) - sq3 * yy(i) + 2.0) / 6.0;
    const double b3 = (3.0 * xx(i) - sq3 * yy(i) + 2.0) / 6.0;
    rs(i, 0) = -b2 + b3 - b1;
    rs(i, 1) = -b2 - b3 + b1;
  }
  return rs;
}

// Collapsed-coordinate product rule exact for total degree `degree`.
void triangle_quadrature(int degree, Eigen::MatrixX2d& pts, Eigen::VectorXd& w) {
  const int n = degree / 2 + 1;
  Eigen::VectorXd xa, wa, xb, wb;
  jacobi_gauss(0.0, 0.0, n, xa, wa);
  jacobi_gauss(1.0, 0.0, n, xb, wb);
  pts.resize(n * n, 2);
  w.resize(n * n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      pts(k, 0) = 0.5 * (1.0 + xa(i)) * (1.0 - xb(j)) - 1.0;
      pts(k, 1) = xb(j);
      w(k) = 0.5 * wa(i) * wb(j);
      ++k;
    }
  }
}

Eigen::Vector2d ReferenceElement::edge_point(int edge, double t) {
  static const double vr[3] = {-1.0, 1.0, -1.0};
  static const double vs[3] = {-1.0, -1.0, 1.0};
  const int a = edge, b = (edge + 1) % 3;
  const double lam = 0.5 * (t + 1.0);
  return {vr[a] + lam * (vr[b] - vr[a]), vs[a] + lam * (vs[b] - vs[a])};
}

Eigen::Vector2d ReferenceElement::edge_direction(int edge) {
  return 0.5 * (edge_point(edge, 1.0) - edge_point(edge, -1.0));
}

Eigen::MatrixXd ReferenceElement::interpolation_matrix(const Eigen::MatrixX2d& pts) const {
  return simplex_vandermonde(order, pts) * inv_vandermonde;
}

void ReferenceElement::derivative_matrices(const Eigen::MatrixX2d& pts, Eigen::MatrixXd& d_r,
                                           Eigen::MatrixXd& d_s) const {
  Eigen::MatrixXd vr, vs;
  simplex_grad_vandermonde(order, pts, vr, vs);
  d_r = vr * inv_vandermonde;
  d_s = vs * inv_vandermonde;
}

Eigen::VectorXd ReferenceElement::differentiate(const Eigen::VectorXd& u, Axis axis) const {
  if (u.size() != num_nodes) {
    throw std::invalid_argument("differentiate: expected " + std::to_string(num_nodes) +
                                " nodal values, got " + std::to_string(u.size()));
  }
  return axis == Axis::s1 ? Eigen::VectorXd(dr * u) : Eigen::VectorXd(ds * u);
}

double ReferenceElement::integrate(const Eigen::VectorXd& u, const Eigen::VectorXd& jacobian) const {
  if (u.size() != num_nodes || jacobian.size() != num_nodes) {
    throw std::invalid_argument("integrate: nodal size mismatch");
  }
  const Eigen::VectorXd uq = quad_interp * u;
  const Eigen::VectorXd jq = quad_interp * jacobian;
  if ((jq.array() <= 0.0).any()) {
    throw std::domain_error("integrate: non-positive Jacobian (inverted element)");
  }
  return (quad_weights.array() * uq.array() * jq.array()).sum();
}

Eigen::VectorXd ReferenceElement::edge_trace(const Eigen::VectorXd& u, int edge) const {
  const auto& idx = edge_nodes.at(edge);
  Eigen::VectorXd out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out(k) = u(idx[k]);
  return out;
}

Eigen::VectorXd ReferenceElement::lift(const Eigen::VectorXd& edge_data, int edge) const {
  const auto& idx = edge_nodes.at(edge);
  const Eigen::VectorXd contrib =
      edge_interp.transpose() * (edge_quad_weights.array() * edge_data.array()).matrix();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_nodes);
  for (std::size_t k = 0; k < idx.size(); ++k) out(idx[k]) += contrib(k);
  return out;
}

ReferenceElement build_reference_element(int p, int quad_order) {
  if (p < 1 || p > 10) {
    throw std::invalid_argument("build_reference_element: p must be in [1,10], got " +
                                std::to_string(p));
  }
  if (quad_order < 0) quad_order = 2 * p + 2;
  if (quad_order < 2 * p + 2) {
    throw std::invalid_argument("build_reference_element: quad_order must be >= 2p+2");
  }
  ReferenceElement re;
  re.order = p;
  re.quad_order = quad_order;
  re.num_nodes = (p + 1) * (p + 2) / 2;
  re.nodes = warp_blend_nodes(p);
  re.vandermonde = simplex_vandermonde(p, re.nodes);
  re.inv_vandermonde = re.vandermonde.inverse();
  Eigen::MatrixXd vr, vs;
  simplex_grad_vandermonde(p, re.nodes, vr, vs);
  re.dr = vr * re.inv_vandermonde;
  re.ds = vs * re.inv_vandermonde;
  re.mass = re.inv_vandermonde.transpose() * re.inv_vandermonde;

  triangle_quadrature(quad_order, re.quad_points, re.quad_weights);
  re.quad_interp = re.interpolation_matrix(re.quad_points);
  re.derivative_matrices(re.quad_points, re.quad_dr, re.quad_ds);

  const double tol = 1e-10;
  for (int e = 0; e < 3; ++e) {
    std::vector<std::pair<double, int>> on_edge;
    for (int i = 0; i < re.num_nodes; ++i) {
      const double r = re.nodes(i, 0), s = re.nodes(i, 1);
      const double dist = (e == 0) ? std::abs(s + 1.0) : (e == 1) ? std::abs(r + s) : std::abs(r + 1.0);
      if (dist < tol) on_edge.emplace_back(edge_parameter(e, r, s), i);
    }
    std::sort(on_edge.begin(), on_edge.end());
    if (static_cast<int>(on_edge.size()) != p + 1) {
      throw std::logic_error("build_reference_element: edge node count mismatch");
    }
    for (const auto& pr : on_edge) re.edge_nodes[e].push_back(pr.second);
  }

  jacobi_gauss(0.0, 0.0, quad_order / 2 + 1, re.edge_quad_points, re.edge_quad_weights);
  Eigen::VectorXd t(p + 1);
  for (int k = 0; k <= p; ++k) {
    const int i = re.edge_nodes[0][k];
    t(k) = re.nodes(i, 0);
  }
  re.edge_interp = vandermonde_1d(p, re.edge_quad_points) * vandermonde_1d(p, t).inverse();
  return re;
}

}  // namespace framesurf
