#include "framesurf/refelem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace framesurf;

namespace {

// Closed form of the integral of r^i s^j over the reference triangle.
// Integrate s first; both remaining pieces are 1D moments, so no cancellation.
double moment(int n) { return n % 2 == 0 ? 2.0 / (n + 1) : 0.0; }

double monomial_integral(int i, int j) {
  const double sign = (j % 2 == 0) ? -1.0 : 1.0;
  return sign / (j + 1) * (moment(i + j + 1) - moment(i));
}

Eigen::VectorXd sample(const ReferenceElement& re, int i, int j) {
  Eigen::VectorXd u(re.num_nodes);
  for (int n = 0; n < re.num_nodes; ++n) {
    u(n) = std::pow(re.nodes(n, 0), i) * std::pow(re.nodes(n, 1), j);
  }
  return u;
}

}  // namespace

TEST(RefElem, NodeCounts) {
  const ReferenceElement p1 = build_reference_element(1);
  ASSERT_EQ(p1.num_nodes, 3);
  Eigen::MatrixX2d verts(3, 2);
  verts << -1, -1, 1, -1, -1, 1;
  for (int v = 0; v < 3; ++v) {
    double best = 1e9;
    for (int n = 0; n < 3; ++n) best = std::min(best, (p1.nodes.row(n) - verts.row(v)).norm());
    EXPECT_LT(best, 1e-14);
  }
  EXPECT_EQ(build_reference_element(5).num_nodes, 21);
  EXPECT_EQ(build_reference_element(8).num_nodes, 45);
}

TEST(RefElem, RejectsBadOrders) {
  EXPECT_THROW(build_reference_element(0), std::invalid_argument);
  EXPECT_THROW(build_reference_element(11), std::invalid_argument);
  EXPECT_THROW(build_reference_element(4, 5), std::invalid_argument);
}

TEST(RefElem, JacobiGaussWeights) {
  Eigen::VectorXd x, w;
  jacobi_gauss(0.0, 0.0, 6, x, w);
  EXPECT_NEAR(w.sum(), 2.0, 1e-14);
  // exact for degree 11
  EXPECT_NEAR((w.array() * x.array().pow(10)).sum(), 2.0 / 11.0, 1e-14);
  jacobi_gauss(1.0, 0.0, 5, x, w);
  EXPECT_NEAR(w.sum(), 2.0, 1e-13);  // int (1-x) dx over [-1,1]
}

TEST(RefElem, DifferentiateSimpleFields) {
  const ReferenceElement re = build_reference_element(4);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(re.num_nodes);
  EXPECT_LT(re.differentiate(one, Axis::s1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(re.differentiate(one, Axis::s2).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd r = sample(re, 1, 0);
  EXPECT_LT((re.differentiate(r, Axis::s1) - one).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd r2s = sample(re, 2, 1);
  EXPECT_LT((re.differentiate(r2s, Axis::s2) - sample(re, 2, 0)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(re.differentiate(Eigen::VectorXd::Ones(3), Axis::s1), std::invalid_argument);
}

TEST(RefElem, DerivativeExactnessRandomPolynomials) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int p = 1; p <= 8; ++p) {
    const ReferenceElement re = build_reference_element(p);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(re.num_nodes);
    Eigen::VectorXd ur = u, us = u;
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; i + j <= p; ++j) {
        const double c = coef(rng);
        u += c * sample(re, i, j);
        if (i > 0) ur += c * i * sample(re, i - 1, j);
        if (j > 0) us += c * j * sample(re, i, j - 1);
      }
    }
    EXPECT_LT((re.differentiate(u, Axis::s1) - ur).cwiseAbs().maxCoeff(), 1e-11) << "p=" << p;
    EXPECT_LT((re.differentiate(u, Axis::s2) - us).cwiseAbs().maxCoeff(), 1e-11) << "p=" << p;
  }
}

TEST(RefElem, QuadratureMonomials) {
  for (int p : {1, 3, 5, 8}) {
    const ReferenceElement re = build_reference_element(p);
    EXPECT_NEAR(re.quad_weights.sum(), 2.0, 1e-13);
    for (int i = 0; i <= re.quad_order; ++i) {
      for (int j = 0; i + j <= re.quad_order; ++j) {
        double q = 0.0;
        for (int n = 0; n < re.num_quad(); ++n) {
          q += re.quad_weights(n) * std::pow(re.quad_points(n, 0), i) *
               std::pow(re.quad_points(n, 1), j);
        }
        EXPECT_NEAR(q, monomial_integral(i, j), 1e-12) << "p=" << p << " i=" << i << " j=" << j;
      }
    }
  }
  EXPECT_NEAR(monomial_integral(1, 0), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(monomial_integral(1, 1), 0.0, 1e-15);
}

TEST(RefElem, IntegrateNodalFields) {
  const ReferenceElement re = build_reference_element(4);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(re.num_nodes);
  EXPECT_NEAR(re.integrate(one, one), 2.0, 1e-13);
  // degree 2p = 8 polynomial: r^4 s^4
  const ReferenceElement re8 = build_reference_element(8);
  const Eigen::VectorXd one8 = Eigen::VectorXd::Ones(re8.num_nodes);
  EXPECT_NEAR(re8.integrate(sample(re8, 4, 4), one8), monomial_integral(4, 4), 1e-12);
  const Eigen::VectorXd bad = -one;  // inverted element
  EXPECT_THROW(re.integrate(one, bad), std::domain_error);
  EXPECT_THROW(re.integrate(Eigen::VectorXd::Ones(2), one), std::invalid_argument);
}

TEST(RefElem, EdgeTraceMatchesRestriction) {
  const ReferenceElement re = build_reference_element(5);
  const Eigen::VectorXd u = sample(re, 3, 2) + 2.0 * sample(re, 0, 4);
  for (int e = 0; e < 3; ++e) {
    const Eigen::VectorXd tr = re.edge_trace(u, e);
    ASSERT_EQ(tr.size(), 6);
    for (int i = 0; i < tr.size(); ++i) {
      const auto n = re.nodes.row(re.edge_nodes[e][i]);
      EXPECT_NEAR(tr(i), std::pow(n(0), 3) * n(1) * n(1) + 2.0 * std::pow(n(1), 4), 1e-12);
    }
  }
}

TEST(RefElem, EdgeNodesAreCounterclockwise) {
  const ReferenceElement re = build_reference_element(3);
  for (int e = 0; e < 3; ++e) {
    const auto& ids = re.edge_nodes[e];
    const Eigen::Vector2d start = ReferenceElement::edge_point(e, -1.0);
    const Eigen::Vector2d end = ReferenceElement::edge_point(e, 1.0);
    EXPECT_LT((re.nodes.row(ids.front()).transpose() - start).norm(), 1e-14);
    EXPECT_LT((re.nodes.row(ids.back()).transpose() - end).norm(), 1e-14);
  }
}

TEST(RefElem, LiftIntegratesEdgeData) {
  const ReferenceElement re = build_reference_element(4);
  // Lifting constant data and summing over the nodal basis gives the parameter length 2.
  const Eigen::VectorXd data = Eigen::VectorXd::Ones(re.num_edge_quad());
  for (int e = 0; e < 3; ++e) EXPECT_NEAR(re.lift(data, e).sum(), 2.0, 1e-12);
}
