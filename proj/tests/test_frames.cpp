#include "framesurf/frames.hpp"
#include "framesurf/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace framesurf;

namespace {

std::shared_ptr<const SurfaceMesh> sphere(int level = 2, int q = 3) {
  return std::make_shared<const SurfaceMesh>(generate_sphere_mesh(level, q));
}

Eigen::MatrixXd constant(const DgSpace& s, double v) {
  return Eigen::MatrixXd::Constant(s.num_nodes(), s.num_elements(), v);
}

}  // namespace

TEST(Frames, OrthonormalAndRightHanded) {
  const DgSpace s(sphere(), 5);
  for (const FrameField& f : {build_local_frames(s), build_locsph_frames(s, NormalRule::radial_sphere)}) {
    EXPECT_LT(orthonormality_residual(f), 1e-12);
    const Vec3Field c = cross(f.node[0], f.node[1]);
    for (int i = 0; i < 3; ++i) EXPECT_LT((c[i] - f.node[2][i]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Frames, LocsphNormalIsRadial) {
  const DgSpace s(sphere(), 4);
  const FrameField f = build_locsph_frames(s, NormalRule::radial_sphere);
  for (int k = 0; k < s.num_elements(); ++k) {
    for (int i = 0; i < s.num_nodes(); ++i) {
      const Eigen::Vector3d x = at(s.nodes().x, i, k);
      EXPECT_LT((at(f.node[2], i, k) - x.normalized()).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(Frames, LocalNormalCloseToRadial) {
  const auto m = sphere();
  const DgSpace s(m, 5);
  const FrameField loc = build_local_frames(s);
  const FrameField sph = build_locsph_frames(s, NormalRule::radial_sphere);
  const double eps = frame_angle_error(loc, sph).maxCoeff();
  EXPECT_GT(eps, 0.0);
  const double linf = mesh_error_stats(*m, 5).linf;
  const double h = 0.45;
  EXPECT_LT(eps, 100.0 * linf / h);
  EXPECT_GT(dot(loc.node[2], sph.node[2]).minCoeff(), 1.0 - 1e-4);
}

TEST(Frames, AngleErrorOfIdenticalFramesIsZero) {
  const DgSpace s(sphere(1), 3);
  const FrameField f = build_local_frames(s);
  EXPECT_EQ(frame_angle_error(f, f).maxCoeff(), 0.0);
}

TEST(Frames, VertexAngleNotAboveInterior) {
  const DgSpace s(sphere(), 3);
  const Eigen::MatrixXd eps =
      frame_angle_error(build_local_frames(s), build_locsph_frames(s, NormalRule::radial_sphere));
  const Eigen::Vector2d corners[3] = {{-1, -1}, {1, -1}, {-1, 1}};
  std::vector<char> is_vertex(s.num_nodes(), 0);
  int count = 0;
  for (int i = 0; i < s.num_nodes(); ++i) {
    for (const auto& c : corners) {
      if ((s.ref().nodes.row(i).transpose() - c).norm() < 1e-12) is_vertex[i] = 1;
    }
    count += is_vertex[i];
  }
  ASSERT_EQ(count, 3);
  double vmax = 0.0, imax = 0.0;
  for (int k = 0; k < s.num_elements(); ++k) {
    for (int i = 0; i < s.num_nodes(); ++i) {
      (is_vertex[i] ? vmax : imax) = std::max(is_vertex[i] ? vmax : imax, eps(i, k));
    }
  }
  EXPECT_LE(vmax, imax);
}

TEST(Frames, FlatElementsHaveNoDifferentials) {
  // The q=1 icosahedron is made of planar faces.
  const DgSpace s(std::make_shared<const SurfaceMesh>(generate_sphere_mesh(0, 1)), 3);
  const FrameField f = build_local_frames(s);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(f.div_e[i].cwiseAbs().maxCoeff(), 1e-12);
    for (int c = 0; c < 3; ++c) EXPECT_LT(f.curl_e[i][c].cwiseAbs().maxCoeff(), 1e-12);
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < s.num_elements(); ++k) {
        EXPECT_LT(f.node[i][c].col(k).maxCoeff() - f.node[i][c].col(k).minCoeff(), 1e-13);
      }
    }
  }
}

TEST(Frames, LocsphDivergenceOfNormalIsMeanCurvature) {
  const DgSpace s(sphere(), 6);
  const FrameField f = build_locsph_frames(s, NormalRule::radial_sphere);
  EXPECT_LT(rms_norm(s, f.div_e[2] - constant(s, 2.0)), 1e-3);
}

TEST(Frames, LocsphNormalCurlVanishesWithP) {
  const auto m = sphere();
  double prev = 1e9;
  for (int p : {4, 5, 7}) {
    const DgSpace s(m, p);
    const FrameField f = build_locsph_frames(s, NormalRule::radial_sphere);
    const double c = rms_norm(s, dot(f.node[2], f.curl_e[2]));
    EXPECT_LT(c, prev);
    prev = c;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(Frames, LocalDivergenceStagnatesBeyondGeometricOrder) {
  const auto m = sphere();
  std::vector<double> err;
  for (int p = 4; p <= 7; ++p) {
    const DgSpace s(m, p);
    err.push_back(rms_norm(s, build_local_frames(s).div_e[2] - constant(s, 2.0)));
  }
  for (double e : err) {
    EXPECT_GT(e / err.front(), 0.5);
    EXPECT_LT(e / err.front(), 2.0);
  }
}

TEST(Frames, LocsphE1IsProjectedLocalE1) {
  const DgSpace s(sphere(), 4);
  const FrameField loc = build_local_frames(s);
  const FrameField sph = build_locsph_frames(s, NormalRule::radial_sphere);
  const Eigen::MatrixXd off = dot(sph.node[0], cross(loc.node[0], sph.node[2]));
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(dot(sph.node[0], loc.node[0]).minCoeff(), 0.99);
}

TEST(Frames, EllipsoidRadialVersusAnalyticNormal) {
  const DgSpace s(std::make_shared<const SurfaceMesh>(generate_ellipsoid_mesh(2, 3, 1.003364)), 4);
  const FrameField r = build_locsph_frames(s, NormalRule::radial_sphere);
  const FrameField a = build_locsph_frames(s, NormalRule::analytic_ellipsoid);
  EXPECT_LT(orthonormality_residual(a), 1e-12);
  const double gap = frame_angle_error(r, a).maxCoeff();
  EXPECT_GT(gap, 1e-3);
  EXPECT_LT(gap, 1e-2);
}

TEST(Frames, RejectsInvalidRules) {
  const DgSpace s(sphere(1), 2);
  EXPECT_THROW(build_locsph_frames(s, NormalRule::discrete), std::invalid_argument);
  EXPECT_THROW(build_locsph_frames(s, NormalRule::analytic_ellipsoid), std::invalid_argument);
  EXPECT_THROW(parse_frame_kind("nope"), std::invalid_argument);
  EXPECT_EQ(parse_frame_kind("LOCSPH"), FrameKind::locsph);
}
