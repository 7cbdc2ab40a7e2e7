#include "framesurf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framesurf {

void spherical_angles(const Eigen::Vector3d& x, double& theta, double& phi) {
  const double r = x.norm();
  theta = std::acos(std::clamp(x(2) / r, -1.0, 1.0));
  phi = std::atan2(x(1), x(0));
}

Eigen::Vector3d from_spherical(const Eigen::Vector3d& x, double v_theta, double v_phi) {
  double th, ph;
  spherical_angles(x, th, ph);
  const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
  return {-v_phi * sp - v_theta * ct * cp, v_phi * cp - v_theta * ct * sp, v_theta * st};
}

namespace {

// Rossby-Haurwitz wave number 4 velocity: eastward u, northward v.
void rossby_haurwitz(const Eigen::Vector3d& x, double omega, double big_k, double& u, double& v) {
  double th, ph;
  spherical_angles(x, th, ph);
  const double s = std::sin(th), c = std::cos(th);
  u = omega * s + big_k * s * s * s * (4.0 * c * c - s * s) * std::cos(4.0 * ph);
  v = -4.0 * big_k * s * s * s * c * std::sin(4.0 * ph);
}

}  // namespace

VectorFunction divergence_test_field(int test, double omega, double big_k) {
  if (test == 1) {
    return [](const Eigen::Vector3d& x) {
      double th, ph;
      spherical_angles(x, th, ph);
      return from_spherical(x, 1.0 / std::sin(th), 1.0);
    };
  }
  if (test == 2) {
    return [omega, big_k](const Eigen::Vector3d& x) {
      double u, v;
      rossby_haurwitz(x, omega, big_k, u, v);
      return from_spherical(x, v, u);
    };
  }
  throw std::invalid_argument("divergence test must be 1 or 2");
}

VectorFunction curl_test_field(int test, double omega, double big_k) {
  if (test == 1) {
    return [](const Eigen::Vector3d& x) {
      double th, ph;
      spherical_angles(x, th, ph);
      return from_spherical(x, 1.0, 1.0 / std::sin(th));
    };
  }
  if (test == 2) {
    return [omega, big_k](const Eigen::Vector3d& x) {
      double u, v;
      rossby_haurwitz(x, omega, big_k, u, v);
      return from_spherical(x, u, -v);
    };
  }
  throw std::invalid_argument("curl test must be 1 or 2");
}

FrameComponents frame_components(const DgSpace& space, const FrameField& frames,
                                 const VectorFunction& f) {
  const auto& x = space.nodes().x;
  FrameComponents out{space.zeros(), space.zeros()};
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int i = 0; i < space.num_nodes(); ++i) {
      const Eigen::Vector3d v = f(at(x, i, k));
      out.c1(i, k) = v.dot(at(frames.node[0], i, k));
      out.c2(i, k) = v.dot(at(frames.node[1], i, k));
    }
  }
  return out;
}

Vec3Field represent_in_frames(const DgSpace& space, const FrameField& frames,
                              const VectorFunction& f) {
  const FrameComponents c = frame_components(space, frames, f);
  return frames.compose_nodes(c.c1, c.c2);
}

Eigen::MatrixXd sample_nodes(const DgSpace& space, const ScalarFunction& f) {
  const auto& x = space.nodes().x;
  Eigen::MatrixXd out = space.zeros();
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int i = 0; i < space.num_nodes(); ++i) out(i, k) = f(at(x, i, k));
  }
  return out;
}

Eigen::MatrixXd sample_quad(const DgSpace& space, const ScalarFunction& f) {
  const auto& x = space.quad().x;
  Eigen::MatrixXd out(space.num_quad(), space.num_elements());
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int i = 0; i < space.num_quad(); ++i) out(i, k) = f(at(x, i, k));
  }
  return out;
}

ElementMask pole_free_mask(const DgSpace& space, double cap) {
  const auto& mesh = space.mesh();
  ElementMask mask(mesh.num_elements(), 1);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& t = mesh.elements[k];
    const Eigen::Vector3d a = mesh.vertices[t[0]], b = mesh.vertices[t[1]],
                          c = mesh.vertices[t[2]];
    for (double sgn : {1.0, -1.0}) {
      const Eigen::Vector3d z(0.0, 0.0, sgn);
      if (a.cross(b).dot(z) >= 0.0 && b.cross(c).dot(z) >= 0.0 && c.cross(a).dot(z) >= 0.0) {
        mask[k] = 0;
      }
      for (int i = 0; i < space.num_nodes() && mask[k]; ++i) {
        if ((at(space.nodes().x, i, k) - z).norm() < cap) mask[k] = 0;
      }
    }
  }
  return mask;
}

}  // namespace framesurf
