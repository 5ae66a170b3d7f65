#include "vnav/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vnav/worker_pool.hpp"

namespace vnav {

namespace {

constexpr std::size_t kChunk = 2048;

using Mat3 = std::array<std::array<double, 3>, 3>;

// Rotation matrix of a quaternion in the (2w^2 + 2x^2 - 1) diagonal form.
Mat3 rotation_from_quaternion(const std::array<double, 4>& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {{{2 * w * w + 2 * x * x - 1, 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 2 * w * w + 2 * y * y - 1, 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 2 * w * w + 2 * z * z - 1}}};
}

// Partials of h w.r.t. q, given m[k][i] = (dh/dp_k) * delta_i summed (or
// averaged) over points, where p = R(q)^T delta and delta = p_world - r.
std::array<double, 4> quaternion_partials(const std::array<double, 4>& q, const Mat3& m) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  const auto& m0 = m[0];
  const auto& m1 = m[1];
  const auto& m2 = m[2];
  const double dw = (4 * w * m0[0] + 2 * z * m0[1] - 2 * y * m0[2]) +
                    (-2 * z * m1[0] + 4 * w * m1[1] + 2 * x * m1[2]) +
                    (2 * y * m2[0] - 2 * x * m2[1] + 4 * w * m2[2]);
  const double dx = (4 * x * m0[0] + 2 * y * m0[1] + 2 * z * m0[2]) +
                    (2 * y * m1[0] + 2 * w * m1[2]) + (2 * z * m2[0] - 2 * w * m2[1]);
  const double dy = (2 * x * m0[1] - 2 * w * m0[2]) +
                    (2 * x * m1[0] + 4 * y * m1[1] + 2 * z * m1[2]) +
                    (2 * w * m2[0] + 2 * z * m2[1]);
  const double dz = (2 * w * m0[1] + 2 * x * m0[2]) + (-2 * w * m1[0] + 2 * y * m1[2]) +
                    (2 * x * m2[0] + 2 * y * m2[1] + 4 * z * m2[2]);
  return {dw, dx, dy, dz};
}

// Body point and world offset of one cloud point.
struct Local {
  Vec3 p;      // body frame
  Vec3 delta;  // p_world - r
};

struct Frames {
  Mat3 rot;
  Vec3 r;
  Frame frame;

  Local local(const Vec3& pt) const {
    if (frame == Frame::body) {
      const Vec3 d{rot[0][0] * pt.x + rot[0][1] * pt.y + rot[0][2] * pt.z,
                   rot[1][0] * pt.x + rot[1][1] * pt.y + rot[1][2] * pt.z,
                   rot[2][0] * pt.x + rot[2][1] * pt.y + rot[2][2] * pt.z};
      return {pt, d};
    }
    const Vec3 d = pt - r;
    return {{rot[0][0] * d.x + rot[1][0] * d.y + rot[2][0] * d.z,
             rot[0][1] * d.x + rot[1][1] * d.y + rot[2][1] * d.z,
             rot[0][2] * d.x + rot[1][2] * d.y + rot[2][2] * d.z},
            d};
  }
};

// alpha and dalpha/dp for a body-frame point.
struct AlphaGrad {
  double alpha;
  std::array<double, 3> g;
};

AlphaGrad alpha_and_gradient(const HyperEllipsoid& e, const Vec3& p) {
  const int d = e.order();
  const std::array<double, 3> coords{p.x, p.y, p.z};
  AlphaGrad out{0.0, {}};
  for (int k = 0; k < 3; ++k) {
    const double q = coords[k] / e.axes()[k];
    const double q2d_1 = ipow(q, 2 * d - 1);
    out.alpha += q2d_1 * q;
    out.g[k] = 2.0 * d * q2d_1 / e.axes()[k];
  }
  return out;
}

struct ChunkSum {
  std::size_t count = 0;
  double min = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  // Sums of w_j, w_j g_j and w_j g_j delta_j^T with w_j = exp(-(h_j - min) / delta).
  double s = 0.0;
  std::array<double, 3> g{};
  Mat3 m{};
};

Grad7 assemble_gradient(const Mat3& rot, const std::array<double, 4>& q,
                        const std::array<double, 3>& g, const Mat3& m) {
  Grad7 out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = -(rot[i][0] * g[0] + rot[i][1] * g[1] + rot[i][2] * g[2]);
  }
  const auto dq = quaternion_partials(q, m);
  std::copy(dq.begin(), dq.end(), out.begin() + 3);
  return out;
}

}  // namespace

double VesselParams::min_safe_beta() const {
  return 1.0 + delta * std::log(static_cast<double>(n_max));
}

void VesselParams::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be finite and > 0");
  }
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  if (!(beta >= min_safe_beta())) {
    throw std::invalid_argument("beta must satisfy beta >= 1 + delta * ln(n_max) = " +
                                std::to_string(min_safe_beta()));
  }
  if (z_crop && !(z_crop->lo < z_crop->hi)) {
    throw std::invalid_argument("z_crop requires lo < hi");
  }
}

PointBarrier per_point_h(const HyperEllipsoid& e, const PlanarPose& pose, const Vec3& p_world,
                         double beta) {
  const auto q = pose.quaternion();
  const Frames frames{rotation_from_quaternion(q), pose.position(), Frame::world};
  const Local loc = frames.local(p_world);
  const AlphaGrad ag = alpha_and_gradient(e, loc.p);
  Mat3 m{};
  const std::array<double, 3> dl{loc.delta.x, loc.delta.y, loc.delta.z};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) m[k][i] = ag.g[k] * dl[i];
  }
  return {ag.alpha - beta, assemble_gradient(frames.rot, q, ag.g, m)};
}

std::optional<double> softmin_stable(std::span<const double> values, double delta) {
  if (values.empty()) return std::nullopt;
  const double lo = *std::min_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += std::exp(-(v - lo) / delta);
  const double cap = delta * std::log(static_cast<double>(values.size()));
  const double excess = delta * (std::log(static_cast<double>(values.size())) - std::log(s));
  return lo + std::clamp(excess, 0.0, cap);
}

Grad4 reduce_to_yaw(const Grad7& g, const PlanarPose& pose) {
  const auto dq = pose.quaternion_yaw_derivative();
  return {g[0], g[1], g[2], g[3] * dq[0] + g[4] * dq[1] + g[5] * dq[2] + g[6] * dq[3]};
}

CbfEval evaluate_cbf(const HyperEllipsoid& e, const PlanarPose& pose, const PointCloud& cloud,
                     const VesselParams& params, WorkerPool* pool) {
  const auto q = pose.quaternion();
  const Frames frames{rotation_from_quaternion(q), pose.position(), cloud.frame};
  const double beta = params.beta;
  const double delta = params.delta;
  const std::optional<ZCrop> crop = params.z_crop;
  const std::size_t n = cloud.size();
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkSum> sums(n_chunks);

  for_each_index(pool, n_chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    std::array<double, kChunk> hs;
    ChunkSum& out = sums[c];
    for (std::size_t j = begin; j < end; ++j) {
      const Local loc = frames.local(cloud.points[j]);
      if (crop && (loc.p.z < crop->lo || loc.p.z > crop->hi)) {
        hs[j - begin] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double h = alpha_value(e, loc.p) - beta;
      hs[j - begin] = h;
      ++out.count;
      if (h < out.min) {
        out.min = h;
        out.argmin = j;
      }
    }
    for (std::size_t j = begin; j < end; ++j) {
      const double h = hs[j - begin];
      if (std::isnan(h)) continue;
      const double w = std::exp(-(h - out.min) / delta);
      const Local loc = frames.local(cloud.points[j]);
      const AlphaGrad ag = alpha_and_gradient(e, loc.p);
      const std::array<double, 3> dl{loc.delta.x, loc.delta.y, loc.delta.z};
      out.s += w;
      for (int k = 0; k < 3; ++k) {
        const double wg = w * ag.g[k];
        out.g[k] += wg;
        for (int i = 0; i < 3; ++i) out.m[k][i] += wg * dl[i];
      }
    }
  });

  CbfEval result;
  for (const ChunkSum& cs : sums) {
    result.n_points += cs.count;
    if (cs.count > 0 && cs.min < result.h_min) {
      result.h_min = cs.min;
      result.argmin_index = cs.argmin;
    }
  }
  if (result.n_points == 0) return result;

  double s = 0.0;
  std::array<double, 3> g{};
  Mat3 m{};
  for (const ChunkSum& cs : sums) {
    if (cs.count == 0) continue;
    const double scale = cs.min == result.h_min ? 1.0 : std::exp(-(cs.min - result.h_min) / delta);
    s += scale * cs.s;
    for (int k = 0; k < 3; ++k) {
      g[k] += scale * cs.g[k];
      for (int i = 0; i < 3; ++i) m[k][i] += scale * cs.m[k][i];
    }
  }

  const double log_n = std::log(static_cast<double>(result.n_points));
  const double excess = delta * (log_n - std::log(s));
  result.h = result.h_min + std::clamp(excess, 0.0, delta * log_n);

  for (int k = 0; k < 3; ++k) {
    g[k] /= s;
    for (int i = 0; i < 3; ++i) m[k][i] /= s;
  }
  result.grad7 = assemble_gradient(frames.rot, q, g, m);
  result.grad4 = reduce_to_yaw(result.grad7, pose);
  return result;
}

}  // namespace vnav
