#include "vnav/mariner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vnav/worker_pool.hpp"

namespace vnav {

namespace {

// (m^d)^(1/d) for even d; callers pass md >= 0.
inline double needle_root(double md, int d) {
  if (d == 2) return std::sqrt(md);
  if (d == 4) return std::sqrt(std::sqrt(md));
  return std::pow(md, 1.0 / d);
}

// Participation of one needle-frame point; the result is s_max for points
// outside the needle's cross-section or behind its root.
inline double point_scale(double xn, double yn, double z_term, double inv_b_pow, int d,
                          double a_bar, double s_max) {
  const double md = z_term - ipow(yn * yn, d / 2) * inv_b_pow;
  if (!(md > 0.0) || !(xn > 0.0)) return s_max;
  return xn / ((1.0 + needle_root(md, d)) * a_bar);
}

// Cloud reduced to the points that can shorten some needle below s_max.
struct PreparedCloud {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z_term;  // 1 - z^d / c^d
};

PreparedCloud prepare(const NeedleConfig& cfg, const PointCloud& cloud) {
  const int d = cfg.d_bar;
  const double inv_c_pow = 1.0 / ipow(cfg.c_bar * cfg.c_bar, d / 2);
  // Any participating point has |y| < b_bar and (1 + m) <= 2, so points with
  // x^2 + y^2 beyond this radius only produce scales above s_max.
  const double reach = 2.0 * cfg.a_bar * cfg.s_max;
  const double far_sq = (reach * reach + cfg.b_bar * cfg.b_bar) * (1.0 + 1e-9);
  PreparedCloud out;
  out.x.reserve(cloud.size());
  out.y.reserve(cloud.size());
  out.z_term.reserve(cloud.size());
  for (const Vec3& p : cloud.points) {
    const double zt = 1.0 - ipow(p.z * p.z, d / 2) * inv_c_pow;
    if (!(zt > 0.0)) continue;
    if (p.x * p.x + p.y * p.y > far_sq) continue;
    out.x.push_back(p.x);
    out.y.push_back(p.y);
    out.z_term.push_back(zt);
  }
  return out;
}

double scale_prepared(const NeedleConfig& cfg, double theta, const PreparedCloud& pc) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int d = cfg.d_bar;
  const double inv_b_pow = 1.0 / ipow(cfg.b_bar * cfg.b_bar, d / 2);
  const double a_bar = cfg.a_bar;
  const double s_max = cfg.s_max;
  const std::size_t n = pc.x.size();
  const double* xs = pc.x.data();
  const double* ys = pc.y.data();
  const double* zs = pc.z_term.data();
  double best = s_max;
  if (d == 2) {
    // Branch-free form of point_scale for the common order; vectorizes.
    for (std::size_t j = 0; j < n; ++j) {
      const double xn = c * xs[j] + s * ys[j];
      const double yn = c * ys[j] - s * xs[j];
      const double md = zs[j] - (yn * yn) * inv_b_pow;
      const bool inside = md > 0.0 && xn > 0.0;
      const double root = std::sqrt(inside ? md : 1.0);
      const double cand = inside ? xn / ((1.0 + root) * a_bar) : s_max;
      best = cand < best ? cand : best;
    }
    return best;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double xn = c * xs[j] + s * ys[j];
    const double yn = c * ys[j] - s * xs[j];
    const double cand = point_scale(xn, yn, zs[j], inv_b_pow, d, a_bar, s_max);
    best = cand < best ? cand : best;
  }
  return best;
}

}  // namespace

void NeedleConfig::validate() const {
  if (!(a_bar > 0.0 && b_bar > 0.0 && c_bar > 0.0)) {
    throw std::invalid_argument("needle semi-axes must be > 0");
  }
  if (d_bar < 2 || d_bar % 2 != 0) {
    throw std::invalid_argument("needle order must be even and >= 2, got " +
                                std::to_string(d_bar));
  }
  if (n_needle < 1) throw std::invalid_argument("n_needle must be >= 1");
  if (!(s_min > 0.0 && s_min < s_max)) {
    throw std::invalid_argument("needle scales require 0 < s_min < s_max");
  }
  if (!custom_angles.empty()) {
    if (custom_angles.size() != n_needle) {
      throw std::invalid_argument("custom needle angles must have n_needle entries");
    }
    for (double a : custom_angles) {
      if (!(a >= -std::numbers::pi && a < std::numbers::pi)) {
        throw std::invalid_argument("custom needle angles must lie in [-pi, pi)");
      }
    }
  }
}

std::vector<double> needle_angles(const NeedleConfig& config) {
  if (!config.custom_angles.empty()) return config.custom_angles;
  std::vector<double> angles(config.n_needle);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(config.n_needle);
  for (std::size_t i = 0; i < config.n_needle; ++i) {
    angles[i] = step * static_cast<double>(i) - std::numbers::pi;
  }
  return angles;
}

double needle_scale(const NeedleConfig& config, double theta, const PointCloud& cloud_body) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int d = config.d_bar;
  const double inv_b_pow = 1.0 / ipow(config.b_bar * config.b_bar, d / 2);
  const double inv_c_pow = 1.0 / ipow(config.c_bar * config.c_bar, d / 2);
  double best = config.s_max;
  for (const Vec3& p : cloud_body.points) {
    const double zt = 1.0 - ipow(p.z * p.z, d / 2) * inv_c_pow;
    const double xn = c * p.x + s * p.y;
    const double yn = c * p.y - s * p.x;
    const double cand = point_scale(xn, yn, zt, inv_b_pow, d, config.a_bar, config.s_max);
    best = cand < best ? cand : best;
  }
  return best;
}

Vec3 needle_tip(const NeedleConfig& config, double theta, double scale) {
  const double len = 2.0 * scale * config.a_bar;
  return {len * std::cos(theta), len * std::sin(theta), 0.0};
}

NeedleResult select_preview_target(const NeedleConfig& config, const PointCloud& cloud_body,
                                   const Vec3& target_body, WorkerPool* pool) {
  NeedleResult res;
  res.angles = needle_angles(config);
  const std::size_t n = res.angles.size();
  res.scales.assign(n, config.s_max);
  res.valid.assign(n, false);

  const PreparedCloud pc = prepare(config, cloud_body);
  if (!pc.x.empty()) {
    constexpr std::size_t kNeedlesPerTask = 4;
    const std::size_t tasks = (n + kNeedlesPerTask - 1) / kNeedlesPerTask;
    for_each_index(pool, tasks, [&](std::size_t t) {
      const std::size_t end = std::min(n, (t + 1) * kNeedlesPerTask);
      for (std::size_t i = t * kNeedlesPerTask; i < end; ++i) {
        res.scales[i] = scale_prepared(config, res.angles[i], pc);
      }
    });
  }

  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    res.valid[i] = res.scales[i] >= config.s_min;
    if (!res.valid[i]) continue;
    const double dist = (needle_tip(config, res.angles[i], res.scales[i]) - target_body).norm();
    if (dist < best_dist) {
      best_dist = dist;
      res.chosen_index = i;
    }
  }
  if (!res.chosen_index) return res;

  const std::size_t k = *res.chosen_index;
  res.preview_target_body = needle_tip(config, res.angles[k], res.scales[k]);

  // Stop at the waypoint when the needle aimed straight at it is free for at
  // least the waypoint distance.
  const double target_dist = std::hypot(target_body.x, target_body.y);
  const double bearing = std::atan2(target_body.y, target_body.x);
  std::size_t direct = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = std::abs(wrap_angle(res.angles[i] - bearing));
    if (gap < best_gap) {
      best_gap = gap;
      direct = i;
    }
  }
  if (res.valid[direct] && 2.0 * res.scales[direct] * config.a_bar >= target_dist) {
    res.preview_target_body = Vec3{target_body.x, target_body.y, 0.0};
    res.clipped_to_target = true;
  }
  return res;
}

}  // namespace vnav
