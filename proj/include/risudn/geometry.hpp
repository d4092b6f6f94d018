#pragma once

// Nearest-anchor association, BS-RIS-UE triangles and the one-sided RIS
// reflection state.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "risudn/common.hpp"
#include "risudn/ppp.hpp"

namespace risudn {

/// One BS-RIS-UE triangle. Angles are in radians.
struct TriangleBRU {
  double d_direct = 0.0;    // BS-UE
  double d_incident = 0.0;  // BS-RIS
  double d_reflect = 0.0;   // RIS-UE
  double ue_angle = 0.0;    // vertex angle at the UE, [0, pi]
  double ris_angle = 0.0;   // vertex angle at the RIS, [0, pi]
  double ris_polar = 0.0;   // polar angle of the RIS seen from the BS, [0, 2pi)
};

struct AssociationMap {
  std::vector<std::size_t> ue_to_bs;
  std::vector<std::size_t> ris_to_bs;
  std::vector<bool> active_bs;  // indexed by BS
};

/// Bucket grid over a point set for exact nearest-neighbour queries.
/// Ties are broken towards the lowest anchor index.
class NearestIndex {
 public:
  explicit NearestIndex(std::span<const Vec2> anchors) : anchors_(anchors.begin(), anchors.end()) {
    require(!anchors_.empty(), "NearestIndex: anchor set is empty");
    lo_ = hi_ = anchors_.front();
    for (const auto& a : anchors_) {
      lo_.x = std::min(lo_.x, a.x);
      lo_.y = std::min(lo_.y, a.y);
      hi_.x = std::max(hi_.x, a.x);
      hi_.y = std::max(hi_.y, a.y);
    }
    const double w = std::max(hi_.x - lo_.x, 1e-12);
    const double h = std::max(hi_.y - lo_.y, 1e-12);
    const double per_cell = 2.0;
    const double n = static_cast<double>(anchors_.size());
    cell_ = std::max(std::sqrt(w * h * per_cell / n), 1e-9);
    nx_ = static_cast<long>(std::floor(w / cell_)) + 1;
    ny_ = static_cast<long>(std::floor(h / cell_)) + 1;
    start_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
    std::vector<std::size_t> cell_of(anchors_.size());
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
      cell_of[i] = static_cast<std::size_t>(cell_index(anchors_[i]));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(anchors_.size());
    auto fill = start_;
    for (std::size_t i = 0; i < anchors_.size(); ++i) items_[fill[cell_of[i]]++] = i;
  }

  std::size_t nearest(Vec2 p) const {
    const long cx = std::clamp(static_cast<long>(std::floor((p.x - lo_.x) / cell_)), 0L, nx_ - 1);
    const long cy = std::clamp(static_cast<long>(std::floor((p.y - lo_.y) / cell_)), 0L, ny_ - 1);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_d2 = std::numeric_limits<double>::infinity();
    const long max_ring = std::max(nx_, ny_);
    for (long ring = 0; ring <= max_ring; ++ring) {
      for (long gx = cx - ring; gx <= cx + ring; ++gx) {
        for (long gy = cy - ring; gy <= cy + ring; ++gy) {
          if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring) continue;
          if (gx < 0 || gy < 0 || gx >= nx_ || gy >= ny_) continue;
          const auto c = static_cast<std::size_t>(gy * nx_ + gx);
          for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
            const std::size_t i = items_[k];
            const double d2 = distance_sq(p, anchors_[i]);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
              best_d2 = d2;
              best = i;
            }
          }
        }
      }
      // Every unvisited cell is at least `ring * cell_` away from p's cell border.
      if (best != std::numeric_limits<std::size_t>::max()) {
        const double reach = static_cast<double>(ring) * cell_ + edge_gap(p, cx, cy);
        if (reach * reach > best_d2) break;
      }
    }
    return best;
  }

 private:
  long cell_index(Vec2 a) const {
    const long gx = std::clamp(static_cast<long>(std::floor((a.x - lo_.x) / cell_)), 0L, nx_ - 1);
    const long gy = std::clamp(static_cast<long>(std::floor((a.y - lo_.y) / cell_)), 0L, ny_ - 1);
    return gy * nx_ + gx;
  }
  // Distance from p to the boundary of its own (clamped) cell, 0 when outside.
  double edge_gap(Vec2 p, long cx, long cy) const {
    const double x0 = lo_.x + static_cast<double>(cx) * cell_;
    const double y0 = lo_.y + static_cast<double>(cy) * cell_;
    const double gx = std::min(p.x - x0, x0 + cell_ - p.x);
    const double gy = std::min(p.y - y0, y0 + cell_ - p.y);
    return std::max(0.0, std::min(gx, gy));
  }

  std::vector<Vec2> anchors_;
  Vec2 lo_, hi_;
  double cell_ = 1.0;
  long nx_ = 1, ny_ = 1;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

inline std::vector<Vec2> to_cartesian(std::span<const PolarPoint> pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.cartesian());
  return out;
}

inline std::vector<std::size_t> associate_nearest(std::span<const Vec2> points,
                                                  std::span<const Vec2> anchors) {
  require(!anchors.empty(), "associate_nearest: anchor list is empty");
  NearestIndex index(anchors);
  std::vector<std::size_t> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(index.nearest(p));
  return out;
}

/// Maps every point to the index of its nearest anchor (lowest index on ties).
inline std::vector<std::size_t> associate_nearest(std::span<const PolarPoint> points,
                                                  std::span<const PolarPoint> anchors) {
  require(!anchors.empty(), "associate_nearest: anchor list is empty");
  const auto a = to_cartesian(anchors);
  const auto p = to_cartesian(points);
  return associate_nearest(std::span<const Vec2>(p), std::span<const Vec2>(a));
}

/// UEs and RISs both attach to their nearest BS; a BS is active iff it serves a UE.
inline AssociationMap associate(const NetworkRealization& net) {
  AssociationMap map;
  map.active_bs.assign(net.bs.size(), false);
  if (net.bs.empty()) return map;
  map.ue_to_bs = associate_nearest(std::span<const PolarPoint>(net.ue), net.bs);
  std::vector<PolarPoint> ris_pos;
  ris_pos.reserve(net.ris.size());
  for (const auto& s : net.ris) ris_pos.push_back(s.position);
  map.ris_to_bs = associate_nearest(std::span<const PolarPoint>(ris_pos), net.bs);
  for (auto b : map.ue_to_bs) map.active_bs[b] = true;
  return map;
}

namespace detail {
inline double vertex_angle(double adj1, double adj2, double opposite) {
  if (adj1 <= 0.0 || adj2 <= 0.0) return 0.0;
  const double c = (adj1 * adj1 + adj2 * adj2 - opposite * opposite) / (2.0 * adj1 * adj2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}
}  // namespace detail

/// Coincident vertices give zero distances; the undefined angle is set to 0.
inline TriangleBRU triangle_from_cartesian(Vec2 bs, Vec2 ris, Vec2 ue) {
  TriangleBRU t;
  t.d_direct = distance(bs, ue);
  t.d_incident = distance(bs, ris);
  t.d_reflect = distance(ris, ue);
  t.ue_angle = detail::vertex_angle(t.d_direct, t.d_reflect, t.d_incident);
  t.ris_angle = detail::vertex_angle(t.d_reflect, t.d_incident, t.d_direct);
  t.ris_polar = t.d_incident > 0.0 ? wrap_angle(std::atan2(ris.y - bs.y, ris.x - bs.x)) : 0.0;
  return t;
}

inline TriangleBRU build_triangle(const PolarPoint& bs, const PolarPoint& ris, const PolarPoint& ue) {
  return triangle_from_cartesian(bs.cartesian(), ris.cartesian(), ue.cartesian());
}

/// Successful reflection iff kappa lies on the closed arc
/// [-theta_m, pi - dtheta_M - theta_m] taken modulo 2pi.
inline bool reflection_state(double kappa, double theta_m, double dtheta_M) {
  const double start = wrap_angle(-theta_m);
  const double length = kPi - std::clamp(dtheta_M, 0.0, kPi);
  const double offset = wrap_angle(kappa - start);
  constexpr double eps = 1e-12;
  return offset <= length + eps || offset >= kTwoPi - eps;
}

inline double reflection_prob_given_angle(double dtheta_M) {
  require(dtheta_M >= 0.0 && dtheta_M <= kPi, "reflection_prob_given_angle: angle outside [0, pi]");
  return (kPi - dtheta_M) / kTwoPi;
}

/// Density of the distance from the typical UE to its nearest active BS.
inline double nearest_bs_distance_pdf(double d, double lambda_active) {
  require(d >= 0.0, "nearest_bs_distance_pdf: distance must be non-negative");
  require(lambda_active > 0.0, "nearest_bs_distance_pdf: intensity must be positive");
  return kTwoPi * lambda_active * d * std::exp(-kPi * lambda_active * d * d);
}

inline double nearest_bs_distance_cdf(double d, double lambda_active) {
  return 1.0 - std::exp(-kPi * lambda_active * d * d);
}

}  // namespace risudn
