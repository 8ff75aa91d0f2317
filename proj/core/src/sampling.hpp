#pragma once

// Random points of conv(P ∩ D) used by the sampled sups. Private to core.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "paraconvex/euclid.hpp"
#include "paraconvex/rng.hpp"

namespace paraconvex::detail {

struct Candidate {
  Point q;
  std::array<std::size_t, 3> idx{};
  std::array<double, 3> w{};
  std::size_t n = 0;

  HullPoint to_hull_point() const {
    HullPoint h;
    h.point = q;
    for (std::size_t k = 0; k < n; ++k) h.support.emplace_back(idx[k], w[k]);
    return h;
  }
};

class HullSampler {
 public:
  static constexpr std::size_t kMemberCap = 2048;

  explicit HullSampler(const PointCloud& cloud) : cloud_(cloud) {}

  /// `members` are cloud indices of P ∩ D, nonempty.
  void prepare(const std::vector<std::size_t>& members) {
    if (!pool_.empty() && members == last_) return;
    last_ = members;
    planar_ = cloud_.dim() == 2;
    pool_.clear();
    if (members.size() <= kMemberCap) {
      pool_ = members;
    } else {
      // Keep the extreme members in a fan of directions, then a strided subsample.
      std::vector<char> taken(members.size(), 0);
      const std::size_t dirs = planar_ ? 32 : 26;
      std::array<std::array<double, 3>, 32> u{};
      for (std::size_t d = 0; d < dirs; ++d) {
        if (planar_) {
          const double a = 2.0 * M_PI * static_cast<double>(d) / static_cast<double>(dirs);
          u[d] = {std::cos(a), std::sin(a), 0.0};
        } else {
          const std::size_t code = d < 13 ? d : d + 1;  // skip the zero direction
          u[d] = {static_cast<double>(code % 3) - 1.0, static_cast<double>(code / 3 % 3) - 1.0,
                  static_cast<double>(code / 9) - 1.0};
        }
      }
      std::array<double, 32> best;
      std::array<std::size_t, 32> arg{};
      best.fill(-std::numeric_limits<double>::infinity());
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Point& p = cloud_[members[m]];
        const double x = p[0], y = p[1], z = p[2];
        for (std::size_t d = 0; d < dirs; ++d) {
          const double v = u[d][0] * x + u[d][1] * y + u[d][2] * z;
          if (v > best[d]) {
            best[d] = v;
            arg[d] = m;
          }
        }
      }
      for (std::size_t d = 0; d < dirs; ++d) taken[arg[d]] = 1;
      const std::size_t stride = (members.size() + kMemberCap - 1) / kMemberCap;
      for (std::size_t m = 0; m < members.size(); m += stride) taken[m] = 1;
      for (std::size_t m = 0; m < members.size(); ++m) {
        if (taken[m]) pool_.push_back(members[m]);
      }
    }
    basis_.clear();
    if (planar_ && pool_.size() > 2) {
      std::vector<Point> pts;
      pts.reserve(pool_.size());
      for (std::size_t i : pool_) pts.push_back(cloud_[i]);
      for (std::size_t h : convex_hull_2d(pts)) basis_.push_back(pool_[h]);
      if (basis_.size() < 2) basis_ = pool_;
    } else {
      basis_ = pool_;
    }
  }

  /// Hull vertices and edge midpoints (planar sets), then `random_count`
  /// draws: a segment point between two hull vertices, a Dirichlet triple of
  /// hull vertices, or a segment point between two arbitrary members.
  template <class F>
  void visit(std::size_t random_count, Rng& rng, F&& f) const {
    if (pool_.size() == 1) {
      f(single(pool_[0]));
      return;
    }
    if (planar_) {
      for (std::size_t v : basis_) f(single(v));
      const std::size_t h = basis_.size();
      if (h == 2) {
        f(segment(basis_[0], basis_[1], 0.5));
      } else {
        for (std::size_t k = 0; k < h; ++k) f(segment(basis_[k], basis_[(k + 1) % h], 0.5));
      }
    }
    for (std::size_t k = 0; k < random_count; ++k) {
      const std::size_t kind = rng.below(3);
      const double t = rng.uniform();
      if (kind == 0 || (kind == 1 && basis_.size() < 3)) {
        const auto [a, b] = distinct_pair(basis_, rng);
        f(segment(a, b, t));
      } else if (kind == 1) {
        f(triple(rng));
      } else {
        const auto [a, b] = distinct_pair(pool_, rng);
        f(segment(a, b, t));
      }
    }
  }

 private:
  Candidate single(std::size_t i) const {
    Candidate c;
    c.q = cloud_[i];
    c.idx[0] = i;
    c.w[0] = 1.0;
    c.n = 1;
    return c;
  }
  Candidate segment(std::size_t a, std::size_t b, double t) const {
    Candidate c;
    c.q = cloud_[a] * (1.0 - t) + cloud_[b] * t;
    c.idx = {a, b, 0};
    c.w = {1.0 - t, t, 0.0};
    c.n = 2;
    return c;
  }
  Candidate triple(Rng& rng) const {
    const std::size_t h = basis_.size();
    std::size_t i = rng.below(h);
    std::size_t j = rng.below(h - 1);
    if (j >= i) ++j;
    std::size_t k = rng.below(h - 2);
    if (k >= std::min(i, j)) ++k;
    if (k >= std::max(i, j)) ++k;
    Candidate c;
    const double e0 = rng.exponential();
    const double e1 = rng.exponential();
    const double e2 = rng.exponential();
    const double s = e0 + e1 + e2;
    c.idx = {basis_[i], basis_[j], basis_[k]};
    c.w = {e0 / s, e1 / s, e2 / s};
    c.n = 3;
    c.q = cloud_[c.idx[0]] * c.w[0] + cloud_[c.idx[1]] * c.w[1] + cloud_[c.idx[2]] * c.w[2];
    return c;
  }
  static std::pair<std::size_t, std::size_t> distinct_pair(const std::vector<std::size_t>& from, Rng& rng) {
    const std::size_t i = rng.below(from.size());
    std::size_t j = rng.below(from.size() - 1);
    if (j >= i) ++j;
    return {from[i], from[j]};
  }

  const PointCloud& cloud_;
  bool planar_ = true;
  std::vector<std::size_t> last_;
  std::vector<std::size_t> pool_;
  std::vector<std::size_t> basis_;
};

}  // namespace paraconvex::detail
