#include "nagalpha/prox.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace nagalpha {

Vector soft_threshold(const Vector& u, double t) {
  return u.unaryExpr([t](double ui) {
    const double mag = std::abs(ui) - t;
    if (mag <= 0.0) return 0.0;
    return ui > 0.0 ? mag : -mag;
  });
}

ProxResult proximal_value(const CompositeProblem& p, const Vector& x,
                          double s) {
  const double critical = 1.0 / p.smooth.lipschitz;
  if (!(s > 0.0 && s <= critical)) {
    throw std::invalid_argument(
        "proximal_value: step size " + std::to_string(s) +
        " outside (0, 1/L], 1/L = " + std::to_string(critical));
  }
  if (x.size() != p.smooth.dimension) {
    throw std::invalid_argument("proximal_value: dimension mismatch");
  }
  ProxResult res;
  const Vector u = x - s * p.smooth.gradient(x);
  res.point = p.reg_prox(u, s);
  res.subgradient = (x - res.point) / s;
  res.step = s;
  return res;
}

Vector brute_force_prox(const std::function<double(const Vector&)>& g_value,
                        const Vector& u, double s, double box_lo,
                        double box_hi, double resolution) {
  const int d = static_cast<int>(u.size());
  if (d < 1 || d > 2) {
    throw std::invalid_argument("brute_force_prox: dimension must be 1 or 2");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("brute_force_prox: resolution must be > 0");
  }
  if (!(box_hi > box_lo)) {
    throw std::invalid_argument("brute_force_prox: empty box");
  }
  if (!(s > 0.0)) {
    throw std::invalid_argument("brute_force_prox: step must be > 0");
  }
  const auto objective = [&](const Vector& y) {
    return (y - u).squaredNorm() / (2.0 * s) + g_value(y);
  };

  // Spacing of the first pass; 1-D boxes at usual resolutions are covered in
  // a single exhaustive scan.
  const double axis_cap = d == 1 ? 400000.0 : 800.0;
  double h = std::max((box_hi - box_lo) / axis_cap, resolution);
  Vector window_lo = Vector::Constant(d, box_lo);
  Vector window_hi = Vector::Constant(d, box_hi);
  Vector best(d);
  std::array<double, 2> step{0.0, 0.0};

  for (int stage = 0; stage < 200; ++stage) {
    std::array<long, 2> n{0, 0};
    for (int a = 0; a < d; ++a) {
      n[a] = std::max<long>(
          1, static_cast<long>(std::ceil((window_hi[a] - window_lo[a]) / h -
                                         1e-12)));
      step[a] = (window_hi[a] - window_lo[a]) / static_cast<double>(n[a]);
    }
    // Lexicographic scan with strict improvement keeps the smallest tie.
    double best_f = std::numeric_limits<double>::infinity();
    std::array<long, 2> best_i{0, 0};
    Vector y(d);
    for (long i = 0; i <= n[0]; ++i) {
      y[0] = window_lo[0] + static_cast<double>(i) * step[0];
      if (d == 1) {
        const double f = objective(y);
        if (f < best_f) {
          best_f = f;
          best_i = {i, 0};
        }
      } else {
        for (long j = 0; j <= n[1]; ++j) {
          y[1] = window_lo[1] + static_cast<double>(j) * step[1];
          const double f = objective(y);
          if (f < best_f) {
            best_f = f;
            best_i = {i, j};
          }
        }
      }
    }
    for (int a = 0; a < d; ++a) {
      best[a] = window_lo[a] + static_cast<double>(best_i[a]) * step[a];
    }

    // A window edge strictly inside the box must not hold the argmin: the
    // objective is strictly convex, so re-expand and rescan.
    bool expanded = false;
    for (int a = 0; a < d; ++a) {
      const double width = window_hi[a] - window_lo[a];
      if (best_i[a] == 0 && window_lo[a] > box_lo) {
        window_lo[a] = std::max(box_lo, window_lo[a] - width);
        expanded = true;
      } else if (best_i[a] == n[a] && window_hi[a] < box_hi) {
        window_hi[a] = std::min(box_hi, window_hi[a] + width);
        expanded = true;
      }
    }
    if (expanded) continue;

    if (h <= resolution) {
      for (int a = 0; a < d; ++a) {
        if (best[a] <= box_lo + 0.5 * step[a] ||
            best[a] >= box_hi - 0.5 * step[a]) {
          throw std::runtime_error(
              "brute_force_prox: minimizer on the box boundary; enlarge the "
              "box");
        }
      }
      return best;
    }
    const double guard = 8.0;
    for (int a = 0; a < d; ++a) {
      window_lo[a] = std::max(box_lo, best[a] - guard * h);
      window_hi[a] = std::min(box_hi, best[a] + guard * h);
    }
    h = std::max(h / 16.0, resolution);
  }
  throw std::logic_error("brute_force_prox: refinement did not settle");
}

}  // namespace nagalpha
