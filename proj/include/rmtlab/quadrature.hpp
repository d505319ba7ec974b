#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "errors.hpp"
#include "special.hpp"

namespace rmtlab {

struct QuadratureResult {
  cplx value = 0.0;
  double abs_error_estimate = 0.0;
  long n_evaluations = 0;
};

struct QuadratureOptions {
  double tol = 1e-11;                 // relative to the integrand's L1 norm
  long max_evaluations = 20'000'000;
  unsigned max_depth = 18;            // bisection depth of the 1-d adaptive rule
  int max_level = 5;                  // doublings of the 2-d product rule
};

struct Region {
  enum class Kind { Disk, HalfPlane, Plane, Annulus };
  Kind kind = Kind::Plane;
  double r_inner = 0.0;
  double r_outer = 1.0;

  static Region disk(double radius) { return {Kind::Disk, 0.0, radius}; }
  static Region annulus(double r0, double r1) { return {Kind::Annulus, r0, r1}; }
  static Region plane() { return {Kind::Plane, 0.0, INFINITY}; }
  // Upper half plane Im w > 0.
  static Region half_plane() { return {Kind::HalfPlane, 0.0, INFINITY}; }
};

namespace detail {

class EvalCounter {
 public:
  explicit EvalCounter(long budget) : budget_(budget) {}
  void tick(long k = 1) {
    count_ += k;
    if (count_ > budget_) throw BudgetError("quadrature exceeded its evaluation budget", count_);
  }
  long count() const { return count_; }

 private:
  long budget_;
  long count_ = 0;
};

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class G>
cplx gk(G&& g, double a, double b, const QuadratureOptions& opt, double& err) {
  return GK::integrate(g, a, b, opt.max_depth, opt.tol, &err);
}

// [a, b] with the tanh-sinh rule.
template <class G>
cplx tanh_sinh(G&& g, double a, double b, const QuadratureOptions& opt, double& err) {
  static thread_local boost::math::quadrature::tanh_sinh<double> rule(10);
  double l1 = 0.0;
  return rule.integrate(g, a, b, opt.tol, &err, &l1);
}

// [a, infinity) with the exp-sinh rule.
template <class G>
cplx tail(G&& g, double a, const QuadratureOptions& opt, double& err) {
  static thread_local boost::math::quadrature::exp_sinh<double> rule(9);
  double l1 = 0.0;
  return rule.integrate(g, a, std::numeric_limits<double>::infinity(), opt.tol, &err, &l1);
}

}  // namespace detail

// One-dimensional integral; either endpoint may be infinite.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  detail::EvalCounter counter(opt.max_evaluations);
  auto g = [&](double x) -> cplx {
    counter.tick();
    return cplx(f(x));
  };
  auto flip = [&](double x) -> cplx { return g(-x); };
  QuadratureResult res;
  double e1 = 0.0, e2 = 0.0;
  const bool ia = std::isinf(a), ib = std::isinf(b);
  if (!ia && !ib) {
    res.value = detail::gk(g, a, b, opt, e1);
  } else if (!ia && ib) {
    res.value = detail::tail(g, a, opt, e1);
  } else if (ia && !ib) {
    res.value = detail::tail(flip, -b, opt, e1);
  } else {
    res.value = detail::tail(g, 0.0, opt, e1) + detail::tail(flip, 0.0, opt, e2);
  }
  res.abs_error_estimate = e1 + e2;
  res.n_evaluations = counter.count();
  return res;
}

namespace detail {

// 20-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre20 {
  double x[20], w[20];
  GaussLegendre20() {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (int k = 0; k < 10; ++k) {
      x[2 * k] = -a[k];
      x[2 * k + 1] = a[k];
      w[2 * k] = w[2 * k + 1] = wt[k];
    }
  }
};

inline const GaussLegendre20& gl20() {
  static const GaussLegendre20 rule;
  return rule;
}

}  // namespace detail

// Two-dimensional integral of f(w) over a region, in polar coordinates about the
// origin. A product rule (Gauss-Legendre panels in r; periodic trapezoid in theta
// on full circles, Gauss-Legendre panels on the half circle) is refined by
// doubling until successive levels agree to tol relative to the L1 norm, and the
// last difference is the error estimate. Unbounded regions are cut where r max|f|
// has fallen below tol * 1e-3 of its peak; the rest is added with tanh-sinh.
template <class F>
QuadratureResult integrate_2d(F&& f, const Region& region, const QuadratureOptions& opt = {}) {
  const auto& gl = detail::gl20();
  detail::EvalCounter counter(opt.max_evaluations);
  const bool periodic = region.kind != Region::Kind::HalfPlane;
  const double theta_max = periodic ? 2.0 * kPi : kPi;
  auto eval = [&](cplx w) -> cplx {
    counter.tick();
    const cplx v = cplx(f(w));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw BudgetError("integrand not finite at |w|=" + std::to_string(std::abs(w)), counter.count());
    return v;
  };

  // Angular integral at radius r, and the angular integral of |f| in l1.
  auto angular = [&](double r, int level, double& l1) -> cplx {
    cplx acc = 0.0;
    l1 = 0.0;
    if (periodic) {
      const int n = 32 << level;
      const double h = theta_max / n;
      for (int k = 0; k < n; ++k) {
        const cplx v = eval(std::polar(r, h * (k + 0.5)));
        acc += v * h;
        l1 += std::abs(v) * h;
      }
    } else {
      const int panels = 4 << level;
      const double h = theta_max / panels;
      for (int p = 0; p < panels; ++p)
        for (int k = 0; k < 20; ++k) {
          const double wk = 0.5 * h * gl.w[k];
          const cplx v = eval(std::polar(r, h * (p + 0.5 * (1.0 + gl.x[k]))));
          acc += v * wk;
          l1 += std::abs(v) * wk;
        }
    }
    return acc;
  };

  double r0 = region.r_inner, r1 = region.r_outer;
  const bool bounded = region.kind == Region::Kind::Disk || region.kind == Region::Kind::Annulus;
  if (bounded) {
    if (!(r1 > r0 && r0 >= 0)) throw ParameterError("integration region needs 0 <= r_inner < r_outer");
  } else {
    // Scan outwards until r max|f| has stayed negligible for a while.
    constexpr int kAngles = 32, kQuietSteps = 16;
    constexpr double kStep = 0.25, kScanMax = 200.0;
    double peak = 0.0, last_significant = 0.0;
    int quiet = 0;
    bool decayed = false;
    for (double r = kStep; r <= kScanMax; r += kStep) {
      double mg = 0.0;
      for (int k = 0; k < kAngles; ++k)
        mg = std::max(mg, std::abs(eval(std::polar(r, theta_max * (k + 0.5) / kAngles))));
      peak = std::max(peak, r * mg);
      if (r * mg >= opt.tol * 1e-3 * peak) {
        last_significant = r;
        quiet = 0;
      } else if (++quiet >= kQuietSteps) {
        decayed = true;
        break;
      }
    }
    if (!decayed) throw BudgetError("integrand does not decay within r <= 200", counter.count());
    r0 = 0.0;
    r1 = last_significant + kStep;
  }

  auto body = [&](int level, double& l1) -> cplx {
    const int panels = std::max(1, int(std::ceil((r1 - r0) / 0.5))) << level;
    const double h = (r1 - r0) / panels;
    cplx acc = 0.0;
    l1 = 0.0;
    for (int p = 0; p < panels; ++p)
      for (int k = 0; k < 20; ++k) {
        const double r = r0 + h * (p + 0.5 * (1.0 + gl.x[k]));
        const double wk = 0.5 * h * gl.w[k] * r;
        double a = 0.0;
        acc += angular(r, level, a) * wk;
        l1 += a * wk;
      }
    return acc;
  };

  QuadratureResult res;
  double l1 = 0.0;
  cplx prev = body(0, l1);
  int level = 1;
  for (;; ++level) {
    res.value = body(level, l1);
    res.abs_error_estimate = std::abs(res.value - prev);
    if (res.abs_error_estimate <= opt.tol * l1) break;
    if (level >= opt.max_level)
      throw BudgetError("2-d quadrature did not settle after " + std::to_string(level) + " refinements",
                        counter.count());
    prev = res.value;
  }
  if (!bounded) {
    double e_tail = 0.0;
    auto radial = [&](double r) -> cplx {
      double a = 0.0;
      return r * angular(r, level, a);
    };
    res.value += detail::tanh_sinh(radial, r1, r1 + 4.0, opt, e_tail);
    res.abs_error_estimate += e_tail;
  }
  res.n_evaluations = counter.count();
  return res;
}

}  // namespace rmtlab
