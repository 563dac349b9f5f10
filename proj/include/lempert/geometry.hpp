#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lempert {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap a parameter into [0,1).
inline double wrap_unit(double t) {
  double f = t - std::floor(t);
  return (f >= 1.0) ? 0.0 : f;
}

// Distance on the parameter circle [0,1).
inline double circle_dist(double s, double t) {
  double d = std::fabs(wrap_unit(s) - wrap_unit(t));
  return std::min(d, 1.0 - d);
}

inline Complex unit(Complex v) {
  double n = std::abs(v);
  if (n == 0.0) throw std::runtime_error("unit(): zero vector");
  return v / n;
}

struct BBox {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Complex z, double pad = 0.0) const {
    return z.real() >= xmin - pad && z.real() <= xmax + pad &&
           z.imag() >= ymin - pad && z.imag() <= ymax + pad;
  }
  void expand(Complex z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
};

// z -> (z - base) * e^{i angle}.  Used to normalize a domain at a boundary
// point: the point `base` goes to 0 and the frame is rotated by `angle`.
struct RigidMotion {
  Complex base{0.0, 0.0};
  double angle = 0.0;

  Complex apply(Complex z) const { return (z - base) * std::polar(1.0, angle); }
  Complex invert(Complex w) const { return base + w * std::polar(1.0, -angle); }
  // Action on tangent/normal vectors (the linear part).
  Complex rotate(Complex v) const { return v * std::polar(1.0, angle); }
};

// Closed cubic spline with uniform knots t_j = j/n on the parameter circle
// [0,1).  Values are complex (planar points); evaluation and first/second
// derivative are C^2 across the period.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<Complex> values);

  Complex eval(double t) const;
  Complex deriv(double t) const;
  Complex deriv2(double t) const;
  int size() const { return static_cast<int>(y_.size()); }
  const std::vector<Complex>& knots() const { return y_; }

 private:
  std::vector<Complex> y_;   // values at knots
  std::vector<Complex> m_;   // second derivatives at knots
  double h_ = 0.0;

  void locate(double t, int& j, double& u) const;
};

// Golden-section minimizer for a unimodal-ish 1D objective on [a, b].
double golden_minimize(const std::function<double(double)>& f, double a,
                       double b, double tol, int max_iter = 120);

// Segment intersection test (proper or touching interior), excluding shared
// endpoints; used by the simple-curve validation.
bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2);

// Replaces the knots within `half_window` of the cyclic index `corner` by a
// quintic Hermite blend matched to position and first/second index-space
// differences at the retained neighbours.  Smooths an isolated corner of a
// closed knot polygon without touching knots outside the window.
void smooth_corner_knots(std::vector<Complex>& knots, int corner, int half_window);

}  // namespace lempert
