#include "lempert/geometry.hpp"

namespace lempert {

PeriodicSpline::PeriodicSpline(std::vector<Complex> values) : y_(std::move(values)) {
  int n = static_cast<int>(y_.size());
  if (n < 4) throw std::runtime_error("PeriodicSpline: need at least 4 knots");
  h_ = 1.0 / n;

  // Cyclic tridiagonal system for the knot second derivatives:
  //   m_{j-1} + 4 m_j + m_{j+1} = 6 (y_{j-1} - 2 y_j + y_{j+1}) / h^2.
  // Solved by the Sherman-Morrison split of the corner entries.
  std::vector<Complex> rhs(n);
  for (int j = 0; j < n; ++j) {
    const Complex& ym = y_[(j + n - 1) % n];
    const Complex& y0 = y_[j];
    const Complex& yp = y_[(j + 1) % n];
    rhs[j] = 6.0 * (ym - 2.0 * y0 + yp) / (h_ * h_);
  }

  auto solve_tridiag = [n](double diag0, double diagN, const std::vector<Complex>& d) {
    // Thomas algorithm, off-diagonals are all 1, main diagonal 4 except the
    // first/last entries which carry the Sherman-Morrison modification.
    std::vector<double> diag(n, 4.0);
    diag.front() = diag0;
    diag.back() = diagN;
    std::vector<double> c(n, 0.0);
    std::vector<Complex> x(d);
    c[0] = 1.0 / diag[0];
    x[0] /= diag[0];
    for (int i = 1; i < n; ++i) {
      double m = diag[i] - c[i - 1];
      c[i] = 1.0 / m;
      x[i] = (x[i] - x[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
  };

  // A = T + alpha * u v^T with u = v = (1,0,...,0,1)^T folding the two corner
  // ones into the diagonal; standard choice alpha = 1.
  const double alpha = 1.0;
  std::vector<Complex> u(n, Complex(0, 0));
  u[0] = u[n - 1] = Complex(1, 0);
  std::vector<Complex> z1 = solve_tridiag(4.0 - alpha, 4.0 - alpha, rhs);
  std::vector<Complex> z2 = solve_tridiag(4.0 - alpha, 4.0 - alpha, u);
  Complex num = z1[0] + z1[n - 1];
  Complex den = 1.0 / alpha + z2[0] + z2[n - 1];
  Complex factor = num / den;
  m_.resize(n);
  for (int i = 0; i < n; ++i) m_[i] = z1[i] - factor * z2[i];
}

void PeriodicSpline::locate(double t, int& j, double& u) const {
  double tt = wrap_unit(t);
  int n = static_cast<int>(y_.size());
  j = static_cast<int>(std::floor(tt * n));
  if (j >= n) j = n - 1;
  u = tt * n - j;
}

Complex PeriodicSpline::eval(double t) const {
  int j;
  double u;
  locate(t, j, u);
  int n = static_cast<int>(y_.size());
  const Complex &ya = y_[j], &yb = y_[(j + 1) % n];
  const Complex &ma = m_[j], &mb = m_[(j + 1) % n];
  double a = 1.0 - u, b = u;
  return a * ya + b * yb +
         ((a * a * a - a) * ma + (b * b * b - b) * mb) * (h_ * h_) / 6.0;
}

Complex PeriodicSpline::deriv(double t) const {
  int j;
  double u;
  locate(t, j, u);
  int n = static_cast<int>(y_.size());
  const Complex &ya = y_[j], &yb = y_[(j + 1) % n];
  const Complex &ma = m_[j], &mb = m_[(j + 1) % n];
  double a = 1.0 - u, b = u;
  Complex d = (yb - ya) / h_ +
              ((-3.0 * a * a + 1.0) * ma + (3.0 * b * b - 1.0) * mb) * h_ / 6.0;
  return d;  // derivative w.r.t. t in [0,1)
}

Complex PeriodicSpline::deriv2(double t) const {
  int j;
  double u;
  locate(t, j, u);
  int n = static_cast<int>(y_.size());
  const Complex &ma = m_[j], &mb = m_[(j + 1) % n];
  return (1.0 - u) * ma + u * mb;
}

double golden_minimize(const std::function<double(double)>& f, double a,
                       double b, double tol, int max_iter) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {
double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}
}  // namespace

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  double d1 = cross(q1, q2, p1);
  double d2 = cross(q1, q2, p2);
  double d3 = cross(p1, p2, q1);
  double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return false;
}

void smooth_corner_knots(std::vector<Complex>& knots, int corner, int half_window) {
  int n = static_cast<int>(knots.size());
  if (n < 2 * half_window + 6) throw std::runtime_error("smooth_corner_knots: window too wide");
  auto at = [&](int i) -> Complex { return knots[((i % n) + n) % n]; };

  int ia = corner - half_window;  // last retained knot before the blend
  int ib = corner + half_window;  // first retained knot after the blend
  Complex P0 = at(ia), P1 = at(ib);
  Complex D0 = at(ia) - at(ia - 1);
  Complex DD0 = at(ia) - 2.0 * at(ia - 1) + at(ia - 2);
  Complex D1 = at(ib + 1) - at(ib);
  Complex DD1 = at(ib + 2) - 2.0 * at(ib + 1) + at(ib);

  int m = 2 * half_window;  // steps from ia to ib
  for (int k = 1; k < m; ++k) {
    double t = double(k) / m;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    double h21 = 0.5 * (t3 - 2 * t4 + t5);
    Complex v = P0 * h00 + (D0 * double(m)) * h10 + (DD0 * double(m * m)) * h20 +
                P1 * h01 + (D1 * double(m)) * h11 + (DD1 * double(m * m)) * h21;
    knots[(((ia + k) % n) + n) % n] = v;
  }
}

}  // namespace lempert
