#include "lempert/disc_builder.hpp"

#include <nlohmann/json.hpp>

namespace lempert::discs {

namespace {

using metrics::LempertValue;

struct ShrinkRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CVec cvec1(Complex z) {
  CVec v(1);
  v << z;
  return v;
}

// ---------------------------------------------------------------------------
// Chebyshev series helpers on CVec-valued coefficients.

CVec clenshaw(const std::vector<CVec>& c, Complex x) {
  int n = static_cast<int>(c.size()) - 1;
  int dim = static_cast<int>(c[0].size());
  CVec b1 = CVec::Zero(dim), b2 = CVec::Zero(dim);
  for (int k = n; k >= 1; --k) {
    CVec b = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b;
  }
  return c[0] + x * b1 - b2;
}

std::vector<CVec> cheb_derivative(const std::vector<CVec>& c) {
  int n = static_cast<int>(c.size()) - 1;
  int dim = static_cast<int>(c[0].size());
  if (n == 0) return {CVec::Zero(dim)};
  std::vector<CVec> d(n, CVec::Zero(dim));
  for (int k = n - 1; k >= 0; --k) {
    CVec next = (k + 2 <= n - 1) ? d[k + 2] : CVec::Zero(dim);
    d[k] = next + 2.0 * (k + 1) * c[k + 1];
  }
  d[0] *= 0.5;
  return d;
}

std::vector<CVec> cheb_antiderivative(const std::vector<CVec>& c) {
  int n = static_cast<int>(c.size()) - 1;
  int dim = static_cast<int>(c[0].size());
  std::vector<CVec> b(n + 2, CVec::Zero(dim));
  auto at = [&](int k) { return (k >= 0 && k <= n) ? c[k] : CVec::Zero(dim); };
  b[1] = at(0) - 0.5 * at(2);
  for (int k = 2; k <= n + 1; ++k) b[k] = (at(k - 1) - at(k + 1)) / (2.0 * k);
  return b;  // b[0] left zero; the caller fixes the constant
}

// ---------------------------------------------------------------------------
// C^2 base curve: two quintic Hermite segments joined at a waypoint.

struct QuinticSegment {
  CVec p0, d0, p1, d1;  // second derivatives zero at both ends

  CVec eval(double s) const {
    double t2 = s * s, t3 = t2 * s, t4 = t3 * s, t5 = t4 * s;
    double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double h10 = s - 6 * t3 + 8 * t4 - 3 * t5;
    double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    return h00 * p0 + h10 * d0 + h01 * p1 + h11 * d1;
  }
  CVec deriv(double s) const {
    double t2 = s * s, t3 = t2 * s, t4 = t3 * s;
    double g00 = -30 * t2 + 60 * t3 - 30 * t4;
    double g10 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double g01 = 30 * t2 - 60 * t3 + 30 * t4;
    double g11 = -12 * t2 + 28 * t3 - 15 * t4;
    return g00 * p0 + g10 * d0 + g01 * p1 + g11 * d1;
  }
};

struct BaseCurve {
  QuinticSegment seg_b;  // t in [-1, 0]
  QuinticSegment seg_a;  // t in [0, 1]

  CVec eval(double t) const { return t <= 0.0 ? seg_b.eval(t + 1.0) : seg_a.eval(t); }
  CVec deriv(double t) const { return t <= 0.0 ? seg_b.deriv(t + 1.0) : seg_a.deriv(t); }
};

// Chebyshev truncation of the base-curve derivative with order-1 endpoint
// matching, integrated to interpolate the endpoints exactly.
PolynomialCurve fit_curve(const BaseCurve& base, int degree, int dim) {
  int m = degree;  // derivative fitted at degree m-1 from m Gauss nodes
  std::vector<CVec> samples(m);
  for (int k = 0; k < m; ++k) samples[k] = base.deriv(std::cos(kPi * (k + 0.5) / m));

  std::vector<CVec> q(m, CVec::Zero(dim));
  for (int j = 0; j < m; ++j) {
    CVec acc = CVec::Zero(dim);
    for (int k = 0; k < m; ++k) acc += samples[k] * std::cos(kPi * j * (k + 0.5) / m);
    q[j] = acc * (2.0 / m);
  }
  q[0] *= 0.5;
  if (q.size() < 3) q.resize(3, CVec::Zero(dim));

  // Endpoint derivative matching: add linear blends (T0 +- T1)/2.
  CVec qa = clenshaw(q, Complex(1, 0));
  CVec qb = clenshaw(q, Complex(-1, 0));
  CVec da = base.deriv(1.0) - qa;
  CVec db = base.deriv(-1.0) - qb;
  q[0] += 0.5 * (da + db);
  q[1] += 0.5 * (da - db);

  // Endpoint value matching: the integral over [-1,1] must equal a - b; tune
  // by the bump (1 - t^2) = (T0 - T2)/2 which keeps endpoint derivatives.
  CVec a_end = base.eval(1.0), b_end = base.eval(-1.0);
  std::vector<CVec> anti = cheb_antiderivative(q);
  CVec integral = clenshaw(anti, Complex(1, 0)) - clenshaw(anti, Complex(-1, 0));
  CVec mu = 0.75 * ((a_end - b_end) - integral);
  q[0] += 0.5 * mu;
  q[2] -= 0.5 * mu;

  std::vector<CVec> coeffs = cheb_antiderivative(q);
  CVec at_one = clenshaw(coeffs, Complex(1, 0));
  coeffs[0] += a_end - at_one;

  PolynomialCurve pc;
  pc.dim = dim;
  pc.cheb = std::move(coeffs);
  pc.a = a_end;
  pc.b = b_end;
  double dev = 0.0;
  for (int k = 0; k <= 800; ++k) {
    double t = -1.0 + 2.0 * k / 800.0;
    dev = std::max(dev, (clenshaw(q, Complex(t, 0)) - base.deriv(t)).norm());
  }
  pc.derivative_deviation = dev;
  return pc;
}

Complex half_shift_sq(Complex zeta, double sign) {
  Complex h = (zeta + sign) * 0.5;
  return h * h;
}

}  // namespace

CVec PlanarAmbient::inward_normal(const CVec& p) const {
  double t = domain_.nearest_parameter(p(0));
  return cvec1(domain_.inward_normal_at(t));
}

CVec PlanarAmbient::interior_anchor() const { return cvec1(domain_.interior_anchor()); }

CVec PolynomialCurve::eval(Complex zeta) const { return clenshaw(cheb, zeta); }

CVec PolynomialCurve::deriv(Complex zeta) const {
  return clenshaw(cheb_derivative(cheb), zeta);
}

AdmissibilityReport admissibility_check(const AmbientDomain& domain,
                                        const PolynomialCurve& curve, double eps) {
  AdmissibilityReport rep;
  double scan_top = 0.5;
  if (!(eps > 0.0) || eps >= scan_top) eps = 1e-6;
  const int steps = 80;

  auto endpoint_window = [&](double end_sign) -> std::pair<double, double> {
    // criterion d(phi(sign (1 - t))) > t/2 for the signed-distance r = -d
    double delta = 0.0;
    for (int i = 0; i < steps; ++i) {
      double t = eps * std::pow(scan_top / eps, double(i) / (steps - 1));
      CVec p = curve.eval(Complex(end_sign * (1.0 - t), 0.0));
      if (!(domain.signed_distance(p) > t / 2.0)) return {delta, t};
      delta = t;
    }
    return {scan_top, std::numeric_limits<double>::quiet_NaN()};
  };

  auto [d1, fail1] = endpoint_window(+1.0);
  rep.delta1 = d1;
  if (d1 <= 0.0) {
    rep.message = "endpoint criterion failed at zeta = +1";
    rep.failing_t = fail1;
    return rep;
  }

  if (curve.interior_end) {
    if (!(domain.signed_distance(curve.b) > 0.0)) {
      rep.message = "interior anchor endpoint is not interior";
      return rep;
    }
    rep.delta2 = rep.delta1;
  } else {
    auto [d2, fail2] = endpoint_window(-1.0);
    rep.delta2 = d2;
    if (d2 <= 0.0) {
      rep.message = "endpoint criterion failed at zeta = -1";
      rep.failing_t = fail2;
      return rep;
    }
  }
  rep.delta3 = std::min(rep.delta1, rep.delta2);

  double lo = curve.interior_end ? -1.0 : -1.0 + rep.delta3;
  double hi = 1.0 - rep.delta3;
  rep.containment_margin = std::numeric_limits<double>::infinity();
  const int dense = 800;
  for (int k = 0; k <= dense; ++k) {
    double t = lo + (hi - lo) * k / dense;
    double d = domain.signed_distance(curve.eval(Complex(t, 0.0)));
    if (d < rep.containment_margin) rep.containment_margin = d;
    if (!(d > 0.0)) {
      rep.message = "interior containment violated";
      rep.failing_t = t;
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

namespace {

PolynomialCurve build_lemma3(const AmbientDomain& domain, const CVec& end_a,
                             const CVec& end_b, const CVec& deriv_a, const CVec& deriv_b,
                             bool interior_end, const Lemma3Options& opt,
                             std::optional<CVec> waypoint = std::nullopt) {
  int dim = domain.dim();
  double diam = domain.diameter();

  CVec m = waypoint ? *waypoint : domain.interior_anchor();
  if (!waypoint && (m - end_a).norm() < diam / 4.0) {
    CVec dir = m - end_a;
    if (dir.norm() < 1e-9 * diam) dir = deriv_b;  // degenerate: push inward
    m = end_a + dir / dir.norm() * (diam / 4.0);
  }

  CVec dir = end_a - end_b;
  if (dir.norm() < 1e-6 * diam) {
    // a = b: bend sideways at the waypoint
    CVec radial = end_a - m;
    dir = Complex(0, 1) * radial / radial.norm();
  } else {
    dir /= dir.norm();
  }
  double scale0 = 0.5 * ((end_a - m).norm() + (end_b - m).norm());

  AdmissibilityReport last;
  for (double speed : opt.waypoint_speeds) {
    CVec vm = dir * (scale0 * speed);
    BaseCurve base;
    base.seg_b = {end_b, deriv_b, m, vm};
    base.seg_a = {m, vm, end_a, deriv_a};
    for (int deg : opt.degree_ladder) {
      if (deg > opt.max_degree) break;
      PolynomialCurve pc = fit_curve(base, deg, dim);
      pc.normal_a = -deriv_a;  // phi'(1) = -n_a
      pc.normal_b = deriv_b;   // phi'(-1) = n_b
      pc.interior_end = interior_end;
      AdmissibilityReport rep = admissibility_check(domain, pc, opt.admissibility_eps);
      if (rep.pass) return pc;
      last = rep;
    }
  }
  throw std::runtime_error(
      "lemma3 curve: admissibility not achieved up to the degree cap (" + last.message +
      ")");
}

}  // namespace

PolynomialCurve lemma3_curve(const AmbientDomain& domain, const CVec& a, const CVec& b,
                             const Lemma3Options& opt) {
  double tol = 1e-6 * domain.diameter();
  if (std::fabs(domain.signed_distance(a)) > tol ||
      std::fabs(domain.signed_distance(b)) > tol)
    throw std::runtime_error("lemma3 curve: endpoints must lie on the boundary");
  CVec na = domain.inward_normal(a);
  CVec nb = domain.inward_normal(b);
  return build_lemma3(domain, a, b, -na, nb, false, opt);
}

PolynomialCurve lemma3_curve_from_interior(const AmbientDomain& domain, const CVec& anchor,
                                           const CVec& b, const Lemma3Options& opt) {
  if (!(domain.signed_distance(anchor) > 0.0))
    throw std::runtime_error("lemma3 curve: anchor must be interior");
  if (std::fabs(domain.signed_distance(b)) > 1e-6 * domain.diameter())
    throw std::runtime_error("lemma3 curve: b must lie on the boundary");
  CVec nb = domain.inward_normal(b);
  // The boundary endpoint takes the zeta = +1 role; the waypoint sits halfway
  // toward an inward-pulled copy of b so the anchor segment cannot collapse.
  CVec b_in = b + (domain.diameter() / 8.0) * nb;
  CVec m = anchor + 0.5 * (b_in - anchor);
  CVec dir = m - anchor;
  if (dir.norm() < 1e-9) dir = nb;
  dir /= dir.norm();
  return build_lemma3(domain, b, anchor, -nb, dir, true, opt, m);
}

PolynomialCurve perturbed_disc(const PolynomialCurve& curve, const CVec& u, const CVec& v) {
  if (u.size() != curve.a.size() || v.size() != curve.a.size())
    throw std::runtime_error("perturbation dimensions mismatch");
  double tol = 1e-8 * (1.0 + u.norm() + v.norm());
  if (curve.dim == 1) {
    if (u.norm() > tol || v.norm() > tol)
      throw std::runtime_error("planar complex tangent space is trivial: u = v = 0");
  } else {
    Complex ip_u = (curve.normal_a.adjoint() * u)(0, 0);
    Complex ip_v = (curve.normal_b.adjoint() * v)(0, 0);
    if (std::abs(ip_u) > tol || std::abs(ip_v) > tol)
      throw std::runtime_error("perturbation not in the complex tangent space");
  }

  // ((zeta+1)/2)^2 = 3/8 T0 + 1/2 T1 + 1/8 T2; mirrored sign for the v term.
  PolynomialCurve out = curve;
  if (out.cheb.size() < 3) out.cheb.resize(3, CVec::Zero(curve.dim));
  out.cheb[0] += (3.0 / 8.0) * (u + v);
  out.cheb[1] += 0.5 * (u - v);
  out.cheb[2] += (1.0 / 8.0) * (u + v);
  out.a = curve.a + u;
  out.b = curve.b + v;
  return out;
}

std::vector<CVec> complex_tangent_basis(const CVec& normal) {
  int n = static_cast<int>(normal.size());
  CVec nu = normal / normal.norm();
  std::vector<CVec> basis;
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
    CVec cand = CVec::Zero(n);
    cand(i) = 1.0;
    cand -= (nu.adjoint() * cand)(0, 0) * nu;
    for (const CVec& e : basis) cand -= (e.adjoint() * cand)(0, 0) * e;
    double nn = cand.norm();
    if (nn > 1e-8) basis.push_back(cand / nn);
  }
  if (static_cast<int>(basis.size()) != n - 1)
    throw std::runtime_error("tangent basis construction failed");
  return basis;
}

InterpolationSystem::InterpolationSystem(const AmbientDomain& domain,
                                         const PolynomialCurve& curve)
    : curve_(&curve), n_(domain.dim()) {
  if (n_ > 1) {
    basis_a_ = complex_tangent_basis(curve.normal_a);
    basis_b_ = complex_tangent_basis(curve.normal_b);
  }
}

Eigen::VectorXcd InterpolationSystem::pack_seed() const {
  Eigen::VectorXcd X = Eigen::VectorXcd::Zero(2 * n_);
  X(0) = Complex(1, 0);
  X(n_) = Complex(-1, 0);
  return X;
}

CVec InterpolationSystem::tangent_u(const Eigen::VectorXcd& X) const {
  CVec u = CVec::Zero(n_);
  for (int k = 0; k < n_ - 1; ++k) u += X(1 + k) * basis_a_[k];
  return u;
}

CVec InterpolationSystem::tangent_v(const Eigen::VectorXcd& X) const {
  CVec v = CVec::Zero(n_);
  for (int k = 0; k < n_ - 1; ++k) v += X(n_ + 1 + k) * basis_b_[k];
  return v;
}

Eigen::VectorXcd InterpolationSystem::residual(const Eigen::VectorXcd& X, const CVec& z,
                                               const CVec& w) const {
  Complex z1 = X(0), z2 = X(n_);
  PolynomialCurve pc = perturbed_disc(*curve_, tangent_u(X), tangent_v(X));
  Eigen::VectorXcd F(2 * n_);
  F.head(n_) = pc.eval(z1) - z;
  F.tail(n_) = pc.eval(z2) - w;
  return F;
}

Eigen::MatrixXcd InterpolationSystem::jacobian(const Eigen::VectorXcd& X) const {
  Complex z1 = X(0), z2 = X(n_);
  PolynomialCurve pc = perturbed_disc(*curve_, tangent_u(X), tangent_v(X));
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * n_, 2 * n_);
  J.col(0).head(n_) = pc.deriv(z1);
  J.col(n_).tail(n_) = pc.deriv(z2);
  for (int k = 0; k < n_ - 1; ++k) {
    J.col(1 + k).head(n_) = half_shift_sq(z1, +1.0) * basis_a_[k];
    J.col(1 + k).tail(n_) = half_shift_sq(z2, +1.0) * basis_a_[k];
    J.col(n_ + 1 + k).head(n_) = half_shift_sq(z1, -1.0) * basis_b_[k];
    J.col(n_ + 1 + k).tail(n_) = half_shift_sq(z2, -1.0) * basis_b_[k];
  }
  return J;
}

DiscInterpolation solve_interpolation(const AmbientDomain& domain,
                                      const PolynomialCurve& curve, const CVec& z,
                                      const CVec& w) {
  InterpolationSystem sys(domain, curve);
  Eigen::VectorXcd X = sys.pack_seed();
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 50; ++it) {
    Eigen::VectorXcd F = sys.residual(X, z, w);
    res = F.norm();
    if (res < 1e-10) break;
    Eigen::MatrixXcd J = sys.jacobian(X);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible())
      throw std::runtime_error("interpolation solve: singular Jacobian");
    X -= lu.solve(F);
  }
  if (!(res < 1e-10))
    throw std::runtime_error(
        "interpolation solve: Newton did not converge, (z,w) outside the method's "
        "neighborhood; residual " +
        std::to_string(res));
  if (std::abs(X(0) - Complex(1, 0)) + std::abs(X(sys.unknowns() / 2) + Complex(1, 0)) >
      2.0)
    throw std::runtime_error(
        "interpolation solve: solution left the endpoint neighborhood");

  DiscInterpolation out;
  out.zeta1 = X(0);
  out.zeta2 = X(sys.unknowns() / 2);
  out.u = sys.tangent_u(X);
  out.v = sys.tangent_v(X);
  out.disc_map = perturbed_disc(curve, out.u, out.v);
  out.residual = res;
  out.iterations = it;
  return out;
}

PullbackDomain pullback_domain(const AmbientDomain& domain, const PolynomialCurve& psi,
                               double delta, double delta_prime,
                               const PullbackOptions& opt) {
  auto rho = [&](Complex zeta) { return -domain.signed_distance(psi.eval(zeta)); };

  // Level-curve crossing on the horizontal segment at height y near the side
  // x = side * 1; nullopt if the whole segment stays inside.
  auto crossing = [&](double y, int side) -> std::optional<double> {
    const int S = 48;
    double x0 = 1.0 - delta, x1 = 1.0 + delta;
    double prev_x = side * x0;
    double prev_rho = rho(Complex(prev_x, y));
    if (!(prev_rho < 0))
      throw ShrinkRequest("inner rectangle edge left the pullback domain");
    int crossings = 0;
    double lo = prev_x, hi = prev_x;
    for (int s = 1; s <= S; ++s) {
      double x = side * (x0 + (x1 - x0) * s / S);
      double r = rho(Complex(x, y));
      if (prev_rho < 0 && r >= 0 && crossings == 0) {
        lo = prev_x;
        hi = x;
        ++crossings;
      } else if ((prev_rho < 0) != (r < 0)) {
        ++crossings;
      }
      prev_x = x;
      prev_rho = r;
    }
    if (crossings == 0) return std::nullopt;
    if (crossings != 1)
      throw ShrinkRequest("level curve crosses a segment more than once");
    for (int b = 0; b < 60; ++b) {
      double mid = 0.5 * (lo + hi);
      if (rho(Complex(mid, y)) < 0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  int H = opt.heights;
  std::vector<double> ys(H + 1);
  for (int i = 0; i <= H; ++i) ys[i] = -delta_prime + 2.0 * delta_prime * i / H;

  std::vector<double> xr(H + 1), xl(H + 1);
  bool saw_left_crossing = false, saw_left_inside = false;
  for (int i = 0; i <= H; ++i) {
    auto cr = crossing(ys[i], +1);
    if (!cr) throw ShrinkRequest("right side does not meet the level curve");
    xr[i] = *cr;
    auto cl = crossing(ys[i], -1);
    if (cl) {
      xl[i] = *cl;
      saw_left_crossing = true;
    } else {
      saw_left_inside = true;
    }
  }
  if (saw_left_crossing && saw_left_inside)
    throw ShrinkRequest("left side crosses the level curve only for some heights");
  bool left_straight = !saw_left_crossing;
  if (left_straight)
    for (int i = 0; i <= H; ++i) xl[i] = -(1.0 + delta);

  // Horizontal boundary segments must stay strictly inside the level set away
  // from the corner-smoothing zones.
  for (double sy : {-delta_prime, delta_prime}) {
    int idx = sy < 0 ? 0 : H;
    double from = xl[idx], to = xr[idx];
    for (int s = 0; s <= 48; ++s) {
      double x = from + (to - from) * (0.05 + 0.9 * s / 48.0);
      if (!(rho(Complex(x, sy)) < 0))
        throw ShrinkRequest("horizontal boundary segment left the pullback domain");
    }
  }

  // Rectangle R = {|x| < 1 - delta/2, |y| < delta_prime} must sit inside.
  double margin = -std::numeric_limits<double>::infinity();
  for (int iy = 0; iy <= 16; ++iy) {
    for (int ix = 0; ix <= 48; ++ix) {
      double x = -(1.0 - delta / 2.0) + 2.0 * (1.0 - delta / 2.0) * ix / 48.0;
      double y = (-1.0 + 2.0 * iy / 16.0) * delta_prime * (1.0 - 1e-9);
      double r = rho(Complex(x, y));
      margin = std::max(margin, r);
      if (!(r < 0)) throw ShrinkRequest("guaranteed rectangle left the pullback domain");
    }
  }

  // Assemble the boundary counterclockwise with near-uniform knot spacing.
  double top_len = xr[H] - xl[H], bottom_len = xr[0] - xl[0];
  double perim = 4.0 * delta_prime + top_len + bottom_len;
  double spacing = perim / opt.target_knots;

  std::vector<Complex> knots;
  std::vector<int> corners;
  auto resampled_arc = [&](const std::vector<double>& xs, bool upward) {
    int count = std::max(8, int(std::lround(2.0 * delta_prime / spacing)));
    std::vector<Complex> pts;
    for (int k = 0; k <= count; ++k) {
      double f = upward ? double(k) / count : 1.0 - double(k) / count;
      double y = -delta_prime + 2.0 * delta_prime * f;
      double pos = f * H;
      int i0 = std::min(H - 1, int(pos));
      double fr = pos - i0;
      pts.emplace_back(xs[i0] * (1 - fr) + xs[i0 + 1] * fr, y);
    }
    return pts;
  };

  std::vector<Complex> right = resampled_arc(xr, true);
  std::vector<Complex> left = resampled_arc(xl, false);
  knots.insert(knots.end(), right.begin(), right.end());
  corners.push_back(static_cast<int>(knots.size()) - 1);  // top-right
  {
    int count = std::max(8, int(std::lround(top_len / spacing)));
    for (int k = 1; k < count; ++k)
      knots.emplace_back(xr[H] + (xl[H] - xr[H]) * double(k) / count, delta_prime);
  }
  corners.push_back(static_cast<int>(knots.size()));  // top-left
  knots.insert(knots.end(), left.begin(), left.end());
  corners.push_back(static_cast<int>(knots.size()) - 1);  // bottom-left
  {
    int count = std::max(8, int(std::lround(bottom_len / spacing)));
    for (int k = 1; k < count; ++k)
      knots.emplace_back(xl[0] + (xr[0] - xl[0]) * double(k) / count, -delta_prime);
  }

  int half_window = std::max(3, int(std::lround(0.8 * (delta_prime / 2.0) / spacing)));
  half_window = std::min(half_window, int(knots.size()) / 9);
  for (int c : corners) smooth_corner_knots(knots, c, half_window);
  smooth_corner_knots(knots, 0, half_window);  // bottom-right seam corner

  auto spline = std::make_shared<PeriodicSpline>(knots);
  Domain base(BoundaryCurve::build([spline](double t) { return spline->eval(t); },
                                   [spline](double t) { return spline->deriv(t); }, 1.0,
                                   opt.map_sample_count));
  if (!base.contains({0, 0}))
    throw ShrinkRequest("pullback domain does not contain the origin");

  PullbackDomain out;
  out.base = std::make_shared<Domain>(std::move(base));
  out.delta = delta;
  out.delta_prime = delta_prime;
  out.left_side_straight = left_straight;
  out.rectangle_margin = margin;
  return out;
}

DiscBuilder::DiscBuilder(std::shared_ptr<const AmbientDomain> domain, CVec a, CVec b,
                         BuilderOptions opt)
    : DiscBuilder(domain, lemma3_curve(*domain, a, b, opt.lemma3), opt) {}

DiscBuilder::DiscBuilder(std::shared_ptr<const AmbientDomain> domain, PolynomialCurve curve,
                         BuilderOptions opt)
    : domain_(std::move(domain)), curve_(std::move(curve)), opt_(std::move(opt)) {}

DiscBuilder DiscBuilder::from_interior(std::shared_ptr<const AmbientDomain> domain,
                                       CVec anchor, CVec b, BuilderOptions opt) {
  PolynomialCurve c = lemma3_curve_from_interior(*domain, anchor, b, opt.lemma3);
  return DiscBuilder(domain, std::move(c), std::move(opt));
}

BoundCertificate DiscBuilder::certify(const CVec& z, const CVec& w) {
  BoundCertificate cert;
  cert.interp = solve_interpolation(*domain_, curve_, z, w);
  const PolynomialCurve& psi = cert.interp.disc_map;

  bool shareable = domain_->dim() == 1;  // u = v = 0: one pullback fits all pairs
  PullbackDomain pb;
  std::shared_ptr<conformal::NumericalRiemannMap> eta;
  if (shareable && cached_pullback_) {
    pb = *cached_pullback_;
    eta = cached_map_;
  } else {
    double d = opt_.pullback.delta, dp = opt_.pullback.delta_prime;
    bool built = false;
    std::string last_reason;
    for (int k = 0; k <= opt_.pullback.max_halvings && !built; ++k) {
      try {
        pb = pullback_domain(*domain_, psi, d, dp, opt_.pullback);
        built = true;
      } catch (const ShrinkRequest& ex) {
        last_reason = ex.what();
        d *= 0.5;
        dp *= 0.5;
      }
    }
    if (!built)
      throw std::runtime_error("stage pullback: shrink ladder exhausted (" + last_reason +
                               ")");
    conformal::RiemannOptions ropt;
    eta = conformal::build_riemann_map(*pb.base, {0, 0}, ropt);
    if (shareable) {
      cached_pullback_ = pb;
      cached_map_ = eta;
    }
  }
  cert.delta_used = pb.delta;
  cert.delta_prime_used = pb.delta_prime;

  for (Complex zeta : {cert.interp.zeta1, cert.interp.zeta2}) {
    if (pb.base->signed_distance(zeta) <
        std::max(opt_.collar_margin, 2.0 * eta->collar()))
      throw std::runtime_error(
          "stage pullback: interpolation preimage too close to the pullback boundary");
  }

  Complex p1 = eta->to_disc(cert.interp.zeta1);
  Complex p2 = eta->to_disc(cert.interp.zeta2);
  if (std::abs(p1) >= 1.0 || std::abs(p2) >= 1.0)
    throw std::runtime_error("stage conformal: preimages left the unit disc");
  cert.interp.p1 = p1;
  cert.interp.p2 = p2;

  LempertValue ub = metrics::lempert_disc_pair(p1, p2);
  cert.upper = ub.l;
  cert.one_minus_upper = ub.one_minus;
  cert.interp.upper_bound = ub.l;

  cert.d_z = domain_->signed_distance(z);
  cert.d_w = domain_->signed_distance(w);
  cert.measured_C =
      std::max(cert.d_z / (1.0 - std::abs(p1)), cert.d_w / (1.0 - std::abs(p2)));

  // theta = psi o eta: interpolation exactness and sampled interior mapping.
  auto theta_at = [&](Complex omega) {
    Complex zeta = eta->from_disc(omega);
    return std::pair<CVec, Complex>(psi.eval(zeta), zeta);
  };
  {
    auto [tz, zz] = theta_at(p1);
    auto [tw, zw] = theta_at(p2);
    (void)zz;
    (void)zw;
    cert.theta_interp_error = std::max((tz - z).norm(), (tw - w).norm());
  }
  cert.min_theta_distance = std::numeric_limits<double>::infinity();
  cert.sup_eta_prime = 0.0;
  int rings = 6;
  int per_ring = std::max(8, opt_.theta_samples / rings);
  for (int r = 0; r < rings; ++r) {
    double rad = (r == rings - 1) ? 1.0 - 1e-3 : 0.15 + 0.8 * r / (rings - 1);
    for (int k = 0; k < per_ring; ++k) {
      Complex omega = std::polar(rad, kTwoPi * (k + 0.37) / per_ring);
      auto [point, zeta] = theta_at(omega);
      cert.min_theta_distance =
          std::min(cert.min_theta_distance, domain_->signed_distance(point));
      double dpsiH = std::abs(eta->to_disc_derivative(zeta));
      if (dpsiH > 0.0) cert.sup_eta_prime = std::max(cert.sup_eta_prime, 1.0 / dpsiH);
    }
  }

  // Radial projections q_j = p_j/|p_j| should land on the zero-level part of
  // the pullback boundary; verified numerically and flagged.
  cert.q_level_defect = 0.0;
  const auto& cw = eta->correspondence_values();
  const auto& ct = eta->correspondence_params();
  for (Complex p : {p1, p2}) {
    Complex q = p / std::abs(p);
    int bestj = 0;
    double bestd = 1e30;
    for (size_t j = 0; j < cw.size(); ++j) {
      double dd = std::abs(cw[j] - q);
      if (dd < bestd) {
        bestd = dd;
        bestj = static_cast<int>(j);
      }
    }
    Complex zeta_q = pb.base->boundary_point(ct[bestj]);
    double defect = std::fabs(domain_->signed_distance(psi.eval(zeta_q)));
    cert.q_level_defect = std::max(cert.q_level_defect, defect);
  }
  cert.q_on_zero_level = cert.q_level_defect < 0.1 * pb.delta_prime;
  return cert;
}

BoundCertificate lempert_upper_bound(std::shared_ptr<const AmbientDomain> domain,
                                     const CVec& z, const CVec& w, const CVec& a,
                                     const CVec& b, const BuilderOptions& opt) {
  DiscBuilder builder(domain, a, b, opt);
  return builder.certify(z, w);
}

std::string certificate_to_json(const BoundCertificate& cert) {
  nlohmann::json j;
  auto cplx = [](Complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
  auto cvec = [&](const CVec& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(cplx(v(i)));
    return arr;
  };
  nlohmann::json coeffs = nlohmann::json::array();
  for (const CVec& c : cert.interp.disc_map.cheb) coeffs.push_back(cvec(c));
  j["curve"] = {{"basis", "chebyshev"},
                {"dim", cert.interp.disc_map.dim},
                {"coefficients", coeffs}};
  j["zeta1"] = cplx(cert.interp.zeta1);
  j["zeta2"] = cplx(cert.interp.zeta2);
  j["u"] = cvec(cert.interp.u);
  j["v"] = cvec(cert.interp.v);
  j["p1"] = cplx(cert.interp.p1);
  j["p2"] = cplx(cert.interp.p2);
  j["upper"] = cert.upper;
  j["one_minus_upper"] = cert.one_minus_upper;
  j["d_z"] = cert.d_z;
  j["d_w"] = cert.d_w;
  j["measured_C"] = cert.measured_C;
  j["sup_eta_prime"] = cert.sup_eta_prime;
  j["theta_interp_error"] = cert.theta_interp_error;
  j["min_theta_distance"] = cert.min_theta_distance;
  j["q_on_zero_level"] = cert.q_on_zero_level;
  j["q_level_defect"] = cert.q_level_defect;
  j["delta"] = cert.delta_used;
  j["delta_prime"] = cert.delta_prime_used;
  j["newton"] = {{"residual", cert.interp.residual},
                 {"iterations", cert.interp.iterations}};
  return j.dump(2);
}

ConstantEstimate theorem1_constant(const std::vector<metrics::MetricSample>& rows) {
  ConstantEstimate est;
  est.c = std::numeric_limits<double>::infinity();
  est.samples = rows.size();
  for (const auto& s : rows) {
    if (s.theorem1 < est.c) {
      est.c = s.theorem1;
      est.at_z = s.z;
      est.at_w = s.w;
    }
  }
  if (rows.empty()) est.c = 0.0;
  return est;
}

}  // namespace lempert::discs
