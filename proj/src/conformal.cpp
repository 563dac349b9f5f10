#include "lempert/conformal.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <iostream>

namespace lempert::conformal {

namespace {

const Domain& shared_unit_disc() {
  static const Domain disc = build_domain(DomainSpec::unit_disc());
  return disc;
}

Complex moebius(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

// Fourier coefficients of midpoint-sampled periodic data, modes -K..K.
struct TrigInterp {
  int K = 0;
  std::vector<Complex> coeff;  // index k + K

  static TrigInterp fit(const std::vector<Complex>& values) {
    int n = static_cast<int>(values.size());
    TrigInterp ti;
    ti.K = n / 2 - 1;
    ti.coeff.assign(2 * ti.K + 1, Complex(0, 0));
    for (int k = -ti.K; k <= ti.K; ++k) {
      Complex acc(0, 0);
      for (int j = 0; j < n; ++j) {
        double t = (j + 0.5) / n;
        acc += values[j] * std::polar(1.0, -kTwoPi * k * t);
      }
      ti.coeff[k + ti.K] = acc / double(n);
    }
    return ti;
  }

  void eval(double t, Complex& value, Complex& deriv) const {
    Complex rot = std::polar(1.0, kTwoPi * t);
    Complex fwd = std::polar(1.0, -kTwoPi * K * t);  // e^{i 2 pi (-K) t}
    value = Complex(0, 0);
    deriv = Complex(0, 0);
    for (int k = -K; k <= K; ++k) {
      Complex c = coeff[k + K];
      value += c * fwd;
      deriv += c * fwd * Complex(0, kTwoPi * k);
      fwd *= rot;
    }
  }
};

}  // namespace

ForwardValue map_forward(const ConformalMap& m, Complex z) {
  if (m.disc_is_source()) {
    Complex w = m.from_disc(z);
    Complex dpsi = m.to_disc_derivative(w);
    if (std::abs(dpsi) == 0.0) throw std::runtime_error("map derivative vanishes");
    return {w, 1.0 / dpsi};
  }
  Complex w = m.to_disc(z);
  Complex d = m.to_disc_derivative(z);
  if (std::abs(d) == 0.0) throw std::runtime_error("map derivative vanishes");
  return {w, d};
}

Complex map_inverse(const ConformalMap& m, Complex w) {
  return m.disc_is_source() ? m.to_disc(w) : m.from_disc(w);
}

MoebiusMap::MoebiusMap(Complex a) : a_(a) {
  if (std::abs(a) >= 1.0) throw std::runtime_error("disc automorphism: |a| must be < 1");
}

const Domain& MoebiusMap::domain() const { return shared_unit_disc(); }

Complex MoebiusMap::to_disc(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12) throw std::runtime_error("argument outside the unit disc");
  return moebius(a_, z);
}

Complex MoebiusMap::to_disc_derivative(Complex z) const {
  Complex den = 1.0 - std::conj(a_) * z;
  return (1.0 - std::norm(a_)) / (den * den);
}

Complex MoebiusMap::from_disc(Complex w) const {
  if (std::abs(w) > 1.0 + 1e-12) throw std::runtime_error("argument outside the unit disc");
  return (w + a_) / (1.0 + std::conj(a_) * w);
}

std::shared_ptr<MoebiusMap> disc_automorphism(Complex a) {
  return std::make_shared<MoebiusMap>(a);
}

NumericalRiemannMap::NumericalRiemannMap(const Domain& domain, Complex center)
    : domain_(domain), center_(center) {}

namespace {

// Boundary correspondence by the Szegő-kernel integral equation.  With the
// Cauchy kernel H(z,a) = T(z) / (2 pi i (z - a)) and the skew-hermitian
// smoothed kernel
//   A(z,w) = (1/2 pi i) [ conj(T(z))/conj(w-z) - T(w)/(w-z) ],
// the boundary Szegő kernel sigma(z) = S(z,a) solves
//   sigma + \int A(.,w) sigma(w) ds(w) = conj(H(.,a)).
// The map's boundary values are S/L with the Garabedian kernel
// L(z,a) = i conj(sigma(z)) conj(T(z)).  The diagonal of A vanishes for C^2
// curves; the kernel vanishes identically exactly on circles.
std::vector<Complex> solve_szego_correspondence(const Domain& domain, Complex center,
                                                MapDiagnostics& diag) {
  const BoundaryCurve& bc = domain.boundary();
  int n = bc.sample_count;
  std::vector<Complex> T(n);
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    double speed = std::abs(bc.tangents[j]);
    T[j] = bc.tangents[j] / speed;
    w[j] = speed / n;
  }

  Eigen::MatrixXcd M(n, n);
  const Complex itwopi(0.0, kTwoPi);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        M(i, j) = 1.0;
        continue;
      }
      Complex dz = bc.points[j] - bc.points[i];
      Complex A = (std::conj(T[i] / dz) - T[j] / dz) / itwopi;
      M(i, j) = A * w[j];
    }
  }
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i)
    b(i) = std::conj(T[i] / (itwopi * (bc.points[i] - center)));

  Eigen::VectorXcd sigma = M.partialPivLu().solve(b);
  double resid = (M * sigma - b).norm() / std::max(1e-30, b.norm());
  if (!(resid < 1e-8))
    throw std::runtime_error("riemann map: integral equation solve failed, residual " +
                             std::to_string(resid));

  double s_aa = 0.0;
  for (int j = 0; j < n; ++j) s_aa += w[j] * std::norm(sigma(j));
  diag.szego_norm = s_aa;

  std::vector<Complex> f(n);
  for (int j = 0; j < n; ++j) {
    Complex s = sigma(j);
    if (std::abs(s) < 1e-14)
      throw std::runtime_error("riemann map: Szegő kernel vanished on the boundary");
    f[j] = Complex(0, -1) * s * T[j] / std::conj(s);
    f[j] /= std::abs(f[j]);  // unit modulus up to rounding
  }
  return f;
}

// Conjugation (boundary Hilbert transform) of midpoint-sampled real data.
std::vector<double> conjugate_periodic(const std::vector<double>& u) {
  int n = static_cast<int>(u.size());
  int K = n / 2 - 1;
  std::vector<Complex> c(2 * K + 1, Complex(0, 0));
  for (int k = -K; k <= K; ++k) {
    Complex acc(0, 0);
    for (int j = 0; j < n; ++j)
      acc += u[j] * std::polar(1.0, -kTwoPi * k * (j + 0.5) / n);
    c[k + K] = acc / double(n);
  }
  std::vector<double> v(n, 0.0);
  for (int j = 0; j < n; ++j) {
    Complex acc(0, 0);
    for (int k = -K; k <= K; ++k) {
      if (k == 0) continue;
      Complex mult(0, k > 0 ? -1.0 : 1.0);
      acc += mult * c[k + K] * std::polar(1.0, kTwoPi * k * (j + 0.5) / n);
    }
    v[j] = acc.real();
  }
  return v;
}

// 4-point Lagrange interpolation on a sorted table (cyclically extended by
// the caller).
double lagrange4(const std::vector<double>& x, const std::vector<double>& y, double t) {
  int n = static_cast<int>(x.size());
  int lo = int(std::lower_bound(x.begin(), x.end(), t) - x.begin());
  int i0 = std::clamp(lo - 2, 0, n - 4);
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double wgt = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) wgt *= (t - x[i0 + b]) / (x[i0 + a] - x[i0 + b]);
    out += wgt * y[i0 + a];
  }
  return out;
}

// Theodorsen iteration for domains starlike about the center: solves the
// boundary angle correspondence phi(theta) = theta + K[log rho(phi)].
std::vector<Complex> solve_theodorsen_correspondence(const Domain& domain, Complex center,
                                                     const RiemannOptions& opt,
                                                     MapDiagnostics& diag) {
  const BoundaryCurve& bc = domain.boundary();
  int n = bc.sample_count;

  const int K = 4096;
  std::vector<double> phi_tab(K), t_tab(K), logr_tab(K);
  double prev = 0.0;
  for (int k = 0; k < K; ++k) {
    double t = (k + 0.5) / K;
    Complex d = domain.boundary_point(t) - center;
    double ph = std::arg(d);
    if (k > 0) {
      while (ph < prev - kPi) ph += kTwoPi;
      while (ph > prev + kPi) ph -= kTwoPi;
      if (ph <= prev)
        throw std::runtime_error("theodorsen: domain is not starlike about the center");
    }
    prev = ph;
    phi_tab[k] = ph;
    t_tab[k] = t;
    logr_tab[k] = std::log(std::abs(d));
  }

  // Cyclic extension for interpolation near the seam.
  auto extend = [](std::vector<double> v, double period) {
    std::vector<double> out;
    int m = static_cast<int>(v.size());
    for (int i = m - 4; i < m; ++i) out.push_back(v[i] - period);
    for (double x : v) out.push_back(x);
    for (int i = 0; i < 4; ++i) out.push_back(v[i] + period);
    return out;
  };
  std::vector<double> phi_ext = extend(phi_tab, kTwoPi);
  std::vector<double> logr_ext = extend(logr_tab, 0.0);
  std::vector<double> t_ext = extend(t_tab, 1.0);

  auto log_rho = [&](double phi) {
    double base = phi_tab.front();
    double ph = phi - kTwoPi * std::floor((phi - base) / kTwoPi);
    return lagrange4(phi_ext, logr_ext, ph);
  };

  std::vector<double> theta(n), phi(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = kTwoPi * (i + 0.5) / n;
    phi[i] = theta[i];
  }
  double delta = 1.0;
  int it = 0;
  std::vector<double> u(n);
  for (; it < opt.conjugation_max_iter && delta > opt.conjugation_tol; ++it) {
    for (int i = 0; i < n; ++i) u[i] = log_rho(phi[i]);
    std::vector<double> v = conjugate_periodic(u);
    delta = 0.0;
    for (int i = 0; i < n; ++i) {
      double next = theta[i] + v[i];
      delta = std::max(delta, std::fabs(next - phi[i]));
      phi[i] = next;
    }
  }
  diag.iterations = it;
  if (delta > std::sqrt(opt.conjugation_tol))
    throw std::runtime_error("theodorsen: conjugation iteration did not converge, delta " +
                             std::to_string(delta));

  // phi(theta_i) gives the boundary angle; translate into the correspondence
  // f(gamma(t)) = e^{i theta} at the curve's own parameters.
  double base = phi_tab.front();
  std::vector<double> ts(n), th(n);
  for (int i = 0; i < n; ++i) {
    double ph = phi[i];
    double shift = std::floor((ph - base) / kTwoPi);
    ts[i] = lagrange4(phi_ext, t_ext, ph - kTwoPi * shift) + shift;
    th[i] = theta[i];
  }
  double t0shift = std::floor(ts[0]);
  for (int i = 0; i < n; ++i) {
    ts[i] -= t0shift;
    th[i] -= t0shift * kTwoPi;
  }
  std::vector<double> ts_ext = extend(ts, 1.0);
  std::vector<double> th_ext = extend(th, kTwoPi);

  std::vector<Complex> f(n);
  for (int j = 0; j < n; ++j) {
    double tt = bc.params[j];
    while (tt < ts_ext[3]) tt += 1.0;
    while (tt > ts_ext[ts_ext.size() - 4]) tt -= 1.0;
    double thj = lagrange4(ts_ext, th_ext, tt);
    f[j] = std::polar(1.0, thj);
  }
  return f;
}

}  // namespace

std::shared_ptr<NumericalRiemannMap> NumericalRiemannMap::build(const Domain& domain,
                                                                Complex center,
                                                                const RiemannOptions& opt) {
  auto map = std::shared_ptr<NumericalRiemannMap>(new NumericalRiemannMap(domain, center));
  map->collar_abs_ = opt.collar_factor * domain.diameter();
  double dc = domain.signed_distance(center);
  if (dc < 1e-6 * domain.diameter())
    throw std::runtime_error("riemann map: center too close to the boundary");

  std::vector<Complex> f;
  if (opt.method == RiemannOptions::Method::kTheodorsen) {
    f = solve_theodorsen_correspondence(domain, center, opt, map->diag_);
    map->diag_.method = "theodorsen";
  } else {
    f = solve_szego_correspondence(domain, center, map->diag_);
    map->diag_.method = "szego";
  }
  map->assemble_eval_tables(f, opt);
  map->run_self_check(opt);
  return map;
}

std::shared_ptr<NumericalRiemannMap> build_riemann_map(const Domain& domain, Complex center,
                                                       const RiemannOptions& opt) {
  return NumericalRiemannMap::build(domain, center, opt);
}

void NumericalRiemannMap::assemble_eval_tables(const std::vector<Complex>& f_nodes,
                                               const RiemannOptions& opt) {
  const BoundaryCurve& bc = domain_.boundary();
  int n = bc.sample_count;
  int m = std::max(4, opt.eval_upsample) * n;

  TrigInterp ft = TrigInterp::fit(f_nodes);

  gm_.resize(m);
  dgm_.resize(m);
  std::vector<Complex> fm(m), dfm(m);
  for (int j = 0; j < m; ++j) {
    double t = (j + 0.5) / m;
    gm_[j] = bc.gamma(t);
    dgm_[j] = bc.dgamma(t);
    ft.eval(t, fm[j], dfm[j]);
  }

  // Normalization from the raw node-level map: psi_raw(center), psi'_raw(center).
  {
    Complex num(0, 0), den(0, 0), dnum(0, 0), dden(0, 0);
    for (int j = 0; j < n; ++j) {
      Complex c = bc.tangents[j] / (bc.points[j] - center_);
      Complex c2 = bc.tangents[j] / ((bc.points[j] - center_) * (bc.points[j] - center_));
      num += c * f_nodes[j];
      den += c;
      dnum += c2 * f_nodes[j];
      dden += c2;
    }
    Complex c0 = num / den;
    Complex d0 = (dnum * den - num * dden) / (den * den);
    norm_c0_ = c0;
    diag_.normalization_error = std::abs(c0);
    if (std::abs(c0) > 0.5)
      throw std::runtime_error("riemann map: normalization drift too large");
    Complex mprime_at_c0 = 1.0 / (1.0 - std::norm(c0));
    norm_rot_ = std::polar(1.0, -std::arg(mprime_at_c0 * d0));
  }

  om_.resize(m);
  dom_.resize(m);
  for (int j = 0; j < m; ++j) {
    Complex fj = fm[j];
    Complex den = 1.0 - std::conj(norm_c0_) * fj;
    Complex o = norm_rot_ * (fj - norm_c0_) / den;
    om_[j] = o / std::abs(o);
    Complex mprime = (1.0 - std::norm(norm_c0_)) / (den * den);
    dom_[j] = norm_rot_ * mprime * dfm[j];
  }

  corr_t_ = bc.params;
  corr_w_.resize(n);
  for (int j = 0; j < n; ++j) corr_w_[j] = apply_norm(f_nodes[j]);

  // Orientation-preserving monotone bijection of parameters.  In strongly
  // elongated domains the correspondence bunches exponentially, so increments
  // at rounding level are tolerated; genuine disorder is not.
  double prev = std::arg(corr_w_[0]);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    double cur = std::arg(corr_w_[j % n]);
    double inc = cur - prev;
    while (inc < -kPi) inc += kTwoPi;
    while (inc > kPi) inc -= kTwoPi;
    if (inc < -1e-4 || inc > kPi - 1e-9)
      throw std::runtime_error("riemann map: boundary correspondence not monotone");
    total += inc;
    prev = cur;
  }
  if (std::fabs(total - kTwoPi) > 0.1)
    throw std::runtime_error("riemann map: boundary correspondence does not wind once");
}

Complex NumericalRiemannMap::apply_norm(Complex s) const {
  return norm_rot_ * (s - norm_c0_) / (1.0 - std::conj(norm_c0_) * s);
}

Complex NumericalRiemannMap::apply_norm_derivative(Complex s, Complex sprime) const {
  Complex den = 1.0 - std::conj(norm_c0_) * s;
  return norm_rot_ * (1.0 - std::norm(norm_c0_)) / (den * den) * sprime;
}

// Compensated Cauchy quadrature over the normalized correspondence tables;
// the normalization is already folded into om_, so this is the final map.
Complex NumericalRiemannMap::eval_raw(Complex z) const {
  int m = static_cast<int>(gm_.size());
  Complex num(0, 0), den(0, 0);
  for (int j = 0; j < m; ++j) {
    Complex c = dgm_[j] / (gm_[j] - z);
    num += c * om_[j];
    den += c;
  }
  return num / den;
}

Complex NumericalRiemannMap::eval_raw_derivative(Complex z) const {
  int m = static_cast<int>(gm_.size());
  Complex num(0, 0), den(0, 0), dnum(0, 0), dden(0, 0);
  for (int j = 0; j < m; ++j) {
    Complex d1 = gm_[j] - z;
    Complex c = dgm_[j] / d1;
    Complex c2 = dgm_[j] / (d1 * d1);
    num += c * om_[j];
    den += c;
    dnum += c2 * om_[j];
    dden += c2;
  }
  return (dnum * den - num * dden) / (den * den);
}

Complex NumericalRiemannMap::to_disc_unchecked(Complex z) const { return eval_raw(z); }

Complex NumericalRiemannMap::to_disc_derivative_unchecked(Complex z) const {
  return eval_raw_derivative(z);
}

Complex NumericalRiemannMap::to_disc(Complex z) const {
  double d = domain_.signed_distance(z);
  if (d < 0) throw std::runtime_error("point outside the domain");
  if (d < collar_abs_) throw std::runtime_error("too close to boundary");
  return to_disc_unchecked(z);
}

Complex NumericalRiemannMap::to_disc_derivative(Complex z) const {
  double d = domain_.signed_distance(z);
  if (d < 0) throw std::runtime_error("point outside the domain");
  if (d < collar_abs_) throw std::runtime_error("too close to boundary");
  Complex der = to_disc_derivative_unchecked(z);
  if (!(std::abs(der) > 0.0)) throw std::runtime_error("map derivative vanishes");
  return der;
}

Complex NumericalRiemannMap::from_disc(Complex w) const {
  if (std::abs(w) >= 1.0) throw std::runtime_error("argument outside the unit disc");
  int m = static_cast<int>(om_.size());
  Complex num(0, 0), den(0, 0);
  for (int j = 0; j < m; ++j) {
    Complex c = dom_[j] / (om_[j] - w);
    num += c * gm_[j];
    den += c;
  }
  Complex z = num / den;
  // The plain quadrature seed may be unreliable for |w| very close to 1;
  // pull it toward the center until it is usable.
  for (int pulls = 0; pulls < 80 && !domain_.contains(z); ++pulls)
    z = center_ + 0.8 * (z - center_);
  if (!domain_.contains(z)) z = center_;

  // Newton polish against the forward map.
  Complex best = z;
  double best_res = std::abs(to_disc_unchecked(z) - w);
  for (int it = 0; it < 30 && best_res > 1e-13; ++it) {
    Complex val = to_disc_unchecked(z);
    Complex der = to_disc_derivative_unchecked(z);
    if (!(std::abs(der) > 0.0)) break;
    Complex step = (w - val) / der;
    Complex zn = z + step;
    int halvings = 0;
    while (halvings < 25 &&
           (!domain_.contains(zn) || std::abs(to_disc_unchecked(zn) - w) > best_res)) {
      step *= 0.5;
      zn = z + step;
      ++halvings;
    }
    if (halvings >= 25) break;
    z = zn;
    double res = std::abs(to_disc_unchecked(z) - w);
    if (res < best_res) {
      best_res = res;
      best = z;
    }
  }
  if (best_res > 1e-7)
    throw std::runtime_error("map inverse: Newton iteration stalled, residual " +
                             std::to_string(best_res));
  return best;
}

void NumericalRiemannMap::run_self_check(const RiemannOptions& opt) {
  const BoundaryCurve& bc = domain_.boundary();
  int n = bc.sample_count;
  double rt = 0.0, cr = 0.0;
  double h = 1e-5 * domain_.diameter();
  for (int j = 0; j < n; j += std::max(1, n / 12)) {
    for (double s : {0.5, 0.8}) {
      Complex z = center_ + s * (bc.points[j] - center_);
      if (domain_.signed_distance(z) < 8.0 * h) continue;
      Complex w = to_disc_unchecked(z);
      if (std::abs(w) >= 1.0) {
        rt = std::max(rt, 1.0);
        continue;
      }
      rt = std::max(rt, std::abs(from_disc(w) - z));
      Complex dx = (to_disc_unchecked(z + h) - to_disc_unchecked(z - h)) / (2.0 * h);
      Complex dy = (to_disc_unchecked(z + Complex(0, h)) -
                    to_disc_unchecked(z - Complex(0, h))) /
                   (2.0 * h);
      cr = std::max(cr, 0.5 * std::abs(dx + Complex(0, 1) * dy));
    }
  }
  diag_.roundtrip_max = rt;
  diag_.cr_residual_max = cr;
  if (rt > opt.self_check_tol)
    throw std::runtime_error("riemann map: self-check roundtrip error " + std::to_string(rt));
}

void NumericalRiemannMap::write_correspondence_csv(std::ostream& out) const {
  out << "t,re,im\n";
  for (size_t j = 0; j < corr_t_.size(); ++j)
    out << corr_t_[j] << "," << corr_w_[j].real() << "," << corr_w_[j].imag() << "\n";
}

ExplicitDiscImage::ExplicitDiscImage(Domain image, std::function<Complex(Complex)> f,
                                     std::function<Complex(Complex)> df, std::string name)
    : image_(std::move(image)), f_(std::move(f)), df_(std::move(df)), name_(std::move(name)) {}

Complex ExplicitDiscImage::to_disc(Complex z) const {
  double scale = image_.diameter();
  // Seed scan over rings, then damped Newton inside the disc.
  Complex best(0, 0);
  double best_res = std::abs(f_(best) - z);
  const double radii[] = {0.3, 0.6, 0.85, 0.97, 0.995, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8};
  for (double r : radii) {
    for (int k = 0; k < 16; ++k) {
      Complex s = std::polar(r, kTwoPi * k / 16.0);
      double res = std::abs(f_(s) - z);
      if (res < best_res) {
        best_res = res;
        best = s;
      }
    }
  }
  Complex zeta = best;
  for (int it = 0; it < 80 && best_res > 1e-14 * scale; ++it) {
    Complex der = df_(zeta);
    if (!std::isfinite(der.real()) || !std::isfinite(der.imag()) || std::abs(der) == 0.0)
      break;
    Complex step = (z - f_(zeta)) / der;
    Complex zn = zeta + step;
    int halvings = 0;
    while (halvings < 40 && (std::abs(zn) >= 1.0 || std::abs(f_(zn) - z) >= best_res)) {
      step *= 0.5;
      zn = zeta + step;
      ++halvings;
    }
    if (halvings >= 40) break;
    zeta = zn;
    best_res = std::abs(f_(zeta) - z);
  }
  if (best_res > 1e-9 * scale)
    throw std::runtime_error("explicit map inverse: Newton stalled, residual " +
                             std::to_string(best_res));
  return zeta;
}

Complex ExplicitDiscImage::to_disc_derivative(Complex z) const {
  Complex zeta = to_disc(z);
  Complex d = df_(zeta);
  if (!std::isfinite(d.real()) || std::abs(d) == 0.0)
    throw std::runtime_error("explicit map: derivative unavailable at this point");
  return 1.0 / d;
}

Complex example4_map(Complex z) {
  Complex om = 1.0 - z;
  if (std::abs(om) < 1e-300) return Complex(2.0, 0.0);  // boundary limit at z = 1
  return 2.0 * z + om * std::log(om);
}

Complex example4_map_derivative(Complex z) {
  Complex om = 1.0 - z;
  if (std::abs(om) < 1e-300)
    throw std::runtime_error("derivative refused at the boundary singularity z=1");
  return 1.0 - std::log(om);
}

std::pair<Domain, std::shared_ptr<ExplicitDiscImage>> example4_domain(int sample_count) {
  DomainSpec spec;
  spec.kind = DomainSpec::Kind::ImageMap;
  spec.map = [](Complex z) { return example4_map(z); };
  spec.dmap = [](Complex z) { return example4_map_derivative(z); };
  spec.sample_count = sample_count;
  Domain d = build_domain(spec);
  auto m = std::make_shared<ExplicitDiscImage>(
      d, [](Complex z) { return example4_map(z); },
      [](Complex z) { return example4_map_derivative(z); }, "example4");
  return {std::move(d), std::move(m)};
}

}  // namespace lempert::conformal
