#include "lempert/domain.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lempert {

namespace {

// Dense sampling used for area, bounding box and diameter estimates.
constexpr int kDenseFactor = 4;

double polygon_area(const std::vector<Complex>& pts) {
  double s = 0.0;
  int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Complex& p = pts[i];
    const Complex& q = pts[(i + 1) % n];
    s += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * s;
}

}  // namespace

BoundaryCurve BoundaryCurve::build(std::function<Complex(double)> gamma,
                                   std::function<Complex(double)> dgamma,
                                   double holder_exponent, int sample_count) {
  if (!gamma || !dgamma) throw std::runtime_error("boundary curve: missing parametrization");
  if (holder_exponent <= 0.0 || holder_exponent > 1.0)
    throw std::runtime_error("boundary curve: holder exponent must be in (0,1]");
  if (sample_count < 16) throw std::runtime_error("boundary curve: sample_count too small");

  BoundaryCurve c;
  c.gamma = std::move(gamma);
  c.dgamma = std::move(dgamma);
  c.holder_exponent = holder_exponent;
  c.sample_count = sample_count;

  int n = sample_count;
  c.params.resize(n);
  c.points.resize(n);
  c.tangents.resize(n);
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    double t = (j + 0.5) / n;
    c.params[j] = t;
    c.points[j] = c.gamma(t);
    c.tangents[j] = c.dgamma(t);
    scale = std::max(scale, std::abs(c.points[j]));
  }
  scale = std::max(scale, 1e-12);

  // Closure: the parametrization must be 1-periodic.
  if (std::abs(c.gamma(0.25) - c.gamma(1.25)) > 1e-9 * scale)
    throw std::runtime_error("boundary curve: parametrization is not 1-periodic");

  c.min_speed = std::numeric_limits<double>::infinity();
  c.max_speed = 0.0;
  for (int j = 0; j < n; ++j) {
    double sp = std::abs(c.tangents[j]);
    if (!(sp > 1e-12 * scale)) throw std::runtime_error("vanishing tangent");
    c.min_speed = std::min(c.min_speed, sp);
    c.max_speed = std::max(c.max_speed, sp);
    c.length += sp / n;
  }

  // Simplicity: no two non-adjacent sampled segments intersect.
  for (int i = 0; i < n; ++i) {
    Complex p1 = c.points[i];
    Complex p2 = c.points[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the seam
      if (segments_intersect(p1, p2, c.points[j], c.points[(j + 1) % n]))
        throw std::runtime_error("non-simple curve");
    }
  }

  if (polygon_area(c.points) <= 0.0)
    throw std::runtime_error("boundary curve: orientation must be counterclockwise");

  // Sampled Hölder quotient of the tangent.
  double quot = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dp = circle_dist(c.params[i], c.params[j]);
      double q = std::abs(c.tangents[i] - c.tangents[j]) / std::pow(dp, holder_exponent);
      quot = std::max(quot, q);
    }
  }
  c.holder_constant = quot;
  return c;
}

Domain::Domain(BoundaryCurve boundary, std::function<double(Complex)> defining_fn,
               std::function<Complex(Complex)> defining_grad)
    : boundary_(std::move(boundary)),
      defining_fn_(std::move(defining_fn)),
      defining_grad_(std::move(defining_grad)) {
  int n = boundary_.sample_count * kDenseFactor;
  std::vector<Complex> dense(n);
  for (int j = 0; j < n; ++j) dense[j] = boundary_.gamma((j + 0.5) / n);

  bbox_.xmin = bbox_.xmax = dense[0].real();
  bbox_.ymin = bbox_.ymax = dense[0].imag();
  for (const Complex& p : dense) bbox_.expand(p);
  if (!(bbox_.width() > 0.0) || !(bbox_.height() > 0.0) ||
      !std::isfinite(bbox_.width()) || !std::isfinite(bbox_.height()))
    throw std::runtime_error("unbounded or degenerate domain");

  // Area = 1/2 oint Im(conj(gamma) gamma') dt, trapezoid on the midpoint grid.
  area_ = 0.0;
  for (int j = 0; j < n; ++j) {
    double t = (j + 0.5) / n;
    Complex dg = boundary_.dgamma(t);
    if (std::isfinite(dg.real()) && std::isfinite(dg.imag()))
      area_ += 0.5 * std::imag(std::conj(boundary_.gamma(t)) * dg) / n;
  }
  if (area_ <= 0.0) throw std::runtime_error("domain has nonpositive area");

  const auto& pts = boundary_.points;
  int m = static_cast<int>(pts.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      diameter_ = std::max(diameter_, std::abs(pts[i] - pts[j]));

  // Interior anchor: coarse grid argmax of the signed distance, locally
  // refined twice.
  const int g = 41;
  double best = -1.0;
  for (int iy = 1; iy < g; ++iy) {
    for (int ix = 1; ix < g; ++ix) {
      Complex z(bbox_.xmin + bbox_.width() * ix / g, bbox_.ymin + bbox_.height() * iy / g);
      if (!contains(z)) continue;
      double d = signed_distance(z);
      if (d > best) {
        best = d;
        anchor_ = z;
      }
    }
  }
  if (best <= 0.0) throw std::runtime_error("domain has empty sampled interior");
  double hx = bbox_.width() / g, hy = bbox_.height() / g;
  for (int stage = 0; stage < 3; ++stage) {
    Complex centre = anchor_;
    for (int iy = -4; iy <= 4; ++iy) {
      for (int ix = -4; ix <= 4; ++ix) {
        Complex z = centre + Complex(hx * ix / 4.0, hy * iy / 4.0);
        if (!contains(z)) continue;
        double d = signed_distance(z);
        if (d > best) {
          best = d;
          anchor_ = z;
        }
      }
    }
    hx /= 4.0;
    hy /= 4.0;
  }

  if (defining_fn_) {
    // r < 0 exactly on the sampled interior.
    if (defining_fn_(anchor_) >= 0.0)
      throw std::runtime_error("defining function positive at an interior point");
    Complex out(bbox_.xmax + bbox_.width(), bbox_.ymax + bbox_.height());
    if (defining_fn_(out) <= 0.0)
      throw std::runtime_error("defining function negative at an exterior point");
  }
}

double Domain::defining_function(Complex z) const {
  if (defining_fn_) return defining_fn_(z);
  return -signed_distance(z);  // synthesized: negative inside, unit gradient
}

Complex Domain::defining_gradient(Complex z) const {
  if (defining_grad_) return defining_grad_(z);
  // Gradient of -signed_distance: the outward unit normal at the nearest
  // boundary point (valid on the band where the normal projection is unique).
  double t = nearest_parameter(z);
  return -inward_normal_at(t);
}

bool Domain::contains(Complex z) const {
  if (!bbox_.contains(z, 1e-9 * diameter_)) return false;
  const auto& p = boundary_.points;
  int n = static_cast<int>(p.size());
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    bool crosses = (p[i].imag() > z.imag()) != (p[j].imag() > z.imag());
    if (!crosses) continue;
    double xint = p[i].real() + (z.imag() - p[i].imag()) * (p[j].real() - p[i].real()) /
                                    (p[j].imag() - p[i].imag());
    if (z.real() < xint) inside = !inside;
  }
  return inside;
}

double Domain::nearest_parameter(Complex z) const {
  const auto& pts = boundary_.points;
  int n = static_cast<int>(pts.size());
  int best = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double d = std::norm(pts[j] - z);
    if (d < bestd) {
      bestd = d;
      best = j;
    }
  }
  double h = 1.0 / n;
  double t0 = boundary_.params[best];
  auto dist = [&](double t) { return std::abs(boundary_.gamma(t) - z); };
  double t = golden_minimize(dist, t0 - h, t0 + h, 1e-12);

  // Newton polish on g(t) = |gamma(t)-z|^2 where the tangent behaves.
  for (int it = 0; it < 8; ++it) {
    Complex gp = boundary_.dgamma(t);
    if (!std::isfinite(gp.real()) || !std::isfinite(gp.imag())) break;
    Complex diff = boundary_.gamma(t) - z;
    double g1 = std::real(std::conj(diff) * gp);
    double eps = 1e-7;
    Complex gpp = (boundary_.dgamma(t + eps) - boundary_.dgamma(t - eps)) / (2.0 * eps);
    double g2 = std::norm(gp) + std::real(std::conj(diff) * gpp);
    if (!(std::fabs(g2) > 0.0) || !std::isfinite(g2)) break;
    double step = g1 / g2;
    if (std::fabs(step) > h) break;  // keep the refinement local
    double tn = t - step;
    if (dist(tn) <= dist(t))
      t = tn;
    else
      break;
    if (std::fabs(step) < 1e-15) break;
  }
  return wrap_unit(t);
}

double Domain::signed_distance(Complex z) const {
  double t = nearest_parameter(z);
  Complex p = boundary_.gamma(t);
  double d = std::abs(p - z);
  if (d == 0.0) return 0.0;
  // Sign from the inward normal at the nearest point: the segment from the
  // nearest boundary point to z cannot cross the boundary, so the side it
  // leaves on decides membership.  More robust than the sampled polygon test
  // near high-curvature boundary features.
  Complex g = boundary_.dgamma(t);
  if (std::isfinite(g.real()) && std::isfinite(g.imag()) && std::abs(g) > 0.0) {
    Complex nin = Complex(0, 1) * g / std::abs(g);
    double proj = std::real((z - p) * std::conj(nin));
    if (std::fabs(proj) > 1e-6 * d) return proj > 0 ? d : -d;
  }
  return contains(z) ? d : -d;
}

Complex Domain::inward_normal_at(double t) const {
  Complex g = boundary_.dgamma(t);
  double n = std::abs(g);
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::runtime_error("degenerate tangent");
  return Complex(0, 1) * g / n;
}

DomainSpec DomainSpec::disc(Complex center, double radius) {
  DomainSpec s;
  s.kind = Kind::Disc;
  s.center = center;
  s.radius = radius;
  return s;
}

DomainSpec DomainSpec::ellipse(double a, double b) {
  DomainSpec s;
  s.kind = Kind::Ellipse;
  s.a = a;
  s.b = b;
  return s;
}

DomainSpec DomainSpec::smoothed_rectangle(double width, double height, double exponent) {
  DomainSpec s;
  s.kind = Kind::SmoothedRectangle;
  s.a = width / 2.0;
  s.b = height / 2.0;
  s.exponent = exponent;
  return s;
}

DomainSpec DomainSpec::perturbed_ellipse(double a, double b, double amplitude, int frequency) {
  DomainSpec s;
  s.kind = Kind::PerturbedEllipse;
  s.a = a;
  s.b = b;
  s.amplitude = amplitude;
  s.frequency = frequency;
  return s;
}

namespace {

Domain build_param_table(const DomainSpec& spec) {
  auto table = spec.table;
  if (table.size() < 8) throw std::runtime_error("param_table: need at least 8 rows");
  std::sort(table.begin(), table.end(),
            [](const auto& r, const auto& s) { return r[0] < s[0]; });

  // Resample onto a uniform grid with local cubic interpolation, then spline.
  int m = static_cast<int>(table.size());
  auto point = [&](int i) {
    const auto& r = table[((i % m) + m) % m];
    return Complex(r[1], r[2]);
  };
  auto param = [&](int i) {
    int k = ((i % m) + m) % m;
    return table[k][0] + std::floor(double(i) / m);  // unwrapped
  };
  int n = std::max(spec.sample_count, 4 * m);
  std::vector<Complex> knots(n);
  int seg = 0;
  for (int j = 0; j < n; ++j) {
    double t = double(j) / n;
    while (!(param(seg) <= t && t < param(seg + 1))) {
      if (t < param(seg))
        --seg;
      else
        ++seg;
    }
    // 4-point Lagrange through rows seg-1 .. seg+2.
    double x[4] = {param(seg - 1), param(seg), param(seg + 1), param(seg + 2)};
    Complex y[4] = {point(seg - 1), point(seg), point(seg + 1), point(seg + 2)};
    Complex v(0, 0);
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) w *= (t - x[b]) / (x[a] - x[b]);
      v += w * y[a];
    }
    knots[j] = v;
  }
  if (polygon_area(knots) < 0.0) std::reverse(knots.begin(), knots.end());
  auto spline = std::make_shared<PeriodicSpline>(std::move(knots));
  return Domain(BoundaryCurve::build([spline](double t) { return spline->eval(t); },
                                     [spline](double t) { return spline->deriv(t); },
                                     spec.holder_exponent, spec.sample_count));
}

}  // namespace

Domain build_domain(const DomainSpec& spec) {
  using Kind = DomainSpec::Kind;
  switch (spec.kind) {
    case Kind::Disc: {
      if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
        throw std::runtime_error("unbounded or degenerate spec: disc radius");
      Complex c = spec.center;
      double R = spec.radius;
      auto g = [c, R](double t) { return c + R * std::polar(1.0, kTwoPi * t); };
      auto dg = [R](double t) {
        return R * kTwoPi * Complex(0, 1) * std::polar(1.0, kTwoPi * t);
      };
      auto r = [c, R](Complex z) { return std::norm(z - c) - R * R; };
      auto grad = [c](Complex z) { return 2.0 * (z - c); };
      return Domain(BoundaryCurve::build(g, dg, spec.holder_exponent, spec.sample_count),
                    r, grad);
    }
    case Kind::Ellipse: {
      if (!(spec.a > 0.0) || !(spec.b > 0.0))
        throw std::runtime_error("unbounded or degenerate spec: ellipse axes");
      double a = spec.a, b = spec.b;
      Complex c = spec.center;
      auto g = [a, b, c](double t) {
        return c + Complex(a * std::cos(kTwoPi * t), b * std::sin(kTwoPi * t));
      };
      auto dg = [a, b](double t) {
        return kTwoPi * Complex(-a * std::sin(kTwoPi * t), b * std::cos(kTwoPi * t));
      };
      auto r = [a, b, c](Complex z) {
        Complex w = z - c;
        double x = w.real() / a, y = w.imag() / b;
        return x * x + y * y - 1.0;
      };
      auto grad = [a, b, c](Complex z) {
        Complex w = z - c;
        return Complex(2.0 * w.real() / (a * a), 2.0 * w.imag() / (b * b));
      };
      return Domain(BoundaryCurve::build(g, dg, spec.holder_exponent, spec.sample_count),
                    r, grad);
    }
    case Kind::SmoothedRectangle: {
      if (!(spec.a > 0.0) || !(spec.b > 0.0))
        throw std::runtime_error("unbounded or degenerate spec: rectangle sides");
      int p = static_cast<int>(spec.exponent);
      if (p < 4 || p % 2 != 0)
        throw std::runtime_error("smoothed rectangle exponent must be even and >= 4");
      double a = spec.a, b = spec.b;
      // Superellipse |x/a|^p + |y/b|^p = 1: analytic, rectangle-like.
      auto S = [a, b, p](double th) {
        return std::pow(std::fabs(std::cos(th)) / a, p) +
               std::pow(std::fabs(std::sin(th)) / b, p);
      };
      auto rho = [S, p](double th) { return std::pow(S(th), -1.0 / p); };
      auto drho = [a, b, p, S, rho](double th) {
        double cth = std::cos(th), sth = std::sin(th);
        double Sp = p * (-std::pow(std::fabs(cth), p - 1) * (cth < 0 ? -1.0 : 1.0) * sth /
                             std::pow(a, p) +
                         std::pow(std::fabs(sth), p - 1) * (sth < 0 ? -1.0 : 1.0) * cth /
                             std::pow(b, p));
        return -(1.0 / p) * std::pow(S(th), -1.0 / p - 1.0) * Sp;
      };
      auto g = [rho](double t) {
        double th = kTwoPi * t;
        return rho(th) * std::polar(1.0, th);
      };
      auto dg = [rho, drho](double t) {
        double th = kTwoPi * t;
        return kTwoPi * (drho(th) + Complex(0, 1) * rho(th)) * std::polar(1.0, th);
      };
      auto r = [a, b, p](Complex z) {
        return std::pow(std::fabs(z.real()) / a, p) + std::pow(std::fabs(z.imag()) / b, p) -
               1.0;
      };
      auto grad = [a, b, p](Complex z) {
        double x = z.real(), y = z.imag();
        return Complex(p * std::pow(std::fabs(x) / a, p - 1) * (x < 0 ? -1.0 : 1.0) / a,
                       p * std::pow(std::fabs(y) / b, p - 1) * (y < 0 ? -1.0 : 1.0) / b);
      };
      return Domain(BoundaryCurve::build(g, dg, spec.holder_exponent, spec.sample_count),
                    r, grad);
    }
    case Kind::PerturbedEllipse: {
      if (!(spec.a > 0.0) || !(spec.b > 0.0))
        throw std::runtime_error("unbounded or degenerate spec: ellipse axes");
      if (std::fabs(spec.amplitude) >= 0.5)
        throw std::runtime_error("perturbed ellipse amplitude too large");
      double a = spec.a, b = spec.b, A = spec.amplitude;
      int m = spec.frequency;
      auto e = [a, b](double t) {
        return Complex(a * std::cos(kTwoPi * t), b * std::sin(kTwoPi * t));
      };
      auto de = [a, b](double t) {
        return kTwoPi * Complex(-a * std::sin(kTwoPi * t), b * std::cos(kTwoPi * t));
      };
      auto g = [e, A, m](double t) { return (1.0 + A * std::cos(kTwoPi * m * t)) * e(t); };
      auto dg = [e, de, A, m](double t) {
        double s = 1.0 + A * std::cos(kTwoPi * m * t);
        double ds = -A * kTwoPi * m * std::sin(kTwoPi * m * t);
        return ds * e(t) + s * de(t);
      };
      return Domain(BoundaryCurve::build(g, dg, spec.holder_exponent, spec.sample_count));
    }
    case Kind::ParamTable:
      return build_param_table(spec);
    case Kind::ImageMap: {
      if (!spec.map || !spec.dmap)
        throw std::runtime_error("image_map spec: missing map or derivative");
      auto F = spec.map;
      auto dF = spec.dmap;
      auto g = [F](double t) { return F(std::polar(1.0, kTwoPi * t)); };
      auto dg = [dF](double t) {
        Complex w = std::polar(1.0, kTwoPi * t);
        return dF(w) * kTwoPi * Complex(0, 1) * w;
      };
      return Domain(BoundaryCurve::build(g, dg, spec.holder_exponent, spec.sample_count));
    }
  }
  throw std::runtime_error("unknown domain spec");
}

std::vector<std::array<double, 3>> read_param_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open param table: " + path);
  std::vector<std::array<double, 3>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::array<double, 3> row{};
    if (ls >> row[0] >> row[1] >> row[2]) rows.push_back(row);
  }
  return rows;
}

Domain build_domain_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::string kind = j.at("kind").get<std::string>();
  DomainSpec s;
  if (j.contains("sample_count")) s.sample_count = j["sample_count"].get<int>();
  if (j.contains("holder_exponent")) s.holder_exponent = j["holder_exponent"].get<double>();
  if (j.contains("center")) {
    auto c = j["center"];
    s.center = Complex(c.at(0).get<double>(), c.at(1).get<double>());
  }
  if (kind == "disc") {
    s.kind = DomainSpec::Kind::Disc;
    s.radius = j.value("radius", 1.0);
  } else if (kind == "ellipse") {
    s.kind = DomainSpec::Kind::Ellipse;
    s.a = j.at("a").get<double>();
    s.b = j.at("b").get<double>();
  } else if (kind == "smoothed_rectangle") {
    s.kind = DomainSpec::Kind::SmoothedRectangle;
    s.a = j.at("width").get<double>() / 2.0;
    s.b = j.at("height").get<double>() / 2.0;
    s.exponent = j.value("exponent", 4.0);
  } else if (kind == "perturbed_ellipse") {
    s.kind = DomainSpec::Kind::PerturbedEllipse;
    s.a = j.at("a").get<double>();
    s.b = j.at("b").get<double>();
    s.amplitude = j.at("amplitude").get<double>();
    s.frequency = j.at("frequency").get<int>();
  } else if (kind == "param_table") {
    s.kind = DomainSpec::Kind::ParamTable;
    if (j.contains("csv")) {
      s.table = read_param_table_csv(j["csv"].get<std::string>());
    } else {
      for (const auto& row : j.at("points"))
        s.table.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                           row.at(2).get<double>()});
    }
  } else if (kind == "image_map") {
    std::string name = j.at("map").get<std::string>();
    if (name != "example4")
      throw std::runtime_error("image_map: unknown named map " + name);
    // The explicit boundary-singular model map; see conformal.hpp.
    s.kind = DomainSpec::Kind::ImageMap;
    s.map = [](Complex z) {
      Complex om = 1.0 - z;
      if (std::abs(om) < 1e-300) return Complex(2.0, 0.0);
      return 2.0 * z + om * std::log(om);
    };
    s.dmap = [](Complex z) { return 1.0 - std::log(1.0 - z); };
  } else {
    throw std::runtime_error("unknown domain kind: " + kind);
  }
  return build_domain(s);
}

std::pair<Domain, RigidMotion> normalize_at(const Domain& domain, Complex a) {
  if (std::fabs(domain.signed_distance(a)) > 1e-6 * domain.diameter())
    throw std::runtime_error("normalize_at: point is not on the boundary");
  double ta = domain.nearest_parameter(a);
  Complex p = domain.boundary_point(ta);
  Complex n = domain.inward_normal_at(ta);
  RigidMotion rho{p, -std::arg(n)};

  const BoundaryCurve& bc = domain.boundary();
  auto g = bc.gamma;
  auto dg = bc.dgamma;
  auto gn = [g, rho](double t) { return rho.apply(g(t)); };
  auto dgn = [dg, rho](double t) { return rho.rotate(dg(t)); };
  std::function<double(Complex)> rn;
  std::function<Complex(Complex)> gradn;
  if (domain.has_defining_function()) {
    auto r0 = domain.raw_defining_function();
    auto g0 = domain.raw_defining_gradient();
    rn = [r0, rho](Complex z) { return r0(rho.invert(z)); };
    if (g0)
      gradn = [g0, rho](Complex z) { return rho.rotate(g0(rho.invert(z))); };
  }
  Domain out(BoundaryCurve::build(gn, dgn, bc.holder_exponent, bc.sample_count), rn, gradn);
  return {std::move(out), rho};
}

namespace {

// Fillet corner between two sampled curve pieces: returns arc samples from
// the cut point on `before` to the cut point on `after`, tangent to both to
// first order, staying within `reach` of the corner.
Domain domain_from_loop(std::vector<Complex> loop, double holder_exponent,
                        int sample_count) {
  if (polygon_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());
  auto spline = std::make_shared<PeriodicSpline>(std::move(loop));
  return Domain(BoundaryCurve::build([spline](double t) { return spline->eval(t); },
                                     [spline](double t) { return spline->deriv(t); },
                                     holder_exponent, sample_count));
}

}  // namespace

bool ConeDomainPair::in_inner(Complex z) const { return inner->contains(z); }

bool ConeDomainPair::in_outer(Complex z) const {
  // G^e = complement of the closed reflected inner cone.
  double d = outer_complement->signed_distance(z);
  return d < -1e-12;
}

ConeDomainPair cone_domains(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::runtime_error("cone delta out of range");
  double R = 2.0 * delta;
  double expo = 1.0 + delta;

  // Junction of x = |y|^{1+delta} with |z| = 2 delta.
  double lo = 0.0, hi = R;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double x = std::pow(mid, expo);
    if (x * x + mid * mid < R * R)
      lo = mid;
    else
      hi = mid;
  }
  double ystar = 0.5 * (lo + hi);
  double xstar = std::pow(ystar, expo);
  double phistar = std::atan2(ystar, xstar);

  // Counterclockwise assembly with the two angular junctions kept as raw
  // corner knots: lower power branch (origin -> lower junction), circle arc
  // through (R, 0), upper power branch (upper junction -> origin).  The
  // corners are then blended within the delta/10 smoothing budget.
  std::vector<Complex> loop;
  auto power_pt = [expo](double y) {
    return Complex(std::pow(std::fabs(y), expo), y);
  };

  const int n_branch = 360, n_arc = 480;
  for (int i = 0; i < n_branch; ++i)
    loop.push_back(power_pt(-ystar * i / double(n_branch)));
  int corner1 = static_cast<int>(loop.size());
  for (int i = 0; i <= n_arc; ++i)
    loop.push_back(std::polar(R, -phistar + 2.0 * phistar * i / double(n_arc)));
  int corner2 = static_cast<int>(loop.size()) - 1;
  for (int i = n_branch - 1; i >= 1; --i)
    loop.push_back(power_pt(ystar * i / double(n_branch)));

  // Window sized to stay within delta/10 of each corner along the boundary.
  double step1 = ystar / n_branch;
  double step2 = R * 2.0 * phistar / n_arc;
  int half_window = std::max(
      4, static_cast<int>(delta / 10.0 * 0.8 / std::max(step1, step2)));
  half_window = std::min(half_window, n_branch / 3);
  smooth_corner_knots(loop, corner1, half_window);
  smooth_corner_knots(loop, corner2, half_window);

  ConeDomainPair pair;
  pair.delta = delta;
  pair.inner = std::make_shared<Domain>(domain_from_loop(loop, std::min(delta, 1.0), 512));

  std::vector<Complex> reflected;
  reflected.reserve(loop.size());
  for (auto it = loop.rbegin(); it != loop.rend(); ++it) reflected.push_back(-*it);
  pair.outer_complement =
      std::make_shared<Domain>(domain_from_loop(reflected, std::min(delta, 1.0), 512));
  return pair;
}

RegularityReport regularity_check(const Domain& domain, const RegularityBudget& budget) {
  RegularityReport rep;
  if (!(budget.epsilon > 0.0) || !(budget.band_width > 0.0))
    throw std::runtime_error("regularity budget must be positive");

  const BoundaryCurve& bc = domain.boundary();
  int stride = std::max(1, bc.sample_count / 128);
  std::vector<Complex> band_pts;
  std::vector<Complex> grads;
  rep.gradient_min = std::numeric_limits<double>::infinity();

  for (int j = 0; j < bc.sample_count; j += stride) {
    double t = bc.params[j];
    Complex p = bc.points[j];
    Complex nin = domain.inward_normal_at(t);
    for (double frac : {-1.0, -0.5, 0.25, 0.5, 1.0}) {
      Complex z = p - frac * budget.band_width * nin;  // frac>0: outside band side
      // Injectivity of the normal projection: the nearest parameter must
      // return to t.
      double th = domain.nearest_parameter(z);
      if (circle_dist(th, t) > 4.0 / bc.sample_count + 1e-9) {
        rep.band_injective = false;
        rep.pass = false;
        rep.message = "band wider than the injectivity radius of the normal map";
        return rep;
      }
      Complex g = domain.defining_gradient(z);
      band_pts.push_back(z);
      grads.push_back(g);
      rep.gradient_min = std::min(rep.gradient_min, std::abs(g));
    }
  }

  // Local Hölder quotient over band pairs within band_width of each other;
  // the exponent is the budget's epsilon, matching the regularity hypothesis.
  double quot = 0.0;
  int m = static_cast<int>(band_pts.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double d = std::abs(band_pts[i] - band_pts[j]);
      if (d < 1e-12 || d > budget.band_width) continue;
      quot = std::max(quot, std::abs(grads[i] - grads[j]) / std::pow(d, budget.epsilon));
    }
  }
  rep.holder_constant = quot;
  rep.pass = rep.band_injective && rep.gradient_min >= budget.epsilon &&
             quot <= 1.0 / budget.epsilon;
  if (!rep.pass && rep.message.empty()) rep.message = "regularity budget violated";
  return rep;
}

}  // namespace lempert
