#include <cmath>
#include <random>

#include "doctest.h"
#include "lempert/disc_builder.hpp"

using namespace lempert;
using namespace lempert::discs;

namespace {

CVec c1(Complex z) {
  CVec v(1);
  v << z;
  return v;
}

CVec c2(Complex a, Complex b) {
  CVec v(2);
  v << a, b;
  return v;
}

std::shared_ptr<PlanarAmbient> planar_disc() {
  return std::make_shared<PlanarAmbient>(build_domain(DomainSpec::unit_disc()));
}

std::shared_ptr<PlanarAmbient> planar_ellipse() {
  return std::make_shared<PlanarAmbient>(build_domain(DomainSpec::ellipse(2, 1)));
}

// The diameter curve phi(zeta) = zeta of the unit disc as a Chebyshev curve.
PolynomialCurve identity_curve() {
  PolynomialCurve pc;
  pc.dim = 1;
  pc.cheb = {c1({0, 0}), c1({1, 0})};
  pc.a = c1({1, 0});
  pc.b = c1({-1, 0});
  pc.normal_a = c1({-1, 0});
  pc.normal_b = c1({1, 0});
  return pc;
}

}  // namespace

TEST_CASE("chebyshev evaluation and derivative") {
  PolynomialCurve pc;
  pc.dim = 1;
  // T_0 + 2 T_2: value at x is 1 + 2(2x^2-1); derivative 8x
  pc.cheb = {c1({1, 0}), c1({0, 0}), c1({2, 0})};
  for (double x : {-0.7, 0.0, 0.31, 1.0}) {
    CHECK(pc.eval({x, 0})(0).real() == doctest::Approx(1 + 2 * (2 * x * x - 1)));
    CHECK(pc.deriv({x, 0})(0).real() == doctest::Approx(8 * x));
  }
  // complex argument
  Complex zc(0.3, 0.2);
  CHECK(std::abs(pc.eval(zc)(0) - (1.0 + 2.0 * (2.0 * zc * zc - 1.0))) < 1e-14);
}

TEST_CASE("lemma3 curve on the disc") {
  auto D = planar_disc();
  PolynomialCurve pc = lemma3_curve(*D, c1({1, 0}), c1({-1, 0}));
  CHECK((pc.eval({1, 0}) - c1({1, 0})).norm() < 1e-10);
  CHECK((pc.eval({-1, 0}) - c1({-1, 0})).norm() < 1e-10);
  // phi'(1) = -n_a = 1, phi'(-1) = n_b = 1
  CHECK((pc.deriv({1, 0}) - c1({1, 0})).norm() < 1e-10);
  CHECK((pc.deriv({-1, 0}) - c1({1, 0})).norm() < 1e-10);
  AdmissibilityReport rep = admissibility_check(*D, pc, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.delta1 > 0.01);
  CHECK(rep.delta2 > 0.01);

  // the identity curve passes the same invariants
  AdmissibilityReport rid = admissibility_check(*D, identity_curve(), 1e-6);
  CHECK(rid.pass);
  // for r = -d on the disc: r(phi(1-t)) = -t < -t/2 for all t in (0, 1.5)
  // (with the algebraic r = |z|^2-1: -2t+t^2 < -t/2 iff t < 1.5)
  CHECK(rid.delta1 == doctest::Approx(0.5));  // scan window cap

  CHECK_THROWS_AS(lemma3_curve(*D, c1({0.5, 0}), c1({-1, 0})), std::runtime_error);
}

TEST_CASE("lemma3 curve on the ellipse stays on the real axis") {
  auto E = planar_ellipse();
  PolynomialCurve pc = lemma3_curve(*E, c1({2, 0}), c1({-2, 0}));
  CHECK((pc.eval({1, 0}) - c1({2, 0})).norm() < 1e-10);
  CHECK((pc.deriv({1, 0}) - c1({1, 0})).norm() < 1e-10);  // -n_a = (1,0)
  for (int k = 0; k <= 40; ++k) {
    double t = -1.0 + 2.0 * k / 40.0;
    CVec p = pc.eval({t, 0});
    // stays near the major axis (the waypoint grid is not exactly centred)
    CHECK(std::fabs(p(0).imag()) < 0.02);
    if (k > 0 && k < 40) CHECK(E->signed_distance(p) > 0.0);
  }
}

TEST_CASE("lemma3 curve on the two-sphere in C^2") {
  auto B = std::make_shared<BallAmbient>(2);
  CVec a = c2({1, 0}, {0, 0});
  CVec b = c2({-1, 0}, {0, 0});
  PolynomialCurve pc = lemma3_curve(*B, a, b);
  CHECK((pc.eval({1, 0}) - a).norm() < 1e-10);
  CHECK((pc.eval({-1, 0}) - b).norm() < 1e-10);
  CHECK((pc.deriv({1, 0}) - c2({1, 0}, {0, 0})).norm() < 1e-10);
  CHECK((pc.deriv({-1, 0}) - c2({1, 0}, {0, 0})).norm() < 1e-10);
  CHECK(admissibility_check(*B, pc, 1e-6).pass);
}

TEST_CASE("a=b curve bends through the interior") {
  auto D = planar_disc();
  PolynomialCurve pc = lemma3_curve(*D, c1({1, 0}), c1({1 - 1e-12, 0}));
  AdmissibilityReport rep = admissibility_check(*D, pc, 1e-6);
  CHECK(rep.pass);
  // the loop must actually leave the endpoint region
  double far = 0.0;
  for (int k = 0; k <= 40; ++k)
    far = std::max(far, (pc.eval({-1 + 2.0 * k / 40.0, 0}) - pc.a).norm());
  CHECK(far > 0.4);
}

TEST_CASE("admissibility rejects a curve exiting the domain") {
  auto D = planar_disc();
  // scaled diameter curve phi(t) = 1.4 t exits the disc mid-way
  PolynomialCurve bad = identity_curve();
  bad.cheb[1] = c1({1.4, 0});
  bad.a = c1({1.4, 0});
  bad.b = c1({-1.4, 0});
  AdmissibilityReport rep = admissibility_check(*D, bad, 1e-6);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("perturbation family") {
  auto D = planar_disc();
  PolynomialCurve pc = lemma3_curve(*D, c1({1, 0}), c1({-1, 0}));

  SUBCASE("planar tangent space is trivial") {
    PolynomialCurve same = perturbed_disc(pc, c1({0, 0}), c1({0, 0}));
    for (size_t k = 0; k < pc.cheb.size(); ++k)
      CHECK((same.cheb[k] - pc.cheb[k]).norm() == 0.0);
    CHECK_THROWS_AS(perturbed_disc(pc, c1({0.1, 0}), c1({0, 0})), std::runtime_error);
  }

  SUBCASE("quadratic factors in C^2") {
    auto B = std::make_shared<BallAmbient>(2);
    CVec a = c2({1, 0}, {0, 0});
    CVec b = c2({-1, 0}, {0, 0});
    PolynomialCurve base = lemma3_curve(*B, a, b);
    CVec u = c2({0, 0}, {0.05, 0.02});  // tangent at a = e_1
    CVec v = c2({0, 0}, {-0.03, 0.01});
    PolynomialCurve pert = perturbed_disc(base, u, v);

    // endpoint values shift by exactly u and v
    CHECK((pert.eval({1, 0}) - (base.eval({1, 0}) + u)).norm() < 1e-12);
    CHECK((pert.eval({-1, 0}) - (base.eval({-1, 0}) + v)).norm() < 1e-12);

    // coefficient-level identity: difference is the stated quadratic
    for (size_t k = 0; k < pert.cheb.size(); ++k) {
      CVec expect = CVec::Zero(2);
      if (k == 0) expect = (3.0 / 8.0) * (u + v);
      if (k == 1) expect = 0.5 * (u - v);
      if (k == 2) expect = (1.0 / 8.0) * (u + v);
      CHECK((pert.cheb[k] - base.cheb[k] - expect).norm() < 1e-14);
    }

    // pointwise: the u-term vanishes to second order at zeta = -1
    for (double h : {1e-3, 1e-4}) {
      Complex zeta(-1 + h, 0);
      CVec diff = perturbed_disc(base, u, CVec::Zero(2)).eval(zeta) - base.eval(zeta);
      CHECK(diff.norm() < 0.3 * h * h * u.norm() + 1e-13);
    }

    // normal component is rejected
    CVec bad_u = c2({0.1, 0}, {0, 0});
    CHECK_THROWS_AS(perturbed_disc(base, bad_u, CVec::Zero(2)), std::runtime_error);
  }
}

TEST_CASE("interpolation solve") {
  auto D = planar_disc();

  SUBCASE("identity curve recovers the points directly") {
    PolynomialCurve pc = identity_curve();
    DiscInterpolation di = solve_interpolation(*D, pc, c1({0.99, 0}), c1({-0.99, 0}));
    CHECK(std::abs(di.zeta1 - Complex(0.99, 0)) < 1e-10);
    CHECK(std::abs(di.zeta2 - Complex(-0.99, 0)) < 1e-10);
    CHECK(di.u.norm() == 0.0);
    CHECK(di.residual < 1e-10);
  }

  SUBCASE("endpoints are the Newton fixed point") {
    PolynomialCurve pc = lemma3_curve(*D, c1({1, 0}), c1({-1, 0}));
    DiscInterpolation di = solve_interpolation(*D, pc, pc.a, pc.b);
    CHECK(std::abs(di.zeta1 - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(di.zeta2 - Complex(-1, 0)) < 1e-12);
    CHECK(di.iterations <= 1);
  }

  SUBCASE("ball in C^2 with tangent perturbations") {
    auto B = std::make_shared<BallAmbient>(2);
    CVec a = c2({1, 0}, {0, 0});
    CVec b = c2({-1, 0}, {0, 0});
    PolynomialCurve pc = lemma3_curve(*B, a, b);
    CVec z = c2({0.99, 0}, {0.005, 0});
    CVec w = c2({-0.99, 0}, {0, 0});
    DiscInterpolation di = solve_interpolation(*B, pc, z, w);
    CHECK(di.residual < 1e-10);
    CHECK((di.disc_map.eval(di.zeta1) - z).norm() < 1e-10);
    CHECK((di.disc_map.eval(di.zeta2) - w).norm() < 1e-10);
    CHECK(di.u.norm() > 1e-4);  // the second coordinate forces a perturbation
  }

  SUBCASE("faraway targets are rejected") {
    PolynomialCurve pc = lemma3_curve(*D, c1({1, 0}), c1({-1, 0}));
    CHECK_THROWS_AS(solve_interpolation(*D, pc, c1({30, 0}), c1({-30, 0})),
                    std::runtime_error);
  }
}

TEST_CASE("analytic Jacobian matches central differences") {
  auto B = std::make_shared<BallAmbient>(2);
  CVec a = c2({1, 0}, {0, 0});
  CVec b = c2({-1, 0}, {0, 0});
  PolynomialCurve pc = lemma3_curve(*B, a, b);
  InterpolationSystem sys(*B, pc);
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  CVec z = pc.a, w = pc.b;
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd X = sys.pack_seed();
    for (int i = 0; i < X.size(); ++i) X(i) += Complex(u(rng), u(rng));
    Eigen::MatrixXcd J = sys.jacobian(X);
    double scale = J.norm();
    for (int col = 0; col < X.size(); ++col) {
      Eigen::VectorXcd Xp = X, Xm = X;
      Xp(col) += h;
      Xm(col) -= h;
      Eigen::VectorXcd diff =
          (sys.residual(Xp, z, w) - sys.residual(Xm, z, w)) / (2.0 * h);
      CHECK((diff - J.col(col)).norm() <= 1e-6 * scale);
    }
  }
}

TEST_CASE("pullback domain of the disc diameter curve") {
  auto D = planar_disc();
  PolynomialCurve pc = identity_curve();
  PullbackDomain pb = pullback_domain(*D, pc, 0.2, 0.1);
  CHECK(pb.rectangle_margin < 0.0);
  CHECK_FALSE(pb.left_side_straight);

  // contains the guaranteed rectangle
  for (double x : {-0.89, -0.4, 0.0, 0.55, 0.89}) {
    for (double y : {-0.095, 0.0, 0.095}) {
      CHECK(pb.base->contains({x, y}));
    }
  }
  // the level-curve part coincides with the unit circle away from corners
  double t_right = pb.base->nearest_parameter({0.999, 0});
  CHECK(std::fabs(std::abs(pb.base->boundary_point(t_right)) - 1.0) < 1e-6);
  // and the straight part with |y| = 0.1
  double t_top = pb.base->nearest_parameter({0.0, 0.12});
  CHECK(std::fabs(pb.base->boundary_point(t_top).imag() - 0.1) < 1e-6);

  // symmetric curve: the pullback is symmetric about the real axis
  for (double t : {0.1, 0.3, 0.6, 0.8}) {
    Complex p = pb.base->boundary_point(t);
    CHECK(std::fabs(pb.base->signed_distance(std::conj(p))) < 1e-8);
  }
}

TEST_CASE("pullback requests shrinking when the tube is too thick") {
  auto D = planar_disc();
  PolynomialCurve pc = identity_curve();
  // delta_prime = 1.2 pushes the horizontal segments outside the disc
  CHECK_THROWS_AS(pullback_domain(*D, pc, 0.2, 1.2), std::runtime_error);
}

TEST_CASE("certificates on the unit disc") {
  auto D = planar_disc();
  DiscBuilder builder(D, c1({1, 0}), c1({-1, 0}));

  SUBCASE("the spec pair (0.9, -0.9)") {
    BoundCertificate cert = builder.certify(c1({0.9, 0}), c1({-0.9, 0}));
    double oracle = 1.8 / 1.81;
    CHECK(cert.upper >= oracle - 1e-6);
    CHECK(cert.one_minus_upper > 0.0);
    CHECK(cert.theta_interp_error < 1e-6);
    CHECK(cert.min_theta_distance > 0.0);
    CHECK(cert.measured_C > 0.0);
    CHECK(cert.sup_eta_prime > 0.0);
    // symmetric real pair: radial projections land on the curved cap
    CHECK(cert.q_on_zero_level);
    // gap report
    CHECK(cert.upper - oracle >= 0.0);
  }

  SUBCASE("a moderate sweep keeps positive kappa") {
    double kappa = 1e30;
    for (double dz : {0.2, 0.3, 0.4}) {
      for (double dw : {0.25, 0.35}) {
        BoundCertificate cert = builder.certify(c1({1 - dz, 0}), c1({-(1 - dw), 0}));
        double oracle = lempert::metrics::lempert_disc({1 - dz, 0}, {-(1 - dw), 0});
        CHECK(cert.upper >= oracle - 1e-6);
        CHECK(cert.theta_interp_error < 1e-6);
        CHECK(cert.min_theta_distance > 0.0);
        kappa = std::min(kappa, cert.one_minus_upper / (cert.d_z * cert.d_w));
      }
    }
    CHECK(kappa > 0.0);
  }

  SUBCASE("certificate serializes to json") {
    BoundCertificate cert = builder.certify(c1({0.7, 0}), c1({-0.7, 0}));
    std::string text = certificate_to_json(cert);
    CHECK(text.find("\"upper\"") != std::string::npos);
    CHECK(text.find("chebyshev") != std::string::npos);
  }
}

TEST_CASE("certificates on the ellipse against the conformal oracle") {
  auto E = planar_ellipse();
  auto map = conformal::build_riemann_map(E->planar(), {0, 0});
  DiscBuilder builder(E, c1({2, 0}), c1({-2, 0}));
  for (double s : {0.35, 0.5, 0.65}) {
    Complex z(2 * s, 0), w(-2 * s, 0);
    BoundCertificate cert = builder.certify(c1(z), c1(w));
    double oracle = metrics::lempert_planar(E->planar(), *map, z, w);
    CHECK(cert.upper >= oracle - 1e-6);
    CHECK(cert.theta_interp_error < 1e-6);
    CHECK(cert.min_theta_distance > 0.0);
  }
}

TEST_CASE("certificates on the ball against the exact formula") {
  auto B = std::make_shared<BallAmbient>(2);
  DiscBuilder builder(B, c2({1, 0}, {0, 0}), c2({-1, 0}, {0, 0}));
  for (auto [s, off] : {std::pair<double, double>{0.7, 0.0},
                        {0.75, 0.01},
                        {0.6, -0.02}}) {
    CVec z = c2({s, 0}, {off, 0});
    CVec w = c2({-0.7, 0}, {0, 0});
    BoundCertificate cert = builder.certify(z, w);
    double oracle = metrics::lempert_ball(z, w);
    CHECK(cert.upper >= oracle - 1e-6);
    CHECK(cert.theta_interp_error < 1e-6);
    CHECK(cert.min_theta_distance > 0.0);
    CHECK(cert.one_minus_upper / (cert.d_z * cert.d_w) > 0.0);
  }
}

TEST_CASE("interior-anchor variant") {
  auto D = planar_disc();
  DiscBuilder builder = DiscBuilder::from_interior(D, c1({0, 0}), c1({1, 0}));
  CHECK(builder.curve().interior_end);
  // the boundary endpoint holds the zeta = +1 slot: near-boundary point first
  BoundCertificate cert = builder.certify(c1({0.7, 0}), c1({0.05, 0.02}));
  double oracle = lempert::metrics::lempert_disc({0.7, 0}, {0.05, 0.02});
  CHECK(cert.upper >= oracle - 1e-6);
  CHECK(cert.theta_interp_error < 1e-6);
  CHECK(cert.min_theta_distance > 0.0);
  CHECK(cert.delta_prime_used > 0.0);
}

TEST_CASE("interior mapping invariant at full sampling") {
  auto D = planar_disc();
  BuilderOptions opt;
  opt.theta_samples = 1000;
  DiscBuilder builder(D, c1({1, 0}), c1({-1, 0}), opt);
  BoundCertificate cert = builder.certify(c1({0.8, 0}), c1({-0.75, 0}));
  CHECK(cert.min_theta_distance > 0.0);  // 1000-point sample maps into D
}

TEST_CASE("theorem1 constant estimate") {
  Domain d = build_domain(DomainSpec::unit_disc());
  auto m = conformal::build_riemann_map(d, {0, 0});
  std::vector<metrics::MetricSample> rows;
  for (double dz : {1e-2, 1e-3, 1e-4}) {
    for (double dw : {1e-2, 1e-3, 1e-4}) {
      rows.push_back(metrics::boundary_ratios(d, *m, {1 - dz, 0}, {-(1 - dw), 0}));
    }
  }
  ConstantEstimate est = theorem1_constant(rows);
  CHECK(est.samples == rows.size());
  CHECK(est.c > 0.49);  // Möbius asymptotics: ratio tends to 1/2 from above
  CHECK(est.c < 0.75);
}
