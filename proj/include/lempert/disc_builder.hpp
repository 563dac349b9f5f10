#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lempert/conformal.hpp"
#include "lempert/domain.hpp"
#include "lempert/metrics.hpp"

namespace lempert::discs {

using CVec = Eigen::VectorXcd;

// Bounded domain in C^n seen through what the curve construction needs:
// signed distance, inward normals, an interior anchor.
class AmbientDomain {
 public:
  virtual ~AmbientDomain() = default;
  virtual int dim() const = 0;
  virtual double signed_distance(const CVec& z) const = 0;
  virtual CVec inward_normal(const CVec& boundary_point) const = 0;
  virtual CVec interior_anchor() const = 0;
  virtual double diameter() const = 0;
};

class PlanarAmbient : public AmbientDomain {
 public:
  explicit PlanarAmbient(Domain d) : domain_(std::move(d)) {}
  int dim() const override { return 1; }
  double signed_distance(const CVec& z) const override {
    return domain_.signed_distance(z(0));
  }
  CVec inward_normal(const CVec& p) const override;
  CVec interior_anchor() const override;
  double diameter() const override { return domain_.diameter(); }
  const Domain& planar() const { return domain_; }

 private:
  Domain domain_;
};

class BallAmbient : public AmbientDomain {
 public:
  explicit BallAmbient(int n) : n_(n) {}
  int dim() const override { return n_; }
  double signed_distance(const CVec& z) const override { return 1.0 - z.norm(); }
  CVec inward_normal(const CVec& p) const override { return -p / p.norm(); }
  CVec interior_anchor() const override { return CVec::Zero(n_); }
  double diameter() const override { return 2.0; }

 private:
  int n_;
};

// Polynomial map C -> C^n in the Chebyshev basis, carrying the endpoint
// interpolation data phi(1)=a, phi(-1)=b, phi'(1)=-n_a, phi'(-1)=n_b.
struct PolynomialCurve {
  int dim = 1;
  std::vector<CVec> cheb;  // cheb[k] in C^n, polynomial sum_k cheb[k] T_k
  CVec a, b;
  CVec normal_a, normal_b;
  bool interior_end = false;  // the zeta = -1 endpoint is an interior anchor
  double derivative_deviation = 0.0;

  int degree() const { return static_cast<int>(cheb.size()) - 1; }
  CVec eval(Complex zeta) const;
  CVec deriv(Complex zeta) const;
};

struct Lemma3Options {
  int max_degree = 64;  // Chebyshev truncation cap
  std::vector<int> degree_ladder{8, 12, 16, 24, 32, 48, 64};
  std::vector<double> waypoint_speeds{1.0, 0.6, 0.35, 0.2};
  double admissibility_eps = 1e-6;  // smallest endpoint scale scanned
};

struct AdmissibilityReport {
  bool pass = false;
  double delta1 = 0.0;  // endpoint window at zeta = +1
  double delta2 = 0.0;  // endpoint window at zeta = -1
  double delta3 = 0.0;  // containment window min(delta1, delta2)
  double containment_margin = 0.0;
  double failing_t = std::numeric_limits<double>::quiet_NaN();
  std::string message;
};

// Near-endpoint criterion r(phi(1-t)) < -t/2 (with the signed-distance
// defining function r = -d) scanned on a log grid down to eps, plus dense
// interior containment on [-1+delta3, 1-delta3].
AdmissibilityReport admissibility_check(const AmbientDomain& domain,
                                        const PolynomialCurve& curve, double eps);

// Boundary-to-boundary curve: C^2 quintic Hermite base bent through an
// interior waypoint, Chebyshev-truncated derivative with order-1 endpoint
// matching, degree raised until the admissibility check passes.
PolynomialCurve lemma3_curve(const AmbientDomain& domain, const CVec& a, const CVec& b,
                             const Lemma3Options& opt = {});

// Second compactness case: the zeta = -1 end sits at an interior anchor
// instead of a boundary point.
PolynomialCurve lemma3_curve_from_interior(const AmbientDomain& domain, const CVec& anchor,
                                           const CVec& b, const Lemma3Options& opt = {});

// phi_{u,v}(zeta) = phi(zeta) + ((zeta+1)/2)^2 u + ((zeta-1)/2)^2 v with
// u, v in the complex tangent spaces at a and b ({0} in the plane).
PolynomialCurve perturbed_disc(const PolynomialCurve& curve, const CVec& u, const CVec& v);

// Orthonormal basis of the complex tangent space at a boundary point with
// the given inward normal (n-1 vectors; empty for n = 1).
std::vector<CVec> complex_tangent_basis(const CVec& normal);

// The interpolation system Phi(zeta1, u, zeta2, v) = (z, w) with unknowns
// packed as X = (zeta1, alpha..., zeta2, beta...) in C^{2n}.
class InterpolationSystem {
 public:
  InterpolationSystem(const AmbientDomain& domain, const PolynomialCurve& curve);
  int unknowns() const { return 2 * n_; }
  Eigen::VectorXcd pack_seed() const;  // (1, 0, -1, 0)
  CVec tangent_u(const Eigen::VectorXcd& X) const;
  CVec tangent_v(const Eigen::VectorXcd& X) const;
  Eigen::VectorXcd residual(const Eigen::VectorXcd& X, const CVec& z, const CVec& w) const;
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& X) const;

 private:
  const PolynomialCurve* curve_;
  int n_;
  std::vector<CVec> basis_a_, basis_b_;
};

struct DiscInterpolation {
  Complex zeta1{1.0, 0.0}, zeta2{-1.0, 0.0};
  CVec u, v;                 // solved tangent perturbations
  PolynomialCurve disc_map;  // the perturbed curve psi_{z,w}
  double residual = 0.0;
  int iterations = 0;
  Complex p1{0.0, 0.0}, p2{0.0, 0.0};  // unit-disc preimages (bound pipeline)
  double upper_bound = 1.0;
};

// Newton iteration on the interpolation system seeded at (1,0,-1,0);
// residual below 1e-10 or failure after 50 steps.
DiscInterpolation solve_interpolation(const AmbientDomain& domain,
                                      const PolynomialCurve& curve, const CVec& z,
                                      const CVec& w);

struct PullbackOptions {
  double delta = 0.2;
  double delta_prime = 0.1;
  int max_halvings = 8;
  int heights = 96;          // level-curve resolution per side
  int target_knots = 640;    // spline knots along the assembled boundary
  int map_sample_count = 512;
};

struct PullbackDomain {
  std::shared_ptr<Domain> base;  // the corner-smoothed H
  double delta = 0.0;
  double delta_prime = 0.0;
  bool left_side_straight = false;
  double rectangle_margin = 0.0;  // max rho over the guaranteed rectangle (< 0)
};

// Planar pullback H = {rho < 0} cut to the rectangle {|x|<1+delta,
// |y|<delta_prime}, rho = r(psi(zeta)); level curves must cross each sampled
// horizontal segment exactly once near each boundary endpoint.  Throws a
// shrink request when the geometry checks fail at this delta.
PullbackDomain pullback_domain(const AmbientDomain& domain, const PolynomialCurve& psi,
                               double delta, double delta_prime,
                               const PullbackOptions& opt = {});

struct BoundCertificate {
  DiscInterpolation interp;
  double upper = 1.0;
  double one_minus_upper = 0.0;
  double d_z = 0.0, d_w = 0.0;
  double measured_C = 0.0;       // max_j d_D / d_disc(p_j)
  double sup_eta_prime = 0.0;    // sampled sup of |eta'| over the disc
  double theta_interp_error = 0.0;
  double min_theta_distance = 0.0;  // sampled interior-mapping margin
  bool q_on_zero_level = true;
  double q_level_defect = 0.0;
  double delta_used = 0.0, delta_prime_used = 0.0;
  std::string failure_stage;  // empty on success
};

std::string certificate_to_json(const BoundCertificate& cert);

struct BuilderOptions {
  Lemma3Options lemma3;
  PullbackOptions pullback;
  int theta_samples = 240;      // interior-mapping sample budget per certificate
  double collar_margin = 1e-5;  // required clearance of zeta_j inside H
};

// The constructive upper-bound pipeline for one anchor pair (a, b):
// curve -> interpolation -> pullback -> Riemann map -> Möbius distance.
// In the plane u = v = 0, so the pullback domain and its map are shared
// across pairs; in higher dimension they are rebuilt per pair.
class DiscBuilder {
 public:
  DiscBuilder(std::shared_ptr<const AmbientDomain> domain, CVec a, CVec b,
              BuilderOptions opt = {});
  // Interior-anchor variant (second compactness case).
  static DiscBuilder from_interior(std::shared_ptr<const AmbientDomain> domain,
                                   CVec anchor, CVec b, BuilderOptions opt = {});

  const PolynomialCurve& curve() const { return curve_; }
  BoundCertificate certify(const CVec& z, const CVec& w);

 private:
  DiscBuilder(std::shared_ptr<const AmbientDomain> domain, PolynomialCurve curve,
              BuilderOptions opt);

  std::shared_ptr<const AmbientDomain> domain_;
  PolynomialCurve curve_;
  BuilderOptions opt_;
  // cached shared pullback for the planar case
  std::optional<PullbackDomain> cached_pullback_;
  std::shared_ptr<conformal::NumericalRiemannMap> cached_map_;
};

// Convenience wrapper: builds the anchor pair's DiscBuilder and certifies one
// pair (z near a, w near b).
BoundCertificate lempert_upper_bound(std::shared_ptr<const AmbientDomain> domain,
                                     const CVec& z, const CVec& w, const CVec& a,
                                     const CVec& b, const BuilderOptions& opt = {});

struct ConstantEstimate {
  double c = 0.0;
  Complex at_z, at_w;
  size_t samples = 0;
};

// Minimum of the (1-l)/(d_z d_w) ratio over a sample schedule.
ConstantEstimate theorem1_constant(const std::vector<metrics::MetricSample>& rows);

}  // namespace lempert::discs
