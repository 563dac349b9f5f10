#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lempert/domain.hpp"

namespace lempert::conformal {

struct MapDiagnostics {
  double roundtrip_max = 0.0;       // |inverse(forward(z)) - z| over probes
  double cr_residual_max = 0.0;     // finite-difference Cauchy-Riemann defect
  double normalization_error = 0.0; // |psi(center)| before the exact recentering
  double szego_norm = 0.0;          // S(a,a); forward derivative at the center is 2 pi S(a,a)
  int iterations = 0;               // conjugation sweeps (Theodorsen path only)
  std::string method;
};

// Conformal equivalence between a planar Jordan domain and the unit disc.
// to_disc is the direction domain -> D regardless of how the map was
// constructed; map_forward/map_inverse follow the map's declared orientation.
class ConformalMap {
 public:
  virtual ~ConformalMap() = default;
  virtual const Domain& domain() const = 0;
  virtual Complex to_disc(Complex z) const = 0;
  virtual Complex to_disc_derivative(Complex z) const = 0;
  virtual Complex from_disc(Complex w) const = 0;
  virtual bool disc_is_source() const = 0;
};

struct ForwardValue {
  Complex value;
  Complex derivative;
};

ForwardValue map_forward(const ConformalMap& m, Complex z);
Complex map_inverse(const ConformalMap& m, Complex w);

// Möbius automorphism z -> (z - a)/(1 - conj(a) z) of the unit disc.
class MoebiusMap : public ConformalMap {
 public:
  explicit MoebiusMap(Complex a);
  const Domain& domain() const override;
  Complex to_disc(Complex z) const override;
  Complex to_disc_derivative(Complex z) const override;
  Complex from_disc(Complex w) const override;
  bool disc_is_source() const override { return false; }
  Complex parameter() const { return a_; }

 private:
  Complex a_;
};

std::shared_ptr<MoebiusMap> disc_automorphism(Complex a);

struct RiemannOptions {
  enum class Method { kIntegralEquation, kTheodorsen };
  Method method = Method::kIntegralEquation;
  int eval_upsample = 16;        // evaluation tables hold upsample * N nodes
  double collar_factor = 1e-6;   // refusal collar, relative to the diameter
  double self_check_tol = 1e-4;  // construction-time roundtrip gate
  int conjugation_max_iter = 400;
  double conjugation_tol = 1e-13;
};

// Numerical Riemann map psi: D -> unit disc with psi(center) = 0 and
// psi'(center) > 0.  The boundary correspondence is solved by the Szegő
// kernel second-kind integral equation (Nyström, trapezoid at the boundary
// samples); a Theodorsen conjugation iteration is available for starlike
// domains.  Interior values come from a compensated Cauchy integral over an
// upsampled correspondence table; the inverse adds a Newton polish.
class NumericalRiemannMap : public ConformalMap {
 public:
  static std::shared_ptr<NumericalRiemannMap> build(const Domain& domain, Complex center,
                                                    const RiemannOptions& opt = {});

  const Domain& domain() const override { return domain_; }
  Complex to_disc(Complex z) const override;
  Complex to_disc_derivative(Complex z) const override;
  Complex from_disc(Complex w) const override;
  bool disc_is_source() const override { return false; }

  Complex center() const { return center_; }
  double collar() const { return collar_abs_; }
  const MapDiagnostics& diagnostics() const { return diag_; }

  // Correspondence table (boundary parameter -> point on the unit circle) at
  // the domain's boundary samples.
  const std::vector<double>& correspondence_params() const { return corr_t_; }
  const std::vector<Complex>& correspondence_values() const { return corr_w_; }
  void write_correspondence_csv(std::ostream& out) const;

 private:
  NumericalRiemannMap(const Domain& domain, Complex center);

  void assemble_eval_tables(const std::vector<Complex>& f_nodes,
                            const RiemannOptions& opt);
  void run_self_check(const RiemannOptions& opt);

  Complex eval_raw(Complex z) const;         // uncentered Cauchy value
  Complex eval_raw_derivative(Complex z) const;
  Complex apply_norm(Complex s) const;       // exact Möbius/rotation normalization
  Complex apply_norm_derivative(Complex s, Complex sprime) const;
  Complex to_disc_unchecked(Complex z) const;
  Complex to_disc_derivative_unchecked(Complex z) const;

  Domain domain_;
  Complex center_;
  double collar_abs_ = 0.0;
  Complex norm_c0_{0.0, 0.0};  // psi_raw(center)
  Complex norm_rot_{1.0, 0.0}; // e^{-i theta_0}
  std::vector<Complex> gm_, dgm_;  // boundary samples at the eval nodes
  std::vector<Complex> om_, dom_;  // normalized correspondence and d/dt
  std::vector<double> corr_t_;
  std::vector<Complex> corr_w_;
  MapDiagnostics diag_;
};

std::shared_ptr<NumericalRiemannMap> build_riemann_map(const Domain& domain, Complex center,
                                                       const RiemannOptions& opt = {});

// Explicit conformal map F: unit disc -> F(D), with derivative; the inverse
// direction is solved by a damped Newton iteration.
class ExplicitDiscImage : public ConformalMap {
 public:
  ExplicitDiscImage(Domain image, std::function<Complex(Complex)> f,
                    std::function<Complex(Complex)> df, std::string name);
  const Domain& domain() const override { return image_; }
  Complex to_disc(Complex z) const override;  // F^{-1}
  Complex to_disc_derivative(Complex z) const override;
  Complex from_disc(Complex w) const override { return f_(w); }
  bool disc_is_source() const override { return true; }
  Complex disc_derivative(Complex w) const { return df_(w); }

 private:
  Domain image_;
  std::function<Complex(Complex)> f_, df_;
  std::string name_;
};

// The boundary-singular model domain: image of the unit disc under
// F(z) = 2z + (1-z) log(1-z) (principal branch; Re(1-z) > 0 on the disc).
// C^1-smooth boundary whose derivative modulus degenerates at F(1) = 2.
Complex example4_map(Complex z);
Complex example4_map_derivative(Complex z);
std::pair<Domain, std::shared_ptr<ExplicitDiscImage>> example4_domain(int sample_count = 512);

}  // namespace lempert::conformal
