#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lempert/geometry.hpp"

namespace lempert {

// Closed Jordan curve t in [0,1) -> C, counterclockwise, with tangent.
// Samples are taken at the midpoints t_j = (j+1/2)/n so that parametrizations
// with an isolated derivative singularity at t = 0 stay evaluable.
struct BoundaryCurve {
  std::function<Complex(double)> gamma;
  std::function<Complex(double)> dgamma;
  double holder_exponent = 1.0;
  int sample_count = 512;

  std::vector<double> params;     // midpoint parameters
  std::vector<Complex> points;    // gamma at params
  std::vector<Complex> tangents;  // dgamma at params
  double holder_constant = 0.0;   // max sampled |g'(s)-g'(t)| / dist^eps
  double min_speed = 0.0;
  double max_speed = 0.0;
  double length = 0.0;

  // Validates closure, nonvanishing tangent, orientation and simplicity.
  // Throws std::runtime_error on violation ("non-simple curve", ...).
  static BoundaryCurve build(std::function<Complex(double)> gamma,
                             std::function<Complex(double)> dgamma,
                             double holder_exponent, int sample_count);
};

struct RegularityBudget {
  double epsilon = 0.5;     // gradient lower bound; 1/epsilon bounds the Hölder constant
  double band_width = 0.1;  // width of the boundary band U
};

struct RegularityReport {
  double gradient_min = 0.0;
  double holder_constant = 0.0;
  bool band_injective = true;
  bool pass = false;
  std::string message;
};

class Domain {
 public:
  Domain(BoundaryCurve boundary,
         std::function<double(Complex)> defining_fn = nullptr,
         std::function<Complex(Complex)> defining_grad = nullptr);

  const BoundaryCurve& boundary() const { return boundary_; }
  const BBox& bounding_box() const { return bbox_; }
  double diameter() const { return diameter_; }
  double area() const { return area_; }
  Complex interior_anchor() const { return anchor_; }

  bool has_defining_function() const { return static_cast<bool>(defining_fn_); }
  double defining_function(Complex z) const;
  Complex defining_gradient(Complex z) const;
  std::function<double(Complex)> raw_defining_function() const { return defining_fn_; }
  std::function<Complex(Complex)> raw_defining_gradient() const { return defining_grad_; }

  // +dist to the boundary inside, -dist outside; ties broken toward the
  // smallest boundary parameter.
  double signed_distance(Complex z) const;
  // Parameter of the nearest boundary point.
  double nearest_parameter(Complex z) const;
  bool contains(Complex z) const;

  // i*gamma'(t)/|gamma'(t)|; unit, points into the domain.
  Complex inward_normal_at(double t) const;

  Complex boundary_point(double t) const { return boundary_.gamma(t); }
  Complex boundary_tangent(double t) const { return boundary_.dgamma(t); }

 private:
  BoundaryCurve boundary_;
  std::function<double(Complex)> defining_fn_;
  std::function<Complex(Complex)> defining_grad_;
  BBox bbox_;
  double diameter_ = 0.0;
  double area_ = 0.0;
  Complex anchor_{0.0, 0.0};
};

struct DomainSpec {
  enum class Kind {
    Disc,
    Ellipse,
    SmoothedRectangle,
    PerturbedEllipse,
    ParamTable,
    ImageMap,
  };

  Kind kind = Kind::Disc;
  Complex center{0.0, 0.0};
  double radius = 1.0;
  double a = 1.0, b = 1.0;          // ellipse half-axes
  double exponent = 4.0;            // smoothed rectangle superellipse exponent (even)
  double amplitude = 0.0;           // perturbed ellipse radial bump
  int frequency = 0;
  std::vector<std::array<double, 3>> table;  // (t, re, im) rows
  std::function<Complex(Complex)> map;       // image of the closed unit disc
  std::function<Complex(Complex)> dmap;
  double holder_exponent = 1.0;
  int sample_count = 512;

  static DomainSpec disc(Complex center, double radius);
  static DomainSpec unit_disc() { return disc({0.0, 0.0}, 1.0); }
  static DomainSpec ellipse(double a, double b);
  static DomainSpec smoothed_rectangle(double width, double height, double exponent = 4.0);
  static DomainSpec perturbed_ellipse(double a, double b, double amplitude, int frequency);
};

Domain build_domain(const DomainSpec& spec);

// JSON document interface, e.g.
//   {"kind":"disc","center":[0,0],"radius":1}
//   {"kind":"ellipse","a":2,"b":1}
//   {"kind":"smoothed_rectangle","width":4,"height":2,"exponent":4}
//   {"kind":"perturbed_ellipse","a":2,"b":1,"amplitude":0.05,"frequency":5}
//   {"kind":"param_table","points":[[t,re,im],...]} or {"csv":"path"}
//   {"kind":"image_map","map":"example4"}
Domain build_domain_json(const std::string& json_text);

// Reads a (t, re, im) CSV parametrization table.
std::vector<std::array<double, 3>> read_param_table_csv(const std::string& path);

// Rigid motion rho_a(z) = (z-a) e^{i theta_a} placing a at 0 with the inward
// normal along +1.  `a` must lie on the boundary within 1e-6 * diameter.
std::pair<Domain, RigidMotion> normalize_at(const Domain& domain, Complex a);

// Comparison cone domains from the boundary-regularity argument:
// inner = smoothed {|z| < 2 delta, x > |y|^{1+delta}},
// outer region G^e = complement of closure(-inner).
struct ConeDomainPair {
  double delta = 0.0;
  std::shared_ptr<Domain> inner;
  std::shared_ptr<Domain> outer_complement;  // the reflected domain -G^i

  bool in_inner(Complex z) const;
  bool in_outer(Complex z) const;  // membership in G^e
};

ConeDomainPair cone_domains(double delta);

RegularityReport regularity_check(const Domain& domain, const RegularityBudget& budget);

}  // namespace lempert
