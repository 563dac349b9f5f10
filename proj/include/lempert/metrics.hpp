#pragma once

#include <Eigen/Core>
#include <iosfwd>

#include "lempert/conformal.hpp"
#include "lempert/domain.hpp"

namespace lempert::metrics {

using CVec = Eigen::VectorXcd;

// Lempert value carrying 1-l as a separately computed difference; the
// boundary-distance ratios need 1-l accurately when l is close to 1.
struct LempertValue {
  double l = 0.0;
  double one_minus = 1.0;
};

// artanh(l) computed from the stable pair as log((2 - u)/u)/2, u = 1-l.
double artanh_stable(const LempertValue& v);

// Möbius pseudodistance |(z-w)/(1 - conj(z) w)| of the unit disc.
double lempert_disc(Complex z, Complex w);
LempertValue lempert_disc_pair(Complex z, Complex w);

// Pullback through a conformal map to the disc; exact up to map accuracy.
double lempert_planar(const Domain& d, const conformal::ConformalMap& m, Complex z,
                      Complex w);
LempertValue lempert_planar_pair(const Domain& d, const conformal::ConformalMap& m,
                                 Complex z, Complex w);

// Kobayashi-Royden metric at (z; 1): |psi'(z)| / (1 - |psi(z)|^2).
double kobayashi_royden(const Domain& d, const conformal::ConformalMap& m, Complex z);

// artanh of the Lempert function; on planar domains this is the Kobayashi
// distance itself.
double kobayashi_distance(const Domain& d, const conformal::ConformalMap& m, Complex z,
                          Complex w);

// On simply connected planar domains the Carathéodory distance coincides with
// the Kobayashi distance, so it is exposed as an alias rather than a solver.
inline double caratheodory_distance(const Domain& d, const conformal::ConformalMap& m,
                                    Complex z, Complex w) {
  return kobayashi_distance(d, m, z, w);
}

// Unit-ball formula in C^n: l^2 = 1 - (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2.
double lempert_ball(const CVec& z, const CVec& w);
LempertValue lempert_ball_pair(const CVec& z, const CVec& w);

struct MetricSample {
  Complex z, w;
  double lempert = 0.0;
  double one_minus_lempert = 1.0;
  double d_z = 0.0, d_w = 0.0;
  double kobayashi = 0.0;
  double theorem1 = 0.0;   // (1-l) / (d_z d_w)
  double estimate2 = 0.0;  // (1-l) / d_z
  double star_gap = 0.0;   // 2k - log(1+|z-w|/d_z) - log(1+|z-w|/d_w)
  double lower_gap = 0.0;  // 2k + log d_z + log d_w
};

MetricSample boundary_ratios(const Domain& d, const conformal::ConformalMap& m, Complex z,
                             Complex w);

// Fills a sample from an externally supplied Lempert value (ball oracle or
// explicit formulas) and the two boundary distances.
MetricSample ratios_from_value(Complex z, Complex w, const LempertValue& lv, double d_z,
                               double d_w);

// kappa_D(z;1) * d_D(z); lies in [1/4, 1] on simply connected domains.
double estimate1_ratio(const Domain& d, const conformal::ConformalMap& m, Complex z);

void write_metric_csv_header(std::ostream& out);
void write_metric_csv_row(std::ostream& out, const MetricSample& s);

}  // namespace lempert::metrics
