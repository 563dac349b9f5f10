#include "lempert/metrics.hpp"

#include <ostream>

namespace lempert::metrics {

double artanh_stable(const LempertValue& v) {
  if (!(v.one_minus > 0.0)) throw std::runtime_error("artanh: argument reached 1");
  return 0.5 * (std::log(2.0 - v.one_minus) - std::log(v.one_minus));
}

LempertValue lempert_disc_pair(Complex z, Complex w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
    throw std::runtime_error("lempert_disc: arguments must lie in the open unit disc");
  Complex den = 1.0 - std::conj(z) * w;
  double num_abs = std::abs(z - w);
  double den_abs = std::abs(den);
  LempertValue v;
  v.l = num_abs / den_abs;
  // |1 - conj(z) w|^2 - |z-w|^2 = (1-|z|^2)(1-|w|^2), so 1-l is computed as a
  // product of small factors instead of a catastrophic difference.
  v.one_minus =
      (1.0 - std::norm(z)) * (1.0 - std::norm(w)) / (den_abs * (den_abs + num_abs));
  return v;
}

double lempert_disc(Complex z, Complex w) { return lempert_disc_pair(z, w).l; }

LempertValue lempert_planar_pair(const Domain& d, const conformal::ConformalMap& m,
                                 Complex z, Complex w) {
  (void)d;
  return lempert_disc_pair(m.to_disc(z), m.to_disc(w));
}

double lempert_planar(const Domain& d, const conformal::ConformalMap& m, Complex z,
                      Complex w) {
  return lempert_planar_pair(d, m, z, w).l;
}

double kobayashi_royden(const Domain& d, const conformal::ConformalMap& m, Complex z) {
  (void)d;
  Complex psi = m.to_disc(z);
  Complex dpsi = m.to_disc_derivative(z);
  return std::abs(dpsi) / (1.0 - std::norm(psi));
}

double kobayashi_distance(const Domain& d, const conformal::ConformalMap& m, Complex z,
                          Complex w) {
  return artanh_stable(lempert_planar_pair(d, m, z, w));
}

LempertValue lempert_ball_pair(const CVec& z, const CVec& w) {
  double nz = z.squaredNorm(), nw = w.squaredNorm();
  if (nz >= 1.0 || nw >= 1.0)
    throw std::runtime_error("lempert_ball: arguments must lie in the open unit ball");
  Complex inner = (w.adjoint() * z)(0, 0);  // <z,w> = sum z_i conj(w_i)
  double den = std::norm(1.0 - inner);
  double one_minus_l2 = (1.0 - nz) * (1.0 - nw) / den;
  double l2 = 1.0 - one_minus_l2;
  LempertValue v;
  v.l = l2 > 0.0 ? std::sqrt(l2) : 0.0;
  v.one_minus = one_minus_l2 / (1.0 + v.l);
  return v;
}

double lempert_ball(const CVec& z, const CVec& w) { return lempert_ball_pair(z, w).l; }

MetricSample ratios_from_value(Complex z, Complex w, const LempertValue& lv, double d_z,
                               double d_w) {
  if (!(d_z > 0.0) || !(d_w > 0.0))
    throw std::runtime_error("boundary ratios: points must be interior");
  MetricSample s;
  s.z = z;
  s.w = w;
  s.lempert = lv.l;
  s.one_minus_lempert = lv.one_minus;
  s.d_z = d_z;
  s.d_w = d_w;
  s.kobayashi = artanh_stable(lv);
  s.theorem1 = lv.one_minus / (d_z * d_w);
  s.estimate2 = lv.one_minus / d_z;
  double sep = std::abs(z - w);
  s.star_gap = 2.0 * s.kobayashi - std::log1p(sep / d_z) - std::log1p(sep / d_w);
  s.lower_gap = 2.0 * s.kobayashi + std::log(d_z) + std::log(d_w);
  return s;
}

MetricSample boundary_ratios(const Domain& d, const conformal::ConformalMap& m, Complex z,
                             Complex w) {
  if (z == w) throw std::runtime_error("boundary ratios: z and w must differ");
  LempertValue lv = lempert_planar_pair(d, m, z, w);
  return ratios_from_value(z, w, lv, d.signed_distance(z), d.signed_distance(w));
}

double estimate1_ratio(const Domain& d, const conformal::ConformalMap& m, Complex z) {
  return kobayashi_royden(d, m, z) * d.signed_distance(z);
}

void write_metric_csv_header(std::ostream& out) {
  out << "re_z,im_z,re_w,im_w,l,d_z,d_w,theorem1,estimate2,star_gap,lower_gap\n";
}

void write_metric_csv_row(std::ostream& out, const MetricSample& s) {
  out.precision(15);
  out << s.z.real() << ',' << s.z.imag() << ',' << s.w.real() << ',' << s.w.imag() << ','
      << s.lempert << ',' << s.d_z << ',' << s.d_w << ',' << s.theorem1 << ','
      << s.estimate2 << ',' << s.star_gap << ',' << s.lower_gap << '\n';
}

}  // namespace lempert::metrics
