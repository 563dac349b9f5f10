#include "lempert/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lempert::experiments {

namespace {

using conformal::ConformalMap;
using conformal::build_riemann_map;
using discs::BallAmbient;
using discs::BoundCertificate;
using discs::CVec;
using discs::DiscBuilder;
using discs::PlanarAmbient;
using metrics::LempertValue;

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

Domain domain_by_tag(const std::string& tag) {
  if (tag == "disc") return build_domain(DomainSpec::unit_disc());
  if (tag == "ellipse") return build_domain(DomainSpec::ellipse(2, 1));
  if (tag == "smoothed_rectangle")
    return build_domain(DomainSpec::smoothed_rectangle(4, 2, 4));
  if (tag == "example4") return conformal::example4_domain().first;
  throw std::runtime_error("unknown planar domain tag: " + tag);
}

// Lempert oracle for a planar test domain: exact Möbius algebra on the disc,
// the explicit inverse on the boundary-singular image, conformal pullback
// elsewhere.
struct PlanarOracle {
  std::string tag;
  Domain domain;
  std::shared_ptr<ConformalMap> map;  // empty for the exact disc

  static PlanarOracle make(const std::string& tag) {
    PlanarOracle o{tag, domain_by_tag(tag), nullptr};
    if (tag == "example4") {
      o.map = conformal::example4_domain().second;
    } else if (tag != "disc") {
      o.map = build_riemann_map(o.domain, o.domain.interior_anchor());
    }
    return o;
  }

  LempertValue lempert(Complex z, Complex w) const {
    if (!map) return metrics::lempert_disc_pair(z, w);
    return metrics::lempert_disc_pair(map->to_disc(z), map->to_disc(w));
  }
};

void add_verdict(ExperimentReport& rep, const std::string& name, bool pass, double value,
                 double threshold, const std::string& relation) {
  rep.verdicts.push_back({name, pass, value, threshold, relation});
}

double aggregate_min(const ExperimentReport& rep, int col,
                     const std::function<bool(const std::vector<double>&)>& filter) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows)
    if (filter(row)) m = std::min(m, row[col]);
  return m;
}

double aggregate_max(const ExperimentReport& rep, int col,
                     const std::function<bool(const std::vector<double>&)>& filter) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows)
    if (filter(row)) m = std::max(m, row[col]);
  return m;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  return cfg;
}

#define LEMPERT_CFG_FIELDS(X)                                                      \
  X(seed) X(k_min) X(k_max) X(final_ratio_threshold) X(control_band)              \
  X(anchor_pairs) X(stability_tol) X(disc_constant_floor) X(run_builder)          \
  X(builder_anchor_pairs) X(builder_validity_tol) X(dump_certificates)            \
  X(family_count) X(family_eps) X(family_amplitude) X(family_frequency)           \
  X(stabilization_tol) X(derivative_cap) X(samples_per_ring) X(koebe_tol)         \
  X(separation) X(pair_samples) X(star_gap_cap) X(lower_gap_cap)                  \
  X(estimate2_spread_cap)

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg = defaults_for(j.value("experiment", std::string("example4")));
#define LEMPERT_CFG_READ(field) \
  if (j.contains(#field)) cfg.field = j[#field].get<decltype(cfg.field)>();
  LEMPERT_CFG_FIELDS(LEMPERT_CFG_READ)
#undef LEMPERT_CFG_READ
  if (j.contains("domains")) cfg.domains = j["domains"].get<std::vector<std::string>>();
  if (j.contains("family")) cfg.family = j["family"].get<std::string>();
  if (j.contains("distance_ladder"))
    cfg.distance_ladder = j["distance_ladder"].get<std::vector<double>>();
  if (j.contains("builder_distances"))
    cfg.builder_distances = j["builder_distances"].get<std::vector<double>>();
  if (j.contains("sample_radii"))
    cfg.sample_radii = j["sample_radii"].get<std::vector<double>>();
  if (j.contains("ray_distances"))
    cfg.ray_distances = j["ray_distances"].get<std::vector<double>>();
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
#define LEMPERT_CFG_WRITE(field) j[#field] = field;
  LEMPERT_CFG_FIELDS(LEMPERT_CFG_WRITE)
#undef LEMPERT_CFG_WRITE
  j["domains"] = domains;
  j["family"] = family;
  j["distance_ladder"] = distance_ladder;
  j["builder_distances"] = builder_distances;
  j["sample_radii"] = sample_radii;
  j["ray_distances"] = ray_distances;
  return j.dump(2);
}

#undef LEMPERT_CFG_FIELDS

bool ExperimentReport::all_pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string ExperimentReport::csv_text() const {
  std::ostringstream os;
  os.precision(15);
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? ',' : '\n');
  }
  return os.str();
}

std::string ExperimentReport::json_text() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["aggregates"] = aggregates;
  j["row_count"] = rows.size();
  j["row_errors"] = row_errors;
  nlohmann::json vs = nlohmann::json::array();
  for (const Verdict& v : verdicts)
    vs.push_back({{"name", v.name},
                  {"pass", v.pass},
                  {"value", v.value},
                  {"threshold", v.threshold},
                  {"relation", v.relation}});
  j["verdicts"] = vs;
  j["all_pass"] = all_pass();
  return j.dump(2);
}

ExperimentReport run_example4(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "example4";
  rep.columns = {"control", "k", "w", "l", "d_w", "ratio"};

  auto [d4, m4] = conformal::example4_domain();
  std::vector<double> ratios;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    double w = 2.0 - std::pow(10.0, -k);
    try {
      Complex zeta = m4->to_disc({w, 0});
      double l = std::abs(zeta);
      double dw = d4.signed_distance({w, 0});
      if (!(dw > 0)) throw std::runtime_error("sample left the domain");
      double ratio = (1.0 - l) / dw;
      rep.rows.push_back({0, double(k), w, l, dw, ratio});
      ratios.push_back(ratio);
    } catch (const std::exception& ex) {
      rep.row_errors.push_back("k=" + std::to_string(k) + ": " + ex.what());
    }
  }

  // Control: the same schedule on the unit disc has a flat ratio near 1.
  double cmin = 1e30, cmax = -1e30;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    double w = 1.0 - std::pow(10.0, -k);
    LempertValue lv = metrics::lempert_disc_pair({0, 0}, {w, 0});
    double ratio = lv.one_minus / (1.0 - w);
    rep.rows.push_back({1, double(k), w, lv.l, 1.0 - w, ratio});
    cmin = std::min(cmin, ratio);
    cmax = std::max(cmax, ratio);
  }

  bool decreasing = ratios.size() >= 2;
  for (size_t i = 1; i < ratios.size(); ++i)
    if (!(ratios[i] < ratios[i - 1])) decreasing = false;
  bool complete = int(ratios.size()) == cfg.k_max - cfg.k_min + 1;

  rep.aggregates["first_ratio"] = ratios.empty() ? 0.0 : ratios.front();
  rep.aggregates["final_ratio"] = ratios.empty() ? 1e30 : ratios.back();
  rep.aggregates["control_min"] = cmin;
  rep.aggregates["control_max"] = cmax;

  add_verdict(rep, "rows_complete", complete, double(ratios.size()),
              double(cfg.k_max - cfg.k_min + 1), ">=");
  add_verdict(rep, "ratios_strictly_decreasing", decreasing, decreasing ? 1.0 : 0.0, 1.0,
              "==");
  add_verdict(rep, "final_ratio_below_threshold",
              !ratios.empty() && ratios.back() < cfg.final_ratio_threshold,
              rep.aggregates["final_ratio"], cfg.final_ratio_threshold, "<");
  bool control_ok =
      cmin >= 1.0 - cfg.control_band && cmax <= 1.0 + cfg.control_band;
  add_verdict(rep, "disc_control_flat", control_ok, cmax, 1.0 + cfg.control_band, "in band");

  plot::SvgPlot p;
  p.title = "Boundary ratio (1-l)/d along the real axis";
  p.xlabel = "k  (w = 2 - 10^-k; control w = 1 - 10^-k)";
  p.ylabel = "(1 - l)/d";
  p.filename = "example4_ratio.svg";
  plot::Series s1{"singular image", {}, "auto", true, true};
  plot::Series s2{"disc control", {}, "auto", true, true};
  for (const auto& row : rep.rows)
    (row[0] == 0 ? s1 : s2).points.emplace_back(row[1], row[5]);
  p.add(s1);
  p.add(s2);
  rep.plots.push_back(std::move(p));
  return rep;
}

namespace {

struct PairSchedule {
  std::vector<std::array<Complex, 2>> planar;   // (z, w)
  std::vector<std::array<CVec, 2>> ball;
};

PairSchedule make_schedule(const PlanarOracle* oracle, int anchors,
                           const std::vector<double>& ladder) {
  PairSchedule out;
  if (oracle) {
    const Domain& d = oracle->domain;
    for (int i = 0; i < anchors; ++i) {
      double t1 = double(i) / (2.0 * anchors);
      double t2 = t1 + 0.5;
      Complex p1 = d.boundary_point(t1), n1 = d.inward_normal_at(t1);
      Complex p2 = d.boundary_point(t2), n2 = d.inward_normal_at(t2);
      for (double dz : ladder)
        for (double dw : ladder)
          out.planar.push_back({p1 + dz * n1, p2 + dw * n2});
    }
  } else {
    for (int i = 0; i < anchors; ++i) {
      double th = kTwoPi * i / (2.0 * anchors);
      CVec u = c2({std::cos(th), 0}, {std::sin(th), 0});
      for (double dz : ladder)
        for (double dw : ladder)
          out.ball.push_back({(1.0 - dz) * u, -(1.0 - dw) * u});
    }
  }
  return out;
}

std::vector<double> refine_ladder(const std::vector<double>& ladder) {
  std::vector<double> out;
  for (size_t i = 0; i < ladder.size(); ++i) {
    out.push_back(ladder[i]);
    if (i + 1 < ladder.size()) out.push_back(std::sqrt(ladder[i] * ladder[i + 1]));
  }
  return out;
}

}  // namespace

ExperimentReport run_theorem1(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "theorem1";
  rep.columns = {"level", "domain_id", "d_z", "d_w", "l", "ratio"};

  plot::SvgPlot scatter;
  scatter.title = "Boundary-distance ratio (1-l)/(d_z d_w)";
  scatter.xlabel = "d_z * d_w";
  scatter.ylabel = "ratio";
  scatter.logx = true;
  scatter.logy = true;
  scatter.filename = "theorem1_ratio.svg";

  int domain_id = 0;
  for (const std::string& tag : cfg.domains) {
    bool is_ball = tag == "ball2";
    std::optional<PlanarOracle> oracle;
    if (!is_ball) oracle = PlanarOracle::make(tag);

    plot::Series series{tag, {}, "auto", false, true};
    double c_levels[2] = {0, 0};
    for (int level = 0; level < 2; ++level) {
      int anchors = cfg.anchor_pairs * (level + 1);
      std::vector<double> ladder =
          level == 0 ? cfg.distance_ladder : refine_ladder(cfg.distance_ladder);
      PairSchedule sched = make_schedule(is_ball ? nullptr : &*oracle, anchors, ladder);
      double cmin = std::numeric_limits<double>::infinity();
      if (!is_ball) {
        for (const auto& [z, w] : sched.planar) {
          try {
            LempertValue lv = oracle->lempert(z, w);
            double dz = oracle->domain.signed_distance(z);
            double dw = oracle->domain.signed_distance(w);
            if (!(dz > 0) || !(dw > 0)) throw std::runtime_error("pair left the domain");
            double ratio = lv.one_minus / (dz * dw);
            rep.rows.push_back({double(level), double(domain_id), dz, dw, lv.l, ratio});
            cmin = std::min(cmin, ratio);
          } catch (const std::exception& ex) {
            rep.row_errors.push_back(tag + ": " + ex.what());
          }
        }
      } else {
        for (const auto& [z, w] : sched.ball) {
          LempertValue lv = metrics::lempert_ball_pair(z, w);
          double dz = 1.0 - z.norm(), dw = 1.0 - w.norm();
          double ratio = lv.one_minus / (dz * dw);
          rep.rows.push_back({double(level), double(domain_id), dz, dw, lv.l, ratio});
          cmin = std::min(cmin, ratio);
        }
      }
      if (level == 0) {
        // subsampled scatter of this domain's coarse rows
        size_t start = rep.rows.size();
        while (start > 0 && rep.rows[start - 1][0] == 0 &&
               rep.rows[start - 1][1] == domain_id)
          --start;
        size_t stride = std::max<size_t>(1, (rep.rows.size() - start) / 400);
        for (size_t idx = start; idx < rep.rows.size(); idx += stride)
          series.points.emplace_back(rep.rows[idx][2] * rep.rows[idx][3],
                                     rep.rows[idx][5]);
      }
      c_levels[level] = cmin;
      rep.aggregates["c_" + tag + (level == 0 ? "_coarse" : "_refined")] = cmin;
    }
    scatter.add(series);

    bool positive = c_levels[0] > 0 && c_levels[1] > 0;
    add_verdict(rep, "c_positive_" + tag, positive, c_levels[1], 0.0, ">");
    double drift = std::fabs(c_levels[1] - c_levels[0]) / std::max(1e-300, c_levels[0]);
    add_verdict(rep, "c_stable_" + tag, drift <= cfg.stability_tol, drift,
                cfg.stability_tol, "<=");
    if (tag == "disc")
      add_verdict(rep, "disc_constant_floor", c_levels[1] >= cfg.disc_constant_floor,
                  c_levels[1], cfg.disc_constant_floor, ">=");
    ++domain_id;
  }
  rep.plots.push_back(std::move(scatter));

  // The boundary-singular image exhibits the collapse of the same ratio.
  {
    auto [d4, m4] = conformal::example4_domain();
    double d0 = d4.signed_distance({0, 0});
    double first = 0, last = 0;
    for (int k = 1; k <= 5; ++k) {
      double w = 2.0 - std::pow(10.0, -k);
      Complex zeta = m4->to_disc({w, 0});
      double dw = d4.signed_distance({w, 0});
      double ratio = (1.0 - std::abs(zeta)) / (d0 * dw);
      if (k == 1) first = ratio;
      last = ratio;
    }
    rep.aggregates["example4_first"] = first;
    rep.aggregates["example4_last"] = last;
    add_verdict(rep, "example4_collapses", last < 0.5 * first, last, 0.5 * first, "<");
  }

  if (cfg.run_builder) {
    for (const std::string& tag : cfg.domains) {
      if (tag == "smoothed_rectangle" || tag == "example4") continue;
      bool is_ball = tag == "ball2";
      double kappa = std::numeric_limits<double>::infinity();
      double maxC = 0, worst_validity = std::numeric_limits<double>::infinity();
      double worst_interp = 0;
      int certified = 0, failures = 0, dumped = 0;

      auto handle_cert = [&](const BoundCertificate& cert, double oracle_l) {
        ++certified;
        worst_validity = std::min(worst_validity, cert.upper - oracle_l);
        worst_interp = std::max(worst_interp, cert.theta_interp_error);
        maxC = std::max(maxC, cert.measured_C);
        kappa = std::min(kappa, cert.one_minus_upper / (cert.d_z * cert.d_w));
        if (cfg.dump_certificates && dumped < 200) {
          rep.artifacts.emplace_back(
              "certificates/" + tag + "_" + std::to_string(dumped) + ".json",
              discs::certificate_to_json(cert));
          ++dumped;
        }
      };

      if (!is_ball) {
        PlanarOracle oracle = PlanarOracle::make(tag);
        auto ambient = std::make_shared<PlanarAmbient>(oracle.domain);
        for (int i = 0; i < cfg.builder_anchor_pairs; ++i) {
          double t1 = double(i) / (2.0 * cfg.builder_anchor_pairs);
          double t2 = t1 + 0.5;
          Complex a = oracle.domain.boundary_point(t1);
          Complex b = oracle.domain.boundary_point(t2);
          Complex n1 = oracle.domain.inward_normal_at(t1);
          Complex n2 = oracle.domain.inward_normal_at(t2);
          try {
            DiscBuilder builder(ambient, c1(a), c1(b));
            for (double dz : cfg.builder_distances) {
              for (double dw : cfg.builder_distances) {
                Complex z = a + dz * n1, w = b + dw * n2;
                try {
                  BoundCertificate cert = builder.certify(c1(z), c1(w));
                  handle_cert(cert, oracle.lempert(z, w).l);
                } catch (const std::exception& ex) {
                  ++failures;
                  rep.row_errors.push_back(tag + " builder: " + ex.what());
                }
              }
            }
          } catch (const std::exception& ex) {
            ++failures;
            rep.row_errors.push_back(tag + " builder setup: " + ex.what());
          }
        }
      } else {
        auto ambient = std::make_shared<BallAmbient>(2);
        for (int i = 0; i < cfg.builder_anchor_pairs; ++i) {
          double th = kTwoPi * i / (8.0 * cfg.builder_anchor_pairs);
          CVec u = c2({std::cos(th), 0}, {std::sin(th), 0});
          try {
            DiscBuilder builder(ambient, u, -u);
            for (double dz : cfg.builder_distances) {
              for (double dw : cfg.builder_distances) {
                CVec z = (1.0 - dz) * u, w = -(1.0 - dw) * u;
                try {
                  BoundCertificate cert = builder.certify(z, w);
                  handle_cert(cert, metrics::lempert_ball(z, w));
                } catch (const std::exception& ex) {
                  ++failures;
                  rep.row_errors.push_back(tag + " builder: " + ex.what());
                }
              }
            }
          } catch (const std::exception& ex) {
            ++failures;
            rep.row_errors.push_back(tag + " builder setup: " + ex.what());
          }
        }
      }

      rep.aggregates["kappa_" + tag] = kappa;
      rep.aggregates["maxC_" + tag] = maxC;
      rep.aggregates["certified_" + tag] = certified;
      rep.aggregates["builder_failures_" + tag] = failures;
      add_verdict(rep, "builder_valid_" + tag,
                  certified > 0 && worst_validity >= -cfg.builder_validity_tol,
                  worst_validity, -cfg.builder_validity_tol, ">=");
      add_verdict(rep, "builder_interp_" + tag, certified > 0 && worst_interp <= 1e-6,
                  worst_interp, 1e-6, "<=");
      add_verdict(rep, "builder_kappa_positive_" + tag, certified > 0 && kappa > 0.0,
                  kappa, 0.0, ">");
    }
  }
  return rep;
}

ExperimentReport run_proposition2(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "proposition2";
  rep.columns = {"j", "min_fprime", "max_fprime", "min_dratio", "max_dratio"};

  double global_min = std::numeric_limits<double>::infinity(), global_max = 0;
  std::vector<double> widths;
  for (int j = 1; j <= cfg.family_count; ++j) {
    try {
      Domain gj = [&] {
        if (cfg.family == "constant_disc") return build_domain(DomainSpec::unit_disc());
        if (cfg.family == "scaled_disc")
          return build_domain(DomainSpec::disc({0, 0}, 1.0 + 1.0 / j));
        return build_domain(DomainSpec::perturbed_ellipse(
            2, 1, cfg.family_amplitude / j, cfg.family_frequency));
      }();
      if (!(gj.signed_distance({0, 0}) >= cfg.family_eps))
        throw std::runtime_error("normalization d(f_j(0)) >= eps violated");
      auto map = build_riemann_map(gj, {0, 0});

      double fmin = std::numeric_limits<double>::infinity(), fmax = 0;
      double rmin = fmin, rmax = 0;
      for (double r : cfg.sample_radii) {
        for (int k = 0; k < cfg.samples_per_ring; ++k) {
          Complex omega = std::polar(r, kTwoPi * (k + 0.29) / cfg.samples_per_ring);
          Complex z = map->from_disc(omega);
          double fprime = 1.0 / std::abs(map->to_disc_derivative(z));
          fmin = std::min(fmin, fprime);
          fmax = std::max(fmax, fprime);
          double dr = gj.signed_distance(z) / (1.0 - std::abs(omega));
          rmin = std::min(rmin, dr);
          rmax = std::max(rmax, dr);
        }
      }
      rep.rows.push_back({double(j), fmin, fmax, rmin, rmax});
      global_min = std::min(global_min, fmin);
      global_max = std::max(global_max, fmax);
      widths.push_back(fmax / fmin);
    } catch (const std::exception& ex) {
      rep.row_errors.push_back("j=" + std::to_string(j) + ": " + ex.what());
    }
  }

  rep.aggregates["fprime_min"] = global_min;
  rep.aggregates["fprime_max"] = global_max;
  double c = std::max(global_max, 1.0 / std::max(1e-300, global_min));
  rep.aggregates["c"] = c;

  add_verdict(rep, "family_complete", int(rep.rows.size()) == cfg.family_count,
              double(rep.rows.size()), double(cfg.family_count), "==");
  add_verdict(rep, "derivative_bounded", global_max <= cfg.derivative_cap &&
                                             global_min >= 1.0 / cfg.derivative_cap,
              c, cfg.derivative_cap, "<=");
  double tail_drift = 0.0;
  if (widths.size() >= 5) {
    double wmin = 1e300, wmax = 0;
    for (size_t i = widths.size() - 5; i < widths.size(); ++i) {
      wmin = std::min(wmin, widths[i]);
      wmax = std::max(wmax, widths[i]);
    }
    tail_drift = (wmax - wmin) / wmin;
  }
  rep.aggregates["envelope_tail_drift"] = tail_drift;
  add_verdict(rep, "envelope_stabilizes", widths.size() >= 5 && tail_drift <= cfg.stabilization_tol,
              tail_drift, cfg.stabilization_tol, "<=");

  plot::SvgPlot p;
  p.title = "Derivative envelope across the domain family";
  p.xlabel = "j";
  p.ylabel = "|f'_j| envelope";
  p.filename = "proposition2_envelope.svg";
  plot::Series lo{"min |f'|", {}, "auto", true, true};
  plot::Series hi{"max |f'|", {}, "auto", true, true};
  for (const auto& row : rep.rows) {
    lo.points.emplace_back(row[0], row[1]);
    hi.points.emplace_back(row[0], row[2]);
  }
  p.add(lo);
  p.add(hi);
  rep.plots.push_back(std::move(p));
  return rep;
}

ExperimentReport run_estimates(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "estimates";
  rep.columns = {"block", "a", "b", "value"};
  // block 1: kappa*d samples; block 2: (1-l)/d along normal rays;
  // block 3: star gaps; block 4: ball lower gaps.

  double koebe_min = 1e300, koebe_max = -1e300;
  for (const std::string& tag : {"disc", "ellipse", "smoothed_rectangle"}) {
    PlanarOracle oracle = PlanarOracle::make(tag);
    std::shared_ptr<ConformalMap> map = oracle.map;
    if (!map) map = build_riemann_map(oracle.domain, {0, 0});
    for (double r : {0.15, 0.45, 0.7, 0.9}) {
      for (int k = 0; k < 24; ++k) {
        Complex omega = std::polar(r, kTwoPi * (k + 0.41) / 24);
        try {
          Complex z = map->from_disc(omega);
          double q = metrics::estimate1_ratio(oracle.domain, *map, z);
          rep.rows.push_back({1, z.real(), z.imag(), q});
          koebe_min = std::min(koebe_min, q);
          koebe_max = std::max(koebe_max, q);
        } catch (const std::exception& ex) {
          rep.row_errors.push_back(tag + " estimate1: " + ex.what());
        }
      }
    }
  }
  rep.aggregates["estimate1_min"] = koebe_min;
  rep.aggregates["estimate1_max"] = koebe_max;
  add_verdict(rep, "estimate1_koebe_window",
              koebe_min >= 0.25 - cfg.koebe_tol && koebe_max <= 1.0 + cfg.koebe_tol,
              koebe_min, 0.25 - cfg.koebe_tol, ">=");

  // Estimate 2 along an inward normal ray of the ellipse with w fixed deep.
  {
    PlanarOracle oracle = PlanarOracle::make("ellipse");
    Complex w0 = oracle.domain.interior_anchor();
    double e2min = 1e300, e2max = 0;
    for (double t : {0.0, 0.21, 0.55}) {
      Complex p = oracle.domain.boundary_point(t);
      Complex n = oracle.domain.inward_normal_at(t);
      for (double d : cfg.ray_distances) {
        Complex z = p + d * n;
        try {
          LempertValue lv = oracle.lempert(z, w0);
          double dz = oracle.domain.signed_distance(z);
          double ratio = lv.one_minus / dz;
          rep.rows.push_back({2, dz, 0, ratio});
          e2min = std::min(e2min, ratio);
          e2max = std::max(e2max, ratio);
        } catch (const std::exception& ex) {
          rep.row_errors.push_back(std::string("estimate2 collar: ") + ex.what());
        }
      }
    }
    rep.aggregates["estimate2_min"] = e2min;
    rep.aggregates["estimate2_max"] = e2max;
    add_verdict(rep, "estimate2_window",
                e2min > 0 && e2max / e2min <= cfg.estimate2_spread_cap, e2max / e2min,
                cfg.estimate2_spread_cap, "<=");

    // The boundary-singular image drives the same ratio to zero.
    auto [d4, m4] = conformal::example4_domain();
    double first = 0, last = 0;
    for (size_t i = 0; i < cfg.ray_distances.size(); ++i) {
      double d = cfg.ray_distances[i];
      Complex z(2.0 - d, 0);
      Complex zeta = m4->to_disc(z);
      double dz = d4.signed_distance(z);
      double ratio = (1.0 - std::abs(zeta)) / dz;
      rep.rows.push_back({2, dz, 1, ratio});
      if (i == 0) first = ratio;
      last = ratio;
    }
    rep.aggregates["estimate2_singular_first"] = first;
    rep.aggregates["estimate2_singular_last"] = last;
    add_verdict(rep, "estimate2_singular_collapses", last < 0.5 * first, last,
                0.5 * first, "<");
  }

  // Star gap over well-separated pairs on disc and ellipse.
  {
    std::mt19937_64 rng(cfg.seed);
    double gap_max = -1e300;
    for (const std::string& tag : {"disc", "ellipse"}) {
      PlanarOracle oracle = PlanarOracle::make(tag);
      const BBox& bb = oracle.domain.bounding_box();
      std::uniform_real_distribution<double> ux(bb.xmin, bb.xmax), uy(bb.ymin, bb.ymax);
      int accepted = 0;
      while (accepted < cfg.pair_samples) {
        Complex z(ux(rng), uy(rng)), w(ux(rng), uy(rng));
        if (std::abs(z - w) < cfg.separation) continue;
        double dz = oracle.domain.signed_distance(z);
        double dw = oracle.domain.signed_distance(w);
        if (dz < 1e-3 || dw < 1e-3) continue;
        ++accepted;
        try {
          LempertValue lv = oracle.lempert(z, w);
          metrics::MetricSample s = metrics::ratios_from_value(z, w, lv, dz, dw);
          rep.rows.push_back({3, std::abs(z - w), 0, s.star_gap});
          gap_max = std::max(gap_max, s.star_gap);
        } catch (const std::exception& ex) {
          rep.row_errors.push_back(tag + " star: " + ex.what());
        }
      }
    }
    rep.aggregates["star_gap_max"] = gap_max;
    add_verdict(rep, "star_gap_bounded", gap_max <= cfg.star_gap_cap, gap_max,
                cfg.star_gap_cap, "<=");
  }

  // The strongly-pseudoconvex lower bound on the two-ball for separated pairs.
  {
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> u(-0.97, 0.97);
    double gap_min = 1e300;
    int accepted = 0;
    while (accepted < cfg.pair_samples) {
      CVec z = c2({u(rng), u(rng)}, {u(rng), u(rng)});
      CVec w = c2({u(rng), u(rng)}, {u(rng), u(rng)});
      if (z.norm() >= 0.995 || w.norm() >= 0.995) continue;
      if ((z - w).norm() < cfg.separation) continue;
      ++accepted;
      LempertValue lv = metrics::lempert_ball_pair(z, w);
      double dz = 1.0 - z.norm(), dw = 1.0 - w.norm();
      double k = metrics::artanh_stable(lv);
      double gap = 2.0 * k + std::log(dz) + std::log(dw);
      rep.rows.push_back({4, (z - w).norm(), 0, gap});
      gap_min = std::min(gap_min, gap);
    }
    rep.aggregates["lower_gap_min"] = gap_min;
    rep.aggregates["c_prime"] = -gap_min;
    add_verdict(rep, "lower_bound_holds", gap_min >= -cfg.lower_gap_cap, gap_min,
                -cfg.lower_gap_cap, ">=");
  }

  plot::SvgPlot p;
  p.title = "Metric-to-distance comparisons";
  p.xlabel = "d(z)";
  p.ylabel = "(1-l)/d(z)";
  p.logx = true;
  p.logy = true;
  p.filename = "estimates_ray.svg";
  plot::Series smooth{"smooth boundary ray", {}, "auto", true, true};
  plot::Series sing{"singular boundary ray", {}, "auto", true, true};
  for (const auto& row : rep.rows) {
    if (row[0] != 2) continue;
    (row[2] == 0 ? smooth : sing).points.emplace_back(row[1], row[3]);
  }
  p.add(smooth);
  p.add(sing);
  rep.plots.push_back(std::move(p));
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "example4") return run_example4(cfg);
  if (cfg.experiment == "theorem1") return run_theorem1(cfg);
  if (cfg.experiment == "proposition2") return run_proposition2(cfg);
  if (cfg.experiment == "estimates") return run_estimates(cfg);
  throw std::runtime_error("unknown experiment: " + cfg.experiment);
}

void write_outputs(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "plots");
  {
    std::ofstream csv(fs::path(out_dir) / "report.csv");
    csv << report.csv_text();
  }
  {
    std::ofstream js(fs::path(out_dir) / "report.json");
    js << report.json_text();
  }
  for (const auto& plot : report.plots)
    plot.save((fs::path(out_dir) / "plots" / plot.filename).string());
  for (const auto& [name, content] : report.artifacts) {
    fs::path p = fs::path(out_dir) / name;
    fs::create_directories(p.parent_path());
    std::ofstream f(p);
    f << content;
  }
}

}  // namespace lempert::experiments
