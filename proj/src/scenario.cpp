#include "mchn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>

#include "mchn/breaking.hpp"
#include "mchn/diagnostics.hpp"
#include "mchn/holder_probe.hpp"
#include "mchn/kernels.hpp"
#include "mchn/pde.hpp"
#include "mchn/peakon.hpp"
#include "mchn/reductions.hpp"

namespace mchn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Keys shared by every scenario.
const std::set<std::string> kCommonKeys = {"scenario.kind", "scenario.name", "output.dir", "output.cadence"};
const std::set<std::string> kModelKeys = {"model.k1", "model.k2", "model.k3"};
const std::set<std::string> kIntegratorKeys = {"integrator.atol", "integrator.rtol", "integrator.t_end",
                                               "integrator.max_steps"};
const std::set<std::string> kGridKeys = {"grid.domain", "grid.n", "grid.L",  "initial.type", "initial.amplitude",
                                         "initial.center", "initial.width", "initial.offset", "initial.mean",
                                         "initial.mode"};
const std::set<std::string> kPdeKeys = {"pde.formulation", "pde.dealiasing", "pde.filter", "pde.cfl",
                                        "pde.ux_guard",    "pde.M_guard",    "pde.max_step"};

std::set<std::string> keys(std::initializer_list<std::set<std::string>> groups,
                           std::initializer_list<std::string> extra = {}) {
  std::set<std::string> out(kCommonKeys);
  for (const auto& g : groups) out.insert(g.begin(), g.end());
  out.insert(extra.begin(), extra.end());
  return out;
}

struct Context {
  const Config& cfg;
  RunOptions opts;
  std::filesystem::path dir;
  std::string name;
  ScenarioOutcome out;

  std::string artifact(const std::string& suffix) {
    const auto p = (dir / (name + "_" + suffix)).string();
    out.artifacts.push_back(p);
    return p;
  }
};

ModelParams model(const Config& c) {
  ModelParams k{c.get_double("model.k1"), c.get_double("model.k2"), c.get_double("model.k3")};
  k.validate();
  return k;
}

Json to_json(const ModelParams& k) { return Json{{"k1", k.k1}, {"k2", k.k2}, {"k3", k.k3}, {"family", k.family_name()}}; }

Json to_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

double positive(const Config& c, const std::string& key, double fallback) {
  const double v = c.get_double(key, fallback);
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

std::vector<double> cadence_times(const Config& c, double t_end) {
  const double cadence = c.get_double("output.cadence", 0.0);
  if (cadence < 0.0) throw ConfigError("output.cadence: must be >= 0");
  std::vector<double> out;
  if (cadence == 0.0) return out;
  for (long i = 1;; ++i) {
    const double t = static_cast<double>(i) * cadence;
    if (t >= t_end) break;
    out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------- fields

Domain domain_from(const Config& c) {
  return c.get_choice("grid.domain", {"circle", "line"}, "circle") == "circle" ? Domain::circle : Domain::line;
}

GridSpec grid_from(const Config& c) {
  const auto domain = c.get_choice("grid.domain", {"circle", "line"}, "circle");
  const long n = c.get_int("grid.n");
  if (n < 8 || (n & (n - 1)) != 0) throw ConfigError("grid.n: must be a power of two >= 8");
  if (domain == "circle") {
    if (c.has("grid.L")) throw ConfigError("grid.L: only meaningful for grid.domain = line");
    return GridSpec::circle(static_cast<std::size_t>(n));
  }
  return GridSpec::line_box(positive(c, "grid.L", 16.0), static_cast<std::size_t>(n));
}

Field initial_from(const Config& c, const GridSpec& g) {
  const auto type = c.get_choice("initial.type", {"gaussian-m", "cosine-m", "mollified-peakon"}, "gaussian-m");
  if (type == "mollified-peakon") {
    const double width = positive(c, "initial.width", 0.1);
    try {
      return mollified_peakon(c.get_double("initial.amplitude", 1.0), c.get_double("initial.center", 0.0), width, g);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("initial.width: ") + e.what());
    }
  }
  if (type == "cosine-m") {
    const double mean = c.get_double("initial.mean", 1.0), amp = c.get_double("initial.amplitude", 0.5);
    const double mode = static_cast<double>(c.get_int("initial.mode", 1));
    const auto m = sample(
        g, [&](double x) { return mean + amp * std::cos(2.0 * std::numbers::pi * mode * (x - g.origin) / g.period); },
        Role::m);
    return helmholtz_solve(m);
  }
  const double amp = c.get_double("initial.amplitude", 1.0), x0 = c.get_double("initial.center", g.origin + 0.5 * g.period);
  const double w = positive(c, "initial.width", 0.05 * g.period), offset = c.get_double("initial.offset", 0.0);
  const auto m = sample(
      g,
      [&](double x) {
        double v = 0.0;
        for (int i = -2; i <= 2; ++i) {
          const double d = (x - x0 + i * g.period) / w;
          v += std::exp(-0.5 * d * d);
        }
        return offset + amp * v;
      },
      Role::m);
  return helmholtz_solve(m);
}

PdeOptions pde_options(const Config& c) {
  PdeOptions o;
  o.atol = positive(c, "integrator.atol", o.atol);
  o.rtol = positive(c, "integrator.rtol", o.rtol);
  o.max_steps = static_cast<std::size_t>(c.get_int("integrator.max_steps", static_cast<long>(o.max_steps)));
  o.formulation = c.get_choice("pde.formulation", {"weak", "m-form"}, "weak") == "weak" ? Formulation::weak
                                                                                       : Formulation::m_form;
  o.dealiasing = c.get_choice("pde.dealiasing", {"two-thirds", "half"}, "two-thirds") == "half"
                     ? Dealiasing::half
                     : Dealiasing::two_thirds;
  o.filter = c.get_bool("pde.filter", false);
  o.cfl = c.get_double("pde.cfl", o.cfl);
  o.ux_guard = positive(c, "pde.ux_guard", o.ux_guard);
  o.M_guard = positive(c, "pde.M_guard", o.M_guard);
  o.max_step = positive(c, "pde.max_step", o.max_step);
  return o;
}

Json events_json(const std::vector<PdeEvent>& ev) {
  Json a = Json::array();
  for (const auto& e : ev) a.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
  return a;
}

void write_diagnostics(const std::string& path, const DiagnosticsSeries& d) {
  CsvWriter w(path, "diagnostics",
              {"t", "h1", "m_min", "m_max", "M_min", "M_max", "u_plus_ux_min", "u_minus_ux_min", "ux_sup",
               "criterion_integral", "m_bound_breach", "positivity_breach"});
  for (const auto& s : d.samples())
    w.row({s.t, s.h1, s.m_min, s.m_max, s.M_min, s.M_max, s.u_plus_ux_min, s.u_minus_ux_min, s.ux_sup,
           s.criterion_integral, s.m_bound_breach ? 1.0 : 0.0, s.positivity_breach ? 1.0 : 0.0});
}

Json run_summary(const PdeResult& r, const Field& u0, const ModelParams& k) {
  const auto& s = r.diagnostics.samples();
  const auto g = terminal_growth(r.diagnostics);
  Json j;
  j["accepted_steps"] = r.accepted;
  j["rejected_steps"] = r.rejected;
  j["t_last"] = r.t_last;
  j["last_step"] = r.last_step;
  j["breakdown"] = r.breakdown;
  j["t_breakdown_estimate"] = r.t_breakdown_estimate;
  j["rate_product"] = rate_product(r);
  j["events"] = events_json(r.events);
  j["h1_initial"] = s.front().h1;
  j["h1_final"] = s.back().h1;
  j["h1_relative_drift"] = std::abs(s.back().h1 - s.front().h1) / s.front().h1;
  j["m_upper_bound"] = k.m_bound_signs() ? m_upper_bound(u0, k) : kNaN;
  j["positivity_armed"] = r.diagnostics.positivity_armed();
  j["positivity_breach"] = r.diagnostics.any_positivity_breach();
  j["m_bound_armed"] = r.diagnostics.m_bound_armed();
  j["m_bound_breach"] = r.diagnostics.any_m_bound_breach();
  j["criterion_integral"] = {{"final", s.back().criterion_integral},
                             {"overall_slope", g.overall_slope},
                             {"terminal_slope", g.terminal_slope},
                             {"ratio", g.ratio},
                             {"super_linear", g.super_linear}};
  return j;
}

Json grid_json(const GridSpec& g, Domain d) {
  return Json{{"domain", to_string(d)}, {"n", g.n}, {"period", g.period}, {"origin", g.origin}};
}

// ---------------------------------------------------------------- peakons

void peakon_sim(Context& cx, Domain domain) {
  const auto& c = cx.cfg;
  c.reject_unknown(keys({kModelKeys, kIntegratorKeys}, {"peakons.p", "peakons.q", "peakons.eps_collide"}));
  const auto k = model(c);
  PeakonState s0;
  s0.domain = domain;
  s0.p = c.get_list("peakons.p");
  s0.q = c.get_list("peakons.q", std::vector<double>{0.0});
  if (s0.p.size() != s0.q.size()) throw ConfigError("peakons.q: needs as many entries as peakons.p");
  PeakonOptions po;
  po.atol = positive(c, "integrator.atol", po.atol);
  po.rtol = positive(c, "integrator.rtol", po.rtol);
  po.eps_collide = c.get_double("peakons.eps_collide", po.eps_collide);
  po.max_steps = static_cast<std::size_t>(c.get_int("integrator.max_steps", static_cast<long>(po.max_steps)));
  try {
    s0.validate(po.eps_collide);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("peakons: ") + e.what());
  }
  const double t_end = positive(c, "integrator.t_end", 1.0);
  const auto cadence = cadence_times(c, t_end);
  po.output_times = cadence;
  const auto traj = integrate_peakons(s0, k, t_end, po);

  std::vector<std::string> cols{"t"};
  for (std::size_t i = 0; i < s0.size(); ++i) cols.push_back("p" + std::to_string(i + 1));
  for (std::size_t i = 0; i < s0.size(); ++i) cols.push_back("q" + std::to_string(i + 1));
  cols.push_back("energy");
  CsvWriter w(cx.artifact("trajectory.csv"), "peakon_trajectory", cols);
  const double e0 = peakon_energy(traj.samples.front());
  double drift = 0.0;
  for (const auto& st : traj.samples) {
    const bool wanted = cadence.empty() || st.t == traj.t_begin() || st.t == traj.t_end() ||
                        std::binary_search(cadence.begin(), cadence.end(), st.t);
    const double e = peakon_energy(st);
    drift = std::max(drift, std::abs(e - e0) / std::max(std::abs(e0), 1e-300));
    if (!wanted) continue;
    const auto shown = domain == Domain::line ? st : traj.unwrapped_at(st.t);
    std::vector<double> row{st.t};
    row.insert(row.end(), shown.p.begin(), shown.p.end());
    row.insert(row.end(), shown.q.begin(), shown.q.end());
    row.push_back(e);
    w.row(row);
  }

  Json ev = Json::array();
  for (const auto& e : traj.events) ev.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
  const auto& last = traj.samples.back();
  Json single;
  if (s0.size() == 1) {
    const double speed = single_peakon_speed(s0.p[0], k, domain);
    const double dq = traj.unwrapped_at(last.t).q[0] - s0.q[0];
    single = {{"speed", speed}, {"displacement", dq}, {"displacement_error", dq - speed * (last.t - s0.t)}};
  }
  cx.out.summary = {{"kind", cx.out.kind},
                    {"model", to_json(k)},
                    {"domain", to_string(domain)},
                    {"completed", traj.completed},
                    {"t_end_reached", last.t},
                    {"samples", traj.samples.size()},
                    {"energy_relative_drift", drift},
                    {"events", ev},
                    {"final", {{"p", last.p}, {"q", traj.unwrapped_at(last.t).q}}}};
  if (!single.is_null()) cx.out.summary["single_peakon"] = single;
  write_json(cx.artifact("summary.json"), "peakon_summary", cx.out.summary);
}

// ---------------------------------------------------------------- pde

void pde_sim(Context& cx) {
  const auto& c = cx.cfg;
  c.reject_unknown(keys({kModelKeys, kIntegratorKeys, kGridKeys, kPdeKeys}));
  const auto k = model(c);
  const auto g = grid_from(c);
  const auto u0 = initial_from(c, g);
  auto po = pde_options(c);
  const double t_end = positive(c, "integrator.t_end", 1.0);
  po.output_times = cadence_times(c, t_end);
  po.keep_trajectory = false;
  if (k.m_bound_signs()) po.m_bound = m_upper_bound(u0, k);
  const auto r = integrate_pde(u0, k, t_end, po);

  write_diagnostics(cx.artifact("diagnostics.csv"), r.diagnostics);
  CsvWriter w(cx.artifact("snapshots.csv"), "field_snapshots", {"t", "x", "u", "m"});
  for (const auto& [t, u] : r.snapshots) {
    const auto m = helmholtz_apply(u);
    for (std::size_t j = 0; j < u.size(); ++j) w.row({t, g.x(j), u[j], m[j]});
  }
  cx.out.summary = {{"kind", cx.out.kind}, {"model", to_json(k)}, {"grid", grid_json(g, domain_from(c))}, {"t_end", t_end}};
  cx.out.summary["run"] = run_summary(r, u0, k);
  write_json(cx.artifact("summary.json"), "pde_summary", cx.out.summary);
}

// ---------------------------------------------------------------- characteristics

void characteristics(Context& cx) {
  const auto& c = cx.cfg;
  c.reject_unknown(keys({kModelKeys, kIntegratorKeys, kGridKeys, kPdeKeys},
                        {"characteristics.seeds", "characteristics.positions", "characteristics.chunk",
                         "characteristics.fd_delta", "characteristics.atol", "characteristics.rtol",
                         "characteristics.window_margin"}));
  const auto k = model(c);
  const auto g = grid_from(c);
  const auto u0 = initial_from(c, g);
  auto po = pde_options(c);
  const double t_end = positive(c, "integrator.t_end", 0.5);
  po.keep_trajectory = true;
  const auto r = integrate_pde(u0, k, t_end, po);

  TraceOptions to;
  to.domain = domain_from(c);
  to.fd_delta = positive(c, "characteristics.fd_delta", to.fd_delta);
  to.atol = positive(c, "characteristics.atol", to.atol);
  to.rtol = positive(c, "characteristics.rtol", to.rtol);
  to.window_margin = c.get_double("characteristics.window_margin", to.window_margin);
  to.sample_times = cadence_times(c, r.t_last);
  if (!to.sample_times.empty()) {
    to.sample_times.insert(to.sample_times.begin(), r.trajectory.t_begin());
    to.sample_times.push_back(r.trajectory.t_end());
  }

  std::vector<double> seeds;
  if (c.has("characteristics.positions")) {
    seeds = c.get_list("characteristics.positions");
  } else {
    const long count = c.get_int("characteristics.seeds", 20);
    if (count < 1) throw ConfigError("characteristics.seeds: must be >= 1");
    const double lo = to.domain == Domain::circle ? g.origin : g.origin + to.window_margin;
    const double span = to.domain == Domain::circle ? g.period : g.period - 2.0 * to.window_margin;
    if (!(span > 0.0)) throw ConfigError("characteristics.window_margin: leaves no room for seeds");
    for (long i = 0; i < count; ++i) seeds.push_back(lo + (static_cast<double>(i) + 0.5) * span / count);
  }
  // Seeds are traced in fixed chunks so results do not depend on the job count.
  const long chunk = c.get_int("characteristics.chunk", 8);
  if (chunk < 1) throw ConfigError("characteristics.chunk: must be >= 1");
  std::vector<std::vector<double>> groups;
  for (std::size_t i = 0; i < seeds.size(); i += static_cast<std::size_t>(chunk))
    groups.emplace_back(seeds.begin() + i, seeds.begin() + std::min(seeds.size(), i + static_cast<std::size_t>(chunk)));
  std::vector<std::vector<CharacteristicTrace>> results(groups.size());
  const unsigned jobs = std::max(1u, cx.opts.jobs);
  for (std::size_t start = 0; start < groups.size(); start += jobs) {
    std::vector<std::future<std::vector<CharacteristicTrace>>> fut;
    for (std::size_t i = start; i < std::min(groups.size(), start + jobs); ++i)
      fut.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                               [&, i] { return trace_characteristics(groups[i], r.trajectory, k, to); }));
    for (std::size_t i = start; i < std::min(groups.size(), start + jobs); ++i) results[i] = fut[i - start].get();
  }

  CsvWriter w(cx.artifact("traces.csv"), "characteristic_traces",
              {"seed", "x0", "t", "q", "qx_neighbours", "qx_exp", "u", "ux", "m_direct", "m_exp", "M"});
  Json traces = Json::array();
  double max_qx = 0.0, max_m = 0.0;
  bool all_qx_pos = true, all_sign = true, any_trunc = false;
  std::size_t index = 0;
  for (const auto& group : results)
    for (const auto& tr : group) {
      for (const auto& s : tr.samples)
        w.row({static_cast<double>(index), tr.x0, s.t, s.q, s.qx_neighbours, s.qx_exp, s.u, s.ux, s.m_direct, s.m_exp,
               s.M});
      traces.push_back({{"seed", index},
                        {"x0", tr.x0},
                        {"m0", tr.m0},
                        {"samples", tr.samples.size()},
                        {"truncated", tr.truncated},
                        {"qx_positive", tr.qx_positive},
                        {"m_sign_constant", tr.m_sign_constant},
                        {"max_qx_rel_error", tr.max_qx_rel_error},
                        {"max_m_rel_error", tr.max_m_rel_error}});
      max_qx = std::max(max_qx, tr.max_qx_rel_error);
      max_m = std::max(max_m, tr.max_m_rel_error);
      all_qx_pos = all_qx_pos && tr.qx_positive;
      all_sign = all_sign && tr.m_sign_constant;
      any_trunc = any_trunc || tr.truncated;
      ++index;
    }
  cx.out.summary = {{"kind", cx.out.kind},
                    {"model", to_json(k)},
                    {"grid", grid_json(g, domain_from(c))},
                    {"t_end", t_end},
                    {"run", run_summary(r, u0, k)},
                    {"max_qx_rel_error", max_qx},
                    {"max_m_rel_error", max_m},
                    {"qx_positive", all_qx_pos},
                    {"m_sign_constant", all_sign},
                    {"any_truncated", any_trunc},
                    {"traces", traces}};
  write_json(cx.artifact("summary.json"), "characteristics_summary", cx.out.summary);
}

// ---------------------------------------------------------------- breaking

Json to_json(const BreakingCertificate& b) {
  Json checks = Json::array();
  for (const auto& ch : b.checks)
    checks.push_back({{"name", ch.name}, {"lhs", ch.lhs}, {"rhs", ch.rhs}, {"strict", ch.strict}, {"holds", ch.holds}});
  Json j{{"theorem", b.theorem},
         {"status", b.status},
         {"reason", b.reason},
         {"satisfied", b.satisfied},
         {"at", {{"x", b.at.x}, {"u0", b.at.u}, {"u0x", b.at.ux}, {"m0", b.at.m}}},
         {"m0_min", b.m0_min},
         {"m0_sup", b.m0_sup},
         {"m0_nonnegative", b.m0_nonnegative},
         {"h1_norm", b.h1_norm},
         {"T_upper", b.T_upper},
         {"checks", checks}};
  if (b.theorem.rfind("T1.7", 0) == 0) {
    j["gamma_plus"] = b.gamma_plus;
    j["gamma_minus"] = b.gamma_minus;
    j["alpha_floor"] = b.alpha_floor;
    j["alpha"] = b.alpha;
  } else {
    j["C0"] = b.C0;
    j["C1"] = b.C1;
    j["C2"] = b.C2;
    j["C3"] = b.C3;
    j["discriminant"] = b.discriminant;
    j["discriminant_printed"] = b.discriminant_printed;
    j["t_minus"] = to_json(b.t_minus);
    j["t_plus"] = to_json(b.t_plus);
    j["t_minus_printed"] = b.t_minus_printed;
    j["rate_target"] = b.rate_target;
  }
  return j;
}

void breaking_check(Context& cx) {
  const auto& c = cx.cfg;
  c.reject_unknown(keys({kModelKeys, kIntegratorKeys, kGridKeys, kPdeKeys},
                        {"breaking.theorem", "breaking.source", "breaking.preset", "breaking.point", "breaking.x0",
                         "breaking.C2", "breaking.u0", "breaking.u0x", "breaking.m0", "breaking.h1",
                         "breaking.simulate"}));
  const auto k = model(c);
  const auto theorem = c.get_choice("breaking.theorem", {"1.7", "1.8", "both"}, "both");
  const auto preset = c.get_choice("breaking.preset", {"none", "case4-example"}, "none");
  const auto source = c.get_choice("breaking.source", {"field", "point"}, preset == "none" ? "field" : "point");
  const double C2 = c.get_double("breaking.C2", kNaN);
  Json certs = Json::array();
  cx.out.summary = {{"kind", cx.out.kind}, {"model", to_json(k)}};

  if (source == "point") {
    for (const auto& key : {"grid.n", "initial.type", "breaking.simulate", "breaking.x0", "breaking.point"})
      if (c.has(key)) throw ConfigError(std::string(key) + ": not used with breaking.source = point");
    PointData p;
    if (preset == "case4-example") {
      p = {0.0, 1.0, -1.0, 1.0};
    } else {
      p = {0.0, c.get_double("breaking.u0"), c.get_double("breaking.u0x"), c.get_double("breaking.m0")};
    }
    if (theorem != "1.8") certs.push_back(to_json(thm17_certificate(p, k)));
    if (theorem != "1.7") certs.push_back(to_json(thm18_certificate(p, c.get_double("breaking.h1", kNaN), k, C2)));
    cx.out.summary["source"] = "point";
    cx.out.summary["certificates"] = certs;
    write_json(cx.artifact("certificate.json"), "breaking_certificate", cx.out.summary);
    return;
  }
  if (preset != "none") throw ConfigError("breaking.preset: presets are point data (breaking.source = point)");

  const auto g = grid_from(c);
  const auto u0 = initial_from(c, g);
  const auto point = c.get_choice("breaking.point", {"search", "given"}, c.has("breaking.x0") ? "given" : "search");
  const auto search = point == "search" ? PointSearch::max_margin : PointSearch::given;
  const double x0 = search == PointSearch::given ? c.get_double("breaking.x0") : 0.0;
  std::vector<BreakingCertificate> list;
  if (theorem != "1.8") list.push_back(thm17_certificate(u0, x0, k, search));
  if (theorem != "1.7") list.push_back(thm18_certificate(u0, x0, k, C2, search));
  for (const auto& b : list) certs.push_back(to_json(b));
  cx.out.summary["source"] = "field";
  cx.out.summary["grid"] = grid_json(g, domain_from(c));
  cx.out.summary["m_upper_bound"] = k.m_bound_signs() ? m_upper_bound(u0, k) : kNaN;
  cx.out.summary["certificates"] = certs;

  if (c.get_bool("breaking.simulate", false)) {
    double T_upper = kNaN;
    for (const auto& b : list)
      if (b.satisfied) T_upper = std::isnan(T_upper) ? b.T_upper : std::min(T_upper, b.T_upper);
    const double t_end = c.has("integrator.t_end") ? positive(c, "integrator.t_end", 1.0)
                                                   : (std::isnan(T_upper) ? 1.0 : 1.5 * T_upper);
    auto po = pde_options(c);
    po.keep_trajectory = false;
    if (k.m_bound_signs()) po.m_bound = m_upper_bound(u0, k);
    const auto r = integrate_pde(u0, k, t_end, po);
    write_diagnostics(cx.artifact("diagnostics.csv"), r.diagnostics);
    Json sim = run_summary(r, u0, k);
    sim["t_end"] = t_end;
    sim["T_upper"] = T_upper;
    sim["T_obs"] = r.breakdown ? r.t_last : kNaN;
    sim["T_obs_over_T_upper"] = r.breakdown ? r.t_last / T_upper : kNaN;
    cx.out.summary["simulation"] = sim;
  }
  write_json(cx.artifact("certificate.json"), "breaking_certificate", cx.out.summary);
}

// ---------------------------------------------------------------- reductions

void reduce_check(Context& cx) {
  cx.cfg.reject_unknown(keys({kModelKeys}, {"reduce.tolerance"}));
  const double tol = positive(cx.cfg, "reduce.tolerance", 1e-12);
  Json rows = Json::array();
  std::ostringstream table;
  bool all = true;
  for (const auto& rc : reduction_cases()) {
    const auto r = check_reduction(rc);
    const bool ok = r.passed(tol);
    all = all && ok;
    Json computed = Json::array(), expected = Json::array();
    for (double v : r.computed.real_roots) computed.push_back(v);
    for (auto z : r.computed.complex_roots) computed.push_back(to_json(z));
    for (double v : rc.closed_real) expected.push_back(v);
    for (auto z : rc.closed_complex) expected.push_back(to_json(z));
    rows.push_back({{"family", rc.name},
                    {"domain", to_string(rc.domain)},
                    {"model", to_json(rc.k)},
                    {"c", rc.c},
                    {"branch", to_string(r.computed.branch)},
                    {"expected_branch", to_string(rc.branch)},
                    {"closed_form", expected},
                    {"computed", computed},
                    {"max_error", r.max_error},
                    {"passed", ok}});
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %-6s c=%-8.4g %-13s err=%.2e %s\n", rc.name.c_str(),
                  to_string(rc.domain).c_str(), rc.c, to_string(r.computed.branch).c_str(), r.max_error,
                  ok ? "ok" : "MISMATCH");
    table << line;
  }
  cx.out.summary = {{"kind", cx.out.kind}, {"tolerance", tol}, {"all_passed", all}, {"cases", rows}};
  write_json(cx.artifact("reductions.json"), "reductions", cx.out.summary);
  std::ofstream(cx.artifact("reductions.txt")) << table.str();
  if (!all) cx.out.exit_code = 3;
}

// ---------------------------------------------------------------- holder

Json to_json(const HolderProbeReport& r) {
  return Json{{"s", r.s},
              {"r", r.r},
              {"region", to_string(r.predicted.region)},
              {"beta", r.predicted.beta},
              {"eps", r.eps},
              {"data_distance", r.data_distance},
              {"solution_distance", r.solution_distance},
              {"fitted_slope", r.fitted_slope},
              {"aborted", r.aborted},
              {"detail", r.detail}};
}

void holder_probe_scenario(Context& cx) {
  const auto& c = cx.cfg;
  c.reject_unknown(keys({kModelKeys, kIntegratorKeys, kGridKeys, kPdeKeys},
                        {"holder.s", "holder.r", "holder.eps", "holder.comparison_times", "holder.direction_mode"}));
  const auto k = model(c);
  const auto s_list = c.get_list("holder.s"), r_list = c.get_list("holder.r");
  if (s_list.size() != r_list.size()) throw ConfigError("holder.r: needs as many entries as holder.s");
  const auto g = grid_from(c);
  const auto u0 = initial_from(c, g);
  const long mode = c.get_int("holder.direction_mode", 3);
  const auto dir = sample(g, [&](double x) {
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(mode) * (x - g.origin) / g.period);
  });
  HolderProbeOptions ho;
  ho.eps = c.get_list("holder.eps", ho.eps);
  ho.comparison_times = static_cast<std::size_t>(c.get_int("holder.comparison_times", 8));
  ho.pde = pde_options(c);
  const double t_end = positive(c, "integrator.t_end", 0.1);

  // Sweep entries fan out over jobs; a single entry hands the jobs to the probe.
  const unsigned jobs = std::max(1u, cx.opts.jobs);
  if (s_list.size() == 1) ho.jobs = jobs;
  std::vector<HolderProbeReport> reports(s_list.size());
  for (std::size_t start = 0; start < s_list.size(); start += jobs) {
    std::vector<std::future<HolderProbeReport>> fut;
    for (std::size_t i = start; i < std::min(s_list.size(), start + jobs); ++i)
      fut.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                               [&, i] { return holder_probe(u0, dir, s_list[i], r_list[i], t_end, k, ho); }));
    for (std::size_t i = start; i < std::min(s_list.size(), start + jobs); ++i) reports[i] = fut[i - start].get();
  }
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  cx.out.summary = {{"kind", cx.out.kind},
                    {"model", to_json(k)},
                    {"grid", grid_json(g, domain_from(c))},
                    {"t_end", t_end},
                    {"note", "the exponent bound is one-sided; fitted slopes are reported without a verdict"},
                    {"reports", arr}};
  write_json(cx.artifact("report.json"), "holder_probe", cx.out.summary);
}

}  // namespace

const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> kinds = {"peakon-sim",      "periodic-peakon-sim", "pde-sim",
                                                 "breaking-check",  "reduce-check",        "holder-probe",
                                                 "characteristics"};
  return kinds;
}

ScenarioOutcome run_scenario(const Config& cfg, const RunOptions& opts) {
  const auto kind = cfg.get_choice("scenario.kind", scenario_kinds(), "");
  std::filesystem::path dir = cfg.get_string("output.dir", "out");
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create " + dir.string() + ": " + ec.message());

  Context cx{cfg, opts, dir, cfg.get_string("scenario.name", kind), {}};
  cx.out.kind = kind;
  if (kind == "peakon-sim")
    peakon_sim(cx, Domain::line);
  else if (kind == "periodic-peakon-sim")
    peakon_sim(cx, Domain::circle);
  else if (kind == "pde-sim")
    pde_sim(cx);
  else if (kind == "characteristics")
    characteristics(cx);
  else if (kind == "breaking-check")
    breaking_check(cx);
  else if (kind == "reduce-check")
    reduce_check(cx);
  else
    holder_probe_scenario(cx);
  return cx.out;
}

}  // namespace mchn
