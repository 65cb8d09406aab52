#include "critlab/lab.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "critlab/cfrac.hpp"
#include "critlab/circle_maps.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/complex_ext.hpp"
#include "critlab/errors.hpp"
#include "critlab/parabolic.hpp"

namespace critlab::lab {

using nlohmann::json;

const std::vector<std::string> kCommands = {"rho",   "solve",   "tongue",  "renorm",
                                            "parabolic", "julia", "gamma", "domains",
                                            "cubicfit",  "check"};

namespace {

const std::set<std::string> kFields = {
    "command", "family",   "c",          "theta",     "target",      "depth",    "level",
    "tol",     "precision", "out",       "seed",      "side",        "reference_c",
    "eps",     "budget",   "escape_im",  "window",    "resolution",  "radius_factor",
    "k",       "sign",     "im_max",     "im_count",  "samples",     "inject_fault"};

const std::set<std::string> kWindowFields = {"center_re", "center_im", "width", "height"};

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ParameterError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ParameterError("unknown field '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
    return;
  }
  T v{};
  read(j, key, v);
  dst = v;
}

std::string target_from_json(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ",";
      if (e.is_number_integer())
        s += std::to_string(e.get<std::int64_t>());
      else if (e.is_string() && (e.get<std::string>() == "inf"))
        s += "inf";
      else
        throw ParameterError("field 'target': quotient lists hold integers or \"inf\"");
    }
    return s;
  }
  throw ParameterError("field 'target' must be a string, number or quotient list");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// config

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, kFields, "config");
  ExperimentConfig cfg;
  read(j, "command", cfg.command);
  read(j, "family", cfg.family);
  read(j, "c", cfg.c);
  read_optional(j, "theta", cfg.theta);
  if (j.contains("target") && !j.at("target").is_null()) cfg.target = target_from_json(j.at("target"));
  read(j, "depth", cfg.depth);
  read_optional(j, "level", cfg.level);
  read(j, "tol", cfg.tol);
  if (j.contains("precision")) {
    std::string p;
    read(j, "precision", p);
    cfg.precision = parse_precision(p);
  }
  read(j, "out", cfg.out);
  read(j, "seed", cfg.seed);
  read(j, "side", cfg.side);
  read_optional(j, "reference_c", cfg.reference_c);
  read(j, "eps", cfg.eps);
  read(j, "budget", cfg.budget);
  read(j, "escape_im", cfg.escape_im);
  if (j.contains("window") && !j.at("window").is_null()) {
    const json& w = j.at("window");
    reject_unknown(w, kWindowFields, "window");
    WindowConfig wc;
    read(w, "center_re", wc.center_re);
    read(w, "center_im", wc.center_im);
    read(w, "width", wc.width);
    read(w, "height", wc.height);
    cfg.window = wc;
  }
  read(j, "resolution", cfg.resolution);
  read(j, "radius_factor", cfg.radius_factor);
  read(j, "k", cfg.k);
  read(j, "sign", cfg.sign);
  read(j, "im_max", cfg.im_max);
  read(j, "im_count", cfg.im_count);
  read(j, "samples", cfg.samples);
  read(j, "inject_fault", cfg.inject_fault);
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  j["theta"] = cfg.theta ? json(*cfg.theta) : json(nullptr);
  j["target"] = cfg.target ? json(*cfg.target) : json(nullptr);
  j["depth"] = cfg.depth;
  j["level"] = cfg.level ? json(*cfg.level) : json(nullptr);
  j["tol"] = cfg.tol;
  j["precision"] = to_string(cfg.precision);
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  j["side"] = cfg.side;
  j["reference_c"] = cfg.reference_c ? json(*cfg.reference_c) : json(nullptr);
  j["eps"] = cfg.eps;
  j["budget"] = cfg.budget;
  j["escape_im"] = cfg.escape_im;
  if (cfg.window) {
    j["window"] = {{"center_re", cfg.window->center_re},
                   {"center_im", cfg.window->center_im},
                   {"width", cfg.window->width},
                   {"height", cfg.window->height}};
  } else {
    j["window"] = nullptr;
  }
  j["resolution"] = cfg.resolution;
  j["radius_factor"] = cfg.radius_factor;
  j["k"] = cfg.k;
  j["sign"] = cfg.sign;
  j["im_max"] = cfg.im_max;
  j["im_count"] = cfg.im_count;
  j["samples"] = cfg.samples;
  j["inject_fault"] = cfg.inject_fault;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void validate(const ExperimentConfig& cfg) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ParameterError(msg);
  };
  require(std::find(kCommands.begin(), kCommands.end(), cfg.command) != kCommands.end(),
          "unknown command '" + cfg.command + "'");
  const Family fam = parse_family(cfg.family);
  require(fam != Family::Custom, "family must be arnold or two_harmonic");
  require(std::isfinite(cfg.c), "c must be finite");
  require(!cfg.theta || std::isfinite(*cfg.theta), "theta must be finite");
  require(cfg.depth >= 1 && cfg.depth <= 200, "depth must lie in [1, 200]");
  require(!cfg.level || (*cfg.level >= 0 && *cfg.level <= 20), "level must lie in [0, 20]");
  require(cfg.tol > 0.0 && cfg.tol < 1.0, "tol must lie in (0, 1)");
  require(!cfg.out.empty(), "out must be a directory path");
  require(cfg.side == "left" || cfg.side == "right" || cfg.side == "both",
          "side must be left, right or both");
  require(!cfg.eps.empty(), "eps must be nonempty");
  for (double e : cfg.eps) require(e > 0.0 && e < 0.5, "eps values must lie in (0, 0.5)");
  require(cfg.budget > 0, "budget must be positive");
  require(cfg.escape_im > 0.0, "escape_im must be positive");
  if (cfg.window)
    require(cfg.window->width > 0.0 && cfg.window->height > 0.0, "window sides must be positive");
  require(cfg.resolution >= 8 && cfg.resolution <= 8192, "resolution must lie in [8, 8192]");
  require(cfg.radius_factor > 0.0, "radius_factor must be positive");
  require(cfg.sign == 1 || cfg.sign == -1, "sign must be 1 or -1");
  require(cfg.im_max > 0.0, "im_max must be positive");
  require(cfg.im_count >= 1, "im_count must be at least 1");
  require(cfg.samples >= 1, "samples must be at least 1");
  if (cfg.target) parse_cf(*cfg.target, 8);
}

// ---------------------------------------------------------------------------
// output

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string num(double x) { return format_number(x); }
std::string num(std::int64_t x) { return std::to_string(x); }

std::string quotient_string(const Quotient& q) {
  return q.is_infinite() ? "inf" : std::to_string(q.value());
}

std::string quotients_string(const ContinuedFraction& cf) {
  std::string s;
  for (std::size_t i = 0; i < cf.size(); ++i) {
    if (i) s += ' ';
    s += quotient_string(cf[i]);
  }
  return s;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_field(t.header[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

bool ExperimentReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

json ExperimentReport::to_json() const {
  json j;
  j["config"] = config_to_json(config);
  j["precision_used"] = critlab::to_string(precision_used);
  j["mantissa_bits"] = mantissa_bits(precision_used);
  json tabs = json::object();
  for (const auto& t : tables) {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    tabs[t.name] = {{"header", t.header}, {"rows", rows}};
  }
  j["tables"] = tabs;
  json asserts = json::array();
  for (const auto& a : assertions)
    asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  j["assertions"] = asserts;
  j["files"] = files;
  j["passed"] = passed();
  j["wall_seconds"] = wall_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// commands

namespace {

constexpr int kTargetDepth = 64;

struct Context {
  const ExperimentConfig& cfg;
  ExperimentReport& report;
  std::filesystem::path dir;

  void check(std::string name, bool ok, std::string detail) {
    report.assertions.push_back({std::move(name), ok, std::move(detail)});
  }
  Table& table(std::string name, std::vector<std::string> header) {
    report.tables.push_back({std::move(name), std::move(header), {}});
    return report.tables.back();
  }
  std::string path(const std::string& file) {
    report.files.push_back(file);
    return (dir / file).string();
  }
};

FamilySpec family_spec(const ExperimentConfig& cfg) {
  return FamilySpec{parse_family(cfg.family), cfg.c, cfg.precision};
}

struct ResolvedParameter {
  Lift F;
  std::optional<ContinuedFraction> target;
  double rho_bound = 0.0;
};

// theta wins over target; neither means the golden mean.
ResolvedParameter resolve_parameter(Context& ctx, const FamilySpec& spec) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.theta) return {spec.at(*cfg.theta), std::nullopt, 0.0};
  const ContinuedFraction target = parse_cf(cfg.target.value_or("golden"), kTargetDepth);
  const ParameterSolution sol = solve_parameter(spec, target, cfg.tol);
  auto& t = ctx.table("parameter", {"theta", "rho_bound", "bisection_steps"});
  t.rows.push_back({num(sol.theta), num(sol.rho_bound), num(std::int64_t{sol.bisection_steps})});
  return {spec.at(sol.theta_ext), target, sol.rho_bound};
}

// Value p/q of a terminating expansion [a_1, a_2, ...] = 1/(a_1 + 1/(a_2 + ...)).
std::optional<std::pair<std::int64_t, std::int64_t>> rational_value(const ContinuedFraction& cf) {
  if (!cf.exhausted() && !cf.ends_in_infinity()) return std::nullopt;
  std::int64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  for (std::int64_t a : cf.finite_prefix()) {
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::pair{p1, q1};
}

// Distance from rho to the value of a truncated expansion is at most 1/q_K^2.
double truncation_bound(const ContinuedFraction& cf) {
  if (cf.exhausted() || cf.ends_in_infinity()) return 0.0;
  double q0 = 0.0, q1 = 1.0;
  for (std::int64_t a : cf.finite_prefix()) {
    const double q2 = static_cast<double>(a) * q1 + q0;
    q0 = q1;
    q1 = q2;
  }
  return 1.0 / (q1 * q1);
}

bool same_prefix(const ContinuedFraction& a, const ContinuedFraction& b, std::size_t n) {
  if (a.size() < n || b.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

void cmd_rho(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedParameter rp = resolve_parameter(ctx, family_spec(cfg));
  const std::int64_t n = cfg.precision == Precision::Double ? 1'000'000 : 100'000;
  const RotationEstimate est = rotation_number_real(rp.F, n);
  const ContinuedFraction cf = rotation_number_cf(rp.F, cfg.depth);
  auto& t = ctx.table("rho", {"theta", "rho", "bound", "cf_value", "quotients"});
  const double value = real_from_cf(cf);
  t.rows.push_back({num(rp.F.theta()), num(est.value), num(est.bound), num(value), quotients_string(cf)});
  const double gap = std::abs(value - est.value);
  const double allowed = est.bound + truncation_bound(cf) + 1e-12;
  ctx.check("quotients agree with the averaged estimate", gap <= allowed,
            "|cf - estimate| = " + num(gap) + ", allowed " + num(allowed));
  if (rp.target) {
    const std::size_t k = std::min<std::size_t>(cf.size(), rp.target->size());
    ctx.check("quotients match the target", same_prefix(cf, *rp.target, k) || rp.target->exhausted(),
              "compared " + std::to_string(k) + " quotients");
  }
}

TongueSide tongue_side(const std::string& s) { return s == "left" ? TongueSide::Left : TongueSide::Right; }

void tongue_rows(Context& ctx, std::int64_t p, std::int64_t q, const std::vector<std::string>& sides) {
  const FamilySpec spec = family_spec(ctx.cfg);
  auto& t = ctx.table("tongue", {"p", "q", "side", "theta", "orbit_point", "multiplier", "residual"});
  std::vector<double> thetas;
  for (const auto& side : sides) {
    const TongueBoundary b = tongue_boundary(spec, p, q, tongue_side(side), ctx.cfg.tol);
    t.rows.push_back({num(p), num(q), side, num(b.theta), num(b.orbit_point), num(b.multiplier),
                      num(b.residual)});
    thetas.push_back(b.theta);
    ctx.check(side + " boundary multiplier is 1", std::abs(b.multiplier - 1.0) <= 1e-8,
              "multiplier " + num(b.multiplier));
    ctx.check(side + " boundary orbit is periodic", std::abs(b.residual) <= 1e-9,
              "residual " + num(b.residual));
  }
  if (thetas.size() == 2)
    ctx.check("left boundary below right boundary", thetas[0] <= thetas[1],
              num(thetas[0]) + " <= " + num(thetas[1]));
}

std::pair<std::int64_t, std::int64_t> require_rational(const ExperimentConfig& cfg) {
  if (!cfg.target) throw ParameterError(cfg.command + " needs a rational target p/q");
  const auto pq = rational_value(parse_cf(*cfg.target, kTargetDepth));
  if (!pq) throw ParameterError(cfg.command + " needs a rational target p/q, got '" + *cfg.target + "'");
  return *pq;
}

void cmd_tongue(Context& ctx) {
  const auto [p, q] = require_rational(ctx.cfg);
  const std::string& side = ctx.cfg.side;
  tongue_rows(ctx, p, q, side == "both" ? std::vector<std::string>{"left", "right"}
                                         : std::vector<std::string>{side});
}

void cmd_solve(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (!cfg.target) throw ParameterError("solve needs --target");
  const ContinuedFraction target = parse_cf(*cfg.target, kTargetDepth);
  const auto pq = rational_value(target);
  if (pq && cfg.side != "both") {
    tongue_rows(ctx, pq->first, pq->second, {cfg.side});
    return;
  }
  const FamilySpec spec = family_spec(cfg);
  const ParameterSolution sol = solve_parameter(spec, target, cfg.tol);
  auto& t = ctx.table("solve", {"theta", "theta_digits", "rho_bound", "bisection_steps", "target"});
  t.rows.push_back({num(sol.theta), sol.theta_ext.str(40), num(sol.rho_bound),
                    num(std::int64_t{sol.bisection_steps}), target.to_string()});
  ctx.check("certified rotation bound within tol", sol.rho_bound <= cfg.tol,
            "bound " + num(sol.rho_bound) + ", tol " + num(cfg.tol));
  const Lift F = spec.at(sol.theta_ext);
  if (pq) {
    const std::int64_t q = pq->second;
    const double drift = LiftIterate{F, q, pq->first}(0.0);
    ctx.check("critical orbit is periodic", std::abs(drift) <= 1e-9, "F^q(0) - p = " + num(drift));
  } else {
    const std::size_t k = std::min<std::size_t>(10, static_cast<std::size_t>(cfg.depth));
    const ContinuedFraction cf = rotation_number_cf(F, static_cast<int>(k));
    ctx.check("rotation quotients match the target", same_prefix(cf, target, k),
              "measured " + cf.to_string());
  }
}

void cmd_renorm(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const FamilySpec spec = family_spec(cfg);
  const ResolvedParameter rp = resolve_parameter(ctx, spec);
  const ContinuedFraction cf =
      rp.target ? *rp.target : rotation_number_cf(rp.F, cfg.depth + 1);
  if (cf.empty() || cf[0].is_infinite()) throw ParameterError("rotation number is 0; nothing to renormalize");
  const std::int64_t r0 = cf[0].value();

  std::optional<OrbitLog> ref;
  if (cfg.reference_c) {
    if (!rp.target) throw ParameterError("a reference family needs --target");
    const FamilySpec ref_spec{Family::TwoHarmonic, *cfg.reference_c, cfg.precision};
    const ParameterSolution sol = solve_parameter(ref_spec, *rp.target, cfg.tol);
    ref = renorm_orbit(base_pair(ref_spec.at(sol.theta_ext), r0), cfg.depth);
  }
  const OrbitLog log = renorm_orbit(base_pair(rp.F, r0), cfg.depth, ref ? &*ref : nullptr);

  auto& t = ctx.table("orbit", {"m", "height", "len_eta", "len_xi", "ratio", "scaling", "distance"});
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const OrbitRow& r = log.rows[i];
    const std::string scaling = i + 1 < log.rows.size() ? num(log.rows[i + 1].len_eta / r.len_eta) : "";
    t.rows.push_back({num(std::int64_t{r.m}), quotient_string(r.height), num(r.len_eta), num(r.len_xi),
                      num(r.ratio), scaling, r.distance ? num(*r.distance) : ""});
  }

  ctx.check("orbit reached the requested depth",
            log.rows.size() == static_cast<std::size_t>(cfg.depth) || log.parabolic_stop ||
                log.degenerate_stop,
            std::to_string(log.rows.size()) + " levels");
  std::size_t mismatches = 0, compared = 0;
  for (std::size_t i = 0; i < log.rows.size() && i + 1 < cf.size(); ++i, ++compared)
    if (!(log.rows[i].height == cf[i + 1])) ++mismatches;
  ctx.check("heights follow the Gauss shift", mismatches == 0,
            std::to_string(mismatches) + " of " + std::to_string(compared) + " differ");
  std::size_t bad_pairs = 0;
  for (const auto& z : log.pairs)
    if (!check_pair(z).pass) ++bad_pairs;
  ctx.check("pair invariants along the orbit", bad_pairs == 0, std::to_string(bad_pairs) + " failures");
  if (ref) {
    bool monotone = true;
    std::string detail;
    for (std::size_t i = 5; i < log.rows.size() && i <= 10; ++i) {
      const auto& a = log.rows[i - 1].distance;
      const auto& b = log.rows[i].distance;
      if (a && b && *b > *a) {
        monotone = false;
        detail = "increase at m = " + std::to_string(i);
      }
    }
    ctx.check("distance to reference nonincreasing for m in [4, 10]", monotone,
              detail.empty() ? "monotone" : detail);
  }
}

void cmd_parabolic(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const FamilySpec spec = family_spec(cfg);
  const double theta0 = cfg.theta ? *cfg.theta : tongue_boundary(spec, 0, 1, TongueSide::Right, 1e-14).theta;
  const CommutingPair z = normalize(circle_pair(spec.at(theta0)));
  const ParabolicGerm g = pair_germ(z);

  auto& gt = ctx.table("germ", {"theta0", "p", "a", "b", "c", "beta", "switch_radius"});
  gt.rows.push_back({num(theta0), num(g.p()), num(g.a()), num(g.b()), num(g.c()), num(g.beta()),
                     num(g.switch_radius())});

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ang(-0.6, 0.6), rad(20.0, 200.0);
  auto& at = ctx.table("abel", {"w_re", "w_im", "attracting_residual", "repelling_residual"});
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx w = std::polar(rad(rng), ang(rng));
    const cplx za = g.z_of(w), zr = g.z_of(-w);
    const double ra = std::abs(g.attracting(g.host()(za)) - g.attracting(za) - 1.0);
    const double rr = std::abs(g.repelling(g.host()(zr)) - g.repelling(zr) - 1.0);
    worst = std::max({worst, ra, rr});
    at.rows.push_back({num(w.real()), num(w.imag()), num(ra), num(rr)});
  }
  ctx.check("Abel residual below 1e-8", worst < 1e-8, "max residual " + num(worst));

  const ContinuedFraction target = parse_cf(cfg.target.value_or("golden"), kTargetDepth);
  const PlateauSide side = cfg.side == "right" ? PlateauSide::Right : PlateauSide::Left;
  const double transit_tol = std::max(cfg.tol, 1e-12);
  const TransitSolution sol = solve_transit(z, g, target, transit_tol, side);
  const EquatorMap E = equator_circle_map(z, g, sol.theta);
  const double rho_e = E.rotation(20000);
  const CommutingPair P = parabolic_renormalize(z, g, sol.theta);
  const int cf_depth = std::min(cfg.depth, 12);
  const ContinuedFraction pcf = pair_rotation_cf(P, cf_depth);
  auto& tt = ctx.table("transit", {"theta", "rho_bound", "equator_rotation", "pair_quotients"});
  tt.rows.push_back({num(sol.theta), num(sol.rho_bound), num(rho_e), quotients_string(pcf)});
  const double wanted = std::max(transit_tol, 1e-8);
  ctx.check("transit parameter hits the target", sol.rho_bound <= wanted,
            "certified bound " + num(sol.rho_bound));
  if (!target.exhausted()) {
    ctx.check("renormalized pair has the target quotients",
              same_prefix(pcf, target, static_cast<std::size_t>(cf_depth)), "measured " + pcf.to_string());
  }

  if (spec.family != Family::Arnold || cfg.theta) return;
  const auto host_at = [](double th) { return RealMap::lift_iterate(LiftIterate{Lift::arnold(th), 1, 0}); };
  const ParabolicGerm g0 = find_parabolic_point(host_at(theta0), 0.0, 0.5);
  auto& pt = ctx.table("phase", {"eps", "theta_pred", "measured", "discrepancy"});
  std::vector<double> disc;
  for (double eps : cfg.eps) {
    const RealMap host = host_at(theta0 + eps);
    const PerturbedGermData md = multiplier_data(host, g0.p(), g0.a());
    const double measured = measured_transit_phase(host, g0);
    disc.push_back(circle_distance(md.theta_pred, measured));
    pt.rows.push_back({num(eps), num(md.theta_pred), num(measured), num(disc.back())});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < disc.size(); ++i)
    if (!(cfg.eps[i] < cfg.eps[i - 1] && disc[i] < disc[i - 1])) decreasing = false;
  ctx.check("phase discrepancy decreases with eps", decreasing, "see phase table");
}

ComplexWindow window_of(const ExperimentConfig& cfg, const WindowConfig& fallback) {
  const WindowConfig w = cfg.window.value_or(fallback);
  ComplexWindow win{cplx(w.center_re, w.center_im), w.width, w.height, cfg.resolution};
  win.validate();
  return win;
}

void write_grid(Context& ctx, const std::string& file, const LabeledGrid& grid) {
  std::ofstream os(ctx.path(file), std::ios::binary);
  write_ppm(os, grid);
  if (!os) throw Error("cannot write " + file);
}

void cmd_julia(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedParameter rp = resolve_parameter(ctx, family_spec(cfg));
  const ComplexWindow win = window_of(cfg, WindowConfig{});
  const LabeledGrid grid = julia_grid(rp.F, win, cfg.budget, cfg.escape_im);
  write_grid(ctx, "julia.ppm", grid);
  std::size_t escaped = 0;
  for (PixelLabel l : grid.labels) escaped += l == PixelLabel::Escaped;
  auto& t = ctx.table("julia", {"theta", "resolution", "budget", "escaped", "bounded"});
  t.rows.push_back({num(rp.F.theta()), num(std::int64_t{cfg.resolution}), num(cfg.budget),
                    num(static_cast<std::int64_t>(escaped)),
                    num(static_cast<std::int64_t>(grid.labels.size() - escaped))});
  ctx.check("every pixel is labeled", grid.labels.size() == static_cast<std::size_t>(win.resolution) * win.resolution,
            std::to_string(grid.labels.size()) + " pixels");
  if (win.center.imag() == 0.0) {
    std::size_t mismatch = 0;
    const int n = win.resolution;
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) mismatch += grid.at(col, row) != grid.at(col, n - 1 - row);
    const double frac = static_cast<double>(mismatch) / static_cast<double>(grid.labels.size());
    ctx.check("grid is symmetric under conjugation", frac <= 1e-3, "mismatch fraction " + num(frac));
  }
}

void cmd_gamma(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedParameter rp = resolve_parameter(ctx, family_spec(cfg));
  std::vector<double> ys;
  for (int i = 1; i <= cfg.im_count; ++i) ys.push_back(cfg.im_max * i / cfg.im_count);
  const GammaCurve curve = gamma_curve(rp.F.theta(), cfg.k, cfg.sign, ys);
  std::ofstream(ctx.path("gamma.csv")) << [&] {
    std::ostringstream os;
    write_gamma_csv(os, curve);
    return os.str();
  }();
  auto& t = ctx.table("gamma", {"y", "x", "offset", "residual", "closed_form"});
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.y.size(); ++i) {
    worst = std::max(worst, curve.residual[i]);
    t.rows.push_back({num(curve.y[i]), num(curve.x[i]), num(curve.offset[i]), num(curve.residual[i]),
                      num(gamma_closed_form(cfg.k, cfg.sign, curve.y[i]))});
  }
  ctx.check("vertex residual below 1e-9", worst < 1e-9, "max residual " + num(worst));
  if (cfg.im_max >= 3.0) {
    const GammaCurve at3 = gamma_curve(rp.F.theta(), cfg.k, cfg.sign, {3.0});
    const double asym = static_cast<double>(cfg.k) + 0.25 * cfg.sign;
    const double dev = std::abs(at3.x[0] - asym);
    ctx.check("curve is near its asymptote at Im = 3", dev < 5e-3, "|Re - (k +- 1/4)| = " + num(dev));
  }
}

double interval_length(const Lift& F, int n) {
  const Convergents cv = convergents(rotation_number_cf(F, n + 3), n + 1);
  return std::abs(LiftIterate{F, cv.q[n], cv.p[n]}(0.0));
}

void cmd_domains(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedParameter rp = resolve_parameter(ctx, family_spec(cfg));
  const int n = cfg.level.value_or(4);
  const double R = cfg.radius_factor * interval_length(rp.F, n);
  const ComplexWindow def = default_domain_window(R, cfg.resolution);
  const ComplexWindow win = window_of(
      cfg, WindowConfig{def.center.real(), def.center.imag(), def.width, def.height});
  const DomainGrid d = domain_grid(rp.F, n, R, win);
  write_grid(ctx, "domains.ppm", d.grid);
  const ExpansionReport ex = expansion_check(rp.F, d, cfg.samples, cfg.seed);
  auto& t = ctx.table("domains", {"level", "R", "margin", "count_u", "count_v", "count_both",
                                  "overlap_radius_px", "expansion_samples", "violations", "min_norm"});
  t.rows.push_back({num(std::int64_t{n}), num(R), num(d.margin), num(static_cast<std::int64_t>(d.count_u)),
                    num(static_cast<std::int64_t>(d.count_v)), num(static_cast<std::int64_t>(d.count_both)),
                    num(d.overlap_radius_px), num(static_cast<std::int64_t>(ex.samples)),
                    num(static_cast<std::int64_t>(ex.violations)), num(ex.min_norm)});
  ctx.check("domains compactly contained in the disk", d.margin > 0.0, "margin " + num(d.margin));
  ctx.check("U and V overlap only near the origin", d.overlap_radius_px <= 2.0,
            "overlap radius " + num(d.overlap_radius_px) + " px");
  ctx.check("forward hyperbolic norms exceed 1", ex.violations == 0,
            std::to_string(ex.violations) + " violations, min norm " + num(ex.min_norm));
}

void cmd_cubicfit(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedParameter rp = resolve_parameter(ctx, family_spec(cfg));
  const int m = cfg.level.value_or(6);
  const CubicFit fit = cubic_estimate_fit(rp.F, m, cfg.samples, cfg.seed, cfg.resolution);
  auto& s = ctx.table("samples", {"log_x", "log_y"});
  for (std::size_t i = 0; i < fit.log_x.size(); ++i) s.rows.push_back({num(fit.log_x[i]), num(fit.log_y[i])});
  auto& t = ctx.table("fit", {"level", "slope", "intercept", "offset", "rms", "r2", "samples"});
  t.rows.push_back({num(std::int64_t{m}), num(fit.slope), num(fit.intercept), num(fit.offset), num(fit.rms),
                    num(fit.r2), num(static_cast<std::int64_t>(fit.samples))});
  ctx.check("log-log slope in [2.7, 3.3]", fit.slope >= 2.7 && fit.slope <= 3.3, "slope " + num(fit.slope));
}

void cmd_check(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  auto& t = ctx.table("check", {"suite", "cases", "failures"});
  auto record = [&](const std::string& suite, std::size_t cases, std::size_t failures) {
    t.rows.push_back({suite, num(static_cast<std::int64_t>(cases)), num(static_cast<std::int64_t>(failures))});
    ctx.check(suite, failures == 0, std::to_string(failures) + " of " + std::to_string(cases) + " failed");
  };

  // Continued fractions: rational round trips and Fibonacci convergents.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> den(2, 1'000'000);
  std::size_t bad = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    const std::int64_t q = den(rng);
    const std::int64_t p = std::uniform_int_distribution<std::int64_t>(1, q - 1)(rng);
    const auto pq = rational_value(rational_cf(p, q));
    const std::int64_t g = std::gcd(p, q);
    if (!pq || pq->first != p / g || pq->second != q / g) ++bad;
  }
  record("rational expansions round trip", trials, bad);
  const Convergents fib = convergents(ContinuedFraction::golden(31), 30);
  bad = 0;
  for (int m = 2; m <= 30; ++m)
    if (fib.q[m] != fib.q[m - 1] + fib.q[m - 2]) ++bad;
  record("golden convergents are Fibonacci", 29, bad);

  // Circle maps and pair laws at the golden parameter.
  const FamilySpec spec = family_spec(cfg);
  const Lift F = spec.at(solve_parameter(spec, ContinuedFraction::golden(kTargetDepth), 1e-12).theta_ext);
  record("lift diagnostics", 1, validate_lift(F).pass ? 0 : 1);
  const TongueBoundary b = tongue_boundary(FamilySpec{}, 0, 1, TongueSide::Right, 1e-13);
  record("Arnold 0/1 boundary is 1/(2 pi)", 1,
         std::abs(b.theta - 1.0 / (2.0 * std::numbers::pi)) <= 1e-10 ? 0 : 1);
  const int levels = 8;
  const OrbitLog log = renorm_orbit(base_pair(F, 1), levels);
  const ContinuedFraction expected =
      cfg.inject_fault ? ContinuedFraction::lead_then_golden(2, levels + 1) : ContinuedFraction::golden(levels + 1);
  bad = 0;
  for (std::size_t i = 0; i < log.rows.size(); ++i)
    if (!(log.rows[i].height == expected[i]) || !check_pair(log.pairs[i]).pass) ++bad;
  bad += static_cast<std::size_t>(levels) - std::min<std::size_t>(levels, log.rows.size());
  record(cfg.inject_fault ? "pair laws against an injected wrong target" : "pair laws along the golden orbit",
         levels, bad);

  // Expansion sampling on a coarse level-3 domain grid.
  const double R = kDomainRadiusFactor * interval_length(F, 3);
  const DomainGrid d = domain_grid(F, 3, R, default_domain_window(R, 200));
  const ExpansionReport ex = expansion_check(F, d, 200, cfg.seed);
  record("expansion sampling", ex.samples, ex.violations);
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  report.precision_used = cfg.precision;
  std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParameterError("cannot create output directory '" + cfg.out + "': " + ec.message());
  Context ctx{cfg, report, dir};

  if (cfg.command == "rho") cmd_rho(ctx);
  else if (cfg.command == "solve") cmd_solve(ctx);
  else if (cfg.command == "tongue") cmd_tongue(ctx);
  else if (cfg.command == "renorm") cmd_renorm(ctx);
  else if (cfg.command == "parabolic") cmd_parabolic(ctx);
  else if (cfg.command == "julia") cmd_julia(ctx);
  else if (cfg.command == "gamma") cmd_gamma(ctx);
  else if (cfg.command == "domains") cmd_domains(ctx);
  else if (cfg.command == "cubicfit") cmd_cubicfit(ctx);
  else if (cfg.command == "check") cmd_check(ctx);

  for (const auto& t : report.tables) {
    const std::string file = cfg.command + "_" + t.name + ".csv";
    std::ofstream os(ctx.path(file), std::ios::binary);
    write_csv(os, t);
    if (!os) throw Error("cannot write " + file);
  }
  report.files.push_back(cfg.command + "_report.json");
  report.wall_seconds = seconds_since(t0);
  std::ofstream os(dir / (cfg.command + "_report.json"), std::ios::binary);
  os << report.to_json().dump(2) << '\n';
  if (!os) throw Error("cannot write report");
  return report;
}

}  // namespace critlab::lab
