#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "critlab/errors.hpp"
#include "critlab/lab.hpp"

using namespace critlab;

int main(int argc, char** argv) {
  CLI::App app{"critlab experiment runner"};
  app.set_version_flag("--version", "crlab 0.1");

  std::string command, config_path;
  std::string commands_help = "one of:";
  for (const auto& c : lab::kCommands) commands_help += " " + c;
  app.add_option("command", command, commands_help);
  app.add_option("--config", config_path, "JSON config file; flags override its fields")->check(CLI::ExistingFile);

  std::optional<std::string> family, target, precision, out, side;
  std::optional<double> theta, c, tol, reference_c, escape_im, radius_factor, im_max;
  std::optional<int> depth, level, resolution, sign, im_count;
  std::optional<std::int64_t> budget, k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::vector<double> eps, window;
  bool inject_fault = false;

  app.add_option("--family", family, "arnold | two_harmonic");
  app.add_option("--theta", theta, "family parameter");
  app.add_option("--c", c, "second-harmonic coefficient");
  app.add_option("--target", target, "rotation number: golden, p/q, decimal, or quotients like 1,1,1 or 10,(1)");
  app.add_option("--depth", depth, "continued fraction / orbit depth");
  app.add_option("--level", level, "renormalization level for domains and cubicfit");
  app.add_option("--tol", tol, "solver tolerance");
  app.add_option("--precision", precision, "double | ext128 | ext256");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_option("--side", side, "left | right | both");
  app.add_option("--reference-c", reference_c, "two-harmonic reference family for renorm distances");
  app.add_option("--eps", eps, "parameter offsets for the phase experiment");
  app.add_option("--budget", budget, "escape-time iteration budget");
  app.add_option("--escape-im", escape_im, "escape threshold on |Im z|");
  app.add_option("--window", window, "center_re center_im width height")->expected(4);
  app.add_option("--resolution", resolution, "pixels per axis");
  app.add_option("--radius-factor", radius_factor, "domain radius in units of |I_n|");
  app.add_option("--k", k, "gamma curve index");
  app.add_option("--sign", sign, "gamma curve branch (1 or -1)");
  app.add_option("--im-max", im_max, "largest imaginary part on the gamma curve");
  app.add_option("--im-count", im_count, "number of gamma curve vertices");
  app.add_option("--samples", samples, "sample count for expansion and cubic fit");
  app.add_flag("--inject-fault", inject_fault, "check: add a deliberately failing assertion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lab::kPass : lab::kUsageError;
  }

  try {
    lab::ExperimentConfig cfg = config_path.empty() ? lab::ExperimentConfig{} : lab::load_config(config_path);
    if (!command.empty()) cfg.command = command;
    if (family) cfg.family = *family;
    if (theta) cfg.theta = theta;
    if (c) cfg.c = *c;
    if (target) cfg.target = target;
    if (depth) cfg.depth = *depth;
    if (level) cfg.level = level;
    if (tol) cfg.tol = *tol;
    if (precision) cfg.precision = parse_precision(*precision);
    if (out) cfg.out = *out;
    if (seed) cfg.seed = *seed;
    if (side) cfg.side = *side;
    if (reference_c) cfg.reference_c = reference_c;
    if (!eps.empty()) cfg.eps = eps;
    if (budget) cfg.budget = *budget;
    if (escape_im) cfg.escape_im = *escape_im;
    if (!window.empty()) cfg.window = lab::WindowConfig{window[0], window[1], window[2], window[3]};
    if (resolution) cfg.resolution = *resolution;
    if (radius_factor) cfg.radius_factor = *radius_factor;
    if (k) cfg.k = *k;
    if (sign) cfg.sign = *sign;
    if (im_max) cfg.im_max = *im_max;
    if (im_count) cfg.im_count = *im_count;
    if (samples) cfg.samples = *samples;
    if (inject_fault) cfg.inject_fault = true;
    if (cfg.command.empty()) throw ParameterError("no command given");

    const lab::ExperimentReport report = lab::run(cfg);
    for (const auto& a : report.assertions)
      std::printf("%s  %s  (%s)\n", a.passed ? "PASS" : "FAIL", a.name.c_str(), a.detail.c_str());
    std::printf("%s: %zu assertions, %s, %.3f s, output in %s\n", cfg.command.c_str(),
                report.assertions.size(), report.passed() ? "all passed" : "FAILED", report.wall_seconds,
                cfg.out.c_str());
    return report.passed() ? lab::kPass : lab::kAssertionFailure;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "crlab: usage error: %s\n", e.what());
    return lab::kUsageError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "crlab: numerical failure: %s\n", e.what());
    return lab::kNumericalFailure;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "crlab: invariant violated: %s\n", e.what());
    return lab::kAssertionFailure;
  } catch (const Error& e) {
    std::fprintf(stderr, "crlab: %s\n", e.what());
    return lab::kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "crlab: unexpected error: %s\n", e.what());
    return lab::kNumericalFailure;
  }
}
