// Command-line front end: zeeman_sim <command> [flags]

#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "zeeman/cli.hpp"

namespace {

using namespace zeeman;
using namespace zeeman::cli;

struct Flags {
  std::string config;
  std::optional<double> g, alpha, omega, beta, start, stop, t, drift, gamma;
  std::optional<int> steps, n_period, cycles;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  std::vector<double> c1, c2;
  std::vector<int> initial;
  bool parallel = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
  sub->add_option("--g", f.g, "atom-field coupling g");
  sub->add_option("--alpha", f.alpha, "dipole-dipole coefficient");
  sub->add_option("--omega", f.omega, "cavity frequency");
  sub->add_option("--beta", f.beta, "Zeeman splitting");
  sub->add_option("--out", f.out, "output path (stdout when omitted)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", f.seed, "seed for stochastic elements");
  sub->add_flag("--parallel", f.parallel, "evaluate time-grid points on several threads");
}

void add_grid(CLI::App* sub, Flags& f) {
  sub->add_option("--start", f.start, "first gt of the grid");
  sub->add_option("--stop", f.stop, "last gt of the grid");
  sub->add_option("--steps", f.steps, "number of grid points");
}

RunConfig resolve(Command cmd, const Flags& f) {
  RunConfig c = default_config(cmd);
  if (!f.config.empty()) {
    c = merge_config(c, load_config_file(f.config));
    c.command = cmd;
  }
  if (f.g) c.params.g = *f.g;
  if (f.alpha) c.params.alpha = *f.alpha;
  if (f.omega) c.params.omega = *f.omega;
  if (f.beta) c.params.beta = *f.beta;
  if (f.start) c.grid.start = *f.start;
  if (f.stop) c.grid.stop = *f.stop;
  if (f.steps) c.grid.steps = *f.steps;
  if (f.t) c.grid = {*f.t, *f.t, 1};
  if (f.n_period) c.n_period = *f.n_period;
  if (f.cycles) c.cycles = *f.cycles;
  if (f.drift) c.drift = *f.drift;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = format_from_string(*f.format);
  if (!f.c1.empty()) c.c1 = {f.c1[0], f.c1[1]};
  if (!f.c2.empty()) c.c2 = {f.c2[0], f.c2[1]};
  if (!f.initial.empty()) c.initial = {f.initial[0], f.initial[1], f.initial[2]};
  if (f.parallel) c.parallel = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two Zeeman-split three-level atoms in a single-mode cavity"};
  app.require_subcommand(1);
  Flags f;

  auto* evolve = app.add_subcommand("evolve", "amplitudes of a sector state over a gt grid");
  add_common(evolve, f);
  add_grid(evolve, f);
  evolve->add_option("--t", f.t, "single gt instead of a grid");
  evolve->add_option("--initial", f.initial, "initial basis state: photons m1 m2")->expected(3);

  auto* verify = app.add_subcommand("verify", "closed-form propagators against the numeric exponential");
  add_common(verify, f);
  add_grid(verify, f);

  auto* epr = app.add_subcommand("epr", "post-selected entangled pair generation");
  add_common(epr, f);
  epr->add_option("--n-period", f.n_period, "period index n >= 1");

  auto* exchange = app.add_subcommand("exchange", "local exchange in one cavity");
  add_common(exchange, f);
  exchange->add_option("--n-period", f.n_period, "period index n >= 0");
  exchange->add_option("--initial", f.initial, "initial basis state: photons m1 m2")->expected(3);

  auto* transfer = app.add_subcommand("transfer", "move a pair state onto two probe atoms");
  add_common(transfer, f);
  transfer->add_option("--n-period", f.n_period, "period index n >= 0");
  transfer->add_option("--c1", f.c1, "amplitude c1 as re im")->expected(2);
  transfer->add_option("--c2", f.c2, "amplitude c2 as re im")->expected(2);

  auto* feedback = app.add_subcommand("feedback", "closed-loop generation, transfer and re-estimation");
  add_common(feedback, f);
  feedback->add_option("--cycles", f.cycles, "number of cycles");
  feedback->add_option("--drift", f.drift, "relative drift of g per cycle");
  feedback->add_option("--gamma", f.gamma, "phenomenological damping rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      const RunConfig config = resolve(command_from_string(sub->get_name()), f);
      return run(config, std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kConfigError;
}
