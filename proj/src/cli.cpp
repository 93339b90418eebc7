#include "cavent/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "cavent/config.hpp"
#include "cavent/experiments.hpp"
#include "cavent/hilbert.hpp"
#include "cavent/measures.hpp"
#include "cavent/model.hpp"
#include "cavent/open.hpp"

namespace cavent::cli {
namespace {

using config::Config;

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// options shared by every subcommand that builds a configuration
struct CommonOpts {
  std::string config_file;
  std::vector<std::string> sets;
  int threads = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_file,
                    "file of key=value lines, one setting per line");
    cmd->add_option("--set", sets,
                    "override one setting as key=value (repeatable)");
    cmd->add_option("--threads", threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
  }

  // precedence: built-in defaults, then CAVENT_OUT_DIR, then the config
  // file, then each --set in order, then --threads
  Config build() const {
    Config c;
    if (const char* env = std::getenv("CAVENT_OUT_DIR")) c.out_dir = env;
    if (!config_file.empty()) c.load_file(config_file);
    for (const auto& s : sets) c.apply_pair(s);
    if (threads > 0) c.threads = threads;
    return c;
  }
};

void print_amplitudes(const char* name, const hilbert::SubspaceState& v) {
  // the closed-form vectors are real; print them as such
  std::cout << name << " = (" << fmt(v.alpha.real()) << ", "
            << fmt(v.beta.real()) << ", " << fmt(v.gamma.real()) << ")\n";
}

int do_list() {
  for (const auto& s : experiments::list_scenarios())
    std::cout << std::left << std::setw(24) << s.name << s.description << "\n";
  return 0;
}

int do_run(const std::string& scenario, const CommonOpts& opts) {
  Config c = opts.build();
  for (const auto& path : experiments::run_scenario(scenario, c))
    std::cout << path << "\n";
  return 0;
}

int do_eigen(const CommonOpts& opts) {
  model::ModelParams p = opts.build().resolved_params();
  auto es = model::analytic_eigensystem(p);
  std::cout << "e1 = " << fmt(es.e1) << "\n"
            << "e2 = " << fmt(es.e2) << "\n"
            << "e3 = " << fmt(es.e3) << "\n";
  std::cout << "amplitudes on (|100>, |010>, |001>)\n";
  print_amplitudes("v1", es.v1);
  print_amplitudes("v2", es.v2);
  print_amplitudes("v3", es.v3);
  return 0;
}

int do_steady(const CommonOpts& opts) {
  model::ModelParams p = opts.build().resolved_params();
  Mat rho = open::steady_state(p);
  Mat reduced = hilbert::partial_trace_cavity(rho, p.n_max);
  auto ops = hilbert::build_operator_set(p.n_max);
  double photons = (rho * ops.a_dag * ops.a).trace().real();
  std::cout << "E_ss = " << fmt(measures::concurrence(reduced)) << "\n"
            << "coherence = " << fmt(measures::coherence_offdiag(reduced))
            << "\n"
            << "s1z = " << fmt(measures::expectation_sz(reduced, 1)) << "\n"
            << "s2z = " << fmt(measures::expectation_sz(reduced, 2)) << "\n"
            << "photons = " << fmt(photons) << "\n";
  return 0;
}

int do_validate(const CommonOpts& opts) {
  Config c = opts.build();
  for (const auto& [k, v] : c.resolved_entries())
    std::cout << k << "=" << v << "\n";
  return 0;
}

}  // namespace

int parse_and_dispatch(std::vector<std::string> args) {
  CLI::App app{"driven two-qubit entanglement through a common cavity"};
  app.require_subcommand(1);

  CLI::App* list_cmd = app.add_subcommand("list", "list runnable scenarios");

  CLI::App* run_cmd =
      app.add_subcommand("run", "run one scenario and write its CSV datasets");
  std::string scenario;
  run_cmd->add_option("scenario", scenario, "scenario name, see `list`")
      ->required();
  CommonOpts run_opts;
  run_opts.add_to(run_cmd);

  CLI::App* eigen_cmd = app.add_subcommand(
      "eigen", "print the single-excitation eigensystem in closed form");
  CommonOpts eigen_opts;
  eigen_opts.add_to(eigen_cmd);

  CLI::App* steady_cmd = app.add_subcommand(
      "steady", "solve the stationary state and print its observables");
  CommonOpts steady_opts;
  steady_opts.add_to(steady_cmd);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "resolve the configuration and echo every setting");
  CommonOpts validate_opts;
  validate_opts.add_to(validate_cmd);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (app.got_subcommand(list_cmd)) return do_list();
    if (app.got_subcommand(run_cmd)) return do_run(scenario, run_opts);
    if (app.got_subcommand(eigen_cmd)) return do_eigen(eigen_opts);
    if (app.got_subcommand(steady_cmd)) return do_steady(steady_opts);
    if (app.got_subcommand(validate_cmd)) return do_validate(validate_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace cavent::cli
