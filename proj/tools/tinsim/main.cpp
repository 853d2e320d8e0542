#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "verification.hpp"

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv(tinsim::app::kThreadsEnv)) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid " << tinsim::app::kThreadsEnv << "=" << env << "\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tinsim::app;

  CLI::App app{"Thermal intermodulation noise engine"};
  app.require_subcommand(1);

  std::string scenario_path;
  RunOptions opts;
  opts.threads = default_threads();
  std::uint64_t seed = 0;
  std::vector<int> criteria;

  auto add_common = [&](CLI::App* sub, bool scenario_required) {
    auto* s = sub->add_option("--scenario", scenario_path, "Scenario file (YAML)");
    if (scenario_required) s->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_root, "Output root directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--threads", opts.threads, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const ScenarioInput&, const RunOptions&, std::ostream&);
  };
  const Command commands[] = {
      {"budget", "Displacement and intensity noise budgets", cmd_budget},
      {"tin", "Analytic TIN pipeline and detuning sweep", cmd_tin},
      {"landscape", "Quantum cooperativity landscape", cmd_landscape},
      {"simulate", "Time-domain Langevin oracle run and estimates", cmd_simulate},
      {"calibrate", "g0, photon number and peak calibrations", cmd_calibrate},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c.name, c.help), true);
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--criterion", criteria, "Run only these criteria (1-8)")
      ->check(CLI::Range(1, kCriterionCount));
  verify->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (verify->parsed()) {
    return run_verification(std::cout, criteria, opts.threads) ? kExitOk : kExitVerifyFailed;
  }
  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    try {
      auto in = load_scenario(scenario_path);
      if (app.get_subcommand(c.name)->count("--seed") > 0) opts.seed = seed;
      return c.run(in, opts, std::cout);
    } catch (const ScenarioError& e) {
      std::cerr << "error: " << scenario_path << ": " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
    } catch (const std::domain_error& e) {
      std::cerr << "error: " << e.what() << "\n";
    } catch (const std::out_of_range& e) {
      std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitInputError;
  }
  return kExitInputError;
}
