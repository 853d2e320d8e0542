// Acceptance suite: one PASS/FAIL line per check, a verdict per criterion.
// Exit status is 0 only when every requested criterion passes.
#include <cstdlib>
#include <iostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "verification.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tinsim acceptance suite"};
  std::vector<int> criteria;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv(tinsim::app::kThreadsEnv)) threads = std::max(1, std::atoi(env));
  app.add_option("--criterion", criteria, "criterion to run (repeatable; default all)")
      ->check(CLI::Range(1, tinsim::app::kCriterionCount));
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  return tinsim::app::run_verification(std::cout, criteria, threads) ? 0 : 1;
}
