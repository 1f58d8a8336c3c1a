// Runs every acceptance criterion and prints one pass/fail line for each.
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "vqcfd/validation.hpp"

int main(int argc, char **argv) {
  CLI::App app{"vqcfd acceptance suite"};
  vqcfd::AcceptanceOptions opts;
  app.add_option("--seed", opts.seed, "Master seed");
  app.add_option("--only", opts.only, "Criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  opts.on_result = [](const vqcfd::CriterionResult &r) {
    std::printf("criterion %d %s %s: %s [%.1f s]\n", r.id, r.pass ? "PASS" : "FAIL",
                r.title.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  };
  const vqcfd::AcceptanceReport report = vqcfd::run_acceptance(opts);
  int failed = 0;
  for (const auto &c : report.criteria)
    failed += c.pass ? 0 : 1;
  std::cout << report.criteria.size() - failed << "/" << report.criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
