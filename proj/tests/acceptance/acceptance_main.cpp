#include <CLI11.hpp>

#include <iostream>

#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria: one pass/fail line per criterion"};
  std::vector<int> only;
  std::string suite = "full";
  app.add_option("--criterion", only, "Run only these criteria")->check(CLI::Range(1, 16));
  app.add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  CLI11_PARSE(app, argc, argv);

  acceptance::Options opt;
  opt.suite = suite == "fast" ? acceptance::Suite::fast : acceptance::Suite::full;
  int failed = 0;
  for (const auto& c : acceptance::criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto r = acceptance::run(c, opt);
    acceptance::print(std::cout, r);
    failed += !r.outcome.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
