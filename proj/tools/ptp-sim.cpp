#include "ptp/network.hpp"
#include "ptp/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int EXIT_CONFIG = 2;
constexpr int EXIT_ASSERTION = 1;

/// Built-in scenario text, or the contents of a file.
std::optional<std::string>
loadScenarioText(const std::string& ref)
{
  if (auto text = ptp::builtinScenarioText(ref)) {
    return std::string(*text);
  }
  std::ifstream in(ref, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void
printListing(std::ostream& os)
{
  for (const auto& name : ptp::builtinScenarioNames()) {
    auto s = ptp::parseScenario(*ptp::builtinScenarioText(name));
    os << "  " << name << "  " << s.description << "\n";
  }
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Discrete-event simulator of NDN with path-specified multipath transport"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  std::string showRef;
  auto* show = app.add_subcommand("show", "Print a built-in scenario's source");
  show->add_option("scenario", showRef)->required();

  std::string validateRef;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("file", validateRef)->required();

  std::string runRef;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string outDir;
  std::vector<std::string> overrides;
  bool assertExpectations = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a built-in scenario or scenario file");
  run->add_option("scenario", runRef, "Built-in name or path")->required();
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--duration", duration, "Simulated seconds");
  run->add_option("--out", outDir, "Directory for report.txt and CSV files");
  run->add_option("--override", overrides, "key=value, e.g. consumer.paths=4 or link.queue_pkts=32");
  run->add_flag("--assert", assertExpectations, "Exit 1 if any expectation fails");
  run->add_flag("--quiet", quiet, "Do not print the summary");

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : EXIT_CONFIG;
  }

  try {
    if (*list) {
      printListing(std::cout);
      return 0;
    }
    if (*show) {
      auto text = ptp::builtinScenarioText(showRef);
      if (!text) {
        std::cerr << "unknown scenario '" << showRef << "'; built-in scenarios:\n";
        printListing(std::cerr);
        return EXIT_CONFIG;
      }
      std::cout << *text;
      return 0;
    }
    if (*validate) {
      auto text = loadScenarioText(validateRef);
      if (!text) {
        std::cerr << "cannot read '" << validateRef << "'\n";
        return EXIT_CONFIG;
      }
      auto s = ptp::parseScenario(*text);
      std::cout << "ok: " << s.name << ", " << s.nodes.size() << " nodes, " << s.links.size()
                << " links, " << s.consumers.size() << " consumers\n";
      return 0;
    }

    auto text = loadScenarioText(runRef);
    if (!text) {
      std::cerr << "unknown scenario '" << runRef << "'; built-in scenarios:\n";
      printListing(std::cerr);
      return EXIT_CONFIG;
    }
    auto scenario = ptp::parseScenario(*text);
    if (seed) {
      ptp::applyOverride(scenario, "seed=" + std::to_string(*seed));
    }
    if (duration) {
      std::ostringstream os;
      os << "duration=" << *duration;
      ptp::applyOverride(scenario, os.str());
    }
    for (const auto& o : overrides) {
      ptp::applyOverride(scenario, o);
    }
    auto report = ptp::runScenario(scenario);
    auto results = ptp::evaluateExpectations(scenario, report);
    if (!quiet) {
      std::cout << ptp::formatSummary(scenario, report, results);
    }
    if (!outDir.empty()) {
      ptp::writeOutputs(outDir, scenario, report, results);
    }
    if (assertExpectations) {
      for (const auto& r : results) {
        if (!r.pass) {
          return EXIT_ASSERTION;
        }
      }
    }
    return 0;
  }
  catch (const ptp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return EXIT_CONFIG;
  }
}
