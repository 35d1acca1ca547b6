#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "lsndyn/cli.hpp"

int main(int argc, char** argv) {
  using namespace lsndyn;
  try {
    const auto request = parse_cli(std::vector<std::string>(argv, argv + argc));
    if (request.help) {
      std::cout << *request.help;
      return kExitOk;
    }
    const auto& cfg = request.config;
    const auto report = run_compute(cfg);
    emit_report(report, cfg.output_format, cfg.out_path);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun '" << kToolName << " --help' for usage\n";
    return kExitUsage;
  } catch (const IngestError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitConsistency;
  }
}
