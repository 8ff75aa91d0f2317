// Runs every acceptance criterion with the default configuration and prints
// one PASS/FAIL line each. Exit status 0 only when all of them pass.

#include <cstdio>
#include <exception>
#include <string>

#include "paraconvex/verification.hpp"

int main(int argc, char** argv) {
  paraconvex::RunConfig config;
  config.output_dir = argc > 1 ? std::filesystem::path(argv[1]) : paraconvex::default_output_dir();
  try {
    const paraconvex::VerificationReport report = paraconvex::run_verification_suite(config);
    for (const auto& c : report.criteria) {
      const std::string tag = c.error.empty() ? "" : "[" + c.error + "] ";
      std::printf("%s criterion %2d %-24s %7.1fs  %s%s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                  c.seconds, tag.c_str(), c.detail.c_str());
    }
    std::printf("artifacts: %s\n", config.output_dir.string().c_str());
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
}
