// cfks — pseudospectral simulation and verification engine for the critical
// fractional Keller-Segel system and its Burgers reduction on the periodic
// torus.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cfks/runner.hpp"

namespace {

constexpr const char* kUsage =
    "usage: cfks <subcommand> [config]\n"
    "\n"
    "subcommands:\n"
    "  simulate <config>    integrate the configured model\n"
    "                       exit 0 = OK, 2 = BLOWUP_DETECTED, 3 = DT_UNDERFLOW\n"
    "  certify <config>     run the reduced Burgers evolution under the recipe\n"
    "                       modulus certificate; exit 0 = margin > 0 throughout,\n"
    "                       4 = violation\n"
    "  correspond <config>  integrate the Keller-Segel and Burgers routes\n"
    "                       independently and compare; exit 0 = within tolerance,\n"
    "                       5 = exceeded\n"
    "  decay <config>       fit decay rates against the theoretical exponents;\n"
    "                       exit 0 = criterion met, 6 = not met\n"
    "  sweep <config>       run the (alpha, amplitude) phase sweep\n"
    "  validate             run the operator self-test suite; exit 0/1\n"
    "\n"
    "config format: one `key = value` per line, `#` starts a comment.\n";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc < 2) {
      std::cerr << kUsage;
      return 64;
    }
    std::string cmd = argv[1];
    if (cmd == "validate") {
      if (argc != 2) {
        std::cerr << kUsage;
        return 64;
      }
      return cfks::run_validate();
    }
    if (cmd != "simulate" && cmd != "certify" && cmd != "correspond" && cmd != "decay" &&
        cmd != "sweep") {
      std::cerr << "cfks: unknown subcommand '" << cmd << "'\n" << kUsage;
      return 64;
    }
    if (argc != 3) {
      std::cerr << kUsage;
      return 64;
    }
    cfks::RunConfig cfg = cfks::parse_config(read_file(argv[2]));
    if (cmd == "simulate") return cfks::run_simulate(cfg);
    if (cmd == "certify") return cfks::run_certify(cfg);
    if (cmd == "correspond") return cfks::run_correspond(cfg);
    if (cmd == "decay") return cfks::run_decay(cfg);
    return cfks::run_sweep(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "cfks: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "cfks: " << e.what() << "\n";
    return 70;
  }
}
