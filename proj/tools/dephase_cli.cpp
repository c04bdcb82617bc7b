#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dephase/config.hpp"
#include "dephase/errors.hpp"
#include "dephase/kernels.hpp"
#include "dephase/sweep.hpp"

#ifndef DEPHASE_DEFAULT_CONFIG_DIR
#define DEPHASE_DEFAULT_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace dephase;

namespace {

std::string config_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DEPHASE_CONFIG_DIR")) return env;
  return DEPHASE_DEFAULT_CONFIG_DIR;
}

// A bare name resolves against the config directory.
std::string resolve(const std::string& arg, const std::string& dir) {
  if (fs::exists(arg)) return arg;
  fs::path p = fs::path(dir) / arg;
  if (fs::exists(p)) return p.string();
  p += ".json";
  if (fs::exists(p)) return p.string();
  return arg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauge-consistent dephasing rates for light-matter models"};
  app.set_version_flag("--version", DEPHASE_VERSION);
  app.require_subcommand(1);

  std::string dir_flag;
  app.add_option("--config-dir", dir_flag, "Directory holding bundled configs");

  RunOptions opt;
  std::string config;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a sweep and write CSV plus provenance JSON");
  run->add_option("config", config, "Config path or bundled name")->required();
  run->add_option("--jobs,-j", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--allow-partial", opt.allow_partial, "Exit 0 even if some points did not converge");
  auto* run_seed = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out,-o", opt.out_dir, "Output directory");

  auto* ver = app.add_subcommand("verify", "Check gauge invariance and normalization at the config's parameters");
  ver->add_option("config", config, "Config path or bundled name")->required();
  ver->add_option("--jobs,-j", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* ver_seed = ver->add_option("--seed", seed, "Override the config seed");
  ver->add_option("--out,-o", opt.out_dir, "Output directory");

  auto* list = app.add_subcommand("list-configs", "List bundled configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  const std::string dir = config_dir(dir_flag);
  if (list->parsed()) {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
      if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
    if (ec) {
      std::cerr << "error: cannot list '" << dir << "': " << ec.message() << "\n";
      return kExitValidation;
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) {
      try {
        auto c = load_config((fs::path(dir) / (n + ".json")).string());
        std::cout << n << "\t" << to_string(c.model) << "\n";
      } catch (const ConfigError& e) {
        std::cout << n << "\tinvalid: " << e.what() << "\n";
      }
    }
    return kExitOk;
  }

  RunConfig c;
  try {
    c = load_config(resolve(config, dir));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  if ((run->parsed() && run_seed->count()) || (ver->parsed() && ver_seed->count())) opt.seed = seed;

  try {
    if (run->parsed()) {
      auto o = run_config(c, opt);
      for (const auto& m : o.messages) std::cerr << m << "\n";
      for (const auto& f : o.files) std::cout << f << "\n";
      return o.exit_code;
    }
    auto v = verify_config(c, opt);
    int failed = 0;
    for (const auto& k : v.checks)
      if (!k.pass) {
        if (++failed <= 20)
          std::cerr << "FAIL " << k.name << " detuning=" << format_double(k.detuning)
                    << " coupling=" << format_double(k.coupling) << " measured=" << format_double(k.measured)
                    << " tol=" << format_double(k.tolerance) << "\n";
      }
    std::cerr << v.checks.size() - failed << "/" << v.checks.size() << " checks passed\n";
    for (const auto& f : v.files) std::cout << f << "\n";
    return v.exit_code;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
