#include "mms/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Matched-sections thin plate solver"};
  std::string config_path;
  std::string mesh_override;
  std::optional<double> zeta;
  std::string out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--mesh", mesh_override, "mesh override, NxM");
  app.add_option("--zeta", zeta, "regularization parameter for all point constraints");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--quiet", quiet, "print nothing on success");
  CLI11_PARSE(app, argc, argv);

  try {
    mms::RunConfig config = mms::parse_config(config_path);
    if (!mesh_override.empty()) {
      const auto x = mesh_override.find_first_of("xX");
      try {
        if (x == std::string::npos) throw std::invalid_argument("no separator");
        std::size_t used_n = 0, used_m = 0;
        const int n = std::stoi(mesh_override.substr(0, x), &used_n);
        const int m = std::stoi(mesh_override.substr(x + 1), &used_m);
        if (used_n != x || used_m != mesh_override.size() - x - 1 || n < 1 || m < 1)
          throw std::invalid_argument("bad counts");
        config.nx = n;
        config.ny = m;
      } catch (const std::exception&) {
        throw mms::ConfigError("--mesh expects NxM with positive counts, got '" + mesh_override + "'");
      }
    }
    if (zeta) {
      if (!config.constraints_file) throw mms::ConfigError("--zeta needs a constraint file in the config");
      if (!(*zeta > 0)) throw mms::ConfigError("--zeta must be positive");
      config.zeta = zeta;
    }
    if (!out_dir.empty()) config.output = out_dir;

    const auto start = std::chrono::steady_clock::now();
    const mms::RunResult result = mms::execute(config);
    mms::write_outputs(result, config.output);
    if (!quiet) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      std::cout << mms::format_report(result);
      std::cout << "outputs in " << config.output.string() << " (" << elapsed.count() << " s)\n";
    }
    return 0;
  } catch (const mms::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mms::AssemblyError& e) {
    std::cerr << "assembly error: " << e.what() << "\n";
    return 3;
  } catch (const mms::SolveError& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
