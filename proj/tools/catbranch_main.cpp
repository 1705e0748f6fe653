#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "catbranch/config.hpp"
#include "catbranch/errors.hpp"
#include "catbranch/run.hpp"

namespace {

int exit_code_for(catbranch::ErrorCode code) {
  using catbranch::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::NegativeMass:
    case ErrorCode::AsymmetricCoupling:
    case ErrorCode::NonPositiveWidth:
    case ErrorCode::IndefinitePotential:
    case ErrorCode::TooManyParticles:
      return 2;
    default:
      return 3;
  }
}

struct SourceOpts {
  std::string preset;
  std::string config_path;
};

catbranch::RunConfig resolve_config(const SourceOpts& src) {
  if (!src.preset.empty() && !src.config_path.empty())
    throw catbranch::SimError(catbranch::ErrorCode::ParseError,
                              "give either --preset or --config, not both");
  if (!src.preset.empty()) return catbranch::preset_config(src.preset);
  if (!src.config_path.empty()) return catbranch::load_config(src.config_path);
  throw catbranch::SimError(catbranch::ErrorCode::ParseError,
                            "one of --preset or --config is required");
}

void add_source_opts(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--preset", src.preset, "built-in configuration name");
  cmd->add_option("--config", src.config_path, "configuration file path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schrodinger-cat decoherence vs trajectory branching simulator"};
  app.require_subcommand(1);

  SourceOpts sim_src, cls_src, ver_src;
  std::string sim_out = "out", cls_out = "out";
  int threads = 0;
  bool verify_full = false;
  std::string show_preset;

  CLI::App* sim = app.add_subcommand("simulate", "quantum + classical pipeline, all outputs");
  add_source_opts(sim, sim_src);
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* cls = app.add_subcommand("classical", "trajectory ensemble outputs only");
  add_source_opts(cls, cls_src);
  cls->add_option("--out", cls_out, "output directory");
  cls->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* ver = app.add_subcommand("verify", "internal consistency checks");
  add_source_opts(ver, ver_src);
  ver->add_flag("--full", verify_full, "include the slower oracle checks");
  ver->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* pre = app.add_subcommand("presets", "list built-in configurations");
  pre->add_option("--show", show_preset, "print the expanded config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      catbranch::RunStats stats = catbranch::run_simulation(resolve_config(sim_src), sim_out,
                                                            threads);
      std::cout << "wrote " << sim_out << " (" << stats.snapshot_count << " snapshots, "
                << stats.series_points << " series points, " << stats.crossing_count
                << " crossings)\n";
      return 0;
    }
    if (cls->parsed()) {
      catbranch::RunStats stats =
          catbranch::run_classical(resolve_config(cls_src), cls_out, threads);
      std::cout << "wrote " << cls_out << " (" << stats.crossing_count << " crossings)\n";
      return 0;
    }
    if (ver->parsed()) {
      int failures =
          catbranch::run_verify(resolve_config(ver_src), verify_full, std::cout, threads);
      return failures == 0 ? 0 : 1;
    }
    if (pre->parsed()) {
      if (!show_preset.empty()) {
        std::cout << catbranch::config_echo(catbranch::preset_config(show_preset));
      } else {
        for (const std::string& name : catbranch::preset_names()) std::cout << name << "\n";
      }
      return 0;
    }
  } catch (const catbranch::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
