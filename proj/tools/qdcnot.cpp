// Command-line front end: single-point simulation, grid sweeps, named
// reproduction targets and cavity coefficient lookup.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdcnot/sweep.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, io_error = 2, anchor_failure = 3 };

void print_report(const qdcnot::FidelityReport& r) {
  std::printf("circuit        %s\n", qdcnot::to_string(r.circuit).c_str());
  std::printf("ensemble       %s\n", r.ensemble.c_str());
  std::printf("t1 r1 t0 r0    %.10g %.10g %.10g %.10g\n", r.coeffs.t1, r.coeffs.r1, r.coeffs.t0, r.coeffs.r0);
  std::printf("f_up           %.10g\n", r.f_up);
  std::printf("f_down         %.10g\n", r.f_down);
  std::printf("f_both         %.10g\n", r.f_both);
  std::printf("f_up_folded    %.10g\n", r.f_up_folded);
  std::printf("f_down_folded  %.10g\n", r.f_down_folded);
  std::printf("success        %.10g\n", r.success);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-cavity CNOT gate simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, target, out_dir = ".";
  int threads = -1;
  double g = 2.5, ks = 0.05, gamma = 0.1;

  auto* simulate = app.add_subcommand("simulate", "Average fidelity at one configuration");
  simulate->add_option("--config", config_path, "Config file")->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate the config's grid and write a CSV");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--out", out_path, "CSV path (defaults to the config's out key)");
  sweep->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* reproduce = app.add_subcommand("reproduce", "Run a canonical target and check its anchors");
  reproduce->add_option("target", target, "fig3a | fig3b | fig4a | fig4b | table_anchors")->required();
  reproduce->add_option("--out-dir", out_dir, "Output directory");
  reproduce->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* cavity = app.add_subcommand("cavity", "Print t1, r1, t0, r0 for given rates (units of kappa)");
  cavity->add_option("--g", g, "Coupling strength g/kappa");
  cavity->add_option("--ks", ks, "Side leakage kappa_s/kappa");
  cavity->add_option("--gamma", gamma, "Dipole decay gamma/kappa");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      print_report(qdcnot::simulate(qdcnot::load_config(config_path)));
    } else if (*sweep) {
      auto cfg = qdcnot::load_config(config_path);
      if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
      if (out_path.empty()) out_path = cfg.out;
      if (out_path.empty()) throw qdcnot::ConfigError("out: no output path given");
      qdcnot::write_csv(qdcnot::sweep(cfg), out_path);
    } else if (*reproduce) {
      std::optional<unsigned> t;
      if (threads >= 0) t = static_cast<unsigned>(threads);
      const auto rep = qdcnot::reproduce(target, out_dir, t);
      std::cout << qdcnot::summary_text(rep) << "csv: " << rep.csv.string() << '\n';
      if (!rep.ok()) return anchor_failure;
    } else if (*cavity) {
      const auto c = qdcnot::cavity_coeffs({.g = g, .kappa = 1.0, .kappa_s = ks, .gamma_x = gamma});
      std::printf("t1 %.10g\nr1 %.10g\nt0 %.10g\nr0 %.10g\n", c.t1, c.r1, c.t0, c.r0);
    }
  } catch (const qdcnot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const qdcnot::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return io_error;
  }
  return ok;
}
