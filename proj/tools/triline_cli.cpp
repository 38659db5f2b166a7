// triline command-line driver. Talks to the simulator exclusively through the
// public C API (triline.h). Exit codes: 0 success, 2 validation/usage
// failure, 3 runtime failure (diagnostic checkpoint path printed when one was
// written).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "triline.h"

namespace {

int exit_code_for(tl_status s) {
  switch (s) {
    case TL_OK:
      return 0;
    case TL_ERR_INVALID:
    case TL_ERR_PARSE:
    case TL_ERR_VALIDATION:
      return 2;
    default:
      return 3;
  }
}

int report_failure(tl_status s) {
  std::cerr << "error (" << tl_status_name(s) << "): " << tl_last_error() << "\n";
  return exit_code_for(s);
}

std::string resolve_out_dir(const std::string& flag_value, const std::string& fallback) {
  if (const char* env = std::getenv("TRILINE_OUT"); env && *env) return env;
  return flag_value.empty() ? fallback : flag_value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triline: interface-formation triple-line simulator"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // run
  std::string run_scenario, run_out;
  long checkpoint_every = 0;
  std::string resume_path;
  CLI::App* cmd_run = app.add_subcommand("run", "simulate a scenario or preset");
  cmd_run->add_option("scenario", run_scenario, "scenario file or preset name")->required();
  cmd_run->add_option("--out", run_out, "output directory (TRILINE_OUT overrides)");
  cmd_run->add_option("--checkpoint-every", checkpoint_every, "steps between checkpoints");
  cmd_run->add_option("--resume", resume_path, "resume from a checkpoint file");

  // verify-transport
  std::string vt_case;
  int refinements = 3;
  CLI::App* cmd_vt = app.add_subcommand("verify-transport", "transport-theorem verification");
  cmd_vt->add_option("--case", vt_case, "run a single catalog case");
  cmd_vt->add_option("--refinements", refinements, "number of (dt,h) halvings")
      ->check(CLI::PositiveNumber);

  // check-eos
  std::string eos_scenario;
  CLI::App* cmd_eos = app.add_subcommand("check-eos", "Gibbs-Duhem consistency of the EOS set");
  cmd_eos->add_option("scenario", eos_scenario, "scenario file or preset name")->required();

  // equilibrium
  std::string eq_scenario;
  CLI::App* cmd_eq =
      app.add_subcommand("equilibrium", "run to convergence and print equilibrium metrics");
  cmd_eq->add_option("scenario", eq_scenario, "scenario file or preset name")->required();

  // report
  std::string report_csv, report_svg;
  bool want_svg = false;
  CLI::App* cmd_report = app.add_subcommand("report", "render a time-series CSV");
  cmd_report->add_option("csv", report_csv, "timeseries.csv produced by run")->required();
  cmd_report->add_flag("--svg", want_svg, "also write charts next to the CSV");
  cmd_report->add_option("--svg-path", report_svg, "explicit SVG output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  if (cmd_run->parsed()) {
    tl_sim* sim = nullptr;
    tl_scenario* sc = nullptr;
    tl_status st;
    if (!resume_path.empty()) {
      st = tl_sim_open_checkpoint(resume_path.c_str(), &sim);
    } else {
      st = tl_scenario_open(run_scenario.c_str(), &sc);
      if (st == TL_OK) st = tl_sim_create(sc, &sim);
    }
    if (st != TL_OK) return report_failure(st);
    const std::string out_dir = resolve_out_dir(run_out, "triline_out");
    tl_run_stats stats{};
    st = tl_sim_run(sim, out_dir.c_str(), checkpoint_every, &stats);
    if (st != TL_OK) {
      const int code = report_failure(st);
      if (code == 3)
        std::cerr << "diagnostic checkpoint: " << out_dir << "/diagnostic_checkpoint.tlck\n";
      tl_sim_free(sim);
      tl_scenario_free(sc);
      return code;
    }
    std::cout << "steps " << stats.steps << "  t " << stats.t_final << (stats.converged ? "  converged" : "")
              << "\nE " << stats.E_initial << " -> " << stats.E_final
              << "  worst increase " << stats.worst_energy_increase << "\nmass drift "
              << (stats.mass_final - stats.mass_initial) / stats.mass_initial << "\noutputs in "
              << out_dir << "\n";
    tl_sim_free(sim);
    tl_scenario_free(sc);
    return 0;
  }

  if (cmd_vt->parsed()) {
    char* csv = nullptr;
    const tl_status st =
        tl_verify_transport(vt_case.empty() ? nullptr : vt_case.c_str(), refinements, &csv);
    if (st != TL_OK) return report_failure(st);
    std::cout << csv;
    tl_string_free(csv);
    return 0;
  }

  if (cmd_eos->parsed()) {
    tl_scenario* sc = nullptr;
    tl_status st = tl_scenario_open(eos_scenario.c_str(), &sc);
    if (st != TL_OK) return report_failure(st);
    char* text = nullptr;
    int n_fail = 0;
    st = tl_eos_report(sc, &text, &n_fail);
    tl_scenario_free(sc);
    if (st != TL_OK) return report_failure(st);
    std::cout << text;
    tl_string_free(text);
    return n_fail == 0 ? 0 : 2;
  }

  if (cmd_eq->parsed()) {
    tl_scenario* sc = nullptr;
    tl_status st = tl_scenario_open(eq_scenario.c_str(), &sc);
    if (st != TL_OK) return report_failure(st);
    tl_sim* sim = nullptr;
    st = tl_sim_create(sc, &sim);
    tl_scenario_free(sc);
    if (st != TL_OK) return report_failure(st);
    char* text = nullptr;
    st = tl_sim_equilibrium_report(sim, &text);
    tl_sim_free(sim);
    if (st != TL_OK) return report_failure(st);
    std::cout << text;
    tl_string_free(text);
    return 0;
  }

  if (cmd_report->parsed()) {
    std::string svg;
    if (!report_svg.empty()) svg = report_svg;
    else if (want_svg) svg = report_csv + ".svg";
    char* table = nullptr;
    const tl_status st =
        tl_report_render(report_csv.c_str(), svg.empty() ? nullptr : svg.c_str(), &table);
    if (st != TL_OK) return report_failure(st);
    std::cout << table;
    if (!svg.empty()) std::cout << "charts: " << svg << "\n";
    tl_string_free(table);
    return 0;
  }

  std::cerr << app.help() << "\n";
  return 2;
}
