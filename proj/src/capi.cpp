#include "triline.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "dynamics.hpp"
#include "energy.hpp"
#include "output.hpp"
#include "scenario.hpp"
#include "transport_verify.hpp"

using namespace triline;

namespace {

thread_local std::string g_last_error;

tl_status code_of(Err e) {
  switch (e) {
    case Err::Ok: return TL_OK;
    case Err::Invalid: return TL_ERR_INVALID;
    case Err::DegenerateGeometry: return TL_ERR_DEGENERATE_GEOMETRY;
    case Err::TopologyError: return TL_ERR_TOPOLOGY;
    case Err::CurveTooShort: return TL_ERR_CURVE_TOO_SHORT;
    case Err::NonPositiveDensity: return TL_ERR_NONPOSITIVE_DENSITY;
    case Err::TensionDepleted: return TL_ERR_TENSION_DEPLETED;
    case Err::ClosureSolveFailed: return TL_ERR_CLOSURE_SOLVE;
    case Err::SlipDegenerate: return TL_ERR_SLIP_DEGENERATE;
    case Err::StepRejected: return TL_ERR_STEP_REJECTED;
    case Err::DegenerateJunction: return TL_ERR_DEGENERATE_JUNCTION;
    case Err::IllPosedCase: return TL_ERR_ILL_POSED_CASE;
    case Err::ParseError: return TL_ERR_PARSE;
    case Err::ValidationError: return TL_ERR_VALIDATION;
    case Err::IoError: return TL_ERR_IO;
    case Err::Internal: return TL_ERR_INTERNAL;
  }
  return TL_ERR_INTERNAL;
}

template <typename F>
tl_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TL_OK;
  } catch (const TrilineError& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TL_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct tl_scenario {
  Scenario scenario;
};

struct tl_sim {
  Scenario scenario;
  SimState state;
  RunConfig run_config;
};

extern "C" {

const char* tl_status_name(tl_status s) {
  switch (s) {
    case TL_OK: return "ok";
    case TL_ERR_INVALID: return "invalid argument";
    case TL_ERR_DEGENERATE_GEOMETRY: return "degenerate geometry";
    case TL_ERR_TOPOLOGY: return "topology error";
    case TL_ERR_CURVE_TOO_SHORT: return "curve too short";
    case TL_ERR_NONPOSITIVE_DENSITY: return "nonpositive density";
    case TL_ERR_TENSION_DEPLETED: return "tension depleted";
    case TL_ERR_CLOSURE_SOLVE: return "closure solve failed";
    case TL_ERR_SLIP_DEGENERATE: return "degenerate slip";
    case TL_ERR_STEP_REJECTED: return "step rejected";
    case TL_ERR_DEGENERATE_JUNCTION: return "degenerate junction";
    case TL_ERR_ILL_POSED_CASE: return "ill-posed case";
    case TL_ERR_PARSE: return "parse error";
    case TL_ERR_VALIDATION: return "validation error";
    case TL_ERR_IO: return "i/o error";
    case TL_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* tl_last_error(void) { return g_last_error.c_str(); }

void tl_string_free(char* s) { delete[] s; }

tl_status tl_scenario_open(const char* path_or_preset, tl_scenario** out) {
  if (!path_or_preset || !out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    auto* h = new tl_scenario{load_scenario_or_preset(path_or_preset)};
    *out = h;
  });
}

tl_status tl_scenario_save(const tl_scenario* s, const char* path) {
  if (!s || !path) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    std::ofstream f(path);
    if (!f) fail(Err::IoError, std::string("cannot open ") + path);
    f << s->scenario.canonical_text;
  });
}

void tl_scenario_free(tl_scenario* s) { delete s; }

int tl_preset_count(void) { return static_cast<int>(preset_names().size()); }

const char* tl_preset_name(int index) {
  static thread_local std::string holder;
  const auto names = preset_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  holder = names[index];
  return holder.c_str();
}

tl_status tl_sim_create(const tl_scenario* s, tl_sim** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    auto* sim = new tl_sim;
    sim->scenario = s->scenario;
    sim->state = build_state(s->scenario.config);
    sim->run_config = build_run_config(s->scenario.config);
    *out = sim;
  });
}

tl_status tl_sim_open_checkpoint(const char* path, tl_sim** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    Checkpoint ck = read_checkpoint(path);
    auto* sim = new tl_sim;
    sim->scenario = load_scenario_text(ck.scenario_text, path);
    sim->state = std::move(ck.state);
    sim->run_config = build_run_config(sim->scenario.config);
    *out = sim;
  });
}

void tl_sim_free(tl_sim* sim) { delete sim; }

double tl_sim_time(const tl_sim* sim) { return sim ? sim->state.time : 0.0; }

long tl_sim_step_count(const tl_sim* sim) { return sim ? sim->state.step_count : 0; }

double tl_sim_total_mass(const tl_sim* sim) { return sim ? sim->state.total_mass() : 0.0; }

tl_status tl_sim_energy(const tl_sim* sim, double energies[4]) {
  if (!sim || !energies) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    const EnergyLedger led = total_available_energy(sim->state, sim->run_config.closures);
    energies[0] = led.E_total;
    energies[1] = led.E_bulk;
    energies[2] = led.E_interface;
    energies[3] = led.E_line;
  });
}

tl_status tl_sim_steps(tl_sim* sim, long n) {
  if (!sim || n < 0) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    for (long i = 0; i < n; ++i)
      step(sim->state, sim->run_config.mobility, sim->run_config.closures,
           sim->run_config.integrator);
  });
}

tl_status tl_sim_run(tl_sim* sim, const char* out_dir, long checkpoint_every,
                     tl_run_stats* stats) {
  if (!sim) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    RunConfig rc = sim->run_config;
    rc.out_dir = out_dir ? out_dir : "";
    rc.checkpoint_every = static_cast<int>(checkpoint_every);
    const RunSummary sum = run(sim->state, rc);
    if (stats) {
      stats->steps = sum.steps;
      stats->t_final = sum.t_final;
      stats->converged = sum.converged ? 1 : 0;
      stats->E_initial = sum.E_initial;
      stats->E_final = sum.E_final;
      stats->worst_energy_increase = sum.worst_energy_increase;
      stats->mass_initial = sum.mass_initial;
      stats->mass_final = sum.mass_final;
      stats->max_speed_final = sum.max_speed_final;
    }
  });
}

tl_status tl_sim_write_checkpoint(const tl_sim* sim, const char* path) {
  if (!sim || !path) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] { write_checkpoint(path, sim->scenario.canonical_text, sim->state); });
}

tl_status tl_sim_equilibrium_report(tl_sim* sim, char** text_out) {
  if (!sim || !text_out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    RunConfig rc = sim->run_config;
    rc.out_dir.clear();
    rc.output_every = 0;
    if (!(rc.convergence_vmax > 0.0)) rc.convergence_vmax = 1e-8;
    const RunSummary sum = run(sim->state, rc);
    const Derived d = refresh(sim->state, rc.closures);
    std::ostringstream os;
    os << "equilibrium report (t = " << sim->state.time << ", steps = " << sum.steps
       << (sum.converged ? ", converged" : ", NOT converged") << ")\n";
    os << "  max marker speed: " << sum.max_speed_final << "\n";
    const Rates rates = evaluate_rates(sim->state, rc.mobility, rc.closures, d);
    for (int j = 0; j < static_cast<int>(sim->state.junctions.size()); ++j) {
      const auto ang = junction_angles_deg(sim->state, j);
      os << "  junction " << sim->state.junctions[j].id << ": angles " << ang[0] << " / "
         << ang[1] << " / " << ang[2] << " deg, Kirchhoff residual "
         << junction_kirchhoff_norm(sim->state, d, j);
      if (sim->state.junctions[j].closure.mode != JunctionClosure::Mode::Off) {
        // mu_c is the solve's auxiliary unknown; the kinematic-attachment
        // defect of (v_s - v_c).N = -mdot/rho_s is monitored, not enforced
        double vperp = 0.0;
        for (int k = 0; k < 3; ++k) {
          const CurveEnd& e = sim->state.junctions[j].incident[k];
          const int seg = e.at_start ? 0 : sim->state.curves[e.curve].n_segments() - 1;
          vperp = std::max(vperp, std::abs(rates.junction_transfer[j].mdot[k]) /
                                      d.seg_rho[e.curve][seg]);
        }
        os << ", mu_c " << rates.junction_transfer[j].mu_c << ", v-perp defect " << vperp;
      }
      os << "\n";
    }
    for (int c = 0; c < static_cast<int>(sim->state.curves.size()); ++c) {
      const double yl = young_laplace_worst_rel(sim->state, d, c, 1e-6);
      os << "  curve " << sim->state.curves[c].id << ": worst rel Young-Laplace defect ";
      if (std::isnan(yl)) os << "n/a (flat)";
      else os << yl;
      os << "\n";
    }
    const AffinityReport aff = chemical_affinities(sim->state, rc.closures, d);
    os << "  max sorption affinity |mu - mu_s|: " << aff.max_sorption << "\n";
    os << "  max junction affinity |mu_s - mu_c|: " << aff.max_junction << "\n";
    *text_out = dup_string(os.str());
  });
}

tl_status tl_eos_report(const tl_scenario* s, char** text_out, int* n_fail) {
  if (!s || !text_out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    std::ostringstream os;
    int fails = 0;
    os << "Gibbs-Duhem consistency scan (100 states per EOS, tol 1e-8)\n";
    for (const PhaseSpec& p : s->scenario.config.phases) {
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double rho = p.eos.rho_ref * (0.5 + 1.0 * (i + 0.5) / 100.0);
        worst = std::max(worst,
                         gibbs_duhem_residual(p.eos, rho, 1e-5 * rho) /
                             std::max(1.0, std::abs(bulk_eval(p.eos, rho).p)));
      }
      const bool ok = worst <= 1e-8;
      fails += ok ? 0 : 1;
      os << "  bulk " << p.label << ": worst residual " << worst << (ok ? " ok" : " FAIL")
         << "\n";
    }
    for (const auto& [id, eos] : s->scenario.config.surface_eos) {
      double worst = 0.0;
      bool monotone = true;
      double prev_mu = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double rho = surface_rho_max(eos) * (0.005 + 0.985 * (i + 0.5) / 100.0);
        worst = std::max(worst, gibbs_duhem_residual(eos, rho, 1e-5 * rho) /
                                    std::max(1.0, std::abs(surface_eval(eos, rho).p_s)));
        const double mu = surface_mu(eos, rho);
        if (i > 0 && !(mu > prev_mu)) monotone = false;
        prev_mu = mu;
      }
      const bool ok = worst <= 1e-8 && monotone;
      fails += ok ? 0 : 1;
      os << "  surface " << id << ": worst residual " << worst
         << (monotone ? ", mu strictly increasing" : ", mu NOT monotone")
         << (ok ? " ok" : " FAIL") << "\n";
    }
    if (n_fail) *n_fail = fails;
    *text_out = dup_string(os.str());
  });
}

tl_status tl_verify_transport(const char* case_name, int refinements, char** csv_out) {
  if (!csv_out || refinements < 1) {
    g_last_error = "need csv_out and refinements >= 1";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    const std::string only = case_name ? case_name : "";
    *csv_out = dup_string(transport::catalog_csv(only, refinements));
  });
}

tl_status tl_report_render(const char* csv_path, const char* svg_path, char** table_out) {
  if (!csv_path || !table_out) {
    g_last_error = "null argument";
    return TL_ERR_INVALID;
  }
  return guarded([&] {
    *table_out = dup_string(render_report_table(csv_path));
    if (svg_path) render_timeseries_svg(csv_path, svg_path);
  });
}

}  // extern "C"
