/* triline: sharp-interface triple-line simulator with surface mass, sorption
 * closures and a certified energy budget.
 *
 * C API over the C++ core. All functions return a tl_status; on any failure
 * tl_last_error() carries a thread-local human-readable message. Handles are
 * opaque and freed with their tl_*_free function. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * tl_string_free().
 */

#ifndef TRILINE_H
#define TRILINE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_ERR_INVALID,
  TL_ERR_DEGENERATE_GEOMETRY,
  TL_ERR_TOPOLOGY,
  TL_ERR_CURVE_TOO_SHORT,
  TL_ERR_NONPOSITIVE_DENSITY,
  TL_ERR_TENSION_DEPLETED,
  TL_ERR_CLOSURE_SOLVE,
  TL_ERR_SLIP_DEGENERATE,
  TL_ERR_STEP_REJECTED,
  TL_ERR_DEGENERATE_JUNCTION,
  TL_ERR_ILL_POSED_CASE,
  TL_ERR_PARSE,
  TL_ERR_VALIDATION,
  TL_ERR_IO,
  TL_ERR_INTERNAL
} tl_status;

const char* tl_status_name(tl_status s);
/* Last error message of the calling thread; empty string when none. */
const char* tl_last_error(void);

void tl_string_free(char* s);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct tl_scenario tl_scenario;

/* Loads a scenario file, or a shipped preset when no such file exists. */
tl_status tl_scenario_open(const char* path_or_preset, tl_scenario** out);
tl_status tl_scenario_save(const tl_scenario* s, const char* path);
void tl_scenario_free(tl_scenario* s);

int tl_preset_count(void);
const char* tl_preset_name(int index); /* NULL when out of range */

/* ---- simulations -------------------------------------------------------- */

typedef struct tl_sim tl_sim;

tl_status tl_sim_create(const tl_scenario* s, tl_sim** out);
/* Resumes from a checkpoint written by tl_sim_run / tl_sim_write_checkpoint. */
tl_status tl_sim_open_checkpoint(const char* path, tl_sim** out);
void tl_sim_free(tl_sim* sim);

double tl_sim_time(const tl_sim* sim);
long tl_sim_step_count(const tl_sim* sim);
double tl_sim_total_mass(const tl_sim* sim);
/* energies[4] = { E_total, E_bulk, E_interface, E_line } */
tl_status tl_sim_energy(const tl_sim* sim, double energies[4]);

/* Advances n explicit steps without touching the filesystem. */
tl_status tl_sim_steps(tl_sim* sim, long n);

typedef struct tl_run_stats {
  long steps;
  double t_final;
  int converged;
  double E_initial, E_final;
  double worst_energy_increase;
  double mass_initial, mass_final;
  double max_speed_final;
} tl_run_stats;

/* Full trajectory per the scenario's numerical settings. out_dir may be NULL
 * (no file output); checkpoint_every <= 0 disables periodic checkpoints. On
 * runtime failure with file output enabled, a diagnostic checkpoint is left
 * at <out_dir>/diagnostic_checkpoint.tlck. */
tl_status tl_sim_run(tl_sim* sim, const char* out_dir, long checkpoint_every,
                     tl_run_stats* stats);

tl_status tl_sim_write_checkpoint(const tl_sim* sim, const char* path);

/* Runs to convergence (per the scenario threshold; falls back to 1e-8) and
 * renders junction angles, Young-Laplace and Kirchhoff residuals and the
 * chemical affinities as text. */
tl_status tl_sim_equilibrium_report(tl_sim* sim, char** text_out);

/* ---- verification and reporting ----------------------------------------- */

/* Gibbs-Duhem consistency scan over every EOS of the scenario; n_fail gets
 * the number of failed checks. */
tl_status tl_eos_report(const tl_scenario* s, char** text_out, int* n_fail);

/* Transport-theorem verification catalog. case_name NULL or empty runs all
 * cases; emits CSV rows (case, level, residual, order). */
tl_status tl_verify_transport(const char* case_name, int refinements, char** csv_out);

/* Renders a time-series CSV as an aligned table; svg_path optionally writes
 * line charts of the energy and dissipation channels. */
tl_status tl_report_render(const char* csv_path, const char* svg_path, char** table_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRILINE_H */
