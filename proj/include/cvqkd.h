/* C interface to the CV-QKD key-rate library. All functions return a
 * status code; outputs are written through pointers. On failure,
 * cvqkd_last_error() describes the problem (thread-local storage). */
#ifndef CVQKD_H
#define CVQKD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CVQKD_OK = 0,
  CVQKD_ERR_INTERNAL = 1,
  CVQKD_ERR_DOMAIN = 2,
  CVQKD_ERR_IO = 3,
  CVQKD_ERR_ARG = 4,
  CVQKD_ERR_ACCURACY = 5
};

enum { CVQKD_HOMODYNE = 0, CVQKD_HETERODYNE = 1 };
enum { CVQKD_DIRECT = 0, CVQKD_REVERSE = 1 };
enum { CVQKD_BOUND_DIRECT = 0, CVQKD_BOUND_EXTREMALITY = 1 };
enum { CVQKD_MOD_GAUSSIAN = 0, CVQKD_MOD_QPSK = 1 };
enum { CVQKD_QUANTILE_PAPER = 0, CVQKD_QUANTILE_GAUSSIAN = 1 };

const char* cvqkd_last_error(void);

/* ---- Gaussian modulation ---- */

typedef struct {
  int detection;      /* CVQKD_HOMODYNE / CVQKD_HETERODYNE */
  int reconciliation; /* CVQKD_DIRECT / CVQKD_REVERSE */
  double beta;
  double v_mod;
} cvqkd_protocol;

typedef struct {
  double t_ch;
  double xi_ch;
  double eta;
  double xi_el;
  int trusted;
} cvqkd_channel;

typedef struct {
  double mutual_info;
  double holevo;
  double keyrate;
  int abort_flag; /* set when keyrate <= 0 */
} cvqkd_rate;

int cvqkd_keyrate_gm(const cvqkd_protocol* protocol,
                     const cvqkd_channel* channel, cvqkd_rate* out);
int cvqkd_keyrate_mdi_symmetric(double xi_equiv, double* out);
int cvqkd_transmittance_from_distance(double distance_km,
                                      double loss_db_per_km, double* out);

/* Worst-case chain: builds the pessimistic CM from (t_min, sigma2_max) with
 * Alice variance v_mod and evaluates the rate on it. */
int cvqkd_keyrate_from_estimate(const cvqkd_protocol* protocol, double t_min,
                                double sigma2_max, cvqkd_rate* out);

/* ---- Discrete modulation ---- */

typedef struct cvqkd_constellation cvqkd_constellation;

int cvqkd_constellation_bpsk(double alpha, cvqkd_constellation** out);
int cvqkd_constellation_qpsk(double alpha, cvqkd_constellation** out);
int cvqkd_constellation_from_json(const char* json, cvqkd_constellation** out);
void cvqkd_constellation_free(cvqkd_constellation* c);

typedef struct {
  double transmittance;
  double excess_noise;
  int detection;
  int reconciliation;
  double beta;
  double range_sigma; /* <= 0 selects the default */
  int nodes;          /* <= 0 selects the default */
  int max_nodes;      /* <= 0 selects the default */
} cvqkd_dm_config;

int cvqkd_mutual_info_dm(const cvqkd_constellation* c,
                         const cvqkd_dm_config* config, double* out);
int cvqkd_holevo_dm(const cvqkd_constellation* c,
                    const cvqkd_dm_config* config, int bound, double* out);
int cvqkd_keyrate_dm(const cvqkd_constellation* c,
                     const cvqkd_dm_config* config, int bound,
                     cvqkd_rate* out);

/* ---- Simulation and estimation ---- */

typedef struct cvqkd_dataset cvqkd_dataset;

typedef struct {
  int modulation; /* CVQKD_MOD_GAUSSIAN / CVQKD_MOD_QPSK */
  double v_mod;
  double alpha;
  double transmittance;
  double excess_noise;
  int detection;
  uint64_t rounds;
  uint64_t seed;
} cvqkd_sim_spec;

int cvqkd_simulate(const cvqkd_sim_spec* spec, cvqkd_dataset** out);

int cvqkd_dataset_from_csv(const char* text, cvqkd_dataset** out);
int cvqkd_dataset_to_csv(const cvqkd_dataset* d, char** out);
int cvqkd_dataset_summary_json(const cvqkd_dataset* d, char** out);
int cvqkd_dataset_rows(const cvqkd_dataset* d, int64_t* out);
void cvqkd_dataset_free(cvqkd_dataset* d);
void cvqkd_string_free(char* s);

typedef struct {
  double t_hat;
  double sigma2_hat;
  double t_min;
  double sigma2_max;
  double epsilon_pe;
  double z;
} cvqkd_estimate;

int cvqkd_estimate_mle(const cvqkd_dataset* d, double v_a, double epsilon_pe,
                       int quantile_convention, cvqkd_estimate* out);
int cvqkd_estimate_qpsk(const cvqkd_dataset* d, double alpha, double* t_hat,
                        double* xi_hat);

/* ---- Finite size ---- */

typedef struct {
  double n_total;
  double m_disclosed;
  int d_bits;
  double p_ec;
  double eps_bar;
  double eps_h;
  double eps_cor;
  double eps_pe;
} cvqkd_fs_params;

typedef struct {
  double k_eps;
  double delta_n;
  double eps_total;
  int abort_flag;
} cvqkd_fs_result;

int cvqkd_keyrate_finite(double mutual_info, double chi_worst, double beta,
                         const cvqkd_fs_params* params, cvqkd_fs_result* out);

#ifdef __cplusplus
}
#endif

#endif
