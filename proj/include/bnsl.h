/* C interface to the bnsl library: discrete Bayesian-network structure
 * learning from size-(k+1) partial observations.
 *
 * All functions return a bnsl_status; on failure bnsl_last_error() carries a
 * message for the calling thread.  Strings returned through char** are
 * heap-allocated JSON or CSV documents owned by the caller; release them
 * with bnsl_string_free().  Networks are opaque handles released with
 * bnsl_net_free().
 */
#ifndef BNSL_H
#define BNSL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bnsl_net bnsl_net;

typedef enum bnsl_status {
  BNSL_OK = 0,
  BNSL_ERR_INVALID_ARGUMENT = 1,
  BNSL_ERR_LIMIT_EXCEEDED = 2,
  BNSL_ERR_NO_DATA = 3,
  BNSL_ERR_INFEASIBLE = 4,
  BNSL_ERR_CONSTRUCTION = 5,
  BNSL_ERR_INTERNAL = 6
} bnsl_status;

const char* bnsl_version(void);

/* Message describing the most recent failure on this thread. */
const char* bnsl_last_error(void);

void bnsl_string_free(char* s);
void bnsl_net_free(bnsl_net* net);

/* Network construction and serialization (JSON wire format:
 * {d, support_sizes, families, cpts}). */
bnsl_status bnsl_net_from_json(const char* json, bnsl_net** out);
bnsl_status bnsl_net_to_json(const bnsl_net* net, char** out_json);
bnsl_status bnsl_net_dimension(const bnsl_net* net, int* out_d);

/* The d-node benchmark network family (6 <= d <= 12). */
bnsl_status bnsl_build_bd_network(int d, bnsl_net** out);

/* Noisy-twin construction over a base network; out_params_json reports
 * {lambda, coin_p, alpha, beta}. */
bnsl_status bnsl_build_d2(const bnsl_net* base, int x_a, double lambda, bnsl_net** out_net,
                          char** out_params_json);

/* Sub-network over variables 0..m-1 (dropped variables must be childless). */
bnsl_status bnsl_net_restrict(const bnsl_net* net, int m, bnsl_net** out);

/* Learners.  mode is "real", "oracle" or "count-only"; the report is a JSON
 * document with the structure, sample accounting and acceptance log.
 * store_json_out may be NULL; in real mode it receives the final sample
 * store snapshot. */
bnsl_status bnsl_run_naive(const bnsl_net* net, int k, double epsilon, double delta,
                           const char* mode, uint64_t seed, char** out_report_json,
                           char** store_json_out);
bnsl_status bnsl_run_active(const bnsl_net* net, int k, double epsilon, double delta,
                            double epsilon1, const char* mode, uint64_t seed,
                            char** out_report_json, char** store_json_out);

/* Closed-form sample counts. */
bnsl_status bnsl_sample_bound(double epsilon, double delta, int m_a, int m_b, uint64_t* out);
bnsl_status bnsl_naive_total_count(const bnsl_net* net, int k, double epsilon, double delta,
                                   uint64_t* out);
bnsl_status bnsl_active_worstcase_total_count(const bnsl_net* net, int k, double epsilon,
                                              double delta, double epsilon1, uint64_t* out);

/* Base-distribution check for the noisy-twin construction; the result JSON
 * carries {ok, failed_property, alpha, beta}. */
bnsl_status bnsl_check_d1(const bnsl_net* net, int x_a, int k, char** out_json);

/* Stability witness over the variable set given as indices. */
bnsl_status bnsl_verify_stability(const bnsl_net* net, const int* v_vars, int v_len, double gamma,
                                  int k, char** out_witness_json);

/* DAG / equivalence-class counts for one (d, k), as JSON. */
bnsl_status bnsl_ec_stats(int d, int k, char** out_json);

/* Experiment grid; config is the ExperimentConfig JSON.  Outputs the result
 * CSV and the tidy per-algorithm CSV. */
bnsl_status bnsl_sweep(const char* config_json, char** out_csv, char** out_fig3_csv);

#ifdef __cplusplus
}
#endif

#endif /* BNSL_H */
