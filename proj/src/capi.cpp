#include "bnsl.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "bnsl/json_io.hpp"
#include "bnsl/sweep.hpp"

struct bnsl_net {
  bnsl::DiscreteBayesNet net;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
bnsl_status guarded(Fn&& fn) {
  try {
    fn();
    return BNSL_OK;
  } catch (const bnsl::InvalidArgument& e) {
    g_last_error = e.what();
    return BNSL_ERR_INVALID_ARGUMENT;
  } catch (const bnsl::LimitExceeded& e) {
    g_last_error = e.what();
    return BNSL_ERR_LIMIT_EXCEEDED;
  } catch (const bnsl::NoData& e) {
    g_last_error = e.what();
    return BNSL_ERR_NO_DATA;
  } catch (const bnsl::Infeasible& e) {
    g_last_error = e.what();
    return BNSL_ERR_INFEASIBLE;
  } catch (const bnsl::ConstructionError& e) {
    g_last_error = e.what();
    return BNSL_ERR_CONSTRUCTION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BNSL_ERR_INTERNAL;
  }
}

bnsl_status require(bool ok, const char* message) {
  if (ok) return BNSL_OK;
  g_last_error = message;
  return BNSL_ERR_INVALID_ARGUMENT;
}

bnsl_status run_common(const bnsl_net* net, bool active, int k, double epsilon, double delta,
                       double epsilon1, const char* mode, uint64_t seed, char** out_report_json,
                       char** store_json_out) {
  if (bnsl_status s = require(net && mode && out_report_json, "null argument")) return s;
  return guarded([&] {
    bnsl::RunParams params;
    params.k = k;
    params.epsilon = epsilon;
    params.delta = delta;
    params.epsilon1 = epsilon1;
    params.mode = bnsl::sampler_mode_from_string(mode);
    params.seed = seed;
    bnsl::RunReport report =
        active ? bnsl::run_active(net->net, params) : bnsl::run_naive(net->net, params);
    *out_report_json = dup_string(bnsl::report_to_json(report));
    if (store_json_out) {
      *store_json_out = report.store ? dup_string(report.store->to_json()) : nullptr;
    }
  });
}

}  // namespace

extern "C" {

const char* bnsl_version(void) { return "0.1.0"; }

const char* bnsl_last_error(void) { return g_last_error.c_str(); }

void bnsl_string_free(char* s) { delete[] s; }

void bnsl_net_free(bnsl_net* net) { delete net; }

bnsl_status bnsl_net_from_json(const char* json, bnsl_net** out) {
  if (bnsl_status s = require(json && out, "null argument")) return s;
  return guarded([&] { *out = new bnsl_net{bnsl::net_from_json(json)}; });
}

bnsl_status bnsl_net_to_json(const bnsl_net* net, char** out_json) {
  if (bnsl_status s = require(net && out_json, "null argument")) return s;
  return guarded([&] { *out_json = dup_string(bnsl::net_to_json(net->net)); });
}

bnsl_status bnsl_net_dimension(const bnsl_net* net, int* out_d) {
  if (bnsl_status s = require(net && out_d, "null argument")) return s;
  *out_d = net->net.d;
  return BNSL_OK;
}

bnsl_status bnsl_build_bd_network(int d, bnsl_net** out) {
  if (bnsl_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] { *out = new bnsl_net{bnsl::build_bd_network(d)}; });
}

bnsl_status bnsl_build_d2(const bnsl_net* base, int x_a, double lambda, bnsl_net** out_net,
                          char** out_params_json) {
  if (bnsl_status s = require(base && out_net, "null argument")) return s;
  return guarded([&] {
    auto [net, params] = bnsl::build_d2(base->net, x_a, lambda);
    *out_net = new bnsl_net{std::move(net)};
    if (out_params_json) *out_params_json = dup_string(bnsl::noisy_twin_params_to_json(params));
  });
}

bnsl_status bnsl_net_restrict(const bnsl_net* net, int m, bnsl_net** out) {
  if (bnsl_status s = require(net && out, "null argument")) return s;
  return guarded([&] { *out = new bnsl_net{bnsl::restrict_to_prefix(net->net, m)}; });
}

bnsl_status bnsl_run_naive(const bnsl_net* net, int k, double epsilon, double delta,
                           const char* mode, uint64_t seed, char** out_report_json,
                           char** store_json_out) {
  return run_common(net, false, k, epsilon, delta, 0.5, mode, seed, out_report_json,
                    store_json_out);
}

bnsl_status bnsl_run_active(const bnsl_net* net, int k, double epsilon, double delta,
                            double epsilon1, const char* mode, uint64_t seed,
                            char** out_report_json, char** store_json_out) {
  return run_common(net, true, k, epsilon, delta, epsilon1, mode, seed, out_report_json,
                    store_json_out);
}

bnsl_status bnsl_sample_bound(double epsilon, double delta, int m_a, int m_b, uint64_t* out) {
  if (bnsl_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] { *out = bnsl::sample_bound({epsilon, delta, m_a, m_b}); });
}

bnsl_status bnsl_naive_total_count(const bnsl_net* net, int k, double epsilon, double delta,
                                   uint64_t* out) {
  if (bnsl_status s = require(net && out, "null argument")) return s;
  return guarded([&] { *out = bnsl::naive_total_count(net->net, k, epsilon, delta); });
}

bnsl_status bnsl_active_worstcase_total_count(const bnsl_net* net, int k, double epsilon,
                                              double delta, double epsilon1, uint64_t* out) {
  if (bnsl_status s = require(net && out, "null argument")) return s;
  return guarded(
      [&] { *out = bnsl::active_worstcase_total_count(net->net, k, epsilon, delta, epsilon1); });
}

bnsl_status bnsl_verify_stability(const bnsl_net* net, const int* v_vars, int v_len, double gamma,
                                  int k, char** out_witness_json) {
  if (bnsl_status s = require(net && out_witness_json && (v_len == 0 || v_vars), "null argument"))
    return s;
  return guarded([&] {
    bnsl::VarMask v = 0;
    for (int i = 0; i < v_len; ++i) {
      if (v_vars[i] < 0 || v_vars[i] >= net->net.d)
        throw bnsl::InvalidArgument("verify_stability: variable out of range");
      v |= bnsl::VarMask(1) << v_vars[i];
    }
    bnsl::StabilityWitness w = bnsl::verify_stability(net->net, v, gamma, k);
    *out_witness_json = dup_string(bnsl::witness_to_json(w));
  });
}

bnsl_status bnsl_ec_stats(int d, int k, char** out_json) {
  if (bnsl_status s = require(out_json != nullptr, "null argument")) return s;
  return guarded([&] {
    std::vector<bnsl::Dag> dags = bnsl::enumerate_dags(d, k);
    std::vector<bnsl::EquivalenceClass> classes = bnsl::group_into_ecs(dags);
    std::size_t largest = 0;
    for (const auto& ec : classes) largest = std::max(largest, ec.members.size());
    nlohmann::ordered_json j;
    j["d"] = d;
    j["k"] = k;
    j["dags"] = dags.size();
    j["equivalence_classes"] = classes.size();
    j["largest_class"] = largest;
    j["families"] = bnsl::enumerate_families(d, k).size();
    *out_json = dup_string(j.dump(2));
  });
}

bnsl_status bnsl_sweep(const char* config_json, char** out_csv, char** out_fig3_csv) {
  if (bnsl_status s = require(config_json && out_csv, "null argument")) return s;
  return guarded([&] {
    bnsl::ExperimentConfig config = bnsl::ExperimentConfig::from_json(config_json);
    bnsl::SweepResult result = bnsl::run_sweep(config);
    *out_csv = dup_string(bnsl::sweep_csv(result));
    if (out_fig3_csv) *out_fig3_csv = dup_string(bnsl::fig3_csv(result));
  });
}

}  // extern "C"
