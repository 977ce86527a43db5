#include "bnsl/json_io.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

namespace bnsl {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string double_str(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ordered_json families_json(std::span<const Family> families) {
  ordered_json arr = ordered_json::array();
  for (const Family& f : families) {
    arr.push_back({{"child", f.child}, {"parents", f.parent_list()}});
  }
  return arr;
}

Family family_from_json(const ordered_json& j) {
  Family f;
  f.child = j.at("child").get<int>();
  for (int p : j.at("parents").get<std::vector<int>>()) {
    if (p < 0 || p >= kMaxVars) throw InvalidArgument("net json: parent index out of range");
    f.parents |= VarMask(1) << p;
  }
  return f;
}

ordered_json net_json(const DiscreteBayesNet& net) {
  ordered_json j;
  j["d"] = net.d;
  j["support_sizes"] = net.support;
  j["families"] = families_json(net.structure.families);
  j["cpts"] = net.cpts;
  return j;
}

}  // namespace

std::string net_to_json(const DiscreteBayesNet& net, int indent) {
  return net_json(net).dump(indent);
}

DiscreteBayesNet net_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("net json: parse error: ") + e.what());
  }
  DiscreteBayesNet net;
  try {
    net.d = j.at("d").get<int>();
    net.support = j.at("support_sizes").get<std::vector<int>>();
    for (const auto& fj : j.at("families")) net.structure.families.push_back(family_from_json(fj));
    std::sort(net.structure.families.begin(), net.structure.families.end());
    net.cpts = j.at("cpts").get<std::vector<std::vector<double>>>();
  } catch (const ordered_json::exception& e) {
    throw InvalidArgument(std::string("net json: ") + e.what());
  }
  net.validate(1e-9);
  return net;
}

std::string net_with_provenance_json(const DiscreteBayesNet& net, const std::string& kind,
                                     const std::string& params_json, int indent) {
  ordered_json j = net_json(net);
  ordered_json prov;
  prov["kind"] = kind;
  prov["params"] = ordered_json::parse(params_json);
  j["provenance"] = prov;
  return j.dump(indent);
}

std::string acceptance_log_line(const AcceptEvent& ev) {
  std::string parents;
  bool first = true;
  for (int p : ev.family.parent_list()) {
    if (!first) parents += ",";
    parents += std::to_string(p);
    first = false;
  }
  return "round=" + std::to_string(ev.round) + " iter=" + std::to_string(ev.iter) +
         " accepted=" + std::to_string(ev.family.child) + ":{" + parents +
         "} theta=" + double_str(ev.theta);
}

std::string report_to_json(const RunReport& report, int indent) {
  ordered_json j;
  j["algo"] = report.algo;
  j["d"] = report.d;
  j["k"] = report.k;
  j["epsilon"] = report.epsilon;
  j["delta"] = report.delta;
  if (report.algo == "active") j["epsilon1"] = report.epsilon1;
  j["mode"] = to_string(report.mode);
  j["seed"] = report.seed;
  j["output"] = {{"families", families_json(report.output.families)}};
  j["total_samples"] = report.total_samples;
  j["accepted_fraction"] = report.accepted_fraction;
  ordered_json accepted = ordered_json::array();
  ordered_json log = ordered_json::array();
  for (const AcceptEvent& ev : report.accepted_families) {
    accepted.push_back({{"round", ev.round},
                        {"iter", ev.iter},
                        {"child", ev.family.child},
                        {"parents", ev.family.parent_list()},
                        {"theta", ev.theta}});
    log.push_back(acceptance_log_line(ev));
  }
  j["accepted_families"] = accepted;
  ordered_json rounds = ordered_json::array();
  for (const RoundInfo& r : report.per_round) {
    rounds.push_back({{"t", r.t},
                      {"epsilon_t", r.eps_t},
                      {"n_t", r.n_t},
                      {"subsets_observed", r.subsets_observed},
                      {"final_stage", r.final_stage},
                      {"accepted_iters", [&] {
                         std::vector<int> iters;
                         for (const AcceptEvent& ev : r.accepted) iters.push_back(ev.iter);
                         return iters;
                       }()}});
  }
  j["per_round"] = rounds;
  j["acceptance_log"] = log;
  return j.dump(indent);
}

std::string accounting_to_json(const Accounting& acc, int indent) {
  ordered_json rows = ordered_json::array();
  for (const AccountingRow& r : acc.rows) {
    rows.push_back({{"epoch", r.i},
                    {"round", r.t},
                    {"v", r.v},
                    {"subsets", r.q},
                    {"per_subset", r.n},
                    {"samples", r.samples}});
  }
  ordered_json j;
  j["rows"] = rows;
  j["total"] = acc.total;
  return j.dump(indent);
}

std::string witness_to_json(const StabilityWitness& w, int indent) {
  std::vector<int> vars;
  for_each_bit(w.v_set, [&](int v) { vars.push_back(v); });
  ordered_json j;
  j["gamma"] = w.gamma;
  j["v_set"] = vars;
  j["condition1_ok"] = w.condition1_ok;
  j["condition2_ok"] = w.condition2_ok;
  j["best_v_ec_score"] = w.best_v_ec_score;
  j["second_v_ec_score"] = w.second_v_ec_score;
  return j.dump(indent);
}

std::string noisy_twin_params_to_json(const NoisyTwinParams& p, int indent) {
  ordered_json j;
  j["lambda"] = p.lambda;
  j["coin_p"] = p.coin_p;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  return j.dump(indent);
}

// SampleStore JSON lives here so the store itself stays header-light.
struct SampleStoreAccess {
  static std::string dump(const SampleStore& store);
  static SampleStore load(const std::string& text);
};

std::string SampleStoreAccess::dump(const SampleStore& store) {
  ordered_json subsets = ordered_json::array();
  for (VarMask mask : store.observed_subsets()) {
    std::vector<int> vars;
    for_each_bit(mask, [&](int v) { vars.push_back(v); });
    subsets.push_back({{"vars", vars},
                       {"n", store.draws_of(mask)},
                       {"counts", *store.counts_of(mask)}});
  }
  ordered_json j;
  j["d"] = store.d();
  j["k"] = store.k();
  j["support_sizes"] = store.support();
  j["subsets"] = subsets;
  return j.dump(2);
}

SampleStore SampleStoreAccess::load(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("store json: parse error: ") + e.what());
  }
  SampleStore store(j.at("d").get<int>(), j.at("k").get<int>(),
                    j.at("support_sizes").get<std::vector<int>>());
  for (const auto& sj : j.at("subsets")) {
    VarMask mask = 0;
    for (int v : sj.at("vars").get<std::vector<int>>()) mask |= VarMask(1) << v;
    if (popcount(mask) != store.k() + 1)
      throw InvalidArgument("store json: subset size must be k+1");
    auto counts = sj.at("counts").get<std::vector<std::uint64_t>>();
    std::uint64_t n = sj.at("n").get<std::uint64_t>();
    std::size_t cells = 1;
    for_each_bit(mask, [&](int v) { cells *= store.support()[v]; });
    if (counts.size() != cells) throw InvalidArgument("store json: wrong count-table size");
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    if (sum != n) throw InvalidArgument("store json: counts do not sum to n");
    auto& entry = store.subsets_[mask];
    if (entry.n != 0) throw InvalidArgument("store json: duplicate subset");
    entry.counts = std::move(counts);
    entry.n = n;
    store.total_draws_ += n;
  }
  return store;
}

std::string SampleStore::to_json() const { return SampleStoreAccess::dump(*this); }
SampleStore SampleStore::from_json(const std::string& text) { return SampleStoreAccess::load(text); }

}  // namespace bnsl
