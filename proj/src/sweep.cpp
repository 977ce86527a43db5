#include "bnsl/sweep.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bnsl/stable_gen.hpp"

namespace bnsl {

using ordered_json = nlohmann::ordered_json;

namespace {

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0;
  double s = 0;
  for (double x : xs) s += x;
  return s / xs.size();
}

double std_of(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / (xs.size() - 1));
}

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

double SweepCell::active_mean() const {
  std::vector<double> xs(active_totals.begin(), active_totals.end());
  return mean_of(xs);
}
double SweepCell::active_std() const {
  std::vector<double> xs(active_totals.begin(), active_totals.end());
  return std_of(xs);
}
double SweepCell::accepted_mean() const { return mean_of(accepted_fractions); }
double SweepCell::accepted_std() const { return std_of(accepted_fractions); }

std::string ExperimentConfig::to_json(int indent) const {
  ordered_json j;
  j["d_values"] = d_values;
  j["r_values"] = r_values;
  j["k"] = k;
  j["delta"] = delta;
  j["epsilon1"] = epsilon1;
  j["repetitions"] = repetitions;
  j["seed"] = seed;
  j["mode"] = to_string(mode);
  j["output_dir"] = output_dir;
  return j.dump(indent);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("config json: parse error: ") + e.what());
  }
  ExperimentConfig c;
  c.d_values = j.at("d_values").get<std::vector<int>>();
  c.r_values = j.at("r_values").get<std::vector<double>>();
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("epsilon1")) c.epsilon1 = j.at("epsilon1").get<double>();
  if (j.contains("repetitions")) c.repetitions = j.at("repetitions").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("mode")) c.mode = sampler_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  return c;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  if (config.repetitions < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
  SweepResult result;
  result.config = config;
  std::uint64_t cell_index = 0;
  for (double r : config.r_values) {
    for (int d : config.d_values) {
      SweepCell cell;
      cell.r = r;
      cell.d = d;
      cell.epsilon = d / r;
      cell.cell_seed = derive_seed(config.seed, cell_index++, 0x63656c6cULL);
      try {
        if (!(r > 0)) throw InvalidArgument("sweep: r must be > 0");
        DiscreteBayesNet net = build_bd_network(d);
        if (!(cell.epsilon < 2.0 * d * config.epsilon1))
          throw InvalidArgument("sweep: epsilon > 2*d*epsilon1, active precondition fails");
        cell.n_naive = naive_total_count(net, config.k, cell.epsilon, config.delta);
        for (int rep = 0; rep < config.repetitions; ++rep) {
          RunParams params;
          params.k = config.k;
          params.epsilon = cell.epsilon;
          params.delta = config.delta;
          params.epsilon1 = config.epsilon1;
          params.mode = config.mode;
          params.seed = derive_seed(cell.cell_seed, rep, 0x726570ULL);
          params.search = config.search;
          RunReport report = run_active(net, params);
          cell.active_totals.push_back(report.total_samples);
          cell.accepted_fractions.push_back(report.accepted_fraction);
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
        cell.active_totals.clear();
        cell.accepted_fractions.clear();
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "r,d,epsilon,n_naive,n_active_mean,n_active_std,sample_ratio,"
         "accepted_fraction_mean,accepted_fraction_std,cell_seed,error\r\n";
  for (const SweepCell& c : result.cells) {
    out << num(c.r) << ',' << c.d << ',' << num(c.epsilon) << ',';
    if (c.error.empty()) {
      out << c.n_naive << ',' << num(c.active_mean()) << ',' << num(c.active_std()) << ','
          << num(c.sample_ratio()) << ',' << num(c.accepted_mean()) << ','
          << num(c.accepted_std()) << ',';
    } else {
      out << ",,,,,,";
    }
    out << c.cell_seed << ',' << csv_field(c.error) << "\r\n";
  }
  return out.str();
}

std::string fig3_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "r,d,algo,n\r\n";
  for (const SweepCell& c : result.cells) {
    if (!c.error.empty()) continue;
    out << num(c.r) << ',' << c.d << ",naive," << c.n_naive << "\r\n";
    out << num(c.r) << ',' << c.d << ",active," << num(c.active_mean()) << "\r\n";
  }
  return out.str();
}

std::vector<ReferenceDeviation> check_reference_counts(const SweepResult& result,
                                                       const std::string& reference_csv,
                                                       double tolerance_factor) {
  // Reference rows: r,d,n_naive (header line required).
  std::vector<ReferenceDeviation> deviations;
  std::istringstream in(reference_csv);
  std::string line;
  bool header = true;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::array<double, 3> row{};
    std::istringstream ls(line);
    std::string field;
    for (int i = 0; i < 3 && std::getline(ls, field, ','); ++i) row[i] = std::stod(field);
    rows.push_back(row);
  }
  for (const SweepCell& c : result.cells) {
    if (!c.error.empty()) continue;
    for (const auto& row : rows) {
      if (std::abs(row[0] - c.r) > 1e-9 || static_cast<int>(row[1]) != c.d) continue;
      double ref = row[2];
      double got = static_cast<double>(c.n_naive);
      double factor = std::max(ref / got, got / ref);
      if (factor > tolerance_factor) {
        deviations.push_back({c.r, c.d, static_cast<std::uint64_t>(ref),
                              c.n_naive, factor});
      }
    }
  }
  return deviations;
}

}  // namespace bnsl
