#ifndef BNSL_JSON_IO_HPP
#define BNSL_JSON_IO_HPP

#include <string>

#include "bnsl/algorithms.hpp"
#include "bnsl/stable_gen.hpp"

namespace bnsl {

// Network wire format: {d, support_sizes, families:[{child,parents}],
// cpts:[row-major tables]}.  Round-trips losslessly; unknown fields (for
// instance a provenance block) are ignored on load.
std::string net_to_json(const DiscreteBayesNet& net, int indent = 2);
DiscreteBayesNet net_from_json(const std::string& text);

// Net plus a provenance block describing how it was constructed.
std::string net_with_provenance_json(const DiscreteBayesNet& net, const std::string& kind,
                                     const std::string& params_json, int indent = 2);

std::string report_to_json(const RunReport& report, int indent = 2);
std::string accounting_to_json(const Accounting& acc, int indent = 2);
std::string witness_to_json(const StabilityWitness& w, int indent = 2);
std::string noisy_twin_params_to_json(const NoisyTwinParams& p, int indent = 2);

// One line per accepted family: round=<t> iter=<j> accepted=<child>:{<parents>} theta=<value>
std::string acceptance_log_line(const AcceptEvent& ev);

}  // namespace bnsl

#endif
