#pragma once

#include <json.hpp>

#include "lucasreg/analysis.hpp"
#include "lucasreg/regularity.hpp"

namespace lucasreg {

/// Schema: {k, rank, basis: [{e, i} | {derived}], matrices: k row-major
/// rank*rank integer arrays, initial: rank integers, verified_upto}.
/// Integers are emitted bit-exactly; no floating point anywhere.
nlohmann::json linrep_to_json(const LinearRepresentation& rep);
LinearRepresentation linrep_from_json(const nlohmann::json& j);

/// Schema: {p, case_label, predicted, empirical, agree, identities?}.
nlohmann::json rank_report_to_json(const RankReport& report,
                                   const std::vector<IdentityReport>* identities = nullptr);

} // namespace lucasreg
