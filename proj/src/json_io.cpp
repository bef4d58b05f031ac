#include "lucasreg/json_io.hpp"

namespace lucasreg {

using nlohmann::json;

json linrep_to_json(const LinearRepresentation& rep) {
    json j;
    j["k"] = rep.k;
    j["rank"] = rep.dim;
    json basis = json::array();
    for (const BasisLabel& label : rep.basis) {
        if (label.node) {
            basis.push_back(json{{"e", label.node->e}, {"i", label.node->i}});
        } else {
            basis.push_back(json{{"derived", label.derived}});
        }
    }
    j["basis"] = std::move(basis);
    j["matrices"] = rep.matrices;
    j["initial"] = rep.initial;
    j["verified_upto"] = rep.verified_upto;
    return j;
}

LinearRepresentation linrep_from_json(const json& j) {
    LinearRepresentation rep;
    rep.k = j.at("k").get<std::uint64_t>();
    rep.dim = j.at("rank").get<std::size_t>();
    for (const json& entry : j.at("basis")) {
        BasisLabel label;
        if (entry.contains("derived")) {
            label.derived = entry.at("derived").get<std::string>();
        } else {
            label.node = KernelNode{entry.at("e").get<unsigned>(),
                                    entry.at("i").get<std::uint64_t>()};
        }
        rep.basis.push_back(std::move(label));
    }
    rep.matrices = j.at("matrices").get<std::vector<std::vector<long long>>>();
    rep.initial = j.at("initial").get<std::vector<long long>>();
    rep.verified_upto = j.at("verified_upto").get<std::uint64_t>();
    if (rep.basis.size() != rep.dim || rep.initial.size() != rep.dim ||
        rep.matrices.size() != rep.k) {
        throw DimensionMismatch("inconsistent representation dimensions");
    }
    for (const auto& m : rep.matrices) {
        if (m.size() != rep.dim * rep.dim) {
            throw DimensionMismatch("matrix entry count is not rank*rank");
        }
    }
    return rep;
}

json rank_report_to_json(const RankReport& report, const std::vector<IdentityReport>* identities) {
    json j;
    j["p"] = report.p;
    j["case_label"] = to_string(report.case_label);
    j["predicted"] = report.predicted;
    if (report.empirical) {
        j["empirical"] = *report.empirical;
        j["agree"] = report.agree;
    }
    if (identities != nullptr) {
        json arr = json::array();
        for (const IdentityReport& rep : *identities) {
            json entry{{"name", rep.name}, {"pass", rep.pass}};
            if (rep.witness) {
                json w{{"n", rep.witness->n}};
                if (rep.witness->i >= 0) w["i"] = rep.witness->i;
                if (rep.witness->j >= 0) w["j"] = rep.witness->j;
                entry["witness"] = std::move(w);
            }
            arr.push_back(std::move(entry));
        }
        j["identities"] = std::move(arr);
    }
    return j;
}

} // namespace lucasreg
