// JSON encodings of the library's value types (nlohmann/json).
//
//   ComplexMatrix       {"rows": n, "cols": m, "entries": [[re, im], ...]}   row-major
//   DensityMatrix       ComplexMatrix fields plus "dims": [dS, dE]
//   FamilyParams        {"family": "CC"|"QC"|"F", "lambda": x, "theta": y}
//   TomographyRecord    {"settings": [labels], "shots": N, "seed": s, "counts": [[...], ...]}
//
// Doubles are written with round-trip precision.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qdw/linalg.hpp"
#include "qdw/protocol.hpp"
#include "qdw/states.hpp"
#include "qdw/tomography.hpp"
#include "qdw/witness.hpp"

namespace qdw {

using json = nlohmann::json;

namespace detail {

template <typename T>
T required(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("JSON: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("JSON: field '") + key + "': " + e.what());
    }
}

inline json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline std::optional<double> optional_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace detail

inline void to_json(json& j, const ComplexMatrix& m) {
    json entries = json::array();
    for (const auto& z : m.entries()) entries.push_back({z.real(), z.imag()});
    j = json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline void from_json(const json& j, ComplexMatrix& m) {
    const auto rows = detail::required<std::size_t>(j, "rows");
    const auto cols = detail::required<std::size_t>(j, "cols");
    const auto raw = detail::required<std::vector<std::vector<double>>>(j, "entries");
    std::vector<complex> entries;
    entries.reserve(raw.size());
    for (const auto& pair : raw) {
        if (pair.size() != 2) throw ValidationError("JSON: matrix entries must be [re, im] pairs");
        entries.emplace_back(pair[0], pair[1]);
    }
    m = ComplexMatrix(rows, cols, std::move(entries));
}

inline json to_json_value(const DensityMatrix& rho) {
    json j = rho.matrix();
    j["dims"] = rho.dims();
    return j;
}

inline DensityMatrix density_matrix_from_json(const json& j) {
    auto m = j.get<ComplexMatrix>();
    std::vector<std::size_t> dims;
    if (j.contains("dims")) dims = detail::required<std::vector<std::size_t>>(j, "dims");
    return DensityMatrix(std::move(m), std::move(dims));
}

inline void to_json(json& j, const FamilyParams& p) {
    j = json{{"family", std::string(to_string(p.family))}, {"lambda", p.lambda}, {"theta", p.theta}};
}

inline void from_json(const json& j, FamilyParams& p) {
    p.family = family_from_string(detail::required<std::string>(j, "family"));
    p.lambda = detail::required<double>(j, "lambda");
    p.theta = j.contains("theta") && !j.at("theta").is_null() ? j.at("theta").get<double>() : 0.0;
    p.validate();
}

inline void to_json(json& j, const WitnessInputs& in) {
    j = json{{"lambda", detail::optional_number(in.lambda)},
             {"theta", detail::optional_number(in.theta)},
             {"phi", detail::optional_number(in.phi)},
             {"hwp_angle", detail::optional_number(in.hwp_angle)}};
}

inline void to_json(json& j, const WitnessReport& r) {
    j = json{{"value", r.value},
             {"kind", std::string(to_string(r.kind))},
             {"inputs", r.inputs},
             {"degenerate_basis", r.degenerate_basis}};
}

inline void to_json(json& j, const WitnessEstimate& e) {
    j = e.report;
    j["uncertainty"] = e.uncertainty;
    j["bias"] = e.bias;
    j["threshold"] = e.threshold;
    j["fired"] = e.fired;
}

inline void to_json(json& j, const TomographyRecord& r) {
    json labels = json::array();
    for (const auto& s : r.settings) labels.push_back(s.label);
    j = json{{"settings", std::move(labels)}, {"shots", r.shots_per_setting}, {"seed", r.seed}, {"counts", r.counts}};
}

/// Settings are resolved by label against the default one- and two-qubit designs.
inline void from_json(const json& j, TomographyRecord& r) {
    r.settings.clear();
    for (const auto& label : detail::required<std::vector<std::string>>(j, "settings"))
        r.settings.push_back(setting_by_label(label));
    r.shots_per_setting = detail::required<std::uint64_t>(j, "shots");
    r.seed = detail::required<std::uint64_t>(j, "seed");
    r.counts = detail::required<std::vector<std::vector<std::uint64_t>>>(j, "counts");
    if (r.counts.size() != r.settings.size()) throw ValidationError("JSON: one count row per setting expected");
    for (std::size_t i = 0; i < r.counts.size(); ++i)
        if (r.counts[i].size() != r.settings[i].projectors.size())
            throw ValidationError("JSON: count row size does not match setting '" + r.settings[i].label + "'");
}

inline void to_json(json& j, const ProtocolConfig& c) {
    j = json{{"phi", c.phi},
             {"hwp_angle", c.hwp_angle},
             {"mode", std::string(to_string(c.mode))},
             {"shots", c.shots},
             {"bootstrap_samples", c.bootstrap_samples},
             {"threshold_sigma", c.threshold_sigma},
             {"exact_epsilon", c.exact_epsilon},
             {"seed", c.seed},
             {"retry_phis", c.retry_phis},
             {"emit_states", c.emit_states}};
}

/// Missing keys keep their current values, so a partial config file overlays defaults.
inline void from_json(const json& j, ProtocolConfig& c) {
    if (!j.is_object()) throw ValidationError("JSON: protocol config must be an object");
    try {
        if (j.contains("phi")) c.phi = j.at("phi").get<double>();
        if (j.contains("hwp_angle")) c.hwp_angle = j.at("hwp_angle").get<double>();
        if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("shots")) c.shots = j.at("shots").get<std::uint64_t>();
        if (j.contains("bootstrap_samples")) c.bootstrap_samples = j.at("bootstrap_samples").get<std::size_t>();
        if (j.contains("threshold_sigma")) c.threshold_sigma = j.at("threshold_sigma").get<double>();
        if (j.contains("exact_epsilon")) c.exact_epsilon = j.at("exact_epsilon").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("retry_phis")) c.retry_phis = j.at("retry_phis").get<std::vector<double>>();
        if (j.contains("emit_states")) c.emit_states = j.at("emit_states").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("JSON: protocol config: ") + e.what());
    }
}

inline void to_json(json& j, const ClassificationResult& r) {
    j = json{{"verdict", std::string(to_string(r.verdict))},
             {"td_report", r.td_report},
             {"growth_report", r.growth_report ? json(*r.growth_report) : json(nullptr)},
             {"degenerate_basis", r.degenerate_basis},
             {"thresholds_used", r.thresholds_used}};
    if (r.intermediate_states) {
        json states = json::object();
        for (const auto& s : *r.intermediate_states) states[s.name] = to_json_value(s.state);
        j["intermediate_states"] = std::move(states);
    }
}

} // namespace qdw
