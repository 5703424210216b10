#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bahc/benchmark.hpp"
#include "bahc/error.hpp"
#include "bahc/hierarchy.hpp"
#include "bahc/hyper.hpp"
#include "bahc/measures.hpp"
#include "bahc/partition.hpp"

namespace bahc {

using json = nlohmann::json;

// ------------------------- SimConfig -------------------------

inline Distribution parse_distribution(const std::string& s) {
    if (s == "gaussian") return Distribution::gaussian();
    if (s.rfind("student", 0) == 0 && s.size() > 7) {
        try {
            return Distribution::student(std::stoi(s.substr(7)));
        } catch (const std::exception&) {
        }
    }
    throw InvalidArgumentError("distributions: expected \"gaussian\" or \"student<df>\", got \"" + s + "\"");
}

inline SimConfig sim_config_from_json(const json& j) try {
    SimConfig cfg;
    auto need = [&](const char* key, json::value_t ty, const char* ty_name) -> const json& {
        if (!j.contains(key))
            throw InvalidArgumentError(std::string("config: missing field \"") + key + "\"");
        const json& v = j.at(key);
        const bool num_ok = ty == json::value_t::number_integer &&
                            (v.is_number_integer() || v.is_number_unsigned());
        if (!num_ok && v.type() != ty)
            throw InvalidArgumentError(std::string("config: field \"") + key + "\" must be " + ty_name);
        return v;
    };
    cfg.d = need("d", json::value_t::number_integer, "an integer").get<int>();
    for (const auto& c : need("c_values", json::value_t::array, "an array")) {
        if (!c.is_number_integer()) throw InvalidArgumentError("config: c_values entries must be integers");
        cfg.c_values.push_back(c.get<int>());
    }
    for (const auto& n : need("n_values", json::value_t::array, "an array")) {
        if (!n.is_number_integer()) throw InvalidArgumentError("config: n_values entries must be integers");
        cfg.n_values.push_back(n.get<int>());
    }
    for (const auto& d : need("distributions", json::value_t::array, "an array")) {
        if (!d.is_string()) throw InvalidArgumentError("config: distributions entries must be strings");
        cfg.distributions.push_back(parse_distribution(d.get<std::string>()));
    }
    cfg.replications = need("replications", json::value_t::number_integer, "an integer").get<int>();
    for (const auto& m : need("methods", json::value_t::array, "an array")) {
        if (!m.is_string()) throw InvalidArgumentError("config: methods entries must be strings");
        cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    cfg.master_seed = need("master_seed", json::value_t::number_integer, "an integer").get<std::uint64_t>();
    cfg.validate();
    return cfg;
} catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("config: ") + e.what());
}

// ------------------------- HierarchyDocument -------------------------

// Machine-readable record of one clustering run. Clusters are stored as
// sorted member-name lists so the output is stable under input column
// reordering.
struct HierarchyDocument {
    struct Input {
        std::string file;
        std::string kind;  // cov | corr | data
        int n = 0;
        bool mean_known = false;
        int d = 0;
        std::vector<std::string> names;
    };
    struct Hyper {
        double nu = 0.0;
        std::vector<double> lambda_diag;
        std::string variant;
        double omega_scale = 1.0;
    };
    struct Method {
        std::string measure;
        bool use_abs = false;
        std::string stop;  // auto | full | k=<int>
        std::uint64_t seed = 0;
        std::optional<Hyper> hyper;
    };
    struct Step {
        int step = 0;
        std::vector<std::string> left;
        std::vector<std::string> right;
        double similarity = 0.0;
        std::optional<double> cumulative_log_bf;
        int ties_broken = 1;
    };
    struct Curve {
        int level = 0;
        double log_bf = 0.0;
        double log10_bf = 0.0;
    };

    Input input;
    Method method;
    std::vector<Step> steps;
    bool stopped_early = false;
    std::optional<int> stop_level;
    std::vector<std::vector<std::string>> auto_partition;
    std::optional<std::vector<Curve>> cumulative_curve;
};

namespace detail {

inline std::vector<std::string> names_of(const IndexSet& idx, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(idx.size()));
    for (int k = 0; k < idx.size(); ++k) out.push_back(names[static_cast<std::size_t>(idx[k])]);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::vector<std::string>> partition_names(const Partition& p,
                                                             const std::vector<std::string>& names) {
    std::vector<std::vector<std::string>> out;
    out.reserve(p.blocks().size());
    for (const auto& b : p.blocks()) out.push_back(names_of(b, names));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

inline HierarchyDocument build_document(HierarchyDocument::Input input,
                                        HierarchyDocument::Method method, const Hierarchy& h,
                                        const Partition& auto_part,
                                        const std::vector<std::string>& names) {
    HierarchyDocument doc;
    doc.input = std::move(input);
    doc.method = std::move(method);
    for (const auto& st : h.steps)
        doc.steps.push_back({st.step, detail::names_of(st.left, names),
                             detail::names_of(st.right, names), st.similarity,
                             st.cumulative_log_bf, st.ties_broken});
    doc.stopped_early = h.stopped_early;
    doc.stop_level = h.stop_level;
    doc.auto_partition = detail::partition_names(auto_part, names);
    if (h.bayesian) {
        std::vector<HierarchyDocument::Curve> curve;
        for (const auto& pt : cumulative_curve(h)) curve.push_back({pt.level, pt.log_bf, pt.log10_bf});
        doc.cumulative_curve = std::move(curve);
    }
    return doc;
}

inline json to_json(const HierarchyDocument& doc) {
    json j;
    j["input"] = {{"file", doc.input.file},       {"kind", doc.input.kind},
                  {"n", doc.input.n},             {"mean_known", doc.input.mean_known},
                  {"d", doc.input.d},             {"names", doc.input.names}};
    json m = {{"measure", doc.method.measure},
              {"use_abs", doc.method.use_abs},
              {"stop", doc.method.stop},
              {"seed", doc.method.seed}};
    if (doc.method.hyper) {
        m["hyper"] = {{"nu", doc.method.hyper->nu},
                      {"lambda_diag", doc.method.hyper->lambda_diag},
                      {"variant", doc.method.hyper->variant},
                      {"omega_scale", doc.method.hyper->omega_scale}};
    } else {
        m["hyper"] = nullptr;
    }
    j["method"] = std::move(m);
    j["steps"] = json::array();
    for (const auto& st : doc.steps) {
        json s = {{"step", st.step},
                  {"left", st.left},
                  {"right", st.right},
                  {"similarity", st.similarity},
                  {"ties_broken", st.ties_broken}};
        s["cumulative_log_bf"] = st.cumulative_log_bf ? json(*st.cumulative_log_bf) : json(nullptr);
        j["steps"].push_back(std::move(s));
    }
    j["stopped_early"] = doc.stopped_early;
    j["stop_level"] = doc.stop_level ? json(*doc.stop_level) : json(nullptr);
    j["auto_partition"] = doc.auto_partition;
    if (doc.cumulative_curve) {
        j["cumulative_curve"] = json::array();
        for (const auto& pt : *doc.cumulative_curve)
            j["cumulative_curve"].push_back(
                {{"level", pt.level}, {"log_bf", pt.log_bf}, {"log10_bf", pt.log10_bf}});
    } else {
        j["cumulative_curve"] = nullptr;
    }
    return j;
}

inline HierarchyDocument document_from_json(const json& j) {
    try {
        HierarchyDocument doc;
        const json& in = j.at("input");
        doc.input.file = in.at("file").get<std::string>();
        doc.input.kind = in.at("kind").get<std::string>();
        doc.input.n = in.at("n").get<int>();
        doc.input.mean_known = in.at("mean_known").get<bool>();
        doc.input.d = in.at("d").get<int>();
        doc.input.names = in.at("names").get<std::vector<std::string>>();

        const json& m = j.at("method");
        doc.method.measure = m.at("measure").get<std::string>();
        doc.method.use_abs = m.at("use_abs").get<bool>();
        doc.method.stop = m.at("stop").get<std::string>();
        doc.method.seed = m.at("seed").get<std::uint64_t>();
        if (!m.at("hyper").is_null()) {
            HierarchyDocument::Hyper h;
            h.nu = m.at("hyper").at("nu").get<double>();
            h.lambda_diag = m.at("hyper").at("lambda_diag").get<std::vector<double>>();
            h.variant = m.at("hyper").at("variant").get<std::string>();
            h.omega_scale = m.at("hyper").at("omega_scale").get<double>();
            doc.method.hyper = std::move(h);
        }
        for (const auto& s : j.at("steps")) {
            HierarchyDocument::Step st;
            st.step = s.at("step").get<int>();
            st.left = s.at("left").get<std::vector<std::string>>();
            st.right = s.at("right").get<std::vector<std::string>>();
            st.similarity = s.at("similarity").get<double>();
            if (!s.at("cumulative_log_bf").is_null())
                st.cumulative_log_bf = s.at("cumulative_log_bf").get<double>();
            st.ties_broken = s.at("ties_broken").get<int>();
            doc.steps.push_back(std::move(st));
        }
        doc.stopped_early = j.at("stopped_early").get<bool>();
        if (!j.at("stop_level").is_null()) doc.stop_level = j.at("stop_level").get<int>();
        doc.auto_partition = j.at("auto_partition").get<std::vector<std::vector<std::string>>>();
        if (!j.at("cumulative_curve").is_null()) {
            std::vector<HierarchyDocument::Curve> curve;
            for (const auto& pt : j.at("cumulative_curve"))
                curve.push_back({pt.at("level").get<int>(), pt.at("log_bf").get<double>(),
                                 pt.at("log10_bf").get<double>()});
            doc.cumulative_curve = std::move(curve);
        }
        return doc;
    } catch (const json::exception& e) {
        throw InvalidArgumentError(std::string("hierarchy document: ") + e.what());
    }
}

// ------------------------- partition documents -------------------------

// Standalone partition file: {"d": ..., "names": [...], "blocks": [[names]]}.
inline json partition_to_json(const Partition& p, const std::vector<std::string>& names) {
    json j;
    j["d"] = p.d();
    j["names"] = names;
    j["blocks"] = detail::partition_names(p, names);
    return j;
}

// Blocks of names resolved against `names`; used by the consensus command.
inline Partition partition_from_blocks(const std::vector<std::vector<std::string>>& blocks,
                                       const std::vector<std::string>& names) {
    std::vector<IndexSet> sets;
    for (const auto& blk : blocks) {
        std::vector<int> idx;
        for (const auto& name : blk) {
            const auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end())
                throw InvalidArgumentError("partition: unknown variable name \"" + name + "\"");
            idx.push_back(static_cast<int>(it - names.begin()));
        }
        std::sort(idx.begin(), idx.end());
        sets.push_back(IndexSet(std::move(idx)));
    }
    return Partition(static_cast<int>(names.size()), std::move(sets));
}

}  // namespace bahc
