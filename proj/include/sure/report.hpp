#pragma once

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "pld_io.hpp"

namespace sure {

using Json = nlohmann::json;  // std::map-backed: keys serialize in sorted order

inline const char* to_string(InitMode m) noexcept { return m == InitMode::normalized ? "normalized" : "literal"; }

inline Json config_json(const AlgoSpec& spec) {
    Json c;
    if (spec.algorithm == Algorithm::sure) {
        c["lambda"] = spec.sure.lambda;
        c["beta"] = spec.sure.beta;
        c["max_iter"] = spec.sure.max_iter;
        c["tol"] = spec.sure.tol;
        c["init"] = to_string(spec.sure.init);
        c["sigma"] = spec.sure.sigma_override ? Json(*spec.sure.sigma_override) : Json(nullptr);
        c["sigma_cap"] = spec.sure.sigma_cap;
    } else {
        c["k"] = spec.knn.k;
    }
    if (spec.grid) {
        Json g;
        g["inner_folds"] = spec.grid->inner_folds;
        if (spec.algorithm == Algorithm::sure) {
            g["lambda"] = spec.grid->lambdas;
            g["beta"] = spec.grid->betas;
        } else {
            g["k"] = spec.grid->ks;
        }
        c["grid"] = g;
    } else {
        c["grid"] = nullptr;
    }
    return c;
}

inline Json report_json(const ExperimentReport& r, const AlgoSpec& spec) {
    Json j;
    j["algorithm"] = to_string(r.algorithm);
    j["config"] = config_json(spec);
    j["folds"] = r.folds;
    j["seed"] = r.seed;
    j["per_fold_accuracy"] = r.per_fold_accuracy;
    j["mean"] = r.mean;
    j["std"] = r.std;
    Json selected = Json::array();
    Json traces = Json::array();
    for (const auto& f : r.fold_details) {
        Json s;
        if (r.algorithm == Algorithm::sure) {
            s["lambda"] = f.selected.lambda;
            s["beta"] = f.selected.beta;
        } else {
            s["k"] = f.selected.k;
        }
        selected.push_back(s);
        if (f.trace) {
            Json t;
            t["delta_p"] = f.trace->delta_p;
            t["iterations"] = f.trace->iterations_run;
            t["converged"] = f.trace->converged;
            traces.push_back(t);
        }
    }
    j["selected"] = selected;
    if (r.algorithm == Algorithm::sure) j["traces"] = traces;
    return j;
}

inline Json grid_json(const GridSearchResult& g, Algorithm algorithm) {
    auto point = [&](const GridPoint& p) {
        Json j;
        if (algorithm == Algorithm::sure) {
            j["lambda"] = p.lambda;
            j["beta"] = p.beta;
        } else {
            j["k"] = p.k;
        }
        j["mean_accuracy"] = p.mean_accuracy;
        return j;
    };
    Json j;
    j["algorithm"] = to_string(algorithm);
    j["best"] = point(g.best);
    Json log = Json::array();
    for (const auto& p : g.log) log.push_back(point(p));
    j["evaluations"] = log;
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + '\n'; }

inline Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError("malformed JSON in '" + path.string() + "': " + e.what(), 0);
    }
}

/// Per-fold accuracies stored in a report written by report_json.
inline std::vector<double> read_report_accuracies(const std::filesystem::path& path) {
    const Json j = read_json(path);
    if (!j.is_object() || !j.contains("per_fold_accuracy") || !j["per_fold_accuracy"].is_array())
        throw ParseError("report '" + path.string() + "' has no per_fold_accuracy array", 0);
    std::vector<double> out;
    for (const auto& v : j["per_fold_accuracy"]) {
        if (!v.is_number()) throw ParseError("non-numeric accuracy in '" + path.string() + "'", 0);
        out.push_back(v.get<double>());
    }
    return out;
}

/// `iter,delta_p` CSV, iterations numbered from 1.
inline std::string format_trace_csv(const TrainTrace& trace) {
    std::string out = "iter,delta_p\n";
    for (std::size_t t = 0; t < trace.delta_p.size(); ++t) {
        out += std::to_string(t + 1);
        out += ',';
        numfmt::append(out, trace.delta_p[t]);
        out += '\n';
    }
    return out;
}

/// One 1-based label per line.
inline std::string format_labels(std::span<const Label> labels) {
    std::string out;
    for (const Label y : labels) out += std::to_string(y + 1) + '\n';
    return out;
}

inline std::vector<Label> parse_labels(std::string_view text) {
    std::vector<Label> out;
    std::size_t lineno = 0;
    for (auto line : detail::split_on(text, '\n')) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto v = numfmt::parse_int(line);
        if (!v || *v < 1) throw ParseError("malformed label '" + std::string(line) + "'", lineno);
        out.push_back(static_cast<Label>(*v - 1));
    }
    return out;
}

/// Two columns per line: 1-based label, real value.
inline LabelValues parse_label_values(std::string_view text) {
    LabelValues out;
    std::size_t lineno = 0;
    for (auto line : detail::split_on(text, '\n')) {
        ++lineno;
        const auto toks = detail::split_ws(detail::trim(line));
        if (toks.empty()) continue;
        if (toks.size() != 2) throw ParseError("expected '<label> <value>'", lineno);
        const auto y = numfmt::parse_int(toks[0]);
        const auto v = numfmt::parse_double(toks[1]);
        if (!y || *y < 1 || !v) throw ParseError("malformed label/value pair", lineno);
        out[static_cast<Label>(*y - 1)] = *v;
    }
    return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace sure
