#pragma once

// PLD text format (UTF-8, LF):
//   pld 1
//   <m> <n> <l>
//   <f_1> ... <f_n> | <c_1>,...,<c_k>[ | <t>]      (m lines, labels 1-based, candidates ascending)

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "numfmt.hpp"

namespace sure {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses a PLD document held in memory.
inline PLDataset parse_dataset(std::string_view text) {
    std::vector<std::string_view> lines = detail::split_on(text, '\n');
    // A trailing newline yields one empty tail element.
    while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();

    if (lines.empty() || detail::trim(lines[0]) != "pld 1") throw ParseError("malformed header: expected 'pld 1'", 1);
    if (lines.size() < 2) throw ParseError("malformed header: missing dimension line", 2);

    const auto dims = detail::split_ws(detail::trim(lines[1]));
    if (dims.size() != 3) throw ParseError("malformed header: expected '<m> <n> <l>'", 2);
    long long dim[3];
    for (int k = 0; k < 3; ++k) {
        const auto v = numfmt::parse_int(dims[static_cast<std::size_t>(k)]);
        if (!v || *v < 1) throw ParseError("malformed header: dimensions must be positive integers", 2);
        dim[k] = *v;
    }
    const Index m = dim[0], n = dim[1], l = dim[2];
    if (static_cast<long long>(lines.size()) - 2 != m)
        throw ParseError("dimension mismatch: header declares " + std::to_string(m) + " rows, file has " +
                             std::to_string(lines.size() - 2),
                         lines.size() < static_cast<std::size_t>(m) + 2 ? lines.size() + 1 : static_cast<std::size_t>(m) + 3);

    PLDataset d;
    d.features.resize(m, n);
    d.candidates = CandidateMatrix::Zero(m, l);
    std::vector<Label> truth;
    int truth_mode = -1;  // -1 unknown, 0 absent, 1 present

    for (Index i = 0; i < m; ++i) {
        const std::size_t lineno = static_cast<std::size_t>(i) + 3;
        const auto fields = detail::split_on(lines[static_cast<std::size_t>(i) + 2], '|');
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("malformed data line: expected '<features> | <candidates>[ | <truth>]'", lineno);

        const auto feats = detail::split_ws(fields[0]);
        if (static_cast<Index>(feats.size()) != n)
            throw ParseError("dimension mismatch: expected " + std::to_string(n) + " features, found " +
                                 std::to_string(feats.size()),
                             lineno);
        for (Index j = 0; j < n; ++j) {
            const auto v = numfmt::parse_double(feats[static_cast<std::size_t>(j)]);
            if (!v) throw ParseError("malformed feature value '" + std::string(feats[static_cast<std::size_t>(j)]) + "'", lineno);
            d.features(i, j) = *v;
        }

        const auto cand_text = detail::trim(fields[1]);
        if (cand_text.empty()) throw ParseError("empty candidate set", lineno);
        long long prev = 0;
        for (auto tok : detail::split_on(cand_text, ',')) {
            const auto c = numfmt::parse_int(detail::trim(tok));
            if (!c) throw ParseError("malformed candidate label '" + std::string(tok) + "'", lineno);
            if (*c < 1 || *c > l) throw ParseError("candidate label " + std::to_string(*c) + " outside [1, l]", lineno);
            if (*c <= prev) throw ParseError("candidate labels must be strictly ascending", lineno);
            prev = *c;
            d.candidates(i, static_cast<Index>(*c - 1)) = 1;
        }

        const int has_t = fields.size() == 3 ? 1 : 0;
        if (truth_mode == -1) truth_mode = has_t;
        if (truth_mode != has_t) throw ParseError("truth field must be present on every line or on none", lineno);
        if (has_t) {
            const auto t = numfmt::parse_int(detail::trim(fields[2]));
            if (!t) throw ParseError("malformed truth label", lineno);
            if (*t < 1 || *t > l || d.candidates(i, static_cast<Index>(*t - 1)) == 0)
                throw ParseError("truth label outside candidate set", lineno);
            truth.push_back(static_cast<Label>(*t - 1));
        }
    }
    if (truth_mode == 1) d.truth = std::move(truth);
    return d;
}

inline PLDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

inline std::string format_dataset(const PLDataset& d) {
    d.validate();
    std::string out = "pld 1\n";
    out += std::to_string(d.rows()) + ' ' + std::to_string(d.num_features()) + ' ' + std::to_string(d.num_labels()) + '\n';
    for (Index i = 0; i < d.rows(); ++i) {
        for (Index j = 0; j < d.num_features(); ++j) {
            if (j) out += ' ';
            numfmt::append(out, d.features(i, j));
        }
        out += " | ";
        bool first = true;
        for (Index j = 0; j < d.num_labels(); ++j) {
            if (!d.candidates(i, j)) continue;
            if (!first) out += ',';
            out += std::to_string(j + 1);
            first = false;
        }
        if (d.truth) {
            out += " | ";
            out += std::to_string((*d.truth)[static_cast<std::size_t>(i)] + 1);
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void save_dataset(const PLDataset& d, const std::filesystem::path& path) {
    write_text_file(path, format_dataset(d));
}

}  // namespace sure
