#pragma once

// Model files (shortest round-trip decimals, row-major):
//   sure-model 1            | sure-linear-model 1
//   <m> <n> <l>             | <n> <l>
//   <sigma>                 | W: n lines of l values
//   train_X: m lines        | b: one line of l values
//   A: m lines of l values
//   b: one line of l values

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "pld_io.hpp"
#include "ridge.hpp"

namespace sure {

using AnyModel = std::variant<KernelModel, LinearModel>;

namespace detail {

inline void append_matrix(std::string& out, const Matrix& M) {
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out += ' ';
            numfmt::append(out, M(i, j));
        }
        out += '\n';
    }
}

inline void append_row(std::string& out, const Vector& v) {
    for (Index j = 0; j < v.size(); ++j) {
        if (j) out += ' ';
        numfmt::append(out, v(j));
    }
    out += '\n';
}

class LineReader {
public:
    explicit LineReader(std::string_view text) : lines_(split_on(text, '\n')) {}

    std::vector<std::string_view> next_tokens() {
        if (pos_ >= lines_.size()) throw ParseError("unexpected end of model file", pos_ + 1);
        return split_ws(trim(lines_[pos_++]));
    }
    std::size_t line() const noexcept { return pos_; }

    std::vector<double> next_values(Index expected) {
        const auto toks = next_tokens();
        if (static_cast<Index>(toks.size()) != expected)
            throw ParseError("expected " + std::to_string(expected) + " values", pos_);
        std::vector<double> out;
        for (auto t : toks) {
            const auto v = numfmt::parse_double(t);
            if (!v) throw ParseError("malformed number '" + std::string(t) + "'", pos_);
            out.push_back(*v);
        }
        return out;
    }

    Matrix next_matrix(Index rows, Index cols) {
        Matrix M(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            const auto vals = next_values(cols);
            for (Index j = 0; j < cols; ++j) M(i, j) = vals[static_cast<std::size_t>(j)];
        }
        return M;
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

inline Index parse_dim(std::string_view tok, std::size_t line) {
    const auto v = numfmt::parse_int(tok);
    if (!v || *v < 1) throw ParseError("model dimensions must be positive integers", line);
    return static_cast<Index>(*v);
}

}  // namespace detail

inline std::string format_model(const KernelModel& model) {
    std::string out = "sure-model 1\n";
    out += std::to_string(model.train_X.rows()) + ' ' + std::to_string(model.train_X.cols()) + ' ' +
           std::to_string(model.A.cols()) + '\n';
    numfmt::append(out, model.sigma);
    out += '\n';
    detail::append_matrix(out, model.train_X);
    detail::append_matrix(out, model.A);
    detail::append_row(out, model.b);
    return out;
}

inline std::string format_model(const LinearModel& model) {
    std::string out = "sure-linear-model 1\n";
    out += std::to_string(model.W.rows()) + ' ' + std::to_string(model.W.cols()) + '\n';
    detail::append_matrix(out, model.W);
    detail::append_row(out, model.b);
    return out;
}

inline AnyModel parse_model(std::string_view text) {
    detail::LineReader in(text);
    const auto magic = in.next_tokens();
    if (magic.size() == 2 && magic[0] == "sure-model" && magic[1] == "1") {
        const auto dims = in.next_tokens();
        if (dims.size() != 3) throw ParseError("expected '<m> <n> <l>'", in.line());
        const Index m = detail::parse_dim(dims[0], in.line());
        const Index n = detail::parse_dim(dims[1], in.line());
        const Index l = detail::parse_dim(dims[2], in.line());
        KernelModel model;
        model.sigma = in.next_values(1)[0];
        if (!(model.sigma > 0.0)) throw ParseError("sigma must be positive", in.line());
        model.train_X = in.next_matrix(m, n);
        model.A = in.next_matrix(m, l);
        const auto b = in.next_values(l);
        model.b = Eigen::Map<const Vector>(b.data(), l);
        return model;
    }
    if (magic.size() == 2 && magic[0] == "sure-linear-model" && magic[1] == "1") {
        const auto dims = in.next_tokens();
        if (dims.size() != 2) throw ParseError("expected '<n> <l>'", in.line());
        const Index n = detail::parse_dim(dims[0], in.line());
        const Index l = detail::parse_dim(dims[1], in.line());
        LinearModel model;
        model.W = in.next_matrix(n, l);
        const auto b = in.next_values(l);
        model.b = Eigen::Map<const Vector>(b.data(), l);
        return model;
    }
    throw ParseError("malformed header: expected 'sure-model 1' or 'sure-linear-model 1'", 1);
}

inline void save_model(const AnyModel& model, const std::filesystem::path& path) {
    write_text_file(path, std::visit([](const auto& m) { return format_model(m); }, model));
}

inline AnyModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace sure
