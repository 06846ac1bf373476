// Command-line front end: data generation, training, prediction and evaluation.

#include "CLI11.hpp"

#include <sure/all.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& csv, const char* what) {
    std::vector<T> out;
    for (auto tok : sure::detail::split_on(csv, ',')) {
        tok = sure::detail::trim(tok);
        if constexpr (std::is_integral_v<T>) {
            const auto v = sure::numfmt::parse_int(tok);
            if (!v) throw sure::InvalidArgument(std::string("malformed value in ") + what + ": '" + std::string(tok) + "'");
            out.push_back(static_cast<T>(*v));
        } else {
            const auto v = sure::numfmt::parse_double(tok);
            if (!v) throw sure::InvalidArgument(std::string("malformed value in ") + what + ": '" + std::string(tok) + "'");
            out.push_back(*v);
        }
    }
    if (out.empty()) throw sure::InvalidArgument(std::string("empty list for ") + what);
    return out;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") std::cout << text;
    else sure::write_text_file(path, text);
}

struct SureFlags {
    double lambda = 0.3;
    double beta = 0.05;
    std::optional<double> sigma;
    std::int64_t sigma_cap = 4'500'000;
    int max_iter = 100;
    double tol = 1e-3;
    std::string init = "normalized";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "Infinity-norm weight")->capture_default_str();
        cmd->add_option("--beta", beta, "Ridge regularizer")->capture_default_str();
        cmd->add_option("--sigma", sigma, "Kernel bandwidth (default: mean pairwise distance)");
        cmd->add_option("--sigma-cap", sigma_cap, "Pair cap for the bandwidth heuristic")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "Maximum alternating iterations")->capture_default_str();
        cmd->add_option("--tol", tol, "Stop when ||delta P||_F <= tol")->capture_default_str();
        cmd->add_option("--init", init, "Initial confidences")
            ->check(CLI::IsMember({"normalized", "literal"}))
            ->capture_default_str();
    }

    sure::TrainConfig config(std::uint64_t seed) const {
        sure::TrainConfig cfg;
        cfg.lambda = lambda;
        cfg.beta = beta;
        cfg.sigma_override = sigma;
        cfg.sigma_cap = sigma_cap;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        cfg.init = init == "literal" ? sure::InitMode::literal : sure::InitMode::normalized;
        cfg.seed = seed;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sure: partial-label classification toolkit"};
    app.require_subcommand(1);

    // gen
    std::string gen_in, gen_out;
    double gen_p = 0.0, gen_eps = 0.0;
    int gen_r = 1;
    bool gen_coupled = false;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "Corrupt a clean dataset into a partial-label one");
    gen->add_option("--in", gen_in, "Clean PLD file (singleton candidates with truth)")->required();
    gen->add_option("--out", gen_out, "Output PLD file")->required();
    gen->add_option("--p", gen_p, "Proportion of partial-label examples")->required();
    gen->add_option("--r", gen_r, "False positive labels per partial example")->required();
    gen->add_option("--epsilon", gen_eps, "Coupled-label probability (with --coupled)");
    gen->add_flag("--coupled", gen_coupled, "Coupled-label corruption");
    gen->add_option("--seed", gen_seed, "Random seed")->required();

    // blobs
    std::string blobs_out;
    sure::BlobSpec blob_spec;
    auto* blobs = app.add_subcommand("blobs", "Write a clean 2-D Gaussian blob dataset");
    blobs->add_option("--out", blobs_out, "Output PLD file")->required();
    blobs->add_option("--n", blob_spec.num_points, "Number of points")->capture_default_str();
    blobs->add_option("--classes", blob_spec.num_classes, "Number of classes")->capture_default_str();
    blobs->add_option("--radius", blob_spec.radius, "Distance of blob centres from the origin")->capture_default_str();
    blobs->add_option("--std", blob_spec.stddev, "Blob standard deviation")->capture_default_str();
    blobs->add_option("--seed", blob_spec.seed, "Random seed")->required();

    // train
    std::string train_data, train_model_out, train_trace_out;
    bool train_linear = false;
    std::uint64_t train_seed = 0;
    SureFlags train_flags;
    auto* train = app.add_subcommand("train", "Train a SURE model");
    train->add_option("--data", train_data, "Training PLD file")->required();
    train_flags.add_to(train);
    train->add_flag("--linear", train_linear, "Use the linear model instead of the Gaussian kernel");
    train->add_option("--seed", train_seed, "Seed for bandwidth subsampling")->capture_default_str();
    train->add_option("--model-out", train_model_out, "Model output file")->required();
    train->add_option("--trace-out", train_trace_out, "Convergence trace CSV (iter,delta_p)");

    // predict
    std::string pred_model, pred_data, pred_out;
    auto* predict = app.add_subcommand("predict", "Predict labels with a trained model");
    predict->add_option("--model", pred_model, "Model file")->required();
    predict->add_option("--data", pred_data, "PLD file whose features are classified")->required();
    predict->add_option("--out", pred_out, "Label output file (1-based, one per line)")->required();

    // cv
    std::string cv_data, cv_algo = "sure", cv_report, cv_lgrid, cv_bgrid, cv_kgrid;
    int cv_folds = 10, cv_k = 5, cv_inner = 5;
    std::uint64_t cv_seed = 0;
    SureFlags cv_flags;
    auto* cv = app.add_subcommand("cv", "Cross-validate an algorithm");
    cv->add_option("--data", cv_data, "PLD file with ground truth")->required();
    cv->add_option("--algo", cv_algo, "Algorithm")->check(CLI::IsMember({"sure", "plknn"}))->capture_default_str();
    cv_flags.add_to(cv);
    cv->add_option("--k", cv_k, "PLKNN neighbour count")->capture_default_str();
    cv->add_option("--lambda-grid", cv_lgrid, "Comma-separated lambda grid (nested selection)");
    cv->add_option("--beta-grid", cv_bgrid, "Comma-separated beta grid (nested selection)");
    cv->add_option("--k-grid", cv_kgrid, "Comma-separated k grid for PLKNN (nested selection)");
    cv->add_option("--inner-folds", cv_inner, "Inner folds for nested selection")->capture_default_str();
    cv->add_option("--folds", cv_folds, "Number of folds")->capture_default_str();
    cv->add_option("--seed", cv_seed, "Random seed")->required();
    cv->add_option("--report", cv_report, "JSON report path")->required();

    // grid
    std::string grid_data, grid_algo = "sure", grid_lgrid, grid_bgrid, grid_kgrid, grid_out;
    int grid_inner = 5;
    std::uint64_t grid_seed = 0;
    SureFlags grid_flags;
    auto* grid = app.add_subcommand("grid", "Select hyperparameters by inner cross-validation");
    grid->add_option("--data", grid_data, "PLD file with ground truth")->required();
    grid->add_option("--algo", grid_algo, "Algorithm")->check(CLI::IsMember({"sure", "plknn"}))->capture_default_str();
    grid->add_option("--lambda-grid", grid_lgrid, "Comma-separated lambda values");
    grid->add_option("--beta-grid", grid_bgrid, "Comma-separated beta values");
    grid->add_option("--k-grid", grid_kgrid, "Comma-separated k values (PLKNN)");
    grid_flags.add_to(grid);
    grid->add_option("--inner-folds", grid_inner, "Number of folds")->capture_default_str();
    grid->add_option("--seed", grid_seed, "Random seed")->required();
    grid->add_option("--out", grid_out, "JSON output path (default stdout)");

    // eval
    std::string eval_pred, eval_truth, eval_values;
    std::optional<double> eval_mae_k;
    auto* eval = app.add_subcommand("eval", "Score predicted labels");
    eval->add_option("--pred", eval_pred, "Predicted labels")->required();
    eval->add_option("--truth", eval_truth, "True labels")->required();
    eval->add_option("--values", eval_values, "Label-to-value map for MAE@k");
    eval->add_option("--mae-k", eval_mae_k, "MAE@k threshold");

    // ttest
    std::string tt_a, tt_b;
    double tt_alpha = 0.05;
    auto* ttest = app.add_subcommand("ttest", "Two-sample t-test between two CV reports");
    ttest->add_option("--a", tt_a, "First report")->required();
    ttest->add_option("--b", tt_b, "Second report")->required();
    ttest->add_option("--alpha", tt_alpha, "Significance level")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            sure::SyntheticSpec spec;
            spec.p = gen_p;
            spec.r = gen_r;
            spec.epsilon = gen_eps;
            spec.mode = gen_coupled ? sure::CorruptionMode::coupled : sure::CorruptionMode::random;
            spec.seed = gen_seed;
            sure::save_dataset(sure::corrupt(sure::load_dataset(gen_in), spec), gen_out);
        } else if (blobs->parsed()) {
            sure::save_dataset(sure::make_blobs(blob_spec), blobs_out);
        } else if (train->parsed()) {
            const auto data = sure::load_dataset(train_data);
            const auto cfg = train_flags.config(train_seed);
            sure::TrainTrace trace;
            if (train_linear) {
                auto out = sure::train_linear(data, cfg);
                sure::save_model(out.model, train_model_out);
                trace = out.trace;
            } else {
                auto out = sure::train(data, cfg);
                sure::save_model(out.model, train_model_out);
                trace = out.trace;
            }
            if (!train_trace_out.empty()) sure::write_text_file(train_trace_out, sure::format_trace_csv(trace));
        } else if (predict->parsed()) {
            const auto model = sure::load_model(pred_model);
            const auto data = sure::load_dataset(pred_data);
            const auto labels = std::visit([&](const auto& m) { return sure::predict(m, data.features); }, model);
            sure::write_text_file(pred_out, sure::format_labels(labels));
        } else if (cv->parsed()) {
            const auto data = sure::load_dataset(cv_data);
            sure::AlgoSpec spec;
            spec.algorithm = cv_algo == "plknn" ? sure::Algorithm::plknn : sure::Algorithm::sure;
            spec.sure = cv_flags.config(cv_seed);
            spec.knn.k = cv_k;
            const bool nested = spec.algorithm == sure::Algorithm::sure ? !(cv_lgrid.empty() && cv_bgrid.empty())
                                                                        : !cv_kgrid.empty();
            if (nested) {
                sure::ParamGrid g;
                g.inner_folds = cv_inner;
                if (spec.algorithm == sure::Algorithm::sure) {
                    g.lambdas = cv_lgrid.empty() ? std::vector<double>{spec.sure.lambda} : parse_list<double>(cv_lgrid, "--lambda-grid");
                    g.betas = cv_bgrid.empty() ? std::vector<double>{spec.sure.beta} : parse_list<double>(cv_bgrid, "--beta-grid");
                } else {
                    g.ks = parse_list<int>(cv_kgrid, "--k-grid");
                }
                spec.grid = g;
            }
            const auto report = sure::cross_validate(data, spec, cv_folds, cv_seed);
            sure::write_text_file(cv_report, sure::dump_json(sure::report_json(report, spec)));
        } else if (grid->parsed()) {
            const auto data = sure::load_dataset(grid_data);
            const auto algo = grid_algo == "plknn" ? sure::Algorithm::plknn : sure::Algorithm::sure;
            sure::ParamGrid g;
            g.inner_folds = grid_inner;
            if (algo == sure::Algorithm::sure) {
                g.lambdas = grid_lgrid.empty() ? sure::default_tradeoff_grid() : parse_list<double>(grid_lgrid, "--lambda-grid");
                g.betas = grid_bgrid.empty() ? sure::default_tradeoff_grid() : parse_list<double>(grid_bgrid, "--beta-grid");
            } else {
                g.ks = grid_kgrid.empty() ? std::vector<int>{5, 6, 7, 8, 9, 10} : parse_list<int>(grid_kgrid, "--k-grid");
            }
            const auto result = sure::grid_search(data, algo, g, grid_flags.config(grid_seed), grid_seed);
            emit(sure::dump_json(sure::grid_json(result, algo)), grid_out);
        } else if (eval->parsed()) {
            const auto pred = sure::parse_labels(sure::read_text_file(eval_pred));
            const auto truth = sure::parse_labels(sure::read_text_file(eval_truth));
            sure::Json j;
            j["accuracy"] = sure::accuracy(pred, truth);
            j["count"] = pred.size();
            if (eval_mae_k) {
                std::optional<sure::LabelValues> values;
                if (!eval_values.empty()) values = sure::parse_label_values(sure::read_text_file(eval_values));
                j["mae_k"] = *eval_mae_k;
                j["mae_at_k"] = sure::mae_at_k(pred, truth, values ? &*values : nullptr, *eval_mae_k);
            }
            std::cout << sure::dump_json(j);
        } else if (ttest->parsed()) {
            const auto a = sure::read_report_accuracies(tt_a);
            const auto b = sure::read_report_accuracies(tt_b);
            const auto r = sure::t_test_two_sample(a, b, tt_alpha);
            sure::Json j;
            j["t_stat"] = std::isfinite(r.t_stat) ? sure::Json(r.t_stat) : sure::Json(r.t_stat > 0 ? "inf" : "-inf");
            j["df"] = r.df;
            j["p_value"] = r.p_value;
            j["alpha"] = tt_alpha;
            j["verdict"] = sure::to_string(r.verdict);
            std::cout << sure::dump_json(j);
        }
    } catch (const sure::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
