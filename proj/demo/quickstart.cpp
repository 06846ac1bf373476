// Generates a partial-label blob dataset, trains SURE and the PLKNN baseline,
// and prints held-out accuracy for both.

#include <sure/all.hpp>

#include <cstdio>

int main() {
    sure::BlobSpec blobs;
    blobs.num_points = 300;
    blobs.seed = 7;
    const auto clean = sure::make_blobs(blobs);

    sure::SyntheticSpec noise;
    noise.p = 0.7;
    noise.r = 1;
    noise.seed = 7;
    const auto data = sure::corrupt(clean, noise);

    const auto folds = sure::split_folds(data, 5, 7);
    const auto train = data.subset(folds[0].train);
    const auto test = data.subset(folds[0].test);

    sure::TrainConfig cfg;
    cfg.lambda = 0.3;
    cfg.beta = 0.05;
    const auto fitted = sure::train(train, cfg);
    const double sure_acc = sure::accuracy(sure::predict(fitted.model, test.features), *test.truth);
    const double knn_acc = sure::accuracy(sure::plknn_predict(train, test.features, {7}), *test.truth);

    std::printf("SURE  accuracy %.3f (%d iterations, converged=%s)\n", sure_acc, fitted.trace.iterations_run,
                fitted.trace.converged ? "yes" : "no");
    std::printf("PLKNN accuracy %.3f\n", knn_acc);
    return 0;
}
