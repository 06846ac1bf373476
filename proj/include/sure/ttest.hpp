#pragma once

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "metrics.hpp"

namespace sure {

enum class Verdict { win, tie, loss };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::win: return "win";
        case Verdict::loss: return "loss";
        default: return "tie";
    }
}

struct TTestResult {
    double t_stat = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    Verdict verdict = Verdict::tie;  ///< from the first sample's perspective
};

/// Two-tailed p-value of Student's t with `df` degrees of freedom:
/// P(|T| >= |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2).
inline double student_t_two_tailed(double t, double df) {
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return boost::math::ibeta(0.5 * df, 0.5, x);
}

/// Pooled-variance two-sample t-test.
inline TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.05) {
    if (a.size() < 2 || b.size() < 2) throw InvalidArgument("t-test needs at least two values per sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = sample_std(a), vb = sample_std(b);
    TTestResult r;
    r.df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va * va + (nb - 1.0) * vb * vb) / r.df;
    const double diff = ma - mb;
    if (pooled == 0.0) {
        if (diff == 0.0) {
            r.t_stat = 0.0;
            r.p_value = 1.0;
        } else {
            r.t_stat = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        }
    } else {
        r.t_stat = diff / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
        r.p_value = std::clamp(student_t_two_tailed(r.t_stat, r.df), 0.0, 1.0);
    }
    if (r.p_value < alpha && diff > 0) r.verdict = Verdict::win;
    else if (r.p_value < alpha && diff < 0) r.verdict = Verdict::loss;
    return r;
}

}  // namespace sure
