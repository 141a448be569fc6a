#ifndef RISNET_SCALING_LAWS_HPP
#define RISNET_SCALING_LAWS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "risnet/analytic_distributions.hpp"
#include "risnet/special_functions.hpp"

namespace risnet {

/// Non-central chi-square (Gaussian amplitude) model of A: lambda = mean^2, sigma^2 = variance.
struct GaussianEquivalent {
    double lambda = 0.0;
    double sigma2 = 0.0;

    static GaussianEquivalent for_elements(int num_elements) {
        const AmplitudeMoments m = moments_of_a(num_elements);
        return {m.mean * m.mean, m.variance};
    }
};

/// Chernoff parameter, strictly inside (0, 1/2).
class ChernoffParams {
public:
    explicit ChernoffParams(double theta) : theta_(theta) {
        if (!(theta > 0.0 && theta < 0.5)) {
            throw std::domain_error("ChernoffParams: theta must lie in (0, 1/2)");
        }
    }
    [[nodiscard]] double theta() const { return theta_; }

private:
    double theta_;
};

inline constexpr double kDefaultTheta = 0.25;

struct ScalingReport {
    double c1 = 0.0;
    double h_k = 0.0;
    double sum_rate_full = 0.0;                ///< log2(1 + h_K)
    std::optional<double> sum_rate_leading;    ///< empty for K = 1 (ln K = 0)
};

namespace detail {

constexpr double kSixteenMinusPiSq = 16.0 - std::numbers::pi * std::numbers::pi;

// Growth-constant scale gamma_bar N (16 - pi^2) / (16 theta).
inline double chernoff_scale(double avg_snr, int num_elements, double theta) {
    return avg_snr * num_elements * kSixteenMinusPiSq / (16.0 * theta);
}

// ln of (1 - 2 theta)^{-1/2} exp(theta N pi^2 / (2 (1 - 2 theta)(16 - pi^2))).
inline double chernoff_log_prefactor(int num_elements, double theta) {
    constexpr double pi_sq = std::numbers::pi * std::numbers::pi;
    return -0.5 * std::log1p(-2.0 * theta) +
           theta * num_elements * pi_sq / (2.0 * (1.0 - 2.0 * theta) * kSixteenMinusPiSq);
}

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::domain_error(what);
}

}  // namespace detail

/// F(gamma) = 1 - Q_{1/2}(sqrt(lambda)/sigma, sqrt(gamma / avg) / sigma).
inline double gaussian_cdf_exact(double snr, double avg_snr, int num_elements) {
    detail::require_positive(avg_snr, "gaussian_cdf_exact: avg_snr must be positive");
    if (!(snr > 0.0)) return 0.0;
    const GaussianEquivalent g = GaussianEquivalent::for_elements(num_elements);
    const double sigma = std::sqrt(g.sigma2);
    return 1.0 - marcum_q_half(std::sqrt(g.lambda) / sigma, std::sqrt(snr / avg_snr) / sigma);
}

/// Chernoff-bounded tail form of the Gaussian-equivalent CDF. Not clamped;
/// negative at small gamma.
inline double chernoff_cdf(double snr, double avg_snr, int num_elements, ChernoffParams params) {
    detail::require_positive(avg_snr, "chernoff_cdf: avg_snr must be positive");
    const double theta = params.theta();
    const double scale = detail::chernoff_scale(avg_snr, num_elements, theta);
    return 1.0 - std::exp(detail::chernoff_log_prefactor(num_elements, theta) - snr / scale);
}

/// Derivative of chernoff_cdf with respect to gamma.
inline double chernoff_pdf(double snr, double avg_snr, int num_elements, ChernoffParams params) {
    detail::require_positive(avg_snr, "chernoff_pdf: avg_snr must be positive");
    const double theta = params.theta();
    const double scale = detail::chernoff_scale(avg_snr, num_elements, theta);
    return std::exp(detail::chernoff_log_prefactor(num_elements, theta) - snr / scale) / scale;
}

/// C1 = lim (1 - F) / f = gamma_bar N (16 - pi^2) / (16 theta).
inline double growth_constant_c1(double avg_snr, int num_elements, ChernoffParams params) {
    detail::require_positive(avg_snr, "growth_constant_c1: avg_snr must be positive");
    if (num_elements < 1) throw std::invalid_argument("growth_constant_c1: N must be >= 1");
    return detail::chernoff_scale(avg_snr, num_elements, params.theta());
}

/// Solves chernoff_cdf(h_K) = 1 - 1/K in closed form.
inline double threshold_h_k(int num_ris, int num_elements, double avg_snr, ChernoffParams params) {
    if (num_ris < 1) throw std::invalid_argument("threshold_h_k: K must be >= 1");
    const double theta = params.theta();
    const double bracket = std::log(static_cast<double>(num_ris)) +
                           detail::chernoff_log_prefactor(num_elements, theta);
    return bracket * growth_constant_c1(avg_snr, num_elements, params);
}

/// log2(1 + h_K) and its leading-order decomposition
/// log2(ln K) + log2((16 - pi^2)/(16 theta)) + log2(gamma_bar) + log2(N).
inline ScalingReport asymptotic_sum_rate(int num_ris, int num_elements, double avg_snr,
                                         ChernoffParams params) {
    ScalingReport r;
    r.c1 = growth_constant_c1(avg_snr, num_elements, params);
    r.h_k = threshold_h_k(num_ris, num_elements, avg_snr, params);
    r.sum_rate_full = std::log2(1.0 + r.h_k);
    if (num_ris >= 2) {
        r.sum_rate_leading = std::log2(std::log(static_cast<double>(num_ris))) +
                             std::log2(detail::kSixteenMinusPiSq / (16.0 * params.theta())) +
                             std::log2(avg_snr) + std::log2(static_cast<double>(num_elements));
    }
    return r;
}

/// sup over gamma in [0, 4 avg lambda] of |chernoff_cdf - gaussian_cdf_exact|.
inline double chernoff_sup_error(double avg_snr, int num_elements, double theta,
                                 int grid_points = 2001) {
    const GaussianEquivalent g = GaussianEquivalent::for_elements(num_elements);
    const double upper = 4.0 * avg_snr * g.lambda;
    const ChernoffParams params(theta);
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double snr = upper * i / (grid_points - 1);
        worst = std::max(worst, std::abs(chernoff_cdf(snr, avg_snr, num_elements, params) -
                                         gaussian_cdf_exact(snr, avg_snr, num_elements)));
    }
    return worst;
}

/// Theta minimising chernoff_sup_error: coarse scan, then golden-section refinement.
inline ChernoffParams optimize_theta(double avg_snr, int num_elements) {
    constexpr double lo_limit = 1e-6;
    constexpr double hi_limit = 0.5 - 1e-6;
    constexpr int scan = 50;
    auto objective = [&](double t) { return chernoff_sup_error(avg_snr, num_elements, t); };

    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
        const double t = lo_limit + (hi_limit - lo_limit) * i / scan;
        const double v = objective(t);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = lo_limit + (hi_limit - lo_limit) * std::max(best - 1, 0) / scan;
    double b = lo_limit + (hi_limit - lo_limit) * std::min(best + 1, scan) / scan;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-10; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    return ChernoffParams(0.5 * (a + b));
}

}  // namespace risnet

#endif  // RISNET_SCALING_LAWS_HPP
