#ifndef RISNET_ANALYTIC_DISTRIBUTIONS_HPP
#define RISNET_ANALYTIC_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnet/special_functions.hpp"

namespace risnet {

/// Mean, variance and mean power of the cascade amplitude A = sum_i alpha_i beta_i.
struct AmplitudeMoments {
    double mean = 0.0;
    double variance = 0.0;
    double omega = 0.0;  ///< E[A^2]
};

inline AmplitudeMoments moments_of_a(int num_elements) {
    if (num_elements < 1) throw std::invalid_argument("moments_of_a: N must be >= 1");
    constexpr double pi = std::numbers::pi;
    const double n = num_elements;
    AmplitudeMoments m;
    m.mean = n * pi / 4.0;
    m.variance = n * (16.0 - pi * pi) / 16.0;
    m.omega = m.mean * m.mean + m.variance;
    return m;
}

/// E[B^k] for B = alpha beta with unit-power Rayleigh factors: Gamma(1 + k/2)^2.
inline double product_raw_moment(int order) {
    const double g = std::exp(ln_gamma(1.0 + 0.5 * order));
    return g * g;
}

/// E[A^order] for the sum of N i.i.d. products, by binomial convolution.
inline double cascade_raw_moment(int num_elements, int order) {
    if (num_elements < 1 || order < 0) {
        throw std::invalid_argument("cascade_raw_moment: need N >= 1 and order >= 0");
    }
    std::vector<double> single(order + 1);
    for (int k = 0; k <= order; ++k) single[k] = product_raw_moment(k);
    std::vector<double> sum = single;
    for (int n = 1; n < num_elements; ++n) {
        std::vector<double> next(order + 1, 0.0);
        for (int k = 0; k <= order; ++k) {
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                next[k] += binom * sum[j] * single[k - j];
                binom = binom * (k - j) / (j + 1);
            }
        }
        sum = std::move(next);
    }
    return sum[order];
}

namespace detail {

// (sin t - t cos t) / sin^3 t and its hyperbolic twin share one even series.
inline double product_laplace_series(double theta_sq, double sign) {
    constexpr double c[] = {1.0 / 3.0,        2.0 / 15.0,         2.0 / 63.0,
                            4.0 / 675.0,      2.0 / 2079.0,       2764.0 / 19348875.0,
                            4.0 / 200475.0};
    double value = 0.0;
    double power = 1.0;
    for (double coeff : c) {
        value += coeff * power;
        power *= sign * theta_sq;
    }
    return value;
}

}  // namespace detail

/// Laplace transform E[exp(-u B)] of the double-Rayleigh product B, whose
/// density is 4 b K0(2b).
inline double product_laplace(double u) {
    if (!(u >= 0.0)) throw std::domain_error("product_laplace: u must be nonnegative");
    const double t = 0.5 * u;
    if (t < 1.0) {
        const double theta = std::acos(t);
        if (theta < 0.1) return detail::product_laplace_series(theta * theta, 1.0);
        const double s = std::sin(theta);
        return (s - theta * t) / (s * s * s);
    }
    const double theta = std::acosh(t);
    if (theta < 0.1) return detail::product_laplace_series(theta * theta, -1.0);
    const double s = std::sinh(theta);
    return (theta * t - s) / (s * s * s);
}

/// E[A^-2] = int_0^inf u E[exp(-u B)]^N du, finite for N >= 2.
inline double cascade_inverse_power_moment(int num_elements) {
    if (num_elements < 2) {
        throw std::domain_error("cascade_inverse_power_moment: E[A^-2] diverges for N < 2");
    }
    // u = e^s; the integrand e^{2s} L(e^s)^N decays exponentially at both ends.
    constexpr double h = 1.0 / 64.0;
    constexpr double s_lo = -25.0;
    constexpr double s_hi = 35.0;
    const int steps = static_cast<int>((s_hi - s_lo) / h);
    double sum = 0.0;
    for (int j = 0; j <= steps; ++j) {
        const double s = s_lo + j * h;
        const double u = std::exp(s);
        sum += u * u * std::pow(product_laplace(u), num_elements);
    }
    return sum * h;
}

/// Squared-K_G parameters of A^2.
struct KGParams {
    double l = 1.0;      ///< shaping
    double m = 1.0;      ///< shaping; fixed to N
    double omega = 1.0;  ///< E[A^2]
    double xi = 1.0;     ///< sqrt(l m / omega)

    static KGParams make(double l, double m, double omega) {
        if (!(l > 0.0) || !(m > 0.0) || !(omega > 0.0)) {
            throw std::invalid_argument("KGParams: l, m, omega must be positive");
        }
        return {l, m, omega, std::sqrt(l * m / omega)};
    }
};

/// How the second shaping parameter l is estimated once m = N is fixed.
enum class KgFitRule {
    /// Match E[A^-2], a lower-tail moment; E[A^2]E[A^-2] = lm / ((l-1)(m-1)).
    inverse_power,
    /// Match E[A^4] / E[A^2]^2 = (l+1)(m+1) / (lm).
    fourth_moment,
};

inline const char* to_string(KgFitRule rule) {
    return rule == KgFitRule::inverse_power ? "inverse" : "moment4";
}

inline KgFitRule parse_fit_rule(const std::string& name) {
    if (name == "inverse") return KgFitRule::inverse_power;
    if (name == "moment4") return KgFitRule::fourth_moment;
    throw std::invalid_argument("unknown fit rule '" + name + "' (expected inverse|moment4)");
}

/// Fits the squared-K_G law to A^2 with m = N.
///
/// For N = 1, A^2 is exactly squared-K_G(1, 1) and both rules return l = 1.
inline KGParams fit_kg(int num_elements, KgFitRule rule = KgFitRule::inverse_power) {
    const AmplitudeMoments mom = moments_of_a(num_elements);
    const double m = num_elements;
    double l = 0.0;
    if (num_elements == 1 || rule == KgFitRule::fourth_moment) {
        const double ratio = cascade_raw_moment(num_elements, 4) / (mom.omega * mom.omega);
        l = (m + 1.0) / (ratio * m - m - 1.0);
    } else {
        const double target = cascade_inverse_power_moment(num_elements) * mom.omega * (m - 1.0);
        l = target / (target - m);
    }
    if (!(l > 0.0) || !std::isfinite(l)) {
        throw std::runtime_error("fit_kg: moment match gave l <= 0 for N = " +
                                 std::to_string(num_elements));
    }
    return KGParams::make(l, m, mom.omega);
}

/// One gamma component w x^{rho-1} e^{-eps x} of the mixture.
struct MGTerm {
    double weight = 0.0;  ///< w_i
    double shape = 0.0;   ///< rho_i
    double rate = 0.0;    ///< eps_i
    double mixing = 0.0;  ///< w_i Gamma(rho_i) eps_i^{-rho_i}, sums to one
};

/// Mixed-gamma representation of the branch SNR law at unit average SNR.
struct MGDistribution {
    int order = 0;
    KGParams params;
    std::vector<MGTerm> terms;

    /// Mean of gamma / avg_snr.
    [[nodiscard]] double mean() const {
        double mu = 0.0;
        for (const auto& t : terms) mu += t.mixing * t.shape / t.rate;
        return mu;
    }
};

inline constexpr int kDefaultMgOrder = 64;

/// Gauss-Laguerre discretisation of the squared-K_G law into M gamma terms.
inline MGDistribution build_mg(const KGParams& params, int order = kDefaultMgOrder) {
    const QuadratureRule rule = gauss_laguerre(order);
    const double m = params.m;
    const double xi2 = params.xi * params.xi;
    const double ln_gamma_m = ln_gamma(m);

    // chi_i Gamma(m) eps_i^{-m} = y_i t_i^{l-1} / Gamma(l): normalise in log space.
    std::vector<double> log_mix(order);
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < order; ++i) {
        log_mix[i] = std::log(rule.weights[i]) + (params.l - 1.0) * std::log(rule.nodes[i]);
        peak = std::max(peak, log_mix[i]);
    }
    double total = 0.0;
    for (double v : log_mix) total += std::exp(v - peak);
    const double log_norm = peak + std::log(total);

    MGDistribution mg;
    mg.order = order;
    mg.params = params;
    mg.terms.resize(order);
    for (int i = 0; i < order; ++i) {
        MGTerm& term = mg.terms[i];
        term.shape = m;
        term.rate = xi2 / rule.nodes[i];
        const double log_pi = log_mix[i] - log_norm;
        term.mixing = std::exp(log_pi);
        term.weight = std::exp(log_pi + m * std::log(term.rate) - ln_gamma_m);
    }
    return mg;
}

/// f_gamma(gamma) = sum_i w_i gamma^{rho_i - 1} avg^{-rho_i} exp(-eps_i gamma / avg).
inline double mg_pdf(const MGDistribution& mg, double snr, double avg_snr) {
    if (!(snr > 0.0) || !(avg_snr > 0.0)) return 0.0;
    const double x = snr / avg_snr;
    const double log_x = std::log(x);
    double f = 0.0;
    for (const auto& t : mg.terms) {
        if (t.mixing == 0.0) continue;
        f += std::exp(std::log(t.mixing) + t.shape * std::log(t.rate) + (t.shape - 1.0) * log_x -
                      t.rate * x - ln_gamma(t.shape));
    }
    return f / avg_snr;
}

/// F_gamma(gamma) = sum_i w_i eps_i^{-rho_i} Upsilon(rho_i, eps_i gamma / avg), evaluated
/// with the regularized incomplete gamma to stay finite for large rho.
inline double mg_cdf(const MGDistribution& mg, double snr, double avg_snr) {
    if (!(snr > 0.0)) return 0.0;
    if (!(avg_snr > 0.0)) throw std::domain_error("mg_cdf: avg_snr must be positive");
    const double x = snr / avg_snr;
    double f = 0.0;
    for (const auto& t : mg.terms) {
        f += t.mixing * regularized_lower_gamma(t.shape, t.rate * x);
    }
    return std::clamp(f, 0.0, 1.0);
}

/// Exact outage of best-of-K selection: F_gamma(gamma_th)^K.
inline double outage_exact(const MGDistribution& mg, double threshold, double avg_snr, int num_ris) {
    if (num_ris < 1) throw std::invalid_argument("outage_exact: K must be >= 1");
    return std::pow(mg_cdf(mg, threshold, avg_snr), num_ris);
}

/// High-SNR outage, keeping only the leading term of each incomplete gamma:
/// avg^{-mK} [sum_i w_i exp(-eps_i th / avg) th^m / m]^K. Not clamped.
inline double outage_asymptotic(const MGDistribution& mg, double threshold, double avg_snr,
                                int num_ris) {
    if (num_ris < 1) throw std::invalid_argument("outage_asymptotic: K must be >= 1");
    if (!(threshold > 0.0) || !(avg_snr > 0.0)) {
        throw std::domain_error("outage_asymptotic: threshold and avg_snr must be positive");
    }
    const double x = threshold / avg_snr;
    const double log_x = std::log(x);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(mg.terms.size());
    for (const auto& t : mg.terms) {
        if (t.mixing == 0.0) continue;
        const double log_w = std::log(t.mixing) + t.shape * std::log(t.rate) - ln_gamma(t.shape);
        const double v = log_w - t.rate * x + t.shape * log_x - std::log(t.shape);
        logs.push_back(v);
        peak = std::max(peak, v);
    }
    double s = 0.0;
    for (double v : logs) s += std::exp(v - peak);
    return std::exp(num_ris * (peak + std::log(s)));
}

/// Achievable diversity order K * N.
inline int diversity_order(int num_ris, int num_elements) {
    if (num_ris < 1 || num_elements < 1) {
        throw std::invalid_argument("diversity_order: K and N must be >= 1");
    }
    return num_ris * num_elements;
}

}  // namespace risnet

#endif  // RISNET_ANALYTIC_DISTRIBUTIONS_HPP
