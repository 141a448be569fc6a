#ifndef RISNET_CHANNEL_MODEL_HPP
#define RISNET_CHANNEL_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnet/parallel.hpp"
#include "risnet/rng.hpp"

namespace risnet {

/// Scenario parameters for K clustered RISs with N elements each.
///
/// All SNR quantities are linear. The average SNR must agree with the link
/// budget Es/N0 * d_SR^-v * d_RD^-v; the neutral defaults (d = 1, v = 0) make
/// avg_snr the only knob.
struct SystemConfig {
    int num_ris = 1;
    int num_elements = 1;
    double avg_snr = 1.0;
    double snr_threshold = 1.0;
    double dist_sr = 1.0;
    double dist_rd = 1.0;
    double path_loss_exp = 0.0;
    double symbol_energy_ratio = 1.0;
    /// Pre-log applied to the relay sum-rate (0.5 for two-slot half duplex).
    double relay_prelog = 0.5;

    static SystemConfig with_avg_snr(int num_ris, int num_elements, double avg_snr,
                                     double snr_threshold) {
        SystemConfig c;
        c.num_ris = num_ris;
        c.num_elements = num_elements;
        c.avg_snr = avg_snr;
        c.symbol_energy_ratio = avg_snr;
        c.snr_threshold = snr_threshold;
        c.validate();
        return c;
    }

    static SystemConfig from_link_budget(int num_ris, int num_elements, double es_n0,
                                         double dist_sr, double dist_rd, double path_loss_exp,
                                         double snr_threshold) {
        SystemConfig c;
        c.num_ris = num_ris;
        c.num_elements = num_elements;
        c.symbol_energy_ratio = es_n0;
        c.dist_sr = dist_sr;
        c.dist_rd = dist_rd;
        c.path_loss_exp = path_loss_exp;
        c.avg_snr = es_n0 * std::pow(dist_sr, -path_loss_exp) * std::pow(dist_rd, -path_loss_exp);
        c.snr_threshold = snr_threshold;
        c.validate();
        return c;
    }

    /// Returns a copy with a new average SNR, keeping the link budget consistent.
    [[nodiscard]] SystemConfig at_avg_snr(double snr) const {
        SystemConfig c = *this;
        c.avg_snr = snr;
        c.symbol_energy_ratio =
            snr * std::pow(dist_sr, path_loss_exp) * std::pow(dist_rd, path_loss_exp);
        return c;
    }

    void validate() const {
        auto fail = [](const std::string& what) { throw std::invalid_argument("SystemConfig: " + what); };
        if (num_ris < 1) fail("num_ris must be >= 1");
        if (num_elements < 1) fail("num_elements must be >= 1");
        if (!(avg_snr > 0.0) || !std::isfinite(avg_snr)) fail("avg_snr must be positive");
        if (!(snr_threshold > 0.0)) fail("snr_threshold must be positive");
        if (!(dist_sr > 0.0) || !(dist_rd > 0.0)) fail("distances must be positive");
        if (!(path_loss_exp >= 0.0)) fail("path_loss_exp must be nonnegative");
        if (!(symbol_energy_ratio > 0.0)) fail("symbol_energy_ratio must be positive");
        if (!(relay_prelog > 0.0 && relay_prelog <= 1.0)) fail("relay_prelog must be in (0, 1]");
        const double budget = symbol_energy_ratio * std::pow(dist_sr, -path_loss_exp) *
                              std::pow(dist_rd, -path_loss_exp);
        if (std::abs(budget - avg_snr) > 1e-12 * std::max(budget, avg_snr)) {
            fail("avg_snr inconsistent with Es/N0 and path loss");
        }
    }
};

/// Monte Carlo point estimate with a 95% normal-approximation interval.
struct MonteCarloResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    RngSpec rng;
};

struct McOptions {
    unsigned workers = 0;  ///< 0 selects one worker per hardware thread
};

inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr std::uint64_t kMinTrials = 1000;
inline constexpr double kCiZ = 1.959963984540054;

/// A = sum_i alpha_i beta_i for N element pairs of unit-power Rayleigh amplitudes.
inline double sample_cascade_amplitude(int num_elements, TrialStream& stream) {
    double amplitude = 0.0;
    for (int i = 0; i < num_elements; ++i) {
        // alpha^2 ~ Exp(1) gives E[alpha] = sqrt(pi)/2 and E[alpha^2] = 1.
        const double alpha = std::sqrt(-std::log(stream.next_uniform()));
        const double beta = std::sqrt(-std::log(stream.next_uniform()));
        amplitude += alpha * beta;
    }
    return amplitude;
}

/// End-to-end SNR of one branch after ideal phase alignment.
inline double e2e_snr(double amplitude, double avg_snr) { return avg_snr * amplitude * amplitude; }

struct BestBranch {
    std::size_t index = 0;
    double value = 0.0;
};

/// Best-RIS selection; ties resolve to the lowest index.
inline BestBranch best_of_k(std::span<const double> snrs) {
    if (snrs.empty()) {
        throw std::invalid_argument("best_of_k: empty branch list");
    }
    BestBranch best{0, snrs[0]};
    for (std::size_t k = 1; k < snrs.size(); ++k) {
        if (snrs[k] > best.value) {
            best = {k, snrs[k]};
        }
    }
    return best;
}

namespace detail {

inline void require_trials(std::uint64_t trials) {
    if (trials < kMinTrials) {
        throw std::invalid_argument("Monte Carlo: at least " + std::to_string(kMinTrials) +
                                    " trials required");
    }
}

inline MonteCarloResult proportion_result(std::uint64_t hits, std::uint64_t trials, RngSpec rng) {
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    // Half-event continuity keeps the interval non-degenerate at 0 or n hits.
    const double smoothed = (static_cast<double>(hits) + 0.5) / (n + 1.0);
    const double se = std::sqrt(smoothed * (1.0 - smoothed) / n);
    MonteCarloResult r;
    r.estimate = p;
    r.std_error = se;
    r.trials = trials;
    r.ci_low = std::clamp(p - kCiZ * se, 0.0, 1.0);
    r.ci_high = std::clamp(p + kCiZ * se, 0.0, 1.0);
    r.rng = rng;
    return r;
}

struct MomentBlock {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const MomentBlock& other) {
        if (other.count == 0.0) return;
        const double total = count + other.count;
        const double delta = other.mean - mean;
        mean += delta * other.count / total;
        m2 += other.m2 + delta * delta * count * other.count / total;
        count = total;
    }
};

inline MonteCarloResult mean_result(const std::vector<MomentBlock>& blocks, std::uint64_t trials,
                                    RngSpec rng) {
    MomentBlock all;
    for (const auto& b : blocks) all.merge(b);
    const double var = all.count > 1.0 ? all.m2 / (all.count - 1.0) : 0.0;
    MonteCarloResult r;
    r.estimate = all.mean;
    r.std_error = std::sqrt(var / all.count);
    r.trials = trials;
    r.ci_low = r.estimate - kCiZ * r.std_error;
    r.ci_high = r.estimate + kCiZ * r.std_error;
    r.rng = rng;
    return r;
}

// Selected SNR max_k gamma_k of one trial. Branch k always reads the same
// counters, so estimates for different K share their common branches.
inline double selected_ris_snr(const SystemConfig& config, const CounterRng& rng,
                               std::uint64_t trial) {
    double best = 0.0;
    for (int k = 0; k < config.num_ris; ++k) {
        auto stream = rng.stream(trial, DrawDomain::ris_cascade, static_cast<std::uint32_t>(k));
        const double snr = e2e_snr(sample_cascade_amplitude(config.num_elements, stream), config.avg_snr);
        best = std::max(best, snr);
    }
    return best;
}

// max_k min(gamma_1k, gamma_2k) for K decode-and-forward relays.
inline double selected_relay_snr(const SystemConfig& config, const CounterRng& rng,
                                 std::uint64_t trial) {
    double best = 0.0;
    for (int k = 0; k < config.num_ris; ++k) {
        auto stream = rng.stream(trial, DrawDomain::relay_hops, static_cast<std::uint32_t>(k));
        const double first = -config.avg_snr * std::log(stream.next_uniform());
        const double second = -config.avg_snr * std::log(stream.next_uniform());
        best = std::max(best, std::min(first, second));
    }
    return best;
}

template <class SnrFn>
MonteCarloResult outage_estimate(const SystemConfig& config, std::uint64_t trials, RngSpec spec,
                                 McOptions options, SnrFn snr_fn) {
    config.validate();
    require_trials(trials);
    const CounterRng rng(spec);
    const auto hits = map_trial_blocks<std::uint64_t>(
        trials, options.workers, [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t count = 0;
            for (std::uint64_t t = begin; t < end; ++t) {
                if (snr_fn(config, rng, t) < config.snr_threshold) ++count;
            }
            return count;
        });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    return proportion_result(total, trials, spec);
}

template <class SnrFn>
MonteCarloResult rate_estimate(const SystemConfig& config, std::uint64_t trials, RngSpec spec,
                               McOptions options, double prelog, SnrFn snr_fn) {
    config.validate();
    require_trials(trials);
    const CounterRng rng(spec);
    const auto blocks = map_trial_blocks<MomentBlock>(
        trials, options.workers, [&](std::uint64_t begin, std::uint64_t end) {
            MomentBlock b;
            for (std::uint64_t t = begin; t < end; ++t) {
                b.add(prelog * std::log2(1.0 + snr_fn(config, rng, t)));
            }
            return b;
        });
    return mean_result(blocks, trials, spec);
}

}  // namespace detail

/// Pr(max_k gamma_k < gamma_th) by direct simulation.
inline MonteCarloResult mc_outage(const SystemConfig& config, std::uint64_t trials, RngSpec rng,
                                  McOptions options = {}) {
    return detail::outage_estimate(config, trials, rng, options, detail::selected_ris_snr);
}

/// Sample mean of log2(1 + gamma_{k*}).
inline MonteCarloResult mc_sum_rate(const SystemConfig& config, std::uint64_t trials, RngSpec rng,
                                    McOptions options = {}) {
    return detail::rate_estimate(config, trials, rng, options, 1.0, detail::selected_ris_snr);
}

/// Outage of opportunistic selection among K half-duplex DF relays, each hop
/// Rayleigh faded with mean SNR avg_snr.
inline MonteCarloResult mc_relay_outage(const SystemConfig& config, std::uint64_t trials,
                                        RngSpec rng, McOptions options = {}) {
    return detail::outage_estimate(config, trials, rng, options, detail::selected_relay_snr);
}

/// Sample mean of prelog * log2(1 + max_k min(gamma_1k, gamma_2k)).
inline MonteCarloResult mc_relay_sum_rate(const SystemConfig& config, std::uint64_t trials,
                                          RngSpec rng, McOptions options = {}) {
    return detail::rate_estimate(config, trials, rng, options, config.relay_prelog,
                                 detail::selected_relay_snr);
}

/// Single-branch power draws A^2 (avg SNR 1), in trial order.
inline std::vector<double> sample_cascade_power(int num_elements, std::uint64_t count, RngSpec spec,
                                                McOptions options = {}) {
    if (num_elements < 1) throw std::invalid_argument("sample_cascade_power: N must be >= 1");
    const CounterRng rng(spec);
    std::vector<double> out(count);
    map_trial_blocks<char>(count, options.workers, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            auto stream = rng.stream(t, DrawDomain::single_branch);
            const double a = sample_cascade_amplitude(num_elements, stream);
            out[t] = a * a;
        }
        return char{0};
    });
    return out;
}

/// Kolmogorov-Smirnov distance between sorted samples and a reference CDF.
///
/// The CDF is evaluated on every stride-th order statistic first; since it is
/// monotone, a gap between two evaluated points is only scanned point by point
/// when its bound can exceed the running maximum. The result is exact.
template <class Cdf>
double ks_distance(std::span<const double> sorted, Cdf&& cdf, unsigned workers = 0) {
    const std::uint64_t n = sorted.size();
    if (n == 0) throw std::invalid_argument("ks_distance: no samples");
    constexpr std::uint64_t stride = 64;
    const double inv_n = 1.0 / static_cast<double>(n);
    auto point_gap = [&](std::uint64_t i, double f) {
        return std::max(std::abs(f - static_cast<double>(i) * inv_n),
                        std::abs(static_cast<double>(i + 1) * inv_n - f));
    };

    std::vector<std::uint64_t> knots;
    for (std::uint64_t i = 0; i < n; i += stride) knots.push_back(i);
    if (knots.back() != n - 1) knots.push_back(n - 1);
    std::vector<double> knot_cdf(knots.size());
    map_trial_blocks<char>(knots.size(), workers, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t j = begin; j < end; ++j) knot_cdf[j] = cdf(sorted[knots[j]]);
        return char{0};
    });

    double best = 0.0;
    for (std::size_t j = 0; j < knots.size(); ++j) best = std::max(best, point_gap(knots[j], knot_cdf[j]));
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const std::uint64_t a = knots[j];
        const std::uint64_t b = knots[j + 1];
        if (b - a < 2) continue;
        const double bound = std::max(knot_cdf[j + 1] - static_cast<double>(a + 1) * inv_n,
                                      static_cast<double>(b) * inv_n - knot_cdf[j]);
        if (bound <= best) continue;
        for (std::uint64_t i = a + 1; i < b; ++i) best = std::max(best, point_gap(i, cdf(sorted[i])));
    }
    return best;
}

}  // namespace risnet

#endif  // RISNET_CHANNEL_MODEL_HPP
