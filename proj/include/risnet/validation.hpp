#ifndef RISNET_VALIDATION_HPP
#define RISNET_VALIDATION_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnet/analytic_distributions.hpp"
#include "risnet/channel_model.hpp"
#include "risnet/experiment.hpp"
#include "risnet/integration.hpp"
#include "risnet/scaling_laws.hpp"
#include "risnet/special_functions.hpp"

namespace risnet {

enum class ValidationLevel { quick, full };

inline ValidationLevel parse_validation_level(const std::string& s) {
    if (s == "quick") return ValidationLevel::quick;
    if (s == "full") return ValidationLevel::full;
    throw std::invalid_argument("unknown level '" + s + "' (expected quick|full)");
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }

    [[nodiscard]] std::string to_text() const {
        std::string out;
        int failures = 0;
        for (const auto& c : checks) {
            out += std::string(c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + " [" +
                   format_number(c.seconds, 3) + " s]\n";
            failures += c.passed ? 0 : 1;
        }
        out += std::to_string(checks.size() - failures) + "/" + std::to_string(checks.size()) + " checks passed\n";
        return out;
    }
};

namespace detail {

struct CheckOutcome {
    bool passed;
    std::string detail;
};

inline double loglog_slope(const std::vector<double>& db, const std::vector<double>& values) {
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        mx += db[i] / 10.0;
        my += std::log10(values[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const double dx = db[i] / 10.0 - mx;
        sxy += dx * (std::log10(values[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline CheckOutcome check_quadrature() {
    double worst = 0.0;
    for (int order = 1; order <= 25; ++order) {
        const QuadratureRule rule = gauss_laguerre(order);
        for (int p = 0; p <= 2 * order - 1; ++p) {
            double q = 0.0;
            for (int i = 0; i < order; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], p);
            const double exact = std::exp(ln_gamma(p + 1.0));
            worst = std::max(worst, std::abs(q - exact) / exact);
        }
    }
    return {worst < 1e-10, "max relative error " + format_number(worst, 3) + " (limit 1e-10)"};
}

inline CheckOutcome check_marcum() {
    const double grid[] = {0.0, 0.5, 1.0, 2.0, 4.0};
    double worst = 0.0;
    for (double a : grid) {
        for (double b : grid) {
            auto f = [a](double x) {
                return std::sqrt(2.0 / std::numbers::pi) * 0.5 *
                       (std::exp(-0.5 * (x - a) * (x - a)) + std::exp(-0.5 * (x + a) * (x + a)));
            };
            const double oracle = integrate(f, b, b + a + 40.0, 0.0, 1e-14);
            worst = std::max(worst, std::abs(marcum_q_half(a, b) - oracle));
        }
    }
    return {worst < 1e-10, "max abs error vs integral " + format_number(worst, 3) + " (limit 1e-10)"};
}

inline CheckOutcome check_bessel() {
    const double mass = integrate_to_infinity(
        [](double g) { return g > 0.0 ? 4.0 * g * bessel_k0(2.0 * g) : 0.0; }, 0.0, 1e-14, 1e-12);
    const double err = std::abs(mass - 1.0);
    return {err < 1e-8, "|int 4g K0(2g) dg - 1| = " + format_number(err, 3) + " (limit 1e-8)"};
}

inline CheckOutcome check_determinism(std::uint64_t trials) {
    const auto c = SystemConfig::with_avg_snr(3, 3, db_to_linear(25.0), db_to_linear(20.0));
    const auto one = mc_outage(c, trials, {7, 3}, {1});
    const auto four = mc_outage(c, trials, {7, 3}, {4});
    const auto rate1 = mc_sum_rate(c, trials, {7, 3}, {1});
    const auto rate8 = mc_sum_rate(c, trials, {7, 3}, {8});
    const bool same = one.estimate == four.estimate && rate1.estimate == rate8.estimate &&
                      rate1.std_error == rate8.std_error;
    return {same, same ? "1/4/8 workers bit-identical" : "estimates differ across worker counts"};
}

inline CheckOutcome check_amplitude_moments(std::uint64_t trials) {
    std::string detail;
    bool ok = true;
    for (int n : {1, 3, 10}) {
        const auto power = sample_cascade_power(n, trials, {11, static_cast<std::uint64_t>(100 + n)});
        double s = 0.0;
        for (double p : power) s += std::sqrt(p);
        const auto m = moments_of_a(n);
        const double mean = s / static_cast<double>(trials);
        const double z = (mean - m.mean) / std::sqrt(m.variance / static_cast<double>(trials));
        ok = ok && std::abs(z) < 3.0;
        detail += "N=" + std::to_string(n) + " z=" + format_number(z, 3) + " ";
    }
    return {ok, detail + "(|z| < 3)"};
}

inline CheckOutcome check_relay_closed_form(std::uint64_t trials) {
    const auto r = mc_relay_outage(SystemConfig::with_avg_snr(1, 1, 10.0, 10.0), trials, {31, 0});
    const double z = (r.estimate - (1.0 - std::exp(-2.0))) / r.std_error;
    return {std::abs(z) < 3.0, "K=1 relay vs 1-e^-2: z=" + format_number(z, 3)};
}

inline CheckOutcome check_mc_vs_exact(std::uint64_t trials) {
    const auto mg = build_mg(fit_kg(3));
    const double th = db_to_linear(20.0);
    double worst = 0.0;
    for (double db : {25.0, 30.0, 35.0}) {
        const auto c = SystemConfig::with_avg_snr(2, 3, db_to_linear(db), th);
        const auto r = mc_outage(c, trials, {555, 3});
        worst = std::max(worst, std::abs(r.estimate - outage_exact(mg, th, c.avg_snr, 2)) / r.std_error);
    }
    return {worst <= 3.0, "K=2 N=3 worst |z| = " + format_number(worst, 3) + " (limit 3)"};
}

inline CheckOutcome check_mg(std::uint64_t draws) {
    bool ok = true;
    std::string detail;
    for (int n : {2, 3, 5}) {
        const auto mg = build_mg(fit_kg(n));
        double norm = 0.0;
        for (const auto& t : mg.terms) norm += t.mixing;
        auto power = sample_cascade_power(n, draws, {2718, static_cast<std::uint64_t>(n)});
        std::sort(power.begin(), power.end());
        const double ks = ks_distance(power, [&](double x) { return mg_cdf(mg, x, 1.0); });
        const double mean_err = std::abs(mg.mean() - mg.params.omega) / mg.params.omega;
        ok = ok && std::abs(norm - 1.0) < 1e-10 && ks < 0.02 && mean_err < 0.005;
        detail += "N=" + std::to_string(n) + " ks=" + format_number(ks, 3) + " mean_err=" + format_number(mean_err, 3) +
                  " ";
    }
    return {ok, detail + "(ks < 0.02, mean_err < 0.005)"};
}

inline CheckOutcome check_slope() {
    const auto mg = build_mg(fit_kg(3));
    const double th = db_to_linear(20.0);
    std::vector<double> db, values;
    for (double x = 55.0; x <= 70.0; x += 1.0) {
        db.push_back(x);
        values.push_back(outage_asymptotic(mg, th, db_to_linear(x), 2));
    }
    const double ratio = loglog_slope(db, values) / -diversity_order(2, 3);
    return {ratio >= 0.98 && ratio <= 1.02, "(K,N)=(2,3) slope/(-KN) = " + format_number(ratio, 5)};
}

inline CheckOutcome check_asymptote() {
    const double th = db_to_linear(20.0);
    double lo = 1e9, hi = 0.0;
    for (int n : {2, 3}) {
        const auto mg = build_mg(fit_kg(n));
        for (int k : {2, 3}) {
            for (double gap : {40.0, 50.0}) {
                const double avg = th * db_to_linear(gap);
                const double r = outage_asymptotic(mg, th, avg, k) / outage_exact(mg, th, avg, k);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
    }
    return {lo >= 0.95 && hi <= 1.05, "ratio range [" + format_number(lo, 4) + ", " + format_number(hi, 4) + "]"};
}

inline CheckOutcome check_evt() {
    double worst_level = 0.0, worst_ratio = 0.0;
    const ChernoffParams p(kDefaultTheta);
    for (int n : {10, 15}) {
        for (int k : {2, 10, 100, 10000}) {
            const double h = threshold_h_k(k, n, 10.0, p);
            worst_level = std::max(worst_level, std::abs(chernoff_cdf(h, 10.0, n, p) - (1.0 - 1.0 / k)));
        }
        const double c1 = growth_constant_c1(10.0, n, p);
        for (double g : {0.0, 10.0, 100.0, 1000.0}) {
            const double r = (1.0 - chernoff_cdf(g, 10.0, n, p)) / chernoff_pdf(g, 10.0, n, p);
            worst_ratio = std::max(worst_ratio, std::abs(r - c1) / c1);
        }
    }
    return {worst_level < 1e-10 && worst_ratio < 1e-12,
            "level error " + format_number(worst_level, 3) + ", tail ratio error " + format_number(worst_ratio, 3)};
}

}  // namespace detail

/// Runs the self-check suite. quick uses 1e5 Monte Carlo trials, full 1e7.
inline ValidationReport run_validation(ValidationLevel level) {
    const std::uint64_t trials = level == ValidationLevel::quick ? 100000 : 10000000;
    const std::uint64_t draws = std::min<std::uint64_t>(trials, 1000000);
    ValidationReport report;
    auto run = [&](const std::string& name, const std::function<detail::CheckOutcome()>& check) {
        const auto start = std::chrono::steady_clock::now();
        ValidationCheck c{name};
        try {
            const auto outcome = check();
            c.passed = outcome.passed;
            c.detail = outcome.detail;
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("exception: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.checks.push_back(std::move(c));
    };
    run("special_functions.quadrature_exactness", detail::check_quadrature);
    run("special_functions.marcum_q", detail::check_marcum);
    run("special_functions.bessel_normalization", detail::check_bessel);
    run("channel_model.determinism", [&] { return detail::check_determinism(trials); });
    run("channel_model.amplitude_moments", [&] { return detail::check_amplitude_moments(trials); });
    run("channel_model.relay_closed_form", [&] { return detail::check_relay_closed_form(trials); });
    run("analytic.mc_vs_exact", [&] { return detail::check_mc_vs_exact(trials); });
    run("analytic.mg_fit", [&] { return detail::check_mg(draws); });
    run("analytic.diversity_slope", detail::check_slope);
    run("analytic.asymptote_ratio", detail::check_asymptote);
    run("scaling_laws.evt_consistency", detail::check_evt);
    return report;
}

}  // namespace risnet

#endif  // RISNET_VALIDATION_HPP
