#ifndef RISNET_EXPERIMENT_HPP
#define RISNET_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnet/analytic_distributions.hpp"
#include "risnet/channel_model.hpp"
#include "risnet/scaling_laws.hpp"

namespace risnet {

enum class Metric { outage, sum_rate };
enum class SweepVar { avg_snr_db, num_ris };
enum class Method { mc, exact, asymptotic, relay_mc, evt };

inline const char* to_string(Metric m) { return m == Metric::outage ? "outage" : "sumrate"; }
inline const char* to_string(SweepVar s) { return s == SweepVar::avg_snr_db ? "avg_snr_db" : "k"; }
inline const char* to_string(Method m) {
    switch (m) {
        case Method::mc: return "mc";
        case Method::exact: return "exact";
        case Method::asymptotic: return "asymptotic";
        case Method::relay_mc: return "relay_mc";
        case Method::evt: return "evt";
    }
    return "?";
}

inline Metric parse_metric(const std::string& s) {
    if (s == "outage") return Metric::outage;
    if (s == "sumrate") return Metric::sum_rate;
    throw std::invalid_argument("unknown metric '" + s + "' (expected outage|sumrate)");
}

inline SweepVar parse_sweep(const std::string& s) {
    if (s == "avg_snr_db") return SweepVar::avg_snr_db;
    if (s == "k") return SweepVar::num_ris;
    throw std::invalid_argument("unknown sweep '" + s + "' (expected avg_snr_db|k)");
}

inline Method parse_method(const std::string& s) {
    for (Method m : {Method::mc, Method::exact, Method::asymptotic, Method::relay_mc, Method::evt}) {
        if (s == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown method '" + s + "'");
}

inline bool is_monte_carlo(Method m) { return m == Method::mc || m == Method::relay_mc; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// One curve family: K surfaces (ignored when K is the sweep variable) of N elements.
struct Series {
    int k = 1;
    int n = 1;
    bool operator==(const Series&) const = default;
};

struct ExperimentPreset {
    std::string name = "custom";
    Metric metric = Metric::outage;
    SweepVar sweep = SweepVar::avg_snr_db;
    std::vector<double> grid;
    std::vector<Series> series;
    std::vector<Method> methods;
    double threshold_db = 20.0;
    double avg_snr_db = 10.0;  ///< used when K is swept
    double theta = kDefaultTheta;
    bool optimize_theta = false;
    int mg_order = kDefaultMgOrder;
    KgFitRule fit_rule = KgFitRule::inverse_power;
    double relay_prelog = 0.5;

    bool operator==(const ExperimentPreset&) const = default;

    void validate() const {
        auto fail = [this](const std::string& why) {
            throw std::invalid_argument("preset " + name + ": " + why);
        };
        if (grid.empty()) fail("empty grid");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i] > grid[i - 1])) fail("grid must be strictly increasing");
        }
        if (sweep == SweepVar::num_ris) {
            for (double k : grid) {
                if (k < 1.0 || k != std::floor(k)) fail("K grid must hold positive integers");
            }
        }
        if (series.empty()) fail("no series");
        for (const auto& s : series) {
            if (s.k < 1 || s.n < 1) fail("K and N must be >= 1");
        }
        if (methods.empty()) fail("no methods");
        for (Method m : methods) {
            if (metric == Metric::outage && m == Method::evt) fail("evt applies to sumrate only");
            if (metric == Metric::sum_rate && (m == Method::exact || m == Method::asymptotic)) {
                fail(std::string(to_string(m)) + " applies to outage only");
            }
        }
        if (!optimize_theta && !(theta > 0.0 && theta < 0.5)) fail("theta must lie in (0, 1/2)");
        if (mg_order < 1 || mg_order > 64) fail("mg_order must lie in 1..64");
        if (relay_prelog != 0.5 && relay_prelog != 1.0) fail("relay_prelog must be 0.5 or 1.0");
    }
};

struct RunOptions {
    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

/// "start:step:stop" (inclusive), a comma list, or a single value.
inline std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw std::invalid_argument("bad number '" + s + "' in '" + text + "'");
        return v;
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, sep);) {
        part.erase(0, part.find_first_not_of(" \t"));
        part.erase(part.find_last_not_of(" \t") + 1);
        parts.push_back(part);
    }
    std::vector<double> out;
    if (sep == ':') {
        if (parts.size() != 3) throw std::invalid_argument("range '" + text + "' must be start:step:stop");
        const double start = number(parts[0]);
        const double step = number(parts[1]);
        const double stop = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("range '" + text + "' is empty");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        for (const auto& p : parts) out.push_back(number(p));
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

inline std::string format_number(double v, int digits = 10) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string format_cell(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "NA";
    return format_number(*v);
}

struct CurveTable {
    std::vector<std::string> columns;  ///< excludes "sweep"
    std::vector<double> sweep;
    std::vector<std::vector<std::optional<double>>> rows;

    [[nodiscard]] std::string to_csv() const {
        std::string out = "sweep";
        for (const auto& c : columns) out += "," + c;
        out += "\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out += format_number(sweep[r]);
            for (const auto& cell : rows[r]) out += "," + format_cell(cell);
            out += "\n";
        }
        return out;
    }

    [[nodiscard]] std::size_t column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) throw std::out_of_range("no column " + name);
        return static_cast<std::size_t>(it - columns.begin());
    }
};

inline std::string series_label(const ExperimentPreset& p, const Series& s) {
    std::string label;
    if (p.sweep != SweepVar::num_ris) label += "_k" + std::to_string(s.k);
    return label + "_n" + std::to_string(s.n);
}

/// Evaluates every (series, method) curve over the grid.
///
/// Monte Carlo draws use stream id N for every grid point and every K, so curves
/// share random numbers along the sweep and across surface counts.
inline CurveTable evaluate_preset(const ExperimentPreset& preset, const RunOptions& run) {
    preset.validate();
    CurveTable table;
    for (const auto& s : preset.series) {
        for (Method m : preset.methods) {
            const std::string base = to_string(m) + series_label(preset, s);
            table.columns.push_back(base);
            if (is_monte_carlo(m)) table.columns.push_back(base + "_stderr");
        }
    }

    std::map<int, MGDistribution> mg_cache;
    auto mg_for = [&](int n) -> const MGDistribution& {
        auto it = mg_cache.find(n);
        if (it == mg_cache.end()) it = mg_cache.emplace(n, build_mg(fit_kg(n, preset.fit_rule), preset.mg_order)).first;
        return it->second;
    };
    const McOptions mc_options{run.workers};

    for (double x : preset.grid) {
        std::vector<std::optional<double>> row;
        for (const auto& s : preset.series) {
            const int k = preset.sweep == SweepVar::num_ris ? static_cast<int>(x) : s.k;
            const double avg_db = preset.sweep == SweepVar::avg_snr_db ? x : preset.avg_snr_db;
            auto config = SystemConfig::with_avg_snr(k, s.n, db_to_linear(avg_db), db_to_linear(preset.threshold_db));
            config.relay_prelog = preset.relay_prelog;
            const RngSpec rng{run.seed, static_cast<std::uint64_t>(s.n)};
            for (Method m : preset.methods) {
                if (is_monte_carlo(m)) {
                    MonteCarloResult r;
                    const bool relay = m == Method::relay_mc;
                    if (preset.metric == Metric::outage) {
                        r = relay ? mc_relay_outage(config, run.trials, rng, mc_options)
                                  : mc_outage(config, run.trials, rng, mc_options);
                    } else {
                        r = relay ? mc_relay_sum_rate(config, run.trials, rng, mc_options)
                                  : mc_sum_rate(config, run.trials, rng, mc_options);
                    }
                    row.emplace_back(r.estimate);
                    row.emplace_back(r.std_error);
                } else if (m == Method::exact) {
                    row.emplace_back(outage_exact(mg_for(s.n), config.snr_threshold, config.avg_snr, k));
                } else if (m == Method::asymptotic) {
                    row.emplace_back(outage_asymptotic(mg_for(s.n), config.snr_threshold, config.avg_snr, k));
                } else {
                    const ChernoffParams theta = preset.optimize_theta ? risnet::optimize_theta(config.avg_snr, s.n)
                                                                       : ChernoffParams(preset.theta);
                    row.emplace_back(asymptotic_sum_rate(k, s.n, config.avg_snr, theta).sum_rate_full);
                }
            }
        }
        table.sweep.push_back(x);
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string run_preset(const ExperimentPreset& preset, const RunOptions& run) {
    return evaluate_preset(preset, run).to_csv();
}

inline std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6"}; }

inline ExperimentPreset make_preset(const std::string& name) {
    ExperimentPreset p;
    p.name = name;
    if (name == "fig2") {
        p.grid = parse_grid("0:5:40");
        p.series = {{1, 3}, {2, 3}, {3, 3}};
        p.methods = {Method::mc, Method::exact, Method::asymptotic, Method::relay_mc};
    } else if (name == "fig3") {
        p.grid = parse_grid("0:5:40");
        p.series = {{1, 2}, {1, 4}, {2, 2}, {2, 4}};
        p.methods = {Method::mc, Method::exact, Method::asymptotic};
    } else if (name == "fig4") {
        p.grid = parse_grid("0:5:70");
        p.series = {{6, 1}, {3, 2}, {2, 3}, {1, 6}};
        p.methods = {Method::mc, Method::exact, Method::asymptotic};
    } else if (name == "fig5") {
        p.metric = Metric::sum_rate;
        p.grid = parse_grid("0:5:30");
        p.series = {{5, 5}, {5, 10}};
        p.methods = {Method::mc, Method::evt, Method::relay_mc};
    } else if (name == "fig6") {
        p.metric = Metric::sum_rate;
        p.sweep = SweepVar::num_ris;
        p.grid = {2, 5, 10, 15, 20, 25, 30};
        p.series = {{1, 10}, {1, 15}};
        p.methods = {Method::mc, Method::evt, Method::relay_mc};
        p.threshold_db = 10.0;
        p.avg_snr_db = 10.0;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "' (expected fig2|fig3|fig4|fig5|fig6)");
    }
    return p;
}

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" text, '#' starts a comment. Later keys win.
inline KeyValues parse_config(std::istream& in) {
    KeyValues kv;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline long long parse_integer(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument(key + ": expected an integer, got '" + s + "'");
    return v;
}

inline double parse_real(const std::string& key, const std::string& s) {
    const auto v = parse_grid(s);
    if (v.size() != 1) throw std::invalid_argument(key + ": expected one number, got '" + s + "'");
    return v[0];
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& s) {
    std::vector<int> out;
    for (double v : parse_grid(s)) {
        if (v != std::floor(v) || v < 1.0) throw std::invalid_argument(key + ": expected positive integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

template <class T>
std::vector<T> distinct(std::vector<T> v) {
    std::vector<T> out;
    for (const T& x : v) {
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

inline std::vector<Series> cartesian(const std::vector<int>& ks, const std::vector<int>& ns) {
    std::vector<Series> out;
    for (int n : ns) {
        for (int k : ks) out.push_back({k, n});
    }
    return out;
}

}  // namespace detail

/// Applies config keys to a preset and run options. Throws std::invalid_argument
/// on unknown keys or malformed values.
inline void apply_settings(const KeyValues& kv, ExperimentPreset& p, RunOptions& run) {
    auto get = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    static const char* known[] = {"name",      "metric",       "sweep",    "grid",         "series",
                                  "methods",   "threshold_db", "avg_snr_db", "theta",      "mg_order",
                                  "fit_rule",  "relay_prelog", "k",        "n",            "snr_db",
                                  "trials",    "seed",         "workers"};
    for (const auto& [key, value] : kv) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }

    if (auto v = get("name")) p.name = *v;
    if (auto v = get("metric")) p.metric = parse_metric(*v);
    if (auto v = get("sweep")) p.sweep = parse_sweep(*v);
    if (auto v = get("grid")) p.grid = parse_grid(*v);
    if (auto v = get("series")) {
        p.series.clear();
        for (const auto& item : detail::split_list(*v)) {
            const auto x = item.find('x');
            if (x == std::string::npos) throw std::invalid_argument("series: expected KxN items, got '" + item + "'");
            p.series.push_back({static_cast<int>(detail::parse_integer("series", item.substr(0, x))),
                                static_cast<int>(detail::parse_integer("series", item.substr(x + 1)))});
        }
    }
    if (auto v = get("methods")) {
        p.methods.clear();
        for (const auto& item : detail::split_list(*v)) p.methods.push_back(parse_method(item));
    }
    if (auto v = get("threshold_db")) p.threshold_db = detail::parse_real("threshold_db", *v);
    if (auto v = get("avg_snr_db")) p.avg_snr_db = detail::parse_real("avg_snr_db", *v);
    if (auto v = get("theta")) {
        p.optimize_theta = *v == "auto";
        if (!p.optimize_theta) p.theta = detail::parse_real("theta", *v);
    }
    if (auto v = get("mg_order")) p.mg_order = static_cast<int>(detail::parse_integer("mg_order", *v));
    if (auto v = get("fit_rule")) p.fit_rule = parse_fit_rule(*v);
    if (auto v = get("relay_prelog")) p.relay_prelog = detail::parse_real("relay_prelog", *v);

    // Shorthands for the command line flags.
    if (auto v = get("snr_db")) {
        if (p.sweep == SweepVar::avg_snr_db) {
            p.grid = parse_grid(*v);
        } else {
            p.avg_snr_db = detail::parse_real("snr_db", *v);
        }
    }
    std::vector<int> ks, ns;
    for (const auto& s : p.series) {
        ks.push_back(s.k);
        ns.push_back(s.n);
    }
    ks = detail::distinct(ks);
    ns = detail::distinct(ns);
    const auto* k_value = get("k");
    const auto* n_value = get("n");
    if (k_value && p.sweep == SweepVar::num_ris) {
        const auto grid = detail::parse_int_list("k", *k_value);
        p.grid.assign(grid.begin(), grid.end());
        k_value = nullptr;
    }
    if (k_value || n_value) {
        if (k_value) ks = detail::parse_int_list("k", *k_value);
        if (n_value) ns = detail::parse_int_list("n", *n_value);
        if (ks.empty()) ks = {1};
        p.series = detail::cartesian(ks, ns);
    }

    if (auto v = get("trials")) {
        const long long t = detail::parse_integer("trials", *v);
        if (t < static_cast<long long>(kMinTrials)) {
            throw std::invalid_argument("trials must be >= " + std::to_string(kMinTrials));
        }
        run.trials = static_cast<std::uint64_t>(t);
    }
    if (auto v = get("seed")) {
        const long long s = detail::parse_integer("seed", *v);
        if (s < 0) throw std::invalid_argument("seed must be nonnegative");
        run.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("workers")) {
        const long long w = detail::parse_integer("workers", *v);
        if (w < 0) throw std::invalid_argument("workers must be nonnegative");
        run.workers = static_cast<unsigned>(w);
    }
}

/// Serializes the preset block; parse_config + apply_settings restores it exactly.
inline std::string to_config(const ExperimentPreset& p) {
    auto exact = [](double v) { return format_number(v, 17); };
    std::string out;
    out += "name = " + p.name + "\n";
    out += std::string("metric = ") + to_string(p.metric) + "\n";
    out += std::string("sweep = ") + to_string(p.sweep) + "\n";
    out += "grid = ";
    for (std::size_t i = 0; i < p.grid.size(); ++i) out += (i ? "," : "") + exact(p.grid[i]);
    out += "\nseries = ";
    for (std::size_t i = 0; i < p.series.size(); ++i) {
        out += (i ? "," : "") + std::to_string(p.series[i].k) + "x" + std::to_string(p.series[i].n);
    }
    out += "\nmethods = ";
    for (std::size_t i = 0; i < p.methods.size(); ++i) out += std::string(i ? "," : "") + to_string(p.methods[i]);
    out += "\nthreshold_db = " + exact(p.threshold_db) + "\n";
    out += "avg_snr_db = " + exact(p.avg_snr_db) + "\n";
    out += "theta = " + (p.optimize_theta ? std::string("auto") : exact(p.theta)) + "\n";
    out += "mg_order = " + std::to_string(p.mg_order) + "\n";
    out += std::string("fit_rule = ") + to_string(p.fit_rule) + "\n";
    out += "relay_prelog = " + exact(p.relay_prelog) + "\n";
    return out;
}

/// Text summary of the squared-K_G fit and its mixed-gamma expansion for N elements.
inline std::string fit_report(int num_elements, const RunOptions& run, int mg_order = kDefaultMgOrder,
                              KgFitRule rule = KgFitRule::inverse_power, std::uint64_t draws = 1000000) {
    const KGParams p = fit_kg(num_elements, rule);
    const MGDistribution mg = build_mg(p, mg_order);
    auto power = sample_cascade_power(num_elements, draws, {run.seed, static_cast<std::uint64_t>(num_elements)},
                                      {run.workers});
    std::sort(power.begin(), power.end());
    const double ks = ks_distance(power, [&](double x) { return mg_cdf(mg, x, 1.0); }, run.workers);

    double mg_second = 0.0;
    for (const auto& t : mg.terms) mg_second += t.mixing * t.shape * (t.shape + 1.0) / (t.rate * t.rate);
    const double a4 = cascade_raw_moment(num_elements, 4);

    std::string out;
    out += "# squared K_G fit, N = " + std::to_string(num_elements) + ", rule = " + to_string(rule) + "\n";
    out += "l = " + format_number(p.l) + "\n";
    out += "m = " + format_number(p.m) + "\n";
    out += "omega = " + format_number(p.omega) + "\n";
    out += "xi = " + format_number(p.xi) + "\n";
    out += "mg_order = " + std::to_string(mg_order) + "\n";
    out += "ks_distance = " + format_number(ks) + " (" + std::to_string(draws) + " draws, seed " +
           std::to_string(run.seed) + ")\n";
    out += "mean_rel_error = " + format_number((mg.mean() - p.omega) / p.omega) + "\n";
    out += "second_moment_rel_error = " + format_number((mg_second - a4) / a4) + "\n";
    out += "# terms\n";
    out += "i,weight,shape,rate,mixing\n";
    for (std::size_t i = 0; i < mg.terms.size(); ++i) {
        const auto& t = mg.terms[i];
        out += std::to_string(i) + "," + format_cell(t.weight) + "," + format_cell(t.shape) + "," +
               format_cell(t.rate) + "," + format_cell(t.mixing) + "\n";
    }
    return out;
}

}  // namespace risnet

#endif  // RISNET_EXPERIMENT_HPP
