// risnet: outage and sum-rate experiments for best-of-K RIS selection.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risnet/risnet.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags that map one-to-one onto config keys.
struct FlagTable {
    struct Entry {
        const char* flag;
        const char* key;
        const char* help;
        std::string value;
        CLI::Option* option = nullptr;
    };
    std::vector<Entry> entries = {
        {"--k", "k", "number of surfaces K (list or start:step:stop)", {}},
        {"--n", "n", "elements per surface N (list or start:step:stop)", {}},
        {"--snr-db", "snr_db", "average SNR grid in dB, start:step:stop", {}},
        {"--threshold-db", "threshold_db", "outage threshold in dB", {}},
        {"--trials", "trials", "Monte Carlo trials per point", {}},
        {"--seed", "seed", "RNG seed", {}},
        {"--theta", "theta", "Chernoff parameter in (0, 1/2), or auto", {}},
        {"--mg-order", "mg_order", "Gauss-Laguerre order M (1..64)", {}},
        {"--relay-prelog", "relay_prelog", "relay rate pre-log, 0.5 or 1.0", {}},
        {"--methods", "methods", "comma list of mc,exact,asymptotic,relay_mc,evt", {}},
        {"--fit-rule", "fit_rule", "K_G fit rule: inverse or moment4", {}},
        {"--workers", "workers", "worker threads, 0 = all cores", {}},
        {"--sweep", "sweep", "sweep variable: avg_snr_db or k", {}},
    };

    void attach(CLI::App& app) {
        for (auto& e : entries) e.option = app.add_option(e.flag, e.value, e.help);
        entries[8].option->check(CLI::IsMember({"0.5", "1.0", "1"}));
    }

    [[nodiscard]] risnet::KeyValues given() const {
        risnet::KeyValues kv;
        for (const auto& e : entries) {
            if (e.option != nullptr && e.option->count() > 0) kv[e.key] = e.value;
        }
        return kv;
    }
};

struct CommonArgs {
    FlagTable flags;
    std::string config_path;
    std::string out_path;

    void attach(CLI::App& app) {
        flags.attach(app);
        app.add_option("--config", config_path, "key = value parameter file; flags override it");
        app.add_option("--out", out_path, "CSV output path (default: standard output)");
    }
};

risnet::KeyValues read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    return risnet::parse_config(in);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + path);
}

// Human-readable lines go to stdout when the CSV goes to a file, else to stderr.
std::ostream& summary_stream(const std::string& out_path) { return out_path.empty() ? std::cerr : std::cout; }

int run_experiment(risnet::ExperimentPreset preset, const CommonArgs& args) {
    risnet::RunOptions run;
    if (!args.config_path.empty()) risnet::apply_settings(read_config(args.config_path), preset, run);
    risnet::apply_settings(args.flags.given(), preset, run);
    preset.validate();

    const auto table = risnet::evaluate_preset(preset, run);
    write_output(args.out_path, table.to_csv());

    auto& log = summary_stream(args.out_path);
    log << preset.name << ": " << to_string(preset.metric) << ", " << table.rows.size() << " points x "
        << table.columns.size() << " columns, trials " << run.trials << ", seed " << run.seed << "\n";
    int pre_asymptotic = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c].rfind("asymptotic", 0) != 0) continue;
        for (const auto& row : table.rows) {
            if (row[c] && *row[c] > 1.0) ++pre_asymptotic;
        }
    }
    if (pre_asymptotic > 0) {
        log << "note: " << pre_asymptotic << " asymptotic values exceed 1 (pre-asymptotic region)\n";
    }
    if (!args.out_path.empty()) log << "wrote " << args.out_path << "\n";
    return kOk;
}

risnet::ExperimentPreset custom(risnet::Metric metric) {
    risnet::ExperimentPreset p;
    p.metric = metric;
    p.grid = risnet::parse_grid("0:5:40");
    p.series = {{2, 3}};
    if (metric == risnet::Metric::outage) {
        p.name = "outage";
        p.methods = {risnet::Method::mc, risnet::Method::exact, risnet::Method::asymptotic, risnet::Method::relay_mc};
    } else {
        p.name = "sumrate";
        p.grid = risnet::parse_grid("0:5:30");
        p.methods = {risnet::Method::mc, risnet::Method::evt, risnet::Method::relay_mc};
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage and capacity scaling of multi-RIS best-branch selection"};
    app.require_subcommand(1);

    CommonArgs outage_args, sumrate_args, preset_args;
    auto* outage = app.add_subcommand("outage", "outage probability versus average SNR");
    outage_args.attach(*outage);
    auto* sumrate = app.add_subcommand("sumrate", "average sum-rate versus average SNR or K");
    sumrate_args.attach(*sumrate);

    auto* preset = app.add_subcommand("preset", "reproduce a figure setting");
    std::string preset_name;
    preset->add_option("name", preset_name, "fig2|fig3|fig4|fig5|fig6")
        ->required()
        ->check(CLI::IsMember(risnet::preset_names()));
    preset_args.attach(*preset);

    auto* fit = app.add_subcommand("fit-report", "squared K_G fit and mixed-gamma terms for one N");
    int fit_n = 3;
    std::uint64_t fit_draws = 1000000;
    std::uint64_t fit_seed = 1;
    int fit_order = risnet::kDefaultMgOrder;
    std::string fit_rule = "inverse";
    std::string fit_out;
    unsigned fit_workers = 0;
    fit->add_option("--n", fit_n, "elements per surface")->check(CLI::Range(1, 10000));
    fit->add_option("--trials", fit_draws, "Monte Carlo draws for the KS distance")->check(CLI::Range(1000, 100000000));
    fit->add_option("--seed", fit_seed, "RNG seed");
    fit->add_option("--mg-order", fit_order, "Gauss-Laguerre order M")->check(CLI::Range(1, 64));
    fit->add_option("--fit-rule", fit_rule, "inverse or moment4")->check(CLI::IsMember({"inverse", "moment4"}));
    fit->add_option("--workers", fit_workers, "worker threads, 0 = all cores");
    fit->add_option("--out", fit_out, "output path (default: standard output)");

    auto* validate = app.add_subcommand("validate", "run the self-check suite");
    std::string level = "quick";
    std::string validate_out;
    validate->add_option("--level", level, "quick (1e5 trials) or full (1e7)")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--out", validate_out, "report path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*outage) return run_experiment(custom(risnet::Metric::outage), outage_args);
        if (*sumrate) return run_experiment(custom(risnet::Metric::sum_rate), sumrate_args);
        if (*preset) return run_experiment(risnet::make_preset(preset_name), preset_args);
        if (*fit) {
            risnet::RunOptions run;
            run.seed = fit_seed;
            run.workers = fit_workers;
            write_output(fit_out,
                         risnet::fit_report(fit_n, run, fit_order, risnet::parse_fit_rule(fit_rule), fit_draws));
            return kOk;
        }
        if (*validate) {
            const auto report = risnet::run_validation(risnet::parse_validation_level(level));
            write_output(validate_out, report.to_text());
            if (!validate_out.empty()) std::cout << (report.passed() ? "all checks passed\n" : "checks failed\n");
            return report.passed() ? kOk : kValidation;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
