// Command-line front end: Monte Carlo sweeps, code validation, report
// post-processing into plot-ready series files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbp/config.hpp"
#include "qbp/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CodeArgs {
    std::string descriptor;
    std::size_t d = 0;
};

std::shared_ptr<const qbp::CssCode> resolve_code(const CodeArgs& args,
                                                 std::optional<qbp::CodeFamily>* family) {
    return qbp::code_from_descriptor(args.descriptor, args.d, family);
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_override,
                 int workers_override, std::string out_override,
                 std::optional<std::size_t> min_failures_override,
                 std::optional<std::size_t> max_trials_override) {
    qbp::ExperimentSpec spec = qbp::parse_experiment(qbp::parse_toml_file(config_path));
    if (seed_override) spec.seed = *seed_override;
    if (workers_override > 0) spec.workers = workers_override;
    if (!out_override.empty()) spec.out_dir = out_override;
    if (min_failures_override) spec.stop.min_failures = *min_failures_override;
    if (max_trials_override) spec.stop.max_trials = *max_trials_override;

    std::string base_dir = fs::path(config_path).parent_path().string();
    auto grid = qbp::enumerate_grid(spec, base_dir);

    fs::create_directories(spec.out_dir);
    std::ofstream csv(fs::path(spec.out_dir) / "summary.csv");
    if (!csv) {
        std::cerr << "cannot write " << spec.out_dir << "/summary.csv\n";
        return 1;
    }
    csv << qbp::csv_header() << '\n';

    for (const auto& point : grid) {
        qbp::RunConfig cfg = point.to_run_config(spec.sector, spec.seed, spec.stop, spec.batch_size);
        qbp::MetricsReport rep = qbp::run_trials(cfg, spec.workers);
        json j = qbp::report_to_json(rep, cfg, point);
        std::string fname = qbp::report_file_name(rep, point);
        std::ofstream(fs::path(spec.out_dir) / fname) << j.dump(2) << '\n';
        csv << qbp::csv_row(rep, point, spec.seed) << '\n';
        std::cout << point.label() << "  trials=" << rep.trials << " failures=" << rep.failures
                  << " ler=" << rep.logical_error_rate()
                  << " invoke=" << rep.osd_invoke_rate()
                  << (rep.rate_upper_bound_only ? "  (rate upper-bound only)" : "") << '\n';
    }
    std::cout << "wrote " << grid.size() << " report(s) to " << spec.out_dir << '\n';
    return 0;
}

int cmd_validate(const CodeArgs& args) {
    std::optional<qbp::CodeFamily> family;
    auto code = resolve_code(args, &family);
    std::string out;
    bool ok = qbp::validate_code(*code, family, &out);
    std::cout << code->name << " [[" << code->n << "," << code->k << "," << code->d << "]]\n"
              << out;
    return ok ? 0 : 1;
}

int cmd_code_info(const CodeArgs& args) {
    std::optional<qbp::CodeFamily> family;
    auto code = resolve_code(args, &family);
    auto degree_stats = [](const qbp::BinaryMatrix& h) {
        std::size_t min_row = h.cols(), max_row = 0;
        for (std::size_t r = 0; r < h.rows(); ++r) {
            std::size_t w = h.row_weight(r);
            min_row = std::min(min_row, w);
            max_row = std::max(max_row, w);
        }
        auto t = h.transposed();
        std::size_t min_col = h.rows(), max_col = 0;
        for (std::size_t c = 0; c < t.rows(); ++c) {
            std::size_t w = t.row_weight(c);
            min_col = std::min(min_col, w);
            max_col = std::max(max_col, w);
        }
        std::ostringstream os;
        os << "CN degree " << min_row << ".." << max_row << ", VN degree " << min_col << ".."
           << max_col;
        return os.str();
    };
    std::cout << code->name << '\n'
              << "n = " << code->n << ", k = " << code->k << ", d = " << code->d << '\n'
              << "h_x: " << code->h_x.rows() << " checks, rank " << qbp::gf2::rank(code->h_x)
              << ", " << degree_stats(code->h_x) << '\n'
              << "h_z: " << code->h_z.rows() << " checks, rank " << qbp::gf2::rank(code->h_z)
              << ", " << degree_stats(code->h_z) << '\n';
    return 0;
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (c == '.' || c == '/' || c == ' ') c = '-';
    return s;
}

std::string variant_label(const qbp::ReportLabels& l) {
    return sanitize(l.policy + "_" + l.placement + "_" + l.quant + (l.use_osd ? "_osd" : "_noosd"));
}

int cmd_plot_data(const std::string& reports_dir, const std::string& figure,
                  std::string out_dir) {
    const std::vector<std::string> known = {"ler-vs-p", "invoke-vs-p", "iter-hist",
                                            "vote-round-hist"};
    if (std::find(known.begin(), known.end(), figure) == known.end()) {
        std::cerr << "unknown figure '" << figure << "'; valid keys:";
        for (const auto& k : known) std::cerr << ' ' << k;
        std::cerr << '\n';
        return 1;
    }
    if (out_dir.empty()) out_dir = reports_dir;
    fs::create_directories(out_dir);

    std::vector<std::pair<std::string, json>> reports;
    for (const auto& entry : fs::directory_iterator(reports_dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json j;
        in >> j;
        reports.emplace_back(entry.path().stem().string(), std::move(j));
    }
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (reports.empty()) {
        std::cerr << "no report JSON files in " << reports_dir << '\n';
        return 1;
    }

    std::size_t files = 0;
    if (figure == "ler-vs-p" || figure == "invoke-vs-p") {
        const char* key = figure == "ler-vs-p" ? "logical_error_rate" : "osd_invoke_rate";
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        for (const auto& [name, j] : reports) {
            auto l = qbp::labels_from_json(j);
            std::string sname = l.family + "_d" + std::to_string(l.d) + "__" + variant_label(l);
            series[sname].emplace_back(l.p, j.at(key).get<double>());
        }
        for (auto& [sname, points] : series) {
            std::sort(points.begin(), points.end());
            std::string fname = sanitize(figure) + "__" + sname + ".dat";
            std::ofstream out(fs::path(out_dir) / fname);
            for (auto [p, v] : points) out << p << ' ' << v << '\n';
            std::cout << fname << '\n';
            ++files;
        }
    } else {
        const char* key =
            figure == "iter-hist" ? "iteration_histogram" : "vote_stabilization_histogram";
        for (const auto& [name, j] : reports) {
            std::string fname = sanitize(figure) + "__" + name + ".dat";
            std::ofstream out(fs::path(out_dir) / fname);
            const auto& hist = j.at(key);
            // The vote histogram is 1-indexed by round; iteration bins start at 0.
            std::size_t start = figure == "iter-hist" ? 0 : 1;
            for (std::size_t i = start; i < hist.size(); ++i)
                out << i << ' ' << hist[i].get<std::size_t>() << '\n';
            std::cout << fname << '\n';
            ++files;
        }
    }
    std::cout << "wrote " << files << " series file(s) to " << out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for BP-based CSS code decoding"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the sweep described by a config file");
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::string out_dir;
    std::size_t min_failures = 0, max_trials = 0;
    bool min_failures_set = false, max_trials_set = false;
    sim->add_option("--config", config_path, "TOML-style sweep config")->required();
    sim->add_option("--seed", seed, "master seed override")->each([&](const std::string&) { seed_set = true; });
    sim->add_option("--workers", workers, "worker threads for the trial batches");
    sim->add_option("--out", out_dir, "output directory override");
    sim->add_option("--min-failures", min_failures, "stopping rule override")
        ->each([&](const std::string&) { min_failures_set = true; });
    sim->add_option("--max-trials", max_trials, "trial budget override")
        ->each([&](const std::string&) { max_trials_set = true; });

    // validate
    auto* val = app.add_subcommand("validate", "run code invariants and the index-map check");
    CodeArgs val_args;
    val->add_option("--code", val_args.descriptor,
                    "surface:D | toric:D | bb:<preset.toml> | file:<stem>[:format]")
        ->required();
    val->add_option("--d", val_args.d, "declared distance for file codes");

    // code-info
    auto* info = app.add_subcommand("code-info", "print n, k, ranks and degrees");
    CodeArgs info_args;
    info->add_option("--code", info_args.descriptor, "code descriptor")->required();
    info->add_option("--d", info_args.d, "declared distance for file codes");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "emit plot-ready series files from reports");
    std::string reports_dir, figure, plot_out;
    plot->add_option("--reports", reports_dir, "directory with report JSON files")->required();
    plot->add_option("--figure", figure, "ler-vs-p | invoke-vs-p | iter-hist | vote-round-hist")
        ->required();
    plot->add_option("--out", plot_out, "output directory (default: reports dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path,
                                seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                                workers, out_dir,
                                min_failures_set ? std::optional<std::size_t>(min_failures)
                                                 : std::nullopt,
                                max_trials_set ? std::optional<std::size_t>(max_trials)
                                               : std::nullopt);
        if (val->parsed()) return cmd_validate(val_args);
        if (info->parsed()) return cmd_code_info(info_args);
        if (plot->parsed()) return cmd_plot_data(reports_dir, figure, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
