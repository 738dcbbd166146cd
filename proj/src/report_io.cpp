#include "qbp/report_io.hpp"

#include <cinttypes>
#include <cstdio>

namespace qbp {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

nlohmann::json report_to_json(const MetricsReport& rep, const RunConfig& cfg,
                              const GridPoint& point) {
    nlohmann::json cj;
    cj["code"] = cfg.code->name;
    cj["family"] = point.family;
    cj["d"] = cfg.code->d;
    cj["n"] = cfg.code->n;
    cj["k"] = cfg.code->k;
    cj["sector"] = std::string(1, cfg.sector);
    cj["p_data"] = cfg.noise.p_data;
    cj["p_meas"] = cfg.noise.p_meas;
    cj["rounds"] = cfg.noise.rounds;
    cj["mode"] = cfg.noise.mode == DataErrorMode::static_data ? "static" : "per-round";
    cj["decoder"] = point.decoder.name;
    cj["policy"] = to_string(cfg.bp.policy);
    cj["placement"] = to_string(cfg.placement);
    cj["skip_iters"] = cfg.bp.skip_iters;
    cj["max_iter"] = cfg.bp.max_iter;
    cj["use_osd"] = cfg.bp.use_osd;
    cj["quant"] = quant_to_string(cfg.bp.quant);
    cj["min_failures"] = cfg.stop.min_failures;
    cj["max_trials"] = cfg.stop.max_trials;
    cj["batch_size"] = cfg.batch_size;

    auto ci = wilson_ci(rep.failures, rep.trials);
    nlohmann::json j;
    j["config"] = cj;
    j["config_echo"] = rep.config_echo;
    j["seed"] = rep.master_seed;
    j["trials"] = rep.trials;
    j["failures"] = rep.failures;
    j["logical_error_rate"] = rep.logical_error_rate();
    j["ler_ci"] = {ci.first, ci.second};
    j["osd_invoke_rate"] = rep.osd_invoke_rate();
    j["converge_success_rate"] = rep.converge_success_rate();
    j["mean_iterations"] = rep.mean_iterations();
    j["max_iter_fraction"] = rep.max_iter_fraction();
    j["iteration_histogram"] = rep.iteration_histogram;
    j["vote_stabilization_histogram"] = rep.vote_round_histogram;
    j["lottery_flips"] = {{"total", rep.lottery_flips_total},
                          {"max", rep.lottery_flips_max},
                          {"mean", rep.trials ? double(rep.lottery_flips_total) / double(rep.trials)
                                              : 0.0}};
    j["rate_upper_bound_only"] = rep.rate_upper_bound_only;
    j["wall_times"] = {{"run_seconds", rep.wall.run_seconds},
                       {"per_batch_seconds", rep.wall.per_batch_seconds},
                       {"per_trial_seconds", rep.wall.per_trial_seconds},
                       {"per_iteration_seconds", rep.wall.per_iteration_seconds}};
    return j;
}

ReportLabels labels_from_json(const nlohmann::json& j) {
    const auto& c = j.at("config");
    ReportLabels l;
    l.family = c.at("family").get<std::string>();
    l.d = c.at("d").get<std::size_t>();
    l.p = c.at("p_data").get<double>();
    l.policy = c.at("policy").get<std::string>();
    l.placement = c.at("placement").get<std::string>();
    l.quant = c.at("quant").get<std::string>();
    l.rounds = c.at("rounds").get<std::size_t>();
    l.use_osd = c.at("use_osd").get<bool>();
    l.seed = j.at("seed").get<std::uint64_t>();
    return l;
}

std::string csv_header() {
    return "family,d,p,policy,placement,quant,trials,failures,ler,ler_ci_low,ler_ci_high,"
           "invoke_rate,mean_iters,max_iter_frac,seed";
}

std::string csv_row(const MetricsReport& rep, const GridPoint& point, std::uint64_t seed) {
    auto ci = wilson_ci(rep.failures, rep.trials);
    std::string row;
    row += point.family;
    row += ',' + std::to_string(point.code->d);
    row += ',' + fmt_double(point.p);
    row += ',';
    row += to_string(point.decoder.policy);
    row += ',';
    row += to_string(point.decoder.placement);
    row += ',' + quant_to_string(point.decoder.quant);
    row += ',' + std::to_string(rep.trials);
    row += ',' + std::to_string(rep.failures);
    row += ',' + fmt_double(rep.logical_error_rate());
    row += ',' + fmt_double(ci.first);
    row += ',' + fmt_double(ci.second);
    row += ',' + fmt_double(rep.osd_invoke_rate());
    row += ',' + fmt_double(rep.mean_iterations());
    row += ',' + fmt_double(rep.max_iter_fraction());
    row += ',' + std::to_string(seed);
    return row;
}

std::string report_file_name(const MetricsReport& rep, const GridPoint& point) {
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016" PRIx64,
                  fnv1a64(rep.config_echo + "#" + std::to_string(rep.master_seed)));
    return point.label() + "__" + hash + ".json";
}

} // namespace qbp
