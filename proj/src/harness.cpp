#include "qbp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qbp {

void RunConfig::validate() const {
    if (!code) throw std::invalid_argument("run config: no code");
    if (sector != 'X' && sector != 'Z') throw std::invalid_argument("run config: bad sector");
    noise.validate();
    bp.validate();
    if (stop.min_failures < 1) throw std::invalid_argument("run config: min_failures must be >= 1");
    if (stop.max_trials < stop.min_failures)
        throw std::invalid_argument("run config: max_trials must be >= min_failures");
    if (batch_size < 1) throw std::invalid_argument("run config: batch_size must be >= 1");
}

std::string RunConfig::config_echo() const {
    std::ostringstream os;
    os << "code=" << code->name << ";family=" << family << ";d=" << code->d << ";n=" << code->n
       << ";k=" << code->k << ";sector=" << sector << ";p_data=" << noise.p_data
       << ";p_meas=" << noise.p_meas << ";rounds=" << noise.rounds
       << ";mode=" << (noise.mode == DataErrorMode::static_data ? "static" : "per-round")
       << ";policy=" << to_string(bp.policy) << ";placement=" << to_string(placement)
       << ";skip_iters=" << bp.skip_iters << ";max_iter=" << bp.max_iter
       << ";use_osd=" << (bp.use_osd ? 1 : 0)
       << ";quant=" << (bp.quant ? bp.quant->label() : "fp")
       << ";min_failures=" << stop.min_failures << ";max_trials=" << stop.max_trials
       << ";batch_size=" << batch_size
       << ";injected=" << (injected_errors ? injected_errors->size() : 0);
    return os.str();
}

std::size_t MetricsReport::median_vote_round() const {
    std::size_t total = 0;
    for (auto c : vote_round_histogram) total += c;
    if (total == 0) return 0;
    std::size_t half = (total + 1) / 2, seen = 0;
    for (std::size_t r = 0; r < vote_round_histogram.size(); ++r) {
        seen += vote_round_histogram[r];
        if (seen >= half) return r;
    }
    return vote_round_histogram.size() - 1;
}

std::pair<double, double> wilson_ci(std::size_t successes, std::size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool logical_failure_check(const CssCode& code, char sector, const BitVec& true_error,
                           const BitVec& est_error) {
    if (true_error.size() != code.n || est_error.size() != code.n)
        throw std::invalid_argument("logical_failure_check: vector length != n");
    BitVec residual = true_error;
    residual ^= est_error;
    for (const auto& l : code.sector_logicals(sector))
        if (gf2::dot(l, residual)) return true;
    return false;
}

namespace {

struct TrialResult {
    bool failed = false;
    bool converged = false;
    bool invoked_osd = false;
    std::uint32_t iterations = 0;
    std::uint32_t lottery_flips = 0;
    std::uint32_t vote_round = 1;
};

// Decoding prior; keeps prior_llr's (0,1) domain when the sampling rate sits
// on the boundary.
double effective_prior(double p_data) {
    return std::clamp(p_data, 1e-12, 1.0 - 1e-12);
}

TrialResult run_one(const RunConfig& cfg, SectorDecoder& dec, std::uint64_t trial) {
    Rng rng = Rng::for_trial(cfg.master_seed, trial);
    SyndromeWindow window =
        cfg.injected_errors
            ? window_from_error(*cfg.code, cfg.sector,
                                (*cfg.injected_errors)[trial % cfg.injected_errors->size()],
                                cfg.noise.rounds)
            : sample_syndrome_window(*cfg.code, cfg.sector, cfg.noise, rng);
    std::uint64_t decode_seed = rng.next_u64();
    DecodeOutcome out = dec.decode_window(window, effective_prior(cfg.noise.p_data), cfg.bp,
                                          cfg.placement, decode_seed);
    TrialResult r;
    r.failed = logical_failure_check(*cfg.code, cfg.sector, window.true_error, out.est_error);
    r.converged = out.converged;
    r.invoked_osd = out.invoked_osd;
    r.iterations = static_cast<std::uint32_t>(out.iterations);
    r.lottery_flips = static_cast<std::uint32_t>(out.lottery_flips);
    r.vote_round = static_cast<std::uint32_t>(vote_stabilization_round(window.measured));
    return r;
}

} // namespace

MetricsReport run_trials(const RunConfig& cfg, int workers) {
    cfg.validate();
    MetricsReport rep;
    rep.master_seed = cfg.master_seed;
    rep.config_echo = cfg.config_echo();
    rep.iteration_histogram.assign(cfg.bp.max_iter + 1, 0);
    rep.vote_round_histogram.assign(cfg.noise.rounds + 1, 0);

    const auto t0 = std::chrono::steady_clock::now();
    std::size_t batches = 0;
    std::vector<TrialResult> results;
    SectorDecoder serial_dec(*cfg.code, cfg.sector);

    std::size_t next_trial = 0;
    while (next_trial < cfg.stop.max_trials && rep.failures < cfg.stop.min_failures) {
        const std::size_t bs = std::min(cfg.batch_size, cfg.stop.max_trials - next_trial);
        results.resize(bs);
        if (workers > 1) {
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
            {
                SectorDecoder dec(*cfg.code, cfg.sector);
#pragma omp for schedule(static)
                for (long long i = 0; i < static_cast<long long>(bs); ++i)
                    results[static_cast<std::size_t>(i)] =
                        run_one(cfg, dec, next_trial + static_cast<std::size_t>(i));
            }
#else
            for (std::size_t i = 0; i < bs; ++i)
                results[i] = run_one(cfg, serial_dec, next_trial + i);
#endif
        } else {
            for (std::size_t i = 0; i < bs; ++i)
                results[i] = run_one(cfg, serial_dec, next_trial + i);
        }
        ++batches;

        // Sequential reduce in trial order; stop right after the trial that
        // reaches min_failures, so the report does not depend on batch size or
        // worker count.
        for (std::size_t i = 0; i < bs; ++i) {
            const TrialResult& r = results[i];
            ++rep.trials;
            rep.failures += r.failed;
            rep.osd_invocations += r.invoked_osd;
            rep.converged_trials += r.converged;
            rep.iteration_histogram[std::min<std::size_t>(r.iterations, cfg.bp.max_iter)]++;
            rep.iterations_total += r.iterations;
            rep.lottery_flips_total += r.lottery_flips;
            rep.lottery_flips_max = std::max<std::size_t>(rep.lottery_flips_max, r.lottery_flips);
            rep.vote_round_histogram[std::min<std::size_t>(r.vote_round, cfg.noise.rounds)]++;
            if (rep.failures >= cfg.stop.min_failures) break;
        }
        next_trial += bs;
    }

    rep.rate_upper_bound_only = rep.failures == 0;
    const auto t1 = std::chrono::steady_clock::now();
    rep.wall.run_seconds = std::chrono::duration<double>(t1 - t0).count();
    rep.wall.per_batch_seconds = batches ? rep.wall.run_seconds / double(batches) : 0.0;
    rep.wall.per_trial_seconds = rep.trials ? rep.wall.run_seconds / double(rep.trials) : 0.0;
    // Iterations executed is approximated by the terminating indices plus one
    // message-passing pass per trial.
    const double iters = double(rep.iterations_total + rep.trials);
    rep.wall.per_iteration_seconds = iters > 0 ? rep.wall.run_seconds / iters : 0.0;
    return rep;
}

double decoding_efficiency(const EfficiencyInput& in) {
    if (!(in.num_decoding > 0.0) || !(in.area_decoder > 0.0) || !(in.t_margin > 0.0) ||
        !(in.t_decoder > 0.0))
        throw std::invalid_argument("decoding_efficiency: inputs must be strictly positive");
    return (in.num_decoding / in.area_decoder) * (in.t_margin / in.t_decoder);
}

MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate_reports: nothing to merge");
    MetricsReport out = reports.front();
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const MetricsReport& r = reports[i];
        if (r.config_echo != out.config_echo)
            throw std::invalid_argument("aggregate_reports: config echoes differ");
        if (r.iteration_histogram.size() != out.iteration_histogram.size() ||
            r.vote_round_histogram.size() != out.vote_round_histogram.size())
            throw std::invalid_argument("aggregate_reports: histogram shapes differ");
        out.trials += r.trials;
        out.failures += r.failures;
        out.osd_invocations += r.osd_invocations;
        out.converged_trials += r.converged_trials;
        out.iterations_total += r.iterations_total;
        out.lottery_flips_total += r.lottery_flips_total;
        out.lottery_flips_max = std::max(out.lottery_flips_max, r.lottery_flips_max);
        for (std::size_t k = 0; k < out.iteration_histogram.size(); ++k)
            out.iteration_histogram[k] += r.iteration_histogram[k];
        for (std::size_t k = 0; k < out.vote_round_histogram.size(); ++k)
            out.vote_round_histogram[k] += r.vote_round_histogram[k];
        out.wall.run_seconds += r.wall.run_seconds;
    }
    out.rate_upper_bound_only = out.failures == 0;
    return out;
}

} // namespace qbp
