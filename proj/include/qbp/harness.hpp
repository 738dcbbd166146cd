#pragma once

// Monte Carlo engine: trial generation, decoding, failure classification,
// stopping rule and metric aggregation. Trials are independent given
// (master_seed, trial index); the OpenMP kernel and the serial reference loop
// produce identical reports (wall times aside) for any worker count or batch
// size.

#include <cstdint>
#include <string>
#include <vector>

#include "qbp/decoder.hpp"

namespace qbp {

struct StopRule {
    std::size_t min_failures = 100;
    std::size_t max_trials = 100000;
};

struct RunConfig {
    const CssCode* code = nullptr;
    std::string family;  // label carried into reports (surface|toric|bb|file)
    char sector = 'X';
    NoiseModel noise;
    BpConfig bp;
    Placement placement = Placement::single_round;
    StopRule stop;
    std::uint64_t master_seed = 0;
    std::size_t batch_size = 4096;
    // Test hook: trial t decodes injected_errors[t % size()] instead of a
    // sampled error (measurements stay noiseless).
    const std::vector<BitVec>* injected_errors = nullptr;

    void validate() const;
    // Canonical key=value echo of everything but the seed; two runs are
    // mergeable iff their echoes match.
    std::string config_echo() const;
};

struct WallTimes {
    double run_seconds = 0.0;
    double per_batch_seconds = 0.0;
    double per_trial_seconds = 0.0;
    double per_iteration_seconds = 0.0;
};

struct MetricsReport {
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t osd_invocations = 0;
    std::size_t converged_trials = 0;
    std::vector<std::size_t> iteration_histogram;         // index 0..max_iter
    std::vector<std::size_t> vote_round_histogram;        // index 1..rounds
    std::size_t lottery_flips_total = 0;
    std::size_t lottery_flips_max = 0;
    std::size_t iterations_total = 0;
    bool rate_upper_bound_only = false;
    WallTimes wall;
    std::uint64_t master_seed = 0;
    std::string config_echo;

    double logical_error_rate() const { return trials ? double(failures) / double(trials) : 0.0; }
    double osd_invoke_rate() const { return trials ? double(osd_invocations) / double(trials) : 0.0; }
    double converge_success_rate() const { return trials ? double(converged_trials) / double(trials) : 0.0; }
    double mean_iterations() const { return trials ? double(iterations_total) / double(trials) : 0.0; }
    double max_iter_fraction() const {
        return trials && !iteration_histogram.empty()
                   ? double(iteration_histogram.back()) / double(trials)
                   : 0.0;
    }
    std::size_t median_vote_round() const;
};

// 95% Wilson score interval for a binomial rate.
std::pair<double, double> wilson_ci(std::size_t successes, std::size_t trials);

// Failure test: the residual anticommutes with some logical paired against the
// decoding sector (residuals inside the opposite sector's check row space pass).
bool logical_failure_check(const CssCode& code, char sector, const BitVec& true_error,
                           const BitVec& est_error);

// workers <= 1 runs the serial reference loop; workers > 1 runs the OpenMP
// batch kernel. Reports are identical either way.
MetricsReport run_trials(const RunConfig& cfg, int workers = 1);

struct EfficiencyInput {
    double num_decoding = 1.0;
    double area_decoder = 1.0;
    double t_margin = 1.0;
    double t_decoder = 1.0;
};

// Decodings per unit area scaled by latency margin over decode latency.
double decoding_efficiency(const EfficiencyInput& in);

// Merges reports with identical config echoes (seeds may differ): counts and
// histograms are summed, rates follow from the summed counts.
MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports);

} // namespace qbp
