// Throughput benchmark: serial reference loop vs the OpenMP batch kernel on
// the same fixed workload, with a report-equality check between the two.

#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qbp/harness.hpp"

using namespace qbp;

namespace {

RunConfig make_config(const CssCode& code, double p, Policy policy, std::size_t trials) {
    RunConfig cfg;
    cfg.code = &code;
    cfg.family = "surface";
    cfg.sector = 'X';
    cfg.noise.p_data = p;
    cfg.noise.p_meas = 0.0;
    cfg.noise.rounds = 1;
    cfg.bp.policy = policy;
    cfg.bp.skip_iters = 4;
    cfg.bp.max_iter = default_max_iter(code.d);
    cfg.bp.use_osd = true;
    cfg.placement = Placement::single_round;
    cfg.stop.min_failures = trials;  // fixed-work run: never stop early
    cfg.stop.max_trials = trials;
    cfg.master_seed = 2024;
    cfg.batch_size = 4096;
    return cfg;
}

double run_and_time(const RunConfig& cfg, int workers, MetricsReport* out) {
    auto t0 = std::chrono::steady_clock::now();
    MetricsReport rep = run_trials(cfg, workers);
    auto t1 = std::chrono::steady_clock::now();
    if (out) *out = rep;
    return std::chrono::duration<double>(t1 - t0).count();
}

bool reports_equal(const MetricsReport& a, const MetricsReport& b) {
    return a.trials == b.trials && a.failures == b.failures &&
           a.osd_invocations == b.osd_invocations && a.converged_trials == b.converged_trials &&
           a.iteration_histogram == b.iteration_histogram &&
           a.vote_round_histogram == b.vote_round_histogram &&
           a.lottery_flips_total == b.lottery_flips_total;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t d = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
    double p = argc > 2 ? std::strtod(argv[2], nullptr) : 0.03;
    std::size_t trials = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 50000;
    int workers = 1;
#ifdef _OPENMP
    workers = argc > 4 ? std::atoi(argv[4]) : omp_get_max_threads();
#endif

    CssCode code = build_surface_code(d);
    std::cout << "surface d=" << d << " p=" << p << " trials=" << trials << "\n\n";

    for (Policy policy : {Policy::none, Policy::proposed}) {
        RunConfig cfg = make_config(code, p, policy, trials);
        MetricsReport serial, parallel;
        double ts = run_and_time(cfg, 1, &serial);
        double tp = run_and_time(cfg, workers, &parallel);
        bool same = reports_equal(serial, parallel);
        std::cout << "policy=" << to_string(policy) << "\n"
                  << "  serial          " << ts << " s  (" << double(trials) / ts
                  << " trials/s)\n"
                  << "  openmp x" << workers << "       " << tp << " s  ("
                  << double(trials) / tp << " trials/s, speedup " << ts / tp << ")\n"
                  << "  reports match:  " << (same ? "yes" : "NO") << "\n"
                  << "  ler=" << serial.logical_error_rate()
                  << " invoke=" << serial.osd_invoke_rate() << "\n";
        if (!same) return 1;
    }
    return 0;
}
