#include <doctest.h>

#include "qbp/harness.hpp"
#include "test_util.hpp"

using namespace qbp;
using namespace qbp::gf2;

TEST_SUITE_BEGIN("harness");

namespace {

RunConfig base_config(const CssCode& code, double p) {
    RunConfig cfg;
    cfg.code = &code;
    cfg.family = "surface";
    cfg.sector = 'X';
    cfg.noise.p_data = p;
    cfg.noise.p_meas = 0.0;
    cfg.noise.rounds = 1;
    cfg.bp.max_iter = default_max_iter(code.d);
    cfg.bp.policy = Policy::proposed;
    cfg.bp.skip_iters = 4;
    cfg.bp.use_osd = true;
    cfg.placement = Placement::single_round;
    cfg.stop.min_failures = 100;
    cfg.stop.max_trials = 2000;
    cfg.master_seed = 7;
    cfg.batch_size = 256;
    return cfg;
}

bool reports_equal(const MetricsReport& a, const MetricsReport& b) {
    return a.trials == b.trials && a.failures == b.failures &&
           a.osd_invocations == b.osd_invocations && a.converged_trials == b.converged_trials &&
           a.iteration_histogram == b.iteration_histogram &&
           a.vote_round_histogram == b.vote_round_histogram &&
           a.lottery_flips_total == b.lottery_flips_total &&
           a.lottery_flips_max == b.lottery_flips_max &&
           a.iterations_total == b.iterations_total && a.config_echo == b.config_echo;
}

} // namespace

TEST_CASE("logical_failure_check") {
    CssCode code = build_surface_code(3);
    BitVec e = BitVec::from_indices(13, {2, 8, 9});

    SUBCASE("exact correction is a success") {
        CHECK_FALSE(logical_failure_check(code, 'X', e, e));
    }
    SUBCASE("residual equal to an opposite-sector stabilizer row is a success") {
        for (std::size_t r = 0; r < code.h_z.rows(); ++r) {
            BitVec est = e;
            est ^= code.h_z.row_vec(r);
            CHECK_FALSE(logical_failure_check(code, 'X', e, est));
        }
        for (std::size_t r = 0; r < code.h_x.rows(); ++r) {
            BitVec est = e;
            est ^= code.h_x.row_vec(r);
            CHECK_FALSE(logical_failure_check(code, 'Z', e, est));
        }
    }
    SUBCASE("residual equal to a logical operator is a failure") {
        BitVec est = e;
        est ^= code.logicals_z[0];
        CHECK(logical_failure_check(code, 'X', e, est));
        BitVec est_z = e;
        est_z ^= code.logicals_x[0];
        CHECK(logical_failure_check(code, 'Z', e, est_z));
    }
}

TEST_CASE("p = 0 runs to the trial budget with zero failures") {
    CssCode code = build_surface_code(3);
    RunConfig cfg = base_config(code, 0.0);
    cfg.stop.max_trials = 500;
    MetricsReport rep = run_trials(cfg);
    CHECK(rep.trials == 500);
    CHECK(rep.failures == 0);
    CHECK(rep.rate_upper_bound_only);
    CHECK(rep.logical_error_rate() == 0.0);
    CHECK(rep.converge_success_rate() == 1.0);
}

TEST_CASE("deterministic injection sweep corrects all weight-1 errors") {
    CssCode code = build_surface_code(3);
    std::vector<BitVec> errors;
    for (std::size_t q = 0; q < code.n; ++q) {
        BitVec e(code.n);
        e.set(q, true);
        errors.push_back(e);
    }
    RunConfig cfg = base_config(code, 0.05);
    cfg.injected_errors = &errors;
    cfg.stop.min_failures = 1;
    cfg.stop.max_trials = errors.size();
    MetricsReport rep = run_trials(cfg);
    CHECK(rep.trials == 13);
    CHECK(rep.failures == 0);
}

TEST_CASE("identical config and seed reproduce the report for any worker count") {
    CssCode code = build_surface_code(5);
    RunConfig cfg = base_config(code, 0.05);
    cfg.stop.min_failures = 40;
    cfg.stop.max_trials = 4000;

    MetricsReport serial = run_trials(cfg, 1);
    MetricsReport again = run_trials(cfg, 1);
    CHECK(reports_equal(serial, again));
    MetricsReport parallel = run_trials(cfg, 4);
    CHECK(reports_equal(serial, parallel));

    SUBCASE("batch size does not change the report") {
        RunConfig alt = cfg;
        alt.batch_size = 37;
        MetricsReport rep = run_trials(alt, 2);
        // The echo embeds the batch size, so compare the counts directly.
        CHECK(rep.trials == serial.trials);
        CHECK(rep.failures == serial.failures);
        CHECK(rep.iteration_histogram == serial.iteration_histogram);
    }
}

TEST_CASE("stopping rule halts at the failure target") {
    CssCode code = build_surface_code(3);
    RunConfig cfg = base_config(code, 0.15);
    cfg.bp.policy = Policy::none;
    cfg.bp.use_osd = false;
    cfg.stop.min_failures = 10;
    cfg.stop.max_trials = 100000;
    MetricsReport rep = run_trials(cfg);
    CHECK(rep.failures == 10);
    CHECK(rep.trials < cfg.stop.max_trials);
    CHECK_FALSE(rep.rate_upper_bound_only);
}

TEST_CASE("every OSD invoke is a non-convergence and lands in the max_iter bin") {
    CssCode code = build_surface_code(5);
    RunConfig cfg = base_config(code, 0.08);
    cfg.bp.policy = Policy::none;  // plain BP fails often at this rate
    cfg.stop.min_failures = 50;
    cfg.stop.max_trials = 2000;
    MetricsReport rep = run_trials(cfg);
    CHECK(rep.osd_invocations == rep.trials - rep.converged_trials);
    CHECK(rep.iteration_histogram.back() == rep.osd_invocations);
    CHECK(rep.osd_invoke_rate() <= 1.0 - rep.converge_success_rate() + 1e-12);
}

TEST_CASE("decoding efficiency") {
    CHECK(decoding_efficiency({1, 1, 1, 1}) == 1.0);
    CHECK(decoding_efficiency({1, 1, 2, 1}) == 2.0);
    double base = decoding_efficiency({4, 2, 400, 25});
    CHECK(decoding_efficiency({4, 2, 800, 25}) == doctest::Approx(2 * base));
    // A d-round vote multiplies the latency margin, hence the efficiency, by d.
    for (double d : {3.0, 7.0})
        CHECK(decoding_efficiency({4, 2, 400 * d, 25}) == doctest::Approx(d * base));
    CHECK_THROWS_AS(decoding_efficiency({0, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("aggregate_reports") {
    CssCode code = build_surface_code(3);
    RunConfig cfg = base_config(code, 0.1);
    cfg.bp.policy = Policy::none;
    cfg.stop.min_failures = 20;
    cfg.stop.max_trials = 500;

    MetricsReport a = run_trials(cfg);
    CHECK(reports_equal(aggregate_reports({a}), a));

    RunConfig cfg2 = cfg;
    cfg2.master_seed = 8;
    MetricsReport b = run_trials(cfg2);
    MetricsReport merged = aggregate_reports({a, b});
    CHECK(merged.trials == a.trials + b.trials);
    CHECK(merged.failures == a.failures + b.failures);
    CHECK(merged.logical_error_rate() ==
          doctest::Approx(double(a.failures + b.failures) / double(a.trials + b.trials)));

    RunConfig other = cfg;
    other.noise.p_data = 0.2;
    MetricsReport c = run_trials(other);
    CHECK_THROWS_AS(aggregate_reports({a, c}), std::invalid_argument);
}

TEST_CASE("wilson interval") {
    auto [lo, hi] = wilson_ci(0, 100);
    CHECK(lo == 0.0);
    CHECK(hi > 0.0);
    auto [lo2, hi2] = wilson_ci(50, 100);
    CHECK(lo2 < 0.5);
    CHECK(hi2 > 0.5);
    CHECK(lo2 > 0.4);
    CHECK(hi2 < 0.6);
}

TEST_CASE("vote stabilization histogram populates for multi-round runs") {
    CssCode code = build_surface_code(3);
    RunConfig cfg = base_config(code, 0.02);
    cfg.noise.p_meas = 0.05;
    cfg.noise.rounds = 5;
    cfg.placement = Placement::mv_synd;
    cfg.stop.min_failures = 5;
    cfg.stop.max_trials = 300;
    MetricsReport rep = run_trials(cfg);
    std::size_t total = 0;
    for (auto c : rep.vote_round_histogram) total += c;
    CHECK(total == rep.trials);
    CHECK(rep.median_vote_round() >= 1);

    SUBCASE("clean measurements stabilize at round 1") {
        cfg.noise.p_meas = 0.0;
        MetricsReport clean = run_trials(cfg);
        CHECK(clean.vote_round_histogram[1] == clean.trials);
    }
}

TEST_SUITE_END();
