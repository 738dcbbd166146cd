#pragma once

// Phenomenological noise: independent data-qubit flips plus independent
// per-round syndrome measurement flips.

#include <cassert>
#include <vector>

#include "qbp/codes.hpp"
#include "qbp/rng.hpp"

namespace qbp {

enum class DataErrorMode {
    static_data,     // one data error for the whole window
    per_round_data,  // fresh incremental data error before each round
};

struct NoiseModel {
    double p_data = 0.0;
    double p_meas = 0.0;
    std::size_t rounds = 1;
    DataErrorMode mode = DataErrorMode::static_data;

    void validate() const;
};

struct SyndromeWindow {
    BitVec true_error;             // cumulative data error at window end
    std::vector<BitVec> measured;  // rounds x m measured syndromes
    BitVec ideal;                  // noiseless syndrome of true_error
};

// Each bit independently 1 with probability p. Consumes exactly n draws.
BitVec sample_data_errors(std::size_t n, double p, Rng& rng);

SyndromeWindow sample_syndrome_window(const CssCode& code, char sector,
                                      const NoiseModel& model, Rng& rng);

// Test hook: builds the window for a fixed error with noiseless measurements.
SyndromeWindow window_from_error(const CssCode& code, char sector,
                                 const BitVec& error, std::size_t rounds);

} // namespace qbp
