#include "qbp/noise.hpp"

#include <stdexcept>

namespace qbp {

void NoiseModel::validate() const {
    if (p_data < 0.0 || p_data > 1.0 || p_meas < 0.0 || p_meas > 1.0)
        throw std::invalid_argument("noise probabilities must lie in [0,1]");
    if (rounds < 1)
        throw std::invalid_argument("noise model needs at least one measurement round");
}

BitVec sample_data_errors(std::size_t n, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("error probability must lie in [0,1]");
    BitVec e(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(p)) e.set(i, true);
    return e;
}

SyndromeWindow sample_syndrome_window(const CssCode& code, char sector,
                                      const NoiseModel& model, Rng& rng) {
    model.validate();
    const BinaryMatrix& h = code.sector_matrix(sector);
    SyndromeWindow w;
    w.measured.reserve(model.rounds);

    if (model.mode == DataErrorMode::static_data) {
        w.true_error = sample_data_errors(code.n, model.p_data, rng);
        w.ideal = gf2::matvec(h, w.true_error);
        for (std::size_t r = 0; r < model.rounds; ++r) {
            BitVec row = w.ideal;
            row ^= sample_data_errors(h.rows(), model.p_meas, rng);
            w.measured.push_back(std::move(row));
        }
    } else {
        BitVec cumulative(code.n);
        for (std::size_t r = 0; r < model.rounds; ++r) {
            cumulative ^= sample_data_errors(code.n, model.p_data, rng);
            BitVec row = gf2::matvec(h, cumulative);
            row ^= sample_data_errors(h.rows(), model.p_meas, rng);
            w.measured.push_back(std::move(row));
        }
        w.true_error = std::move(cumulative);
        w.ideal = gf2::matvec(h, w.true_error);
    }
    assert(w.ideal == gf2::matvec(h, w.true_error));
    return w;
}

SyndromeWindow window_from_error(const CssCode& code, char sector,
                                 const BitVec& error, std::size_t rounds) {
    if (error.size() != code.n)
        throw std::invalid_argument("injected error length != n");
    SyndromeWindow w;
    w.true_error = error;
    w.ideal = gf2::matvec(code.sector_matrix(sector), error);
    w.measured.assign(rounds, w.ideal);
    return w;
}

} // namespace qbp
