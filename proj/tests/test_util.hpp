#pragma once

#include <vector>

#include "qbp/gf2.hpp"
#include "qbp/rng.hpp"

namespace qbp::testutil {

inline gf2::BinaryMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                                       double density = 0.5) {
    gf2::BinaryMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.bernoulli(density)) m.set(r, c, true);
    return m;
}

inline gf2::BitVec random_bitvec(std::size_t n, Rng& rng, double density = 0.5) {
    gf2::BitVec v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(density)) v.set(i, true);
    return v;
}

inline gf2::BinaryMatrix mat_mul(const gf2::BinaryMatrix& a, const gf2::BinaryMatrix& b) {
    gf2::BinaryMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        gf2::BitVec acc(b.cols());
        for (auto k : a.row_support(r)) acc ^= b.row_vec(k);
        out.set_row(r, acc);
    }
    return out;
}

// Reduces v against the row space of h; true iff v is dependent on it.
inline bool in_row_space(const gf2::BinaryMatrix& h, const gf2::BitVec& v) {
    std::vector<std::pair<std::size_t, gf2::BitVec>> ech;
    auto reduce_add = [&](gf2::BitVec x, bool add) {
        for (auto& [pivot, row] : ech)
            if (x.get(pivot)) x ^= row;
        auto ones = x.ones();
        if (ones.empty()) return true;
        if (add) ech.emplace_back(ones.front(), std::move(x));
        return false;
    };
    for (std::size_t r = 0; r < h.rows(); ++r) reduce_add(h.row_vec(r), true);
    return reduce_add(v, false);
}

} // namespace qbp::testutil
