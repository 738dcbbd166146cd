#pragma once

// Dense bit-packed linear algebra over GF(2). Rows are packed 64 entries per
// machine word so the hot operations (row XOR, syndrome estimation) run on
// whole words.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbp::gf2 {

// Bit vector packed into 64-bit words. Unused bits of the last word are kept
// zero so equality and weight work on the raw words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(word_count(n), 0) {}

    static BitVec from_bits(const std::vector<int>& bits);
    static BitVec from_indices(std::size_t n, const std::vector<std::size_t>& ones);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    BitVec& operator^=(const BitVec& o);
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
    bool operator==(const BitVec&) const = default;

    std::size_t weight() const;
    bool any() const;
    std::vector<std::size_t> ones() const;

    std::span<const std::uint64_t> words() const { return w_; }
    std::span<std::uint64_t> words() { return w_; }

    std::string to_string() const;

    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Parity of the AND of two equal-length vectors.
bool dot(const BitVec& a, const BitVec& b);

// Dense 0/1 matrix with bit-packed rows.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_(BitVec::word_count(cols)),
          data_(rows * wpr_, 0) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("BinaryMatrix: rows and cols must be >= 1");
    }

    static BinaryMatrix identity(std::size_t n);
    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t m = std::uint64_t{1} << (c & 63);
        std::uint64_t& w = data_[r * wpr_ + (c >> 6)];
        if (v) w |= m; else w &= ~m;
    }

    std::span<const std::uint64_t> row(std::size_t r) const {
        return {data_.data() + r * wpr_, wpr_};
    }
    std::span<std::uint64_t> row(std::size_t r) {
        return {data_.data() + r * wpr_, wpr_};
    }

    void xor_row_into(std::size_t src, std::size_t dst) {
        auto s = row(src);
        auto d = row(dst);
        for (std::size_t k = 0; k < wpr_; ++k) d[k] ^= s[k];
    }
    void swap_rows(std::size_t a, std::size_t b);

    BitVec row_vec(std::size_t r) const;
    void set_row(std::size_t r, const BitVec& v);

    std::vector<std::size_t> row_support(std::size_t r) const;
    std::size_t row_weight(std::size_t r) const;

    BinaryMatrix transposed() const;
    BinaryMatrix permuted_cols(const std::vector<std::size_t>& order) const;
    BinaryMatrix selected_cols(const std::vector<std::size_t>& cols) const;

    bool operator==(const BinaryMatrix&) const = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

// y = M * v over GF(2). Throws on dimension mismatch.
BitVec matvec(const BinaryMatrix& m, const BitVec& v);

// GF(2) row rank.
std::size_t rank(const BinaryMatrix& m);

// PLU-style factorization restricted to the leftmost rank(M) independent
// columns: row_perm applied to M[:, col_basis] equals lower * upper.
// lower is rows x rows unit lower triangular; upper is rows x |col_basis|
// with an all-ones diagonal on its leading square block and zero rows below.
struct Gf2Factorization {
    BinaryMatrix lower;
    BinaryMatrix upper;
    std::vector<std::size_t> row_perm;   // permuted position -> source row
    std::vector<std::size_t> col_basis;  // leftmost independent columns, in order
};

Gf2Factorization lu_decompose(const BinaryMatrix& m);

// Solves lower * y = s for unit-lower-triangular lower.
BitVec forward_solve(const BinaryMatrix& lower, const BitVec& s);

// Solves upper * e = y; upper may have more rows than columns, in which case
// the trailing entries of y must be zero (otherwise no solution exists).
BitVec back_solve(const BinaryMatrix& upper, const BitVec& y);

// Basis of the right null space {v : M v = 0}; size == cols - rank(M).
std::vector<BitVec> kernel_basis(const BinaryMatrix& m);

} // namespace qbp::gf2
