#include <doctest.h>

#include "qbp/codes.hpp"
#include "test_util.hpp"

using namespace qbp;
using namespace qbp::gf2;
using testutil::in_row_space;
using testutil::mat_mul;
using testutil::random_bitvec;
using testutil::random_matrix;

TEST_SUITE_BEGIN("gf2");

TEST_CASE("matvec on small fixtures") {
    CHECK(matvec(BinaryMatrix::identity(2), BitVec::from_bits({1, 0})) ==
          BitVec::from_bits({1, 0}));
    auto m = BinaryMatrix::from_rows({{1, 1}, {0, 1}});
    CHECK(matvec(m, BitVec::from_bits({1, 1})) == BitVec::from_bits({0, 1}));
    CHECK_THROWS_AS(matvec(m, BitVec(3)), std::invalid_argument);
}

TEST_CASE("matvec of the d=3 surface fixture error pattern") {
    CssCode code = build_surface_code(3);
    BitVec e = BitVec::from_indices(13, {2, 8, 9});
    BitVec s = matvec(code.h_x, e);
    CHECK(s.ones() == std::vector<std::size_t>{0, 1, 2, 5});
}

TEST_CASE("matvec maps zero to zero") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        auto m = random_matrix(1 + t % 9, 1 + (t * 3) % 17, rng);
        CHECK_FALSE(matvec(m, BitVec(m.cols())).any());
    }
}

TEST_CASE("rank") {
    CHECK(rank(BinaryMatrix(3, 4)) == 0);
    CHECK(rank(BinaryMatrix::identity(5)) == 5);
    CssCode code = build_surface_code(3);
    CHECK(rank(code.h_x) == 6);
    CHECK(rank(code.h_x) + rank(code.h_z) == 13 - 1);
}

TEST_CASE("lu_decompose identity") {
    auto f = lu_decompose(BinaryMatrix::identity(4));
    CHECK(f.lower == BinaryMatrix::identity(4));
    CHECK(f.upper == BinaryMatrix::identity(4));
    CHECK(f.row_perm == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(f.col_basis == std::vector<std::size_t>{0, 1, 2, 3});
}

namespace {

void check_lu_roundtrip(const BinaryMatrix& m) {
    auto f = lu_decompose(m);
    // Permuted basis submatrix equals lower * upper.
    BinaryMatrix selected = m.selected_cols(f.col_basis);
    BinaryMatrix permuted(selected.rows(), selected.cols());
    for (std::size_t k = 0; k < m.rows(); ++k)
        permuted.set_row(k, selected.row_vec(f.row_perm[k]));
    CHECK(mat_mul(f.lower, f.upper) == permuted);
    // Shape invariants.
    for (std::size_t i = 0; i < f.lower.rows(); ++i) {
        CHECK(f.lower.get(i, i));
        for (std::size_t j = i + 1; j < f.lower.cols(); ++j) CHECK_FALSE(f.lower.get(i, j));
    }
    for (std::size_t j = 0; j < f.col_basis.size(); ++j) {
        CHECK(f.upper.get(j, j));
        for (std::size_t i = j + 1; i < f.upper.rows(); ++i) CHECK_FALSE(f.upper.get(i, j));
    }
    CHECK(f.col_basis.size() == rank(m));
    // Leftmost-greedy basis: no column left of basis[j] extends the previous ones.
    for (std::size_t j = 0; j < f.col_basis.size(); ++j) {
        std::vector<std::size_t> prefix(f.col_basis.begin(), f.col_basis.begin() + j);
        std::size_t start = j == 0 ? 0 : f.col_basis[j - 1] + 1;
        for (std::size_t c = start; c < f.col_basis[j]; ++c) {
            prefix.push_back(c);
            CHECK(rank(m.selected_cols(prefix)) == j);
            prefix.pop_back();
        }
    }
}

} // namespace

TEST_CASE("lu_decompose hand case") {
    auto m = BinaryMatrix::from_rows({{1, 1}, {1, 0}});
    auto f = lu_decompose(m);
    CHECK(f.col_basis == std::vector<std::size_t>{0, 1});
    check_lu_roundtrip(m);
}

TEST_CASE("lu_decompose roundtrip on random matrices") {
    Rng rng(11);
    check_lu_roundtrip(random_matrix(50, 80, rng));
    for (int t = 0; t < 1000; ++t) {
        std::size_t r = 1 + rng.next_u64() % 64;
        std::size_t c = 1 + rng.next_u64() % 64;
        auto m = random_matrix(r, c, rng, 0.3);
        if (rank(m) == 0) continue;
        auto f = lu_decompose(m);
        BinaryMatrix selected = m.selected_cols(f.col_basis);
        BinaryMatrix permuted(selected.rows(), selected.cols());
        for (std::size_t k = 0; k < m.rows(); ++k)
            permuted.set_row(k, selected.row_vec(f.row_perm[k]));
        CHECK(mat_mul(f.lower, f.upper) == permuted);
    }
}

TEST_CASE("forward_solve") {
    BitVec s = BitVec::from_bits({1, 0});
    CHECK(forward_solve(BinaryMatrix::identity(2), s) == s);
    auto l = BinaryMatrix::from_rows({{1, 0}, {1, 1}});
    CHECK(forward_solve(l, s) == BitVec::from_bits({1, 1}));
    CHECK_THROWS_AS(forward_solve(BinaryMatrix::from_rows({{1, 1}, {0, 1}}), s),
                    std::invalid_argument);

    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng.next_u64() % 40;
        BinaryMatrix lower = BinaryMatrix::identity(n);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (rng.bernoulli(0.4)) lower.set(i, j, true);
        BitVec rhs = random_bitvec(n, rng);
        CHECK(matvec(lower, forward_solve(lower, rhs)) == rhs);
    }
}

TEST_CASE("back_solve") {
    BitVec y = BitVec::from_bits({0, 1});
    CHECK(back_solve(BinaryMatrix::identity(2), y) == y);
    auto u = BinaryMatrix::from_rows({{1, 1}, {0, 1}});
    CHECK(back_solve(u, y) == BitVec::from_bits({1, 1}));
    CHECK_THROWS_AS(back_solve(BinaryMatrix::from_rows({{1, 1}, {0, 0}}), y),
                    std::runtime_error);

    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng.next_u64() % 40;
        BinaryMatrix upper = BinaryMatrix::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.bernoulli(0.4)) upper.set(i, j, true);
        BitVec rhs = random_bitvec(n, rng);
        CHECK(matvec(upper, back_solve(upper, rhs)) == rhs);
    }
}

TEST_CASE("solve roundtrip through a full-rank factorization") {
    Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 2 + rng.next_u64() % 30;
        BinaryMatrix m = random_matrix(n, n, rng);
        if (rank(m) != n) continue;
        auto f = lu_decompose(m);
        BitVec target = random_bitvec(n, rng);
        BitVec permuted(n);
        for (std::size_t k = 0; k < n; ++k)
            if (target.get(f.row_perm[k])) permuted.set(k, true);
        BitVec e = back_solve(f.upper, forward_solve(f.lower, permuted));
        CHECK(matvec(m, e) == target);
    }
}

TEST_CASE("kernel_basis") {
    CHECK(kernel_basis(BinaryMatrix::identity(4)).empty());
    auto k1 = kernel_basis(BinaryMatrix::from_rows({{1, 1}}));
    REQUIRE(k1.size() == 1);
    CHECK(k1[0] == BitVec::from_bits({1, 1}));

    CssCode code = build_surface_code(3);
    CHECK(kernel_basis(code.h_x).size() == 13 - 6);

    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        auto m = random_matrix(1 + rng.next_u64() % 20, 1 + rng.next_u64() % 32, rng, 0.3);
        auto basis = kernel_basis(m);
        CHECK(basis.size() == m.cols() - rank(m));
        if (basis.empty()) continue;
        BinaryMatrix stacked(basis.size(), m.cols());
        for (std::size_t i = 0; i < basis.size(); ++i) {
            CHECK_FALSE(matvec(m, basis[i]).any());
            stacked.set_row(i, basis[i]);
        }
        CHECK(rank(stacked) == basis.size());
    }
}

TEST_SUITE_END();
