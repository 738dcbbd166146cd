#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qbp/codes.hpp"
#include "test_util.hpp"

using namespace qbp;
using namespace qbp::gf2;
using testutil::in_row_space;

TEST_SUITE_BEGIN("codes");

namespace {

void check_commutation(const CssCode& code) {
    for (std::size_t r = 0; r < code.h_x.rows(); ++r)
        CHECK_FALSE(matvec(code.h_z, code.h_x.row_vec(r)).any());
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "qbp_codes_test";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("surface code construction") {
    CssCode c3 = build_surface_code(3);
    CHECK(c3.n == 13);
    CHECK(c3.k == 1);
    CHECK(c3.h_x.rows() == 6);
    CHECK(c3.h_z.rows() == 6);
    check_commutation(c3);

    CssCode c5 = build_surface_code(5);
    CHECK(c5.n == 41);
    CHECK(c5.k == 1);
    check_commutation(c5);

    CHECK_THROWS_AS(build_surface_code(4), std::invalid_argument);
    CHECK_THROWS_AS(build_surface_code(1), std::invalid_argument);
}

TEST_CASE("surface d=3 minimum logical weight is 3") {
    CssCode code = build_surface_code(3);
    // Brute force over all vectors of weight <= 3: a logical is in the kernel
    // of one sector and outside the other sector's row space.
    auto min_logical = [&](const BinaryMatrix& commutes_with, const BinaryMatrix& stabs) {
        std::size_t best = 99;
        for (std::size_t a = 0; a < 13; ++a)
            for (std::size_t b = a; b < 13; ++b)
                for (std::size_t c = b; c < 13; ++c) {
                    BitVec v(13);
                    v.set(a, true);
                    v.set(b, !v.get(b));
                    v.set(c, !v.get(c));
                    if (!v.any()) continue;
                    if (matvec(commutes_with, v).any()) continue;
                    if (in_row_space(stabs, v)) continue;
                    best = std::min(best, v.weight());
                }
        return best;
    };
    CHECK(min_logical(code.h_z, code.h_x) == 3);
    CHECK(min_logical(code.h_x, code.h_z) == 3);
}

TEST_CASE("toric code construction") {
    CssCode c3 = build_toric_code(3);
    CHECK(c3.n == 18);
    CHECK(c3.k == 2);
    check_commutation(c3);
    CHECK(rank(c3.h_x) == 8);
    CHECK(rank(c3.h_z) == 8);
    for (std::size_t r = 0; r < c3.h_x.rows(); ++r) {
        CHECK(c3.h_x.row_weight(r) == 4);
        CHECK(c3.h_z.row_weight(r) == 4);
    }
    CHECK(build_toric_code(2).n == 8);
    CHECK_THROWS_AS(build_toric_code(1), std::invalid_argument);
}

TEST_CASE("surface/toric degree bounds") {
    for (std::size_t d : {3, 5}) {
        for (const CssCode& code : {build_surface_code(d), build_toric_code(d)}) {
            for (const BinaryMatrix* h : {&code.h_x, &code.h_z}) {
                TannerGraph g = build_tanner(*h);
                for (const auto& vns : g.cn_neighbors) CHECK(vns.size() <= 4);
                for (const auto& cns : g.vn_neighbors) CHECK(cns.size() <= 2);
            }
        }
    }
}

TEST_CASE("bb code construction") {
    CssCode degenerate = build_bb_code(1, 1, {{0, 0}}, {{0, 0}});
    CHECK(degenerate.n == 2);
    CHECK(degenerate.h_x == BinaryMatrix::from_rows({{1, 1}}));
    CHECK(degenerate.h_z == BinaryMatrix::from_rows({{1, 1}}));

    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        std::size_t l = 2 + rng.next_u64() % 3, m = 2 + rng.next_u64() % 3;
        std::vector<std::pair<std::size_t, std::size_t>> a, b;
        for (int i = 0; i < 3; ++i) {
            a.emplace_back(rng.next_u64() % l, rng.next_u64() % m);
            b.emplace_back(rng.next_u64() % l, rng.next_u64() % m);
        }
        CssCode code = build_bb_code(l, m, a, b);
        CHECK(code.n == 2 * l * m);
        check_commutation(code);
    }

    // The [[72,12,6]] instance: k comes out of the rank computation.
    CssCode big = build_bb_code(6, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}},
                                "bb_72_12_6", 6);
    CHECK(big.n == 72);
    CHECK(big.k == 12);
    check_commutation(big);

    CHECK_THROWS_AS(build_bb_code(2, 2, {{2, 0}}, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(build_bb_code(2, 2, {}, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("compute_logicals") {
    CssCode surf = build_surface_code(3);
    CHECK(surf.logicals_x.size() == 1);
    CHECK(surf.logicals_z.size() == 1);
    CssCode toric = build_toric_code(3);
    CHECK(toric.logicals_x.size() == 2);
    CHECK(toric.logicals_z.size() == 2);

    for (const CssCode* code : {&surf, &toric}) {
        for (const auto& v : code->logicals_x) {
            CHECK_FALSE(matvec(code->h_z, v).any());
            CHECK_FALSE(in_row_space(code->h_x, v));
        }
        for (const auto& v : code->logicals_z) {
            CHECK_FALSE(matvec(code->h_x, v).any());
            CHECK_FALSE(in_row_space(code->h_z, v));
        }
    }
}

TEST_CASE("cn_to_vn_indices fixture rows") {
    auto surf_z0 = cn_to_vn_indices(CodeFamily::surface, 'Z', 3, 0);
    CHECK(surf_z0[0] == 0u);
    CHECK(surf_z0[1] == 1u);
    CHECK_FALSE(surf_z0[2].has_value());
    CHECK(surf_z0[3] == 9u);

    auto surf_x0 = cn_to_vn_indices(CodeFamily::surface, 'X', 3, 0);
    CHECK(surf_x0[0] == 0u);
    CHECK(surf_x0[1] == 3u);
    CHECK_FALSE(surf_x0[2].has_value());
    CHECK(surf_x0[3] == 9u);

    auto toric_z2 = cn_to_vn_indices(CodeFamily::toric, 'Z', 3, 2);
    CHECK(toric_z2[1] == 0u);  // wraparound: i mod d == d-1

    CHECK_THROWS_AS(cn_to_vn_indices(CodeFamily::surface, 'Z', 3, 6), std::invalid_argument);
}

TEST_CASE("index map matches constructed matrices for d in 3..9") {
    for (std::size_t d : {3, 5, 7, 9}) {
        CssCode surf = build_surface_code(d);
        CHECK(check_index_map(surf, CodeFamily::surface, 'X') == "");
        CHECK(check_index_map(surf, CodeFamily::surface, 'Z') == "");
        CssCode toric = build_toric_code(d);
        CHECK(check_index_map(toric, CodeFamily::toric, 'X') == "");
        CHECK(check_index_map(toric, CodeFamily::toric, 'Z') == "");
    }
}

TEST_CASE("alist round-trip") {
    auto dir = temp_dir();
    CssCode code = build_surface_code(3);
    save_code(code, (dir / "surf3").string(), CodeFileFormat::alist);
    CssCode back = load_code((dir / "surf3").string(), CodeFileFormat::alist, 3);
    CHECK(back.h_x == code.h_x);
    CHECK(back.h_z == code.h_z);
    CHECK(back.k == 1);

    // Loading via a member of the pair works too.
    CssCode back2 = load_code((dir / "surf3.hx.alist").string(), CodeFileFormat::alist, 3);
    CHECK(back2.h_x == code.h_x);
}

TEST_CASE("dense text round-trip") {
    auto dir = temp_dir();
    CssCode code = build_toric_code(3);
    save_code(code, (dir / "toric3").string(), CodeFileFormat::dense_text);
    CssCode back = load_code((dir / "toric3").string(), CodeFileFormat::dense_text, 3);
    CHECK(back.h_x == code.h_x);
    CHECK(back.h_z == code.h_z);
}

TEST_CASE("single-matrix alist of toric d=5 h_x") {
    auto dir = temp_dir();
    CssCode code = build_toric_code(5);
    save_alist(code.h_x, (dir / "toric5_hx.alist").string());
    BinaryMatrix m = load_alist((dir / "toric5_hx.alist").string());
    CHECK(m.cols() == 50);
    CHECK(m == code.h_x);
}

TEST_CASE("load rejects commutation violations naming the row") {
    auto dir = temp_dir();
    CssCode code = build_surface_code(3);
    BinaryMatrix bad = code.h_z;
    bad.set(4, 0, !bad.get(4, 0));  // breaks commutation against some h_x row
    save_alist(code.h_x, (dir / "bad.hx.alist").string());
    save_alist(bad, (dir / "bad.hz.alist").string());
    CHECK_THROWS_WITH_AS(load_code((dir / "bad").string(), CodeFileFormat::alist, 3),
                         doctest::Contains("anticommutes"), CodeLoadError);
}

TEST_CASE("alist parse failures carry context") {
    auto dir = temp_dir();
    {
        std::ofstream out(dir / "trunc.alist");
        out << "4 2\n2 2\n";
    }
    CHECK_THROWS_AS(load_alist((dir / "trunc.alist").string()), CodeLoadError);
    {
        std::ofstream out(dir / "badrow.alist");
        // 2x2 identity but the row lists disagree with the column lists.
        out << "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
    }
    CHECK_THROWS_WITH_AS(load_alist((dir / "badrow.alist").string()),
                         doctest::Contains("row"), CodeLoadError);
}

TEST_CASE("validate_code passes for builtins") {
    std::string out;
    CHECK(validate_code(build_surface_code(3), CodeFamily::surface, &out));
    CHECK(validate_code(build_toric_code(5), CodeFamily::toric, &out));
    CHECK(out.find("FAIL") == std::string::npos);
}

TEST_SUITE_END();
