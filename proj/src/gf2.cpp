#include "qbp/gf2.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace qbp::gf2 {

BitVec BitVec::from_bits(const std::vector<int>& bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) v.set(i, true);
    return v;
}

BitVec BitVec::from_indices(std::size_t n, const std::vector<std::size_t>& ones) {
    BitVec v(n);
    for (auto i : ones) {
        if (i >= n) throw std::invalid_argument("BitVec::from_indices: index out of range");
        v.set(i, true);
    }
    return v;
}

BitVec& BitVec::operator^=(const BitVec& o) {
    if (n_ != o.n_) throw std::invalid_argument("BitVec xor: length mismatch");
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
}

std::size_t BitVec::weight() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitVec::any() const {
    for (auto w : w_)
        if (w) return true;
    return false;
}

std::vector<std::size_t> BitVec::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        std::uint64_t w = w_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

std::string BitVec::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

bool dot(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    std::uint64_t acc = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k) acc ^= wa[k] & wb[k];
    return std::popcount(acc) & 1;
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty() || rows[0].empty())
        throw std::invalid_argument("from_rows: empty matrix");
    BinaryMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw std::invalid_argument("from_rows: ragged rows");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            if (rows[r][c]) m.set(r, c, true);
    }
    return m;
}

void BinaryMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    auto ra = row(a);
    auto rb = row(b);
    for (std::size_t k = 0; k < wpr_; ++k) std::swap(ra[k], rb[k]);
}

BitVec BinaryMatrix::row_vec(std::size_t r) const {
    BitVec v(cols_);
    auto src = row(r);
    auto dst = v.words();
    std::copy(src.begin(), src.end(), dst.begin());
    return v;
}

void BinaryMatrix::set_row(std::size_t r, const BitVec& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    auto src = v.words();
    auto dst = row(r);
    std::copy(src.begin(), src.end(), dst.begin());
}

std::vector<std::size_t> BinaryMatrix::row_support(std::size_t r) const {
    return row_vec(r).ones();
}

std::size_t BinaryMatrix::row_weight(std::size_t r) const {
    std::size_t c = 0;
    for (auto w : row(r)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

BinaryMatrix BinaryMatrix::transposed() const {
    BinaryMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto c : row_support(r)) t.set(c, r, true);
    return t;
}

BinaryMatrix BinaryMatrix::permuted_cols(const std::vector<std::size_t>& order) const {
    if (order.size() != cols_)
        throw std::invalid_argument("permuted_cols: order size mismatch");
    BinaryMatrix p(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < cols_; ++j)
            if (get(r, order[j])) p.set(r, j, true);
    return p;
}

BinaryMatrix BinaryMatrix::selected_cols(const std::vector<std::size_t>& cols) const {
    if (cols.empty()) throw std::invalid_argument("selected_cols: empty selection");
    BinaryMatrix p(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (get(r, cols[j])) p.set(r, j, true);
    return p;
}

std::string BinaryMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) os << (get(r, c) ? '1' : '0');
        os << '\n';
    }
    return os.str();
}

BitVec matvec(const BinaryMatrix& m, const BitVec& v) {
    if (v.size() != m.cols())
        throw std::invalid_argument("matvec: vector length != matrix cols");
    BitVec out(m.rows());
    auto vw = v.words();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto rw = m.row(r);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < rw.size(); ++k) acc ^= rw[k] & vw[k];
        if (std::popcount(acc) & 1) out.set(r, true);
    }
    return out;
}

std::size_t rank(const BinaryMatrix& m) {
    BinaryMatrix w = m;
    std::size_t pivots = 0;
    for (std::size_t c = 0; c < w.cols() && pivots < w.rows(); ++c) {
        std::size_t k = pivots;
        while (k < w.rows() && !w.get(k, c)) ++k;
        if (k == w.rows()) continue;
        w.swap_rows(pivots, k);
        for (std::size_t r = pivots + 1; r < w.rows(); ++r)
            if (w.get(r, c)) w.xor_row_into(pivots, r);
        ++pivots;
    }
    return pivots;
}

Gf2Factorization lu_decompose(const BinaryMatrix& m) {
    const std::size_t rows = m.rows();
    BinaryMatrix work = m;
    BinaryMatrix lower(rows, rows);
    std::vector<std::size_t> perm(rows);
    for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
    std::vector<std::size_t> basis;

    // Greedy left-to-right column scan with row pivoting: the basis collects
    // the leftmost independent columns in input order.
    std::size_t pivots = 0;
    for (std::size_t c = 0; c < m.cols() && pivots < rows; ++c) {
        std::size_t k = pivots;
        while (k < rows && !work.get(k, c)) ++k;
        if (k == rows) continue;
        work.swap_rows(pivots, k);
        lower.swap_rows(pivots, k);  // only columns < pivots are populated
        std::swap(perm[pivots], perm[k]);
        for (std::size_t r = pivots + 1; r < rows; ++r) {
            if (work.get(r, c)) {
                work.xor_row_into(pivots, r);
                lower.set(r, pivots, true);
            }
        }
        basis.push_back(c);
        ++pivots;
    }
    for (std::size_t i = 0; i < rows; ++i) lower.set(i, i, true);

    BinaryMatrix upper(rows, basis.empty() ? 1 : basis.size());
    if (basis.empty())
        throw std::invalid_argument("lu_decompose: zero matrix has no basis columns");
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (work.get(r, basis[j])) upper.set(r, j, true);

    return {std::move(lower), std::move(upper), std::move(perm), std::move(basis)};
}

BitVec forward_solve(const BinaryMatrix& lower, const BitVec& s) {
    const std::size_t n = lower.rows();
    if (lower.cols() != n) throw std::invalid_argument("forward_solve: lower must be square");
    if (s.size() != n) throw std::invalid_argument("forward_solve: rhs length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!lower.get(i, i))
            throw std::invalid_argument("forward_solve: lower is not unit triangular");
        for (std::size_t j = i + 1; j < n; ++j)
            if (lower.get(i, j))
                throw std::invalid_argument("forward_solve: lower has entries above the diagonal");
    }
    BitVec y(n);
    auto yw = y.words();
    for (std::size_t i = 0; i < n; ++i) {
        auto rw = lower.row(i);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k <= (i >> 6); ++k) acc ^= rw[k] & yw[k];
        // y bits >= i are still zero, so the diagonal term is excluded.
        bool v = (std::popcount(acc) & 1) ^ s.get(i);
        if (v) y.set(i, true);
    }
    return y;
}

BitVec back_solve(const BinaryMatrix& upper, const BitVec& y) {
    const std::size_t rows = upper.rows();
    const std::size_t cols = upper.cols();
    if (y.size() != rows) throw std::invalid_argument("back_solve: rhs length mismatch");
    if (cols > rows) throw std::invalid_argument("back_solve: wide upper factor");
    for (std::size_t i = 0; i < cols; ++i) {
        if (!upper.get(i, i))
            throw std::runtime_error("back_solve: zero diagonal, singular system");
        for (std::size_t j = 0; j < i; ++j)
            if (upper.get(i, j))
                throw std::invalid_argument("back_solve: upper has entries below the diagonal");
    }
    for (std::size_t r = cols; r < rows; ++r) {
        if (upper.row_weight(r) != 0)
            throw std::invalid_argument("back_solve: nonzero row below the leading block");
        if (y.get(r))
            throw std::runtime_error("back_solve: inconsistent system, no solution");
    }
    BitVec e(cols);
    for (std::size_t ii = cols; ii-- > 0;) {
        auto rw = upper.row(ii);
        auto ew = e.words();
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < rw.size(); ++k) acc ^= rw[k] & ew[k];
        // e bits <= ii are still zero, so only entries right of the diagonal count.
        bool v = (std::popcount(acc) & 1) ^ y.get(ii);
        if (v) e.set(ii, true);
    }
    return e;
}

std::vector<BitVec> kernel_basis(const BinaryMatrix& m) {
    const std::size_t n = m.cols();
    BinaryMatrix w = m;
    std::vector<std::size_t> pivot_col;
    std::size_t pivots = 0;
    for (std::size_t c = 0; c < n && pivots < w.rows(); ++c) {
        std::size_t k = pivots;
        while (k < w.rows() && !w.get(k, c)) ++k;
        if (k == w.rows()) continue;
        w.swap_rows(pivots, k);
        for (std::size_t r = 0; r < w.rows(); ++r)
            if (r != pivots && w.get(r, c)) w.xor_row_into(pivots, r);
        pivot_col.push_back(c);
        ++pivots;
    }

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_col) is_pivot[c] = true;

    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(n);
        v.set(f, true);
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            if (w.get(i, f)) v.set(pivot_col[i], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace qbp::gf2
