#include "qbp/codes.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qbp {

namespace {

// Incremental GF(2) row-echelon structure used to test independence from a
// growing row space.
class Echelon {
public:
    // Reduces v against the stored rows; if a nonzero residual remains it is
    // stored and returned, otherwise nullopt (v was dependent).
    std::optional<BitVec> add(BitVec v) {
        for (const auto& [pivot, row] : rows_) {
            if (v.get(pivot)) v ^= row;
        }
        auto ones = v.ones();
        if (ones.empty()) return std::nullopt;
        rows_.emplace_back(ones.front(), v);
        return v;
    }

    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::pair<std::size_t, BitVec>> rows_;
};

void require_sector(char sector) {
    if (sector != 'X' && sector != 'Z')
        throw std::invalid_argument("sector must be 'X' or 'Z'");
}

} // namespace

const BinaryMatrix& CssCode::sector_matrix(char sector) const {
    require_sector(sector);
    return sector == 'X' ? h_x : h_z;
}

const std::vector<BitVec>& CssCode::sector_logicals(char sector) const {
    require_sector(sector);
    return sector == 'X' ? logicals_x : logicals_z;
}

TannerGraph build_tanner(const BinaryMatrix& h) {
    TannerGraph g;
    g.vn_neighbors.resize(h.cols());
    g.cn_neighbors.resize(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (auto c : h.row_support(r)) {
            g.cn_neighbors[r].push_back(static_cast<std::uint32_t>(c));
            g.vn_neighbors[c].push_back(static_cast<std::uint32_t>(r));
        }
    }
    return g;
}

std::pair<std::vector<BitVec>, std::vector<BitVec>>
compute_logicals(const BinaryMatrix& h_x, const BinaryMatrix& h_z) {
    auto pick = [](const BinaryMatrix& stab_rows, const BinaryMatrix& commuting_with) {
        Echelon ech;
        for (std::size_t r = 0; r < stab_rows.rows(); ++r)
            ech.add(stab_rows.row_vec(r));
        std::vector<BitVec> logicals;
        for (auto& v : gf2::kernel_basis(commuting_with)) {
            if (auto residual = ech.add(std::move(v)))
                logicals.push_back(std::move(*residual));
        }
        return logicals;
    };
    return {pick(h_x, h_z), pick(h_z, h_x)};
}

CssCode make_css_code(std::string name, BinaryMatrix h_x, BinaryMatrix h_z,
                      std::size_t declared_d) {
    if (h_x.cols() != h_z.cols())
        throw CodeLoadError("check matrices disagree on qubit count: " +
                            std::to_string(h_x.cols()) + " vs " + std::to_string(h_z.cols()));
    for (std::size_t r = 0; r < h_x.rows(); ++r) {
        BitVec syn = gf2::matvec(h_z, h_x.row_vec(r));
        if (syn.any())
            throw CodeLoadError("CSS commutation violated: h_x row " + std::to_string(r) +
                                " anticommutes with h_z row " +
                                std::to_string(syn.ones().front()));
    }
    CssCode code;
    code.name = std::move(name);
    code.n = h_x.cols();
    std::size_t rx = gf2::rank(h_x);
    std::size_t rz = gf2::rank(h_z);
    code.k = code.n - rx - rz;
    code.d = declared_d;
    code.h_x = std::move(h_x);
    code.h_z = std::move(h_z);
    std::tie(code.logicals_x, code.logicals_z) = compute_logicals(code.h_x, code.h_z);
    if (code.logicals_x.size() != code.k || code.logicals_z.size() != code.k)
        throw CodeLoadError("logical operator count disagrees with n - rank(h_x) - rank(h_z)");
    return code;
}

// Planar surface code qubit numbering: horizontal edge (y, x) -> y*d + x for
// x, y in [0, d); vertical edge (y, x) -> d^2 + y*(d-1) + (x-1) for x in
// [1, d-1], y in [0, d-1). Vertex checks sit on interior lattice points and
// form h_x; face checks form h_z.
CssCode build_surface_code(std::size_t d) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("surface code distance must be odd and >= 3");
    const std::size_t n = d * d + (d - 1) * (d - 1);
    const std::size_t m = d * (d - 1);
    BinaryMatrix hx(m, n), hz(m, n);

    auto horiz = [d](std::size_t y, std::size_t x) { return y * d + x; };
    auto vert = [d](std::size_t y, std::size_t x) { return d * d + y * (d - 1) + (x - 1); };

    // Vertex check at lattice point (x, y), x in [1, d-1], y in [0, d).
    for (std::size_t y = 0; y < d; ++y) {
        for (std::size_t x = 1; x <= d - 1; ++x) {
            std::size_t i = y * (d - 1) + (x - 1);
            hx.set(i, horiz(y, x - 1), true);
            hx.set(i, horiz(y, x), true);
            if (y > 0) hx.set(i, vert(y - 1, x), true);
            if (y < d - 1) hx.set(i, vert(y, x), true);
        }
    }
    // Face check spanning rows [g, g+1] at column c.
    for (std::size_t g = 0; g + 1 < d; ++g) {
        for (std::size_t c = 0; c < d; ++c) {
            std::size_t i = g * d + c;
            hz.set(i, horiz(g, c), true);
            hz.set(i, horiz(g + 1, c), true);
            if (c > 0) hz.set(i, vert(g, c), true);
            if (c < d - 1) hz.set(i, vert(g, c + 1), true);
        }
    }
    return make_css_code("surface_d" + std::to_string(d), std::move(hx), std::move(hz), d);
}

// Toric code numbering: horizontal edge (y, x) -> y*d + x spans columns
// [x-1, x] at row y; vertical edge (y, x) -> d^2 + y*d + x sits at column x
// between rows y and y+1. Both directions are periodic.
CssCode build_toric_code(std::size_t d) {
    if (d < 2) throw std::invalid_argument("toric code distance must be >= 2");
    const std::size_t n = 2 * d * d;
    const std::size_t m = d * d;
    BinaryMatrix hx(m, n), hz(m, n);

    auto horiz = [d](std::size_t y, std::size_t x) { return y * d + x % d; };
    auto vert = [d](std::size_t y, std::size_t x) { return d * d + (y % d) * d + x % d; };

    for (std::size_t y = 0; y < d; ++y) {
        for (std::size_t x = 0; x < d; ++x) {
            std::size_t i = y * d + x;
            // Vertex check at point (x, y).
            hx.set(i, horiz(y, x), true);
            hx.set(i, horiz(y, x + 1), true);
            hx.set(i, vert(y, x), true);
            hx.set(i, vert(y + d - 1, x), true);
            // Face check with top edge (y, x).
            hz.set(i, horiz(y, x), true);
            hz.set(i, horiz((y + 1) % d, x) + 0, true);
            hz.set(i, vert(y, x + d - 1), true);
            hz.set(i, vert(y, x), true);
        }
    }
    return make_css_code("toric_d" + std::to_string(d), std::move(hx), std::move(hz), d);
}

CssCode build_bb_code(std::size_t l, std::size_t m,
                      const std::vector<std::pair<std::size_t, std::size_t>>& a_terms,
                      const std::vector<std::pair<std::size_t, std::size_t>>& b_terms,
                      std::string name, std::size_t declared_d) {
    if (l < 1 || m < 1) throw std::invalid_argument("bb code: l and m must be >= 1");
    if (a_terms.empty() || b_terms.empty())
        throw std::invalid_argument("bb code: term lists must be nonempty");
    const std::size_t lm = l * m;

    auto shift_sum = [&](const std::vector<std::pair<std::size_t, std::size_t>>& terms) {
        BinaryMatrix s(lm, lm);
        for (auto [ex, ey] : terms) {
            if (ex >= l || ey >= m)
                throw std::invalid_argument("bb code: exponent outside [0,l) x [0,m)");
            for (std::size_t i = 0; i < l; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    std::size_t r = i * m + j;
                    std::size_t c = ((i + ex) % l) * m + ((j + ey) % m);
                    s.set(r, c, !s.get(r, c));  // GF(2) sum; duplicate terms cancel
                }
        }
        return s;
    };

    BinaryMatrix a = shift_sum(a_terms);
    BinaryMatrix b = shift_sum(b_terms);
    BinaryMatrix at = a.transposed();
    BinaryMatrix bt = b.transposed();

    BinaryMatrix hx(lm, 2 * lm), hz(lm, 2 * lm);
    for (std::size_t r = 0; r < lm; ++r) {
        for (auto c : a.row_support(r)) hx.set(r, c, true);
        for (auto c : b.row_support(r)) hx.set(r, lm + c, true);
        for (auto c : bt.row_support(r)) hz.set(r, c, true);
        for (auto c : at.row_support(r)) hz.set(r, lm + c, true);
    }
    return make_css_code(std::move(name), std::move(hx), std::move(hz), declared_d);
}

std::size_t cn_count(CodeFamily family, char check, std::size_t d) {
    require_sector(check);
    return family == CodeFamily::surface ? d * (d - 1) : d * d;
}

std::array<std::optional<std::uint32_t>, 4>
cn_to_vn_indices(CodeFamily family, char check, std::size_t d, std::size_t i) {
    require_sector(check);
    if (i >= cn_count(family, check, d))
        throw std::invalid_argument("cn_to_vn_indices: CN index out of range");
    const std::size_t dd = d * d;
    std::array<std::optional<std::uint32_t>, 4> out;
    auto idx = [](std::size_t v) { return std::optional<std::uint32_t>(static_cast<std::uint32_t>(v)); };

    if (family == CodeFamily::surface) {
        if (check == 'X') {
            out[0] = idx(i);
            out[1] = idx(i + d);
            if (i % d != 0) out[2] = idx(dd + i - 1 - i / d);
            if (i % d != d - 1) out[3] = idx(dd + i - i / d);
        } else {
            // Corrected branches: row offset uses floor(i/(d-1)); the upper
            // vertical slot exists from the second row of vertex checks on and
            // the lower one vanishes on the last row.
            std::size_t y = i / (d - 1);
            out[0] = idx(i + y);
            out[1] = idx(i + y + 1);
            if (i >= d - 1) out[2] = idx(dd + i - (d - 1));
            if (i < (d - 1) * (d - 1)) out[3] = idx(dd + i);
        }
    } else {
        if (check == 'X') {
            out[0] = idx(i);
            // Corrected wrap conditions for 0-indexed CNs.
            out[1] = idx(i >= d * (d - 1) ? i - d * (d - 1) : i + d);
            out[2] = idx(i % d == 0 ? dd + i + d - 1 : dd + i - 1);
            out[3] = idx(dd + i);
        } else {
            out[0] = idx(i);
            out[1] = idx(i % d == d - 1 ? i - d + 1 : i + 1);
            out[2] = idx(i < d ? 2 * dd - d + i : dd + i - d);
            out[3] = idx(dd + i);
        }
    }
    return out;
}

const BinaryMatrix& mapped_matrix(const CssCode& code, char check) {
    require_sector(check);
    // The map's "X" rows enumerate the face checks (constructed h_z) and its
    // "Z" rows the vertex checks (constructed h_x).
    return check == 'X' ? code.h_z : code.h_x;
}

std::string check_index_map(const CssCode& code, CodeFamily family, char check) {
    const BinaryMatrix& h = mapped_matrix(code, check);
    std::size_t count = cn_count(family, check, code.d);
    if (count != h.rows())
        return "index map covers " + std::to_string(count) + " CNs but matrix has " +
               std::to_string(h.rows()) + " rows";
    for (std::size_t i = 0; i < count; ++i) {
        auto slots = cn_to_vn_indices(family, check, code.d, i);
        std::vector<std::size_t> got;
        for (const auto& s : slots)
            if (s) got.push_back(*s);
        std::sort(got.begin(), got.end());
        if (std::unique(got.begin(), got.end()) != got.end())
            return "duplicate VN index at CN " + std::to_string(i);
        auto want = h.row_support(i);
        if (got != want)
            return "CN " + std::to_string(i) + " maps to a different support than check row " +
                   std::to_string(i);
    }
    return {};
}

namespace {

std::vector<long long> read_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CodeLoadError("cannot open " + path);
    std::vector<long long> toks;
    long long v;
    while (in >> v) toks.push_back(v);
    if (!in.eof()) throw CodeLoadError(path + ": non-numeric token");
    return toks;
}

} // namespace

BinaryMatrix load_alist(const std::string& path) {
    auto t = read_tokens(path);
    std::size_t pos = 0;
    auto next = [&](const char* what) {
        if (pos >= t.size()) throw CodeLoadError(path + ": truncated file reading " + what);
        return t[pos++];
    };
    long long n = next("n");
    long long m = next("m");
    if (n < 1 || m < 1) throw CodeLoadError(path + ": bad dimensions in header");
    long long max_col = next("max column degree");
    long long max_row = next("max row degree");
    std::vector<long long> col_deg(n), row_deg(m);
    for (auto& v : col_deg) v = next("column degree");
    for (auto& v : row_deg) v = next("row degree");

    BinaryMatrix h(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (long long c = 0; c < n; ++c) {
        if (col_deg[c] < 0 || col_deg[c] > max_col)
            throw CodeLoadError(path + ": bad degree for column " + std::to_string(c));
        for (long long j = 0; j < max_col; ++j) {
            long long r = next("column entry");
            if (j >= col_deg[c]) {
                if (r != 0) throw CodeLoadError(path + ": expected pad zero in column " + std::to_string(c));
                continue;
            }
            if (r < 1 || r > m)
                throw CodeLoadError(path + ": row index out of range in column " + std::to_string(c));
            h.set(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c), true);
        }
    }
    // Cross-check the row lists against what the column lists built.
    for (long long r = 0; r < m; ++r) {
        std::vector<std::size_t> listed;
        for (long long j = 0; j < max_row; ++j) {
            long long c = next("row entry");
            if (j >= row_deg[r]) {
                if (c != 0) throw CodeLoadError(path + ": expected pad zero in row " + std::to_string(r));
                continue;
            }
            if (c < 1 || c > n)
                throw CodeLoadError(path + ": column index out of range in row " + std::to_string(r));
            listed.push_back(static_cast<std::size_t>(c - 1));
        }
        std::sort(listed.begin(), listed.end());
        if (listed != h.row_support(static_cast<std::size_t>(r)))
            throw CodeLoadError(path + ": row list disagrees with column lists at row " +
                                std::to_string(r));
    }
    return h;
}

void save_alist(const BinaryMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CodeLoadError("cannot write " + path);
    BinaryMatrix t = m.transposed();
    std::size_t max_col = 0, max_row = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) max_col = std::max(max_col, t.row_weight(c));
    for (std::size_t r = 0; r < m.rows(); ++r) max_row = std::max(max_row, m.row_weight(r));
    out << m.cols() << ' ' << m.rows() << '\n';
    out << max_col << ' ' << max_row << '\n';
    for (std::size_t c = 0; c < m.cols(); ++c)
        out << t.row_weight(c) << (c + 1 == m.cols() ? '\n' : ' ');
    for (std::size_t r = 0; r < m.rows(); ++r)
        out << m.row_weight(r) << (r + 1 == m.rows() ? '\n' : ' ');
    auto emit = [&out](const std::vector<std::size_t>& support, std::size_t width) {
        std::size_t j = 0;
        for (; j < support.size(); ++j) out << (support[j] + 1) << (j + 1 == width ? "" : " ");
        for (; j < width; ++j) out << 0 << (j + 1 == width ? "" : " ");
        out << '\n';
    };
    for (std::size_t c = 0; c < m.cols(); ++c) emit(t.row_support(c), max_col);
    for (std::size_t r = 0; r < m.rows(); ++r) emit(m.row_support(r), max_row);
}

BinaryMatrix load_dense_text(const std::string& path) {
    auto t = read_tokens(path);
    if (t.size() < 2) throw CodeLoadError(path + ": missing header");
    long long n = t[0], m = t[1];
    if (n < 1 || m < 1) throw CodeLoadError(path + ": bad dimensions in header");
    if (t.size() != 2 + static_cast<std::size_t>(n) * static_cast<std::size_t>(m))
        throw CodeLoadError(path + ": expected " + std::to_string(n * m) + " bits");
    BinaryMatrix h(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (long long r = 0; r < m; ++r)
        for (long long c = 0; c < n; ++c) {
            long long b = t[2 + r * n + c];
            if (b != 0 && b != 1)
                throw CodeLoadError(path + ": non-bit entry at row " + std::to_string(r));
            if (b) h.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), true);
        }
    return h;
}

void save_dense_text(const BinaryMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CodeLoadError("cannot write " + path);
    out << m.cols() << ' ' << m.rows() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            out << (m.get(r, c) ? 1 : 0) << (c + 1 == m.cols() ? '\n' : ' ');
    }
}

namespace {

std::string format_ext(CodeFileFormat f) {
    return f == CodeFileFormat::alist ? "alist" : "txt";
}

std::string strip_pair_suffix(const std::string& path, CodeFileFormat f) {
    for (const char* sector : {".hx.", ".hz."}) {
        std::string suffix = sector + format_ext(f);
        if (path.size() > suffix.size() &&
            path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
            return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

} // namespace

CssCode load_code(const std::string& path, CodeFileFormat format, std::size_t declared_d) {
    std::string stem = strip_pair_suffix(path, format);
    std::string px = stem + ".hx." + format_ext(format);
    std::string pz = stem + ".hz." + format_ext(format);
    auto load = format == CodeFileFormat::alist ? load_alist : load_dense_text;
    BinaryMatrix hx = load(px);
    BinaryMatrix hz = load(pz);
    std::string name = stem;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    return make_css_code(std::move(name), std::move(hx), std::move(hz), declared_d);
}

void save_code(const CssCode& code, const std::string& stem, CodeFileFormat format) {
    auto save = format == CodeFileFormat::alist ? save_alist : save_dense_text;
    save(code.h_x, stem + ".hx." + format_ext(format));
    save(code.h_z, stem + ".hz." + format_ext(format));
}

bool validate_code(const CssCode& code, std::optional<CodeFamily> family, std::string* out) {
    bool ok = true;
    std::ostringstream os;
    auto report = [&](const std::string& what, const std::string& err) {
        bool pass = err.empty();
        ok = ok && pass;
        os << (pass ? "pass" : "FAIL") << "  " << what;
        if (!pass) os << ": " << err;
        os << '\n';
    };

    {
        std::string err;
        for (std::size_t r = 0; r < code.h_x.rows() && err.empty(); ++r) {
            BitVec syn = gf2::matvec(code.h_z, code.h_x.row_vec(r));
            if (syn.any())
                err = "h_x row " + std::to_string(r) + " anticommutes with h_z row " +
                      std::to_string(syn.ones().front());
        }
        report("CSS commutation", err);
    }
    {
        std::size_t rx = gf2::rank(code.h_x), rz = gf2::rank(code.h_z);
        std::string err;
        if (code.n - rx - rz != code.k)
            err = "k=" + std::to_string(code.k) + " but n-rank(h_x)-rank(h_z)=" +
                  std::to_string(code.n - rx - rz);
        report("rank/k consistency", err);
    }
    {
        std::string err;
        if (code.logicals_x.size() != code.k || code.logicals_z.size() != code.k)
            err = "logical count != k";
        for (std::size_t i = 0; i < code.logicals_x.size() && err.empty(); ++i)
            if (gf2::matvec(code.h_z, code.logicals_x[i]).any())
                err = "X logical " + std::to_string(i) + " not in ker(h_z)";
        for (std::size_t i = 0; i < code.logicals_z.size() && err.empty(); ++i)
            if (gf2::matvec(code.h_x, code.logicals_z[i]).any())
                err = "Z logical " + std::to_string(i) + " not in ker(h_x)";
        if (err.empty()) {
            // Independence: stacking the logicals on the check rows must raise the rank.
            for (char sector : {'X', 'Z'}) {
                const auto& logicals = sector == 'X' ? code.logicals_x : code.logicals_z;
                const auto& h = sector == 'X' ? code.h_x : code.h_z;
                Echelon ech;
                for (std::size_t r = 0; r < h.rows(); ++r) ech.add(h.row_vec(r));
                for (const auto& l : logicals)
                    if (!ech.add(l)) {
                        err = std::string(1, sector) + " logical lies in the check row space";
                        break;
                    }
                if (!err.empty()) break;
            }
        }
        report("logical operators", err);
    }
    if (family) {
        report("index map (X rows)", check_index_map(code, *family, 'X'));
        report("index map (Z rows)", check_index_map(code, *family, 'Z'));
        if (*family == CodeFamily::toric) {
            std::string err;
            std::size_t want = code.d * code.d - 1;
            if (gf2::rank(code.h_x) != want || gf2::rank(code.h_z) != want)
                err = "expected one redundant row per sector (rank " + std::to_string(want) + ")";
            report("toric redundant row", err);
        }
    }
    if (out) *out = os.str();
    return ok;
}

} // namespace qbp
