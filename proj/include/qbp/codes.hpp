#pragma once

// CSS code construction: planar surface codes, toric codes, bivariate-bicycle
// codes, and file-loaded codes, plus logical-operator derivation and the
// closed-form check-to-qubit index map used to cross-validate construction.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbp/gf2.hpp"

namespace qbp {

using gf2::BinaryMatrix;
using gf2::BitVec;

// Immutable after construction; safe to share across threads.
struct CssCode {
    std::string name;
    std::size_t n = 0;  // data qubits
    std::size_t k = 0;  // logical qubits
    std::size_t d = 0;  // declared distance (metadata for loaded/BB codes)
    BinaryMatrix h_x;   // X-sector checks x n
    BinaryMatrix h_z;   // Z-sector checks x n
    std::vector<BitVec> logicals_x;  // in ker(h_z), independent of rowspace(h_x)
    std::vector<BitVec> logicals_z;  // in ker(h_x), independent of rowspace(h_z)

    const BinaryMatrix& sector_matrix(char sector) const;
    // Logicals paired against residuals of the given decoding sector: decoding
    // with h_x leaves residuals in ker(h_x), whose harmless subspace is
    // rowspace(h_z); those residuals are tested against logicals_x.
    const std::vector<BitVec>& sector_logicals(char sector) const;
};

// Tanner adjacency of one parity-check matrix. Neighbor lists are ordered
// ascending and mirror the nonzero pattern exactly.
struct TannerGraph {
    std::vector<std::vector<std::uint32_t>> vn_neighbors;  // per VN: CN indices
    std::vector<std::vector<std::uint32_t>> cn_neighbors;  // per CN: VN indices
};

TannerGraph build_tanner(const BinaryMatrix& h);

// Assembles a CssCode from its two check matrices: validates CSS commutation
// (throws naming the first offending row), computes k from the GF(2) ranks and
// derives the logical operators.
CssCode make_css_code(std::string name, BinaryMatrix h_x, BinaryMatrix h_z,
                      std::size_t declared_d);

// Unrotated planar surface code, n = d^2 + (d-1)^2, k = 1. Horizontal edge
// qubits come first (row-major, d per lattice row), vertical edge qubits after.
CssCode build_surface_code(std::size_t d);

// Toric code with periodic boundary, n = 2 d^2, k = 2; every check has degree 4.
CssCode build_toric_code(std::size_t d);

// Bivariate-bicycle code: h_x = [A | B], h_z = [B^T | A^T] where A and B are
// sums of the cyclic shift matrices x^e y^f of size l*m given by the exponent
// pairs. Distance is caller-declared metadata.
CssCode build_bb_code(std::size_t l, std::size_t m,
                      const std::vector<std::pair<std::size_t, std::size_t>>& a_terms,
                      const std::vector<std::pair<std::size_t, std::size_t>>& b_terms,
                      std::string name = "bb", std::size_t declared_d = 0);

// X logicals from ker(h_z) modulo rowspace(h_x) and symmetrically for Z.
std::pair<std::vector<BitVec>, std::vector<BitVec>>
compute_logicals(const BinaryMatrix& h_x, const BinaryMatrix& h_z);

enum class CodeFamily { surface, toric };

// Closed-form map from a CN index to the (up to four) VN indices it touches,
// in the convention of the hardware memory layout: the "X" rows enumerate the
// constructed h_z (face) checks and the "Z" rows the constructed h_x (vertex)
// checks, identity row order. Boundary slots that do not exist are empty.
std::array<std::optional<std::uint32_t>, 4>
cn_to_vn_indices(CodeFamily family, char check, std::size_t d, std::size_t i);

// Number of CNs the map covers for a family/check/distance.
std::size_t cn_count(CodeFamily family, char check, std::size_t d);

// The constructed matrix a map row corresponds to (see above).
const BinaryMatrix& mapped_matrix(const CssCode& code, char check);

// Verifies that for every CN the non-empty map entries equal, as a set, the
// support of the corresponding constructed check row. Returns an error message
// naming the first mismatching row, or empty on success.
std::string check_index_map(const CssCode& code, CodeFamily family, char check);

struct CodeLoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CodeFileFormat { alist, dense_text };

// Single-matrix interchange.
BinaryMatrix load_alist(const std::string& path);
void save_alist(const BinaryMatrix& m, const std::string& path);
BinaryMatrix load_dense_text(const std::string& path);
void save_dense_text(const BinaryMatrix& m, const std::string& path);

// A code on disk is a pair <stem>.hx.<ext> / <stem>.hz.<ext> (ext: alist|txt).
// load_code accepts the stem or either member of the pair and validates the
// CSS invariants on load; d is caller-supplied metadata.
CssCode load_code(const std::string& path, CodeFileFormat format,
                  std::size_t declared_d = 0);
void save_code(const CssCode& code, const std::string& stem, CodeFileFormat format);

// Validation used by the CLI: runs every code invariant, printing one line per
// check when `out` is non-null. Returns true when all pass.
bool validate_code(const CssCode& code, std::optional<CodeFamily> family,
                   std::string* out);

} // namespace qbp
