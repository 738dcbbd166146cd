#pragma once

// Normalized min-sum BP with a randomized single-VN sign-flip policy, OSD-0
// post-processing, syndrome-vote preprocessing and fixed-point quantization.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qbp/codes.hpp"
#include "qbp/noise.hpp"
#include "qbp/rng.hpp"

namespace qbp {

enum class Policy {
    none,
    proposed,             // random unsatisfied CN, then max-unsat neighbor, then min |LLR|
    global_optimal,       // global max-unsat VN, then min |LLR|
    global_connectivity,  // global max-unsat VN, uniform pick
    local_random,         // random unsatisfied CN, uniform neighbor
    local_reliable,       // random unsatisfied CN, min |LLR| neighbor
};

enum class Placement { single_round, mv_synd, mv_bp, mv_osd };

const char* to_string(Policy p);
const char* to_string(Placement p);
Policy policy_from_string(const std::string& s);
Placement placement_from_string(const std::string& s);

// Signed two's-complement fixed point: int_bits includes the sign bit, so the
// representable range is [-2^(int_bits-1), 2^(int_bits-1) - 2^-frac_bits].
struct FixedPointFormat {
    int int_bits = 5;
    int frac_bits = 3;

    void validate() const;
    double grid() const;
    double min_value() const;
    double max_value() const;
    std::string label() const;  // e.g. "int5.3"
};

// Truncation toward negative infinity onto the grid, then saturation.
double quantize(double v, const FixedPointFormat& fmt);

struct BpConfig {
    std::size_t max_iter = 12;
    Policy policy = Policy::none;
    std::size_t skip_iters = 4;   // sign-flip stays inactive for iterations < skip_iters
    std::optional<FixedPointFormat> quant;
    // Reliability scaling for the CN update; unset uses 1 - 2^-(i+1).
    std::optional<double> fixed_scaling;
    bool use_osd = true;

    void validate() const;
};

// Default iteration budget as a function of code distance; the floor keeps a
// usable flip window after the skipped iterations even at small d.
std::size_t default_max_iter(std::size_t d);

struct DecodeOutcome {
    BitVec est_error;
    bool converged = false;
    // Terminating iteration index; equals max_iter when not converged (for
    // multi-round placements: max over the per-round decodes).
    std::size_t iterations = 0;
    bool invoked_osd = false;
    std::size_t lottery_flips = 0;
    std::vector<double> final_llr;
};

// ln((1-p)/p); rejects p outside (0,1).
double prior_llr(double p);

// Reference CN update: (-1)^s_c * scale(i) * prod sign(others) * min |others|.
double cn_update_message(std::span<const double> others, int s_c, std::size_t iteration);

// Flattened Tanner adjacency of one check matrix, edge ids in CN-major order,
// plus the packed rows used for syndrome estimation.
struct SectorGraph {
    std::size_t num_cn = 0, num_vn = 0, num_edges = 0;
    std::vector<std::uint32_t> cn_begin;  // num_cn + 1
    std::vector<std::uint32_t> cn_vn;     // edge -> VN
    std::vector<std::uint32_t> vn_begin;  // num_vn + 1
    std::vector<std::uint32_t> vn_edge;   // VN-major slot -> edge id
    std::vector<std::uint32_t> vn_cn;     // VN-major slot -> CN
    std::size_t words_per_row = 0;
    std::vector<std::uint64_t> rows;      // packed check rows

    static SectorGraph from_matrix(const BinaryMatrix& h);

    std::span<const std::uint32_t> cn_vns(std::size_t c) const {
        return {cn_vn.data() + cn_begin[c], cn_begin[c + 1] - cn_begin[c]};
    }
    std::span<const std::uint32_t> vn_cns(std::size_t v) const {
        return {vn_cn.data() + vn_begin[v], vn_begin[v + 1] - vn_begin[v]};
    }
};

// One step of the flip policy. `unsatisfied` is the CN set where the previous
// iteration's estimated syndrome disagrees with the measured one; empty set is
// a no-op. `uniform` supplies [0,1) draws (consumed lazily, policy-dependent).
std::optional<std::uint32_t> lottery_select(const SectorGraph& g, const BitVec& unsatisfied,
                                            std::span<const double> lam, Policy policy,
                                            const std::function<double()>& uniform);

// Reusable decoder for one check matrix. Instances hold per-decode scratch and
// are single-threaded; use one instance per thread.
class BpDecoder {
public:
    explicit BpDecoder(const BinaryMatrix& h);

    DecodeOutcome decode(const BitVec& syndrome, double p, const BpConfig& cfg, Rng& rng);

    const SectorGraph& graph() const { return g_; }

private:
    SectorGraph g_;
    std::vector<double> alpha_, beta_, lam_;
    BitVec est_, shat_, prev_shat_, unsat_;
    void estimate_syndrome();
};

struct UnsolvableSyndromeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves H e = s on the rank(H) most-suspect independent columns (ascending
// LLR order with stable index tie-break); remaining positions are zero.
BitVec osd0_decode(const BinaryMatrix& h, std::span<const double> llr, const BitVec& s);

// Per-bit majority across rounds; exact ties resolve to 0.
BitVec majority_vote(const std::vector<BitVec>& rounds);

// Smallest r such that every prefix vote over >= r rounds equals the vote over
// the whole window.
std::size_t vote_stabilization_round(const std::vector<BitVec>& rounds);

// Two-stage decode of a measurement window under one of the vote placements.
// Multi-round placements reseed each per-round decode with the same seed so
// identical round syndromes give identical round outcomes.
class SectorDecoder {
public:
    SectorDecoder(const CssCode& code, char sector);

    DecodeOutcome decode_window(const SyndromeWindow& window, double p, const BpConfig& cfg,
                                Placement placement, std::uint64_t decode_seed);

    const BinaryMatrix& matrix() const { return *h_; }

private:
    const CssCode* code_;
    const BinaryMatrix* h_;
    BpDecoder bp_;

    DecodeOutcome stage(const BitVec& syndrome, double p, const BpConfig& cfg,
                        std::uint64_t decode_seed);
};

DecodeOutcome two_stage_decode(const CssCode& code, char sector, const SyndromeWindow& window,
                               double p, const BpConfig& cfg, Placement placement,
                               std::uint64_t decode_seed);

} // namespace qbp
