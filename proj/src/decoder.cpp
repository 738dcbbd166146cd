#include "qbp/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qbp {

const char* to_string(Policy p) {
    switch (p) {
        case Policy::none: return "none";
        case Policy::proposed: return "proposed";
        case Policy::global_optimal: return "global-optimal";
        case Policy::global_connectivity: return "global-connectivity";
        case Policy::local_random: return "local-random";
        case Policy::local_reliable: return "local-reliable";
    }
    return "?";
}

const char* to_string(Placement p) {
    switch (p) {
        case Placement::single_round: return "single-round";
        case Placement::mv_synd: return "mv-synd";
        case Placement::mv_bp: return "mv-bp";
        case Placement::mv_osd: return "mv-osd";
    }
    return "?";
}

Policy policy_from_string(const std::string& s) {
    for (auto p : {Policy::none, Policy::proposed, Policy::global_optimal,
                   Policy::global_connectivity, Policy::local_random, Policy::local_reliable})
        if (s == to_string(p)) return p;
    throw std::invalid_argument("unknown policy: " + s);
}

Placement placement_from_string(const std::string& s) {
    for (auto p : {Placement::single_round, Placement::mv_synd, Placement::mv_bp, Placement::mv_osd})
        if (s == to_string(p)) return p;
    throw std::invalid_argument("unknown placement: " + s);
}

void FixedPointFormat::validate() const {
    if (int_bits < 1 || frac_bits < 0)
        throw std::invalid_argument("fixed-point format needs int_bits >= 1, frac_bits >= 0");
}

double FixedPointFormat::grid() const { return std::ldexp(1.0, -frac_bits); }
double FixedPointFormat::min_value() const { return -std::ldexp(1.0, int_bits - 1); }
double FixedPointFormat::max_value() const { return std::ldexp(1.0, int_bits - 1) - grid(); }

std::string FixedPointFormat::label() const {
    return "int" + std::to_string(int_bits) + "." + std::to_string(frac_bits);
}

double quantize(double v, const FixedPointFormat& fmt) {
    double q = std::ldexp(std::floor(std::ldexp(v, fmt.frac_bits)), -fmt.frac_bits);
    if (q < fmt.min_value()) return fmt.min_value();
    if (q > fmt.max_value()) return fmt.max_value();
    return q == 0.0 ? 0.0 : q;  // canonicalize -0.0
}

void BpConfig::validate() const {
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (quant) quant->validate();
}

std::size_t default_max_iter(std::size_t d) { return std::max<std::size_t>(2 * d, 12); }

double prior_llr(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("prior_llr needs p in (0,1)");
    return std::log((1.0 - p) / p);
}

namespace {

inline double iteration_scale(std::size_t i, const BpConfig& cfg) {
    if (cfg.fixed_scaling) return *cfg.fixed_scaling;
    return 1.0 - std::ldexp(1.0, -static_cast<int>(i + 1));
}

} // namespace

double cn_update_message(std::span<const double> others, int s_c, std::size_t iteration) {
    if (others.empty()) throw std::invalid_argument("cn_update_message: empty neighbor set");
    double mag = std::numeric_limits<double>::infinity();
    int neg = 0;
    for (double v : others) {
        if (v < 0.0) ++neg;
        mag = std::min(mag, std::fabs(v));
    }
    double sign = ((neg & 1) ^ (s_c & 1)) ? -1.0 : 1.0;
    return sign * (1.0 - std::ldexp(1.0, -static_cast<int>(iteration + 1))) * mag;
}

SectorGraph SectorGraph::from_matrix(const BinaryMatrix& h) {
    SectorGraph g;
    g.num_cn = h.rows();
    g.num_vn = h.cols();
    g.cn_begin.assign(g.num_cn + 1, 0);

    std::vector<std::vector<std::uint32_t>> per_vn(g.num_vn);
    for (std::size_t c = 0; c < g.num_cn; ++c) {
        auto support = h.row_support(c);
        if (support.size() < 2)
            throw std::invalid_argument("check row " + std::to_string(c) +
                                        " has degree < 2; BP needs at least two neighbors");
        for (auto v : support) {
            per_vn[v].push_back(static_cast<std::uint32_t>(g.cn_vn.size()));
            g.cn_vn.push_back(static_cast<std::uint32_t>(v));
        }
        g.cn_begin[c + 1] = static_cast<std::uint32_t>(g.cn_vn.size());
    }
    g.num_edges = g.cn_vn.size();

    g.vn_begin.assign(g.num_vn + 1, 0);
    for (std::size_t v = 0; v < g.num_vn; ++v) {
        for (auto e : per_vn[v]) g.vn_edge.push_back(e);
        g.vn_begin[v + 1] = static_cast<std::uint32_t>(g.vn_edge.size());
    }
    g.vn_cn.resize(g.num_edges);
    {
        std::size_t c = 0;
        std::vector<std::uint32_t> edge_cn(g.num_edges);
        for (std::size_t e = 0; e < g.num_edges; ++e) {
            while (e >= g.cn_begin[c + 1]) ++c;
            edge_cn[e] = static_cast<std::uint32_t>(c);
        }
        for (std::size_t s = 0; s < g.vn_edge.size(); ++s) g.vn_cn[s] = edge_cn[g.vn_edge[s]];
    }

    g.words_per_row = gf2::BitVec::word_count(g.num_vn);
    g.rows.resize(g.num_cn * g.words_per_row);
    for (std::size_t c = 0; c < g.num_cn; ++c) {
        auto src = h.row(c);
        std::copy(src.begin(), src.end(), g.rows.begin() + c * g.words_per_row);
    }
    return g;
}

std::optional<std::uint32_t> lottery_select(const SectorGraph& g, const BitVec& unsatisfied,
                                            std::span<const double> lam, Policy policy,
                                            const std::function<double()>& uniform) {
    if (policy == Policy::none) return std::nullopt;
    auto unsat_cns = unsatisfied.ones();
    if (unsat_cns.empty()) return std::nullopt;

    auto unsat_count = [&](std::uint32_t v) {
        std::size_t n = 0;
        for (auto c : g.vn_cns(v)) n += unsatisfied.get(c);
        return n;
    };
    auto draw_index = [&](std::size_t size) {
        auto k = static_cast<std::size_t>(uniform() * static_cast<double>(size));
        return std::min(k, size - 1);
    };
    auto pick_cn = [&]() { return static_cast<std::uint32_t>(unsat_cns[draw_index(unsat_cns.size())]); };

    auto min_abs_llr = [&](std::span<const std::uint32_t> vns) {
        std::uint32_t best = vns.front();
        for (auto v : vns.subspan(1))
            if (std::fabs(lam[v]) < std::fabs(lam[best])) best = v;
        return best;
    };
    auto max_unsat_subset = [&](std::span<const std::uint32_t> vns) {
        std::size_t best = 0;
        for (auto v : vns) best = std::max(best, unsat_count(v));
        std::vector<std::uint32_t> out;
        for (auto v : vns)
            if (unsat_count(v) == best) out.push_back(v);
        return out;
    };

    switch (policy) {
        case Policy::proposed: {
            auto vmax = max_unsat_subset(g.cn_vns(pick_cn()));
            return min_abs_llr(vmax);
        }
        case Policy::global_optimal:
        case Policy::global_connectivity: {
            std::size_t best = 0;
            for (std::uint32_t v = 0; v < g.num_vn; ++v) best = std::max(best, unsat_count(v));
            std::vector<std::uint32_t> vmax;
            for (std::uint32_t v = 0; v < g.num_vn; ++v)
                if (unsat_count(v) == best) vmax.push_back(v);
            if (policy == Policy::global_optimal) return min_abs_llr(vmax);
            return vmax[draw_index(vmax.size())];
        }
        case Policy::local_random: {
            auto vns = g.cn_vns(pick_cn());
            return vns[draw_index(vns.size())];
        }
        case Policy::local_reliable:
            return min_abs_llr(g.cn_vns(pick_cn()));
        case Policy::none:
            break;
    }
    return std::nullopt;
}

BpDecoder::BpDecoder(const BinaryMatrix& h) : g_(SectorGraph::from_matrix(h)) {
    alpha_.resize(g_.num_edges);
    beta_.resize(g_.num_edges);
    lam_.resize(g_.num_vn);
    est_ = BitVec(g_.num_vn);
    shat_ = BitVec(g_.num_cn);
    prev_shat_ = BitVec(g_.num_cn);
    unsat_ = BitVec(g_.num_cn);
}

void BpDecoder::estimate_syndrome() {
    auto ew = est_.words();
    for (std::size_t c = 0; c < g_.num_cn; ++c) {
        const std::uint64_t* row = g_.rows.data() + c * g_.words_per_row;
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < g_.words_per_row; ++k) acc ^= row[k] & ew[k];
        shat_.set(c, std::popcount(acc) & 1);
    }
}

DecodeOutcome BpDecoder::decode(const BitVec& syndrome, double p, const BpConfig& cfg, Rng& rng) {
    cfg.validate();
    if (syndrome.size() != g_.num_cn)
        throw std::invalid_argument("decode: syndrome length != number of checks");

    double mu = prior_llr(p);
    if (cfg.quant) mu = quantize(mu, *cfg.quant);

    DecodeOutcome out;
    out.converged = false;
    out.iterations = cfg.max_iter;
    est_.clear();
    prev_shat_.clear();
    bool have_prev = false;

    for (std::size_t i = 0; i < cfg.max_iter; ++i) {
        if (i == 0) {
            std::fill(alpha_.begin(), alpha_.end(), mu);
        } else {
            for (std::size_t v = 0; v < g_.num_vn; ++v) {
                double lv = lam_[v];
                for (std::uint32_t s = g_.vn_begin[v]; s < g_.vn_begin[v + 1]; ++s) {
                    std::uint32_t e = g_.vn_edge[s];
                    double a = lv - beta_[e];
                    alpha_[e] = cfg.quant ? quantize(a, *cfg.quant) : a;
                }
            }
        }

        const double scale = iteration_scale(i, cfg);
        for (std::size_t c = 0; c < g_.num_cn; ++c) {
            const std::uint32_t b = g_.cn_begin[c], e_end = g_.cn_begin[c + 1];
            double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
            std::uint32_t min1_e = b;
            int neg = 0;
            for (std::uint32_t e = b; e < e_end; ++e) {
                double a = alpha_[e];
                if (a < 0.0) ++neg;
                double m = std::fabs(a);
                if (m < min1) {
                    min2 = min1;
                    min1 = m;
                    min1_e = e;
                } else if (m < min2) {
                    min2 = m;
                }
            }
            const double base = syndrome.get(c) ? -scale : scale;
            for (std::uint32_t e = b; e < e_end; ++e) {
                int neg_others = neg - (alpha_[e] < 0.0 ? 1 : 0);
                double mag = (e == min1_e) ? min2 : min1;
                double val = (neg_others & 1) ? -base * mag : base * mag;
                beta_[e] = cfg.quant ? quantize(val, *cfg.quant) : val;
            }
        }

        for (std::size_t v = 0; v < g_.num_vn; ++v) {
            double sum = mu;
            for (std::uint32_t s = g_.vn_begin[v]; s < g_.vn_begin[v + 1]; ++s)
                sum += beta_[g_.vn_edge[s]];
            lam_[v] = cfg.quant ? quantize(sum, *cfg.quant) : sum;
            est_.set(v, lam_[v] <= 0.0);
        }

        estimate_syndrome();
        if (shat_ == syndrome) {
            out.converged = true;
            out.iterations = i;
            break;
        }

        if (cfg.policy != Policy::none && i >= cfg.skip_iters && have_prev) {
            unsat_ = prev_shat_;
            unsat_ ^= syndrome;
            auto pick = lottery_select(g_, unsat_, lam_, cfg.policy,
                                       [&rng] { return rng.next_unit(); });
            if (pick) {
                double flipped = -lam_[*pick];
                lam_[*pick] = cfg.quant ? quantize(flipped, *cfg.quant) : flipped;
                ++out.lottery_flips;
            }
        }
        prev_shat_ = shat_;
        have_prev = true;
    }

    out.est_error = est_;
    out.final_llr = lam_;
    return out;
}

BitVec osd0_decode(const BinaryMatrix& h, std::span<const double> llr, const BitVec& s) {
    if (llr.size() != h.cols())
        throw std::invalid_argument("osd0_decode: LLR length != columns");
    if (s.size() != h.rows())
        throw std::invalid_argument("osd0_decode: syndrome length != rows");

    std::vector<std::size_t> order(h.cols());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (llr[a] != llr[b]) return llr[a] < llr[b];
        return a < b;
    });

    auto f = gf2::lu_decompose(h.permuted_cols(order));
    const std::size_t r = f.col_basis.size();

    BitVec ps(h.rows());
    for (std::size_t k = 0; k < h.rows(); ++k)
        if (s.get(f.row_perm[k])) ps.set(k, true);

    BitVec y = gf2::forward_solve(f.lower, ps);
    for (std::size_t k = r; k < h.rows(); ++k)
        if (y.get(k))
            throw UnsolvableSyndromeError("osd0_decode: syndrome outside the column space");

    BitVec e_s = gf2::back_solve(f.upper, y);
    BitVec e(h.cols());
    for (std::size_t j = 0; j < r; ++j)
        if (e_s.get(j)) e.set(order[f.col_basis[j]], true);
    return e;
}

BitVec majority_vote(const std::vector<BitVec>& rounds) {
    if (rounds.empty()) throw std::invalid_argument("majority_vote: no rounds");
    const std::size_t m = rounds[0].size();
    BitVec out(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t ones = 0;
        for (const auto& row : rounds) ones += row.get(j);
        if (2 * ones > rounds.size()) out.set(j, true);
    }
    return out;
}

std::size_t vote_stabilization_round(const std::vector<BitVec>& rounds) {
    if (rounds.empty()) throw std::invalid_argument("vote_stabilization_round: no rounds");
    const std::size_t m = rounds[0].size();
    const std::size_t r_total = rounds.size();
    BitVec full = majority_vote(rounds);

    std::vector<std::size_t> ones(m, 0);
    std::size_t last_mismatch = 0;
    for (std::size_t r = 1; r <= r_total; ++r) {
        for (std::size_t j = 0; j < m; ++j) ones[j] += rounds[r - 1].get(j);
        bool match = true;
        for (std::size_t j = 0; j < m && match; ++j)
            match = ((2 * ones[j] > r) == full.get(j));
        if (!match) last_mismatch = r;
    }
    // The full-window prefix always matches, so last_mismatch < r_total.
    return last_mismatch + 1;
}

SectorDecoder::SectorDecoder(const CssCode& code, char sector)
    : code_(&code), h_(&code.sector_matrix(sector)), bp_(*h_) {}

DecodeOutcome SectorDecoder::stage(const BitVec& syndrome, double p, const BpConfig& cfg,
                                   std::uint64_t decode_seed) {
    Rng rng(decode_seed);
    DecodeOutcome out = bp_.decode(syndrome, p, cfg, rng);
    if (!out.converged && cfg.use_osd) {
        out.est_error = osd0_decode(*h_, out.final_llr, syndrome);
        out.invoked_osd = true;
    }
    return out;
}

DecodeOutcome SectorDecoder::decode_window(const SyndromeWindow& window, double p,
                                           const BpConfig& cfg, Placement placement,
                                           std::uint64_t decode_seed) {
    if (window.measured.empty())
        throw std::invalid_argument("decode_window: window has no measurement rounds");

    switch (placement) {
        case Placement::single_round:
            return stage(window.measured.back(), p, cfg, decode_seed);
        case Placement::mv_synd:
            return stage(majority_vote(window.measured), p, cfg, decode_seed);
        case Placement::mv_bp: {
            const std::size_t rounds = window.measured.size();
            std::vector<BitVec> round_errors;
            round_errors.reserve(rounds);
            std::vector<double> mean_llr(h_->cols(), 0.0);
            DecodeOutcome composite;
            for (const auto& s : window.measured) {
                Rng rng(decode_seed);
                DecodeOutcome o = bp_.decode(s, p, cfg, rng);
                composite.iterations = std::max(composite.iterations, o.iterations);
                composite.lottery_flips += o.lottery_flips;
                for (std::size_t v = 0; v < mean_llr.size(); ++v) mean_llr[v] += o.final_llr[v];
                round_errors.push_back(std::move(o.est_error));
            }
            for (auto& v : mean_llr) v /= static_cast<double>(rounds);
            BitVec s_vote = majority_vote(window.measured);
            BitVec e_vote = majority_vote(round_errors);
            composite.final_llr = std::move(mean_llr);
            if (gf2::matvec(*h_, e_vote) == s_vote) {
                composite.converged = true;
                composite.est_error = std::move(e_vote);
            } else if (cfg.use_osd) {
                composite.est_error = osd0_decode(*h_, composite.final_llr, s_vote);
                composite.invoked_osd = true;
            } else {
                composite.est_error = std::move(e_vote);
            }
            return composite;
        }
        case Placement::mv_osd: {
            const std::size_t rounds = window.measured.size();
            std::vector<BitVec> round_errors;
            round_errors.reserve(rounds);
            std::vector<double> mean_llr(h_->cols(), 0.0);
            DecodeOutcome composite;
            bool all_converged = true;
            for (const auto& s : window.measured) {
                DecodeOutcome o = stage(s, p, cfg, decode_seed);
                all_converged = all_converged && o.converged;
                composite.invoked_osd = composite.invoked_osd || o.invoked_osd;
                composite.iterations = std::max(composite.iterations, o.iterations);
                composite.lottery_flips += o.lottery_flips;
                for (std::size_t v = 0; v < mean_llr.size(); ++v) mean_llr[v] += o.final_llr[v];
                round_errors.push_back(std::move(o.est_error));
            }
            for (auto& v : mean_llr) v /= static_cast<double>(rounds);
            composite.est_error = majority_vote(round_errors);
            composite.final_llr = std::move(mean_llr);
            composite.converged =
                all_converged &&
                gf2::matvec(*h_, composite.est_error) == majority_vote(window.measured);
            return composite;
        }
    }
    throw std::logic_error("decode_window: unknown placement");
}

DecodeOutcome two_stage_decode(const CssCode& code, char sector, const SyndromeWindow& window,
                               double p, const BpConfig& cfg, Placement placement,
                               std::uint64_t decode_seed) {
    SectorDecoder dec(code, sector);
    return dec.decode_window(window, p, cfg, placement, decode_seed);
}

} // namespace qbp
