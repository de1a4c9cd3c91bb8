#pragma once

// Exclusive minimum-weight perfect matching decoder.
//
// Each error part is decoded on its own check graph. For the defects of one
// part we compute, for both logical classes, the least weight of a correction
// with that syndrome and class. The class of a correction is the parity of its
// matches to boundary A. The gap between the two weights decides whether the
// decoder aborts:
//     abort  iff  1 - delta / d > c   for either part.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <vector>

#include "exdec/blossom.hpp"
#include "exdec/code.hpp"
#include "exdec/errors.hpp"

namespace exdec {

struct DecoderConfig {
    double c = 1.0;

    void validate() const {
        if (!(c >= 0.0 && c <= 1.0)) throw InvalidParameter("exclusive tolerance c must lie in [0, 1]");
    }
};

/// Abort rule with a small tolerance so that boundary cases such as
/// c = 2/3, d = 3 are decided as in exact arithmetic.
inline bool gap_aborts(int d, int delta, double c) {
    return static_cast<double>(d - delta) - c * d > 1e-9;
}

/// Matching graph with a fixed parity of matches to boundary A.
///
/// Vertex layout: bulk defects [0, k), boundary A copies [k, k + num_a),
/// boundary B copies after that. Copies of one boundary form a zero-weight
/// clique; there are no A-B edges.
struct MatchingGraph {
    Part part = Part::X;
    std::vector<int> defects;  // check index of each bulk vertex
    int num_a = 0;
    int num_b = 0;
    std::vector<WeightedEdge> edges;

    int num_bulk() const { return static_cast<int>(defects.size()); }
    int num_vertices() const { return num_bulk() + num_a + num_b; }
    bool is_a(int v) const { return v >= num_bulk() && v < num_bulk() + num_a; }
    bool is_b(int v) const { return v >= num_bulk() + num_a; }
};

struct Matching {
    std::vector<int> mate;
    std::int64_t weight = 0;
};

inline MatchingGraph build_parity_graph(const Code& code, Part part, const std::vector<int>& defects, int parity) {
    const CheckGraph& g = code.graph(part);
    for (int s : defects)
        if (s < 0 || s >= g.num_checks) throw InvalidParameter("build_parity_graph: defect index out of range");
    MatchingGraph mg;
    mg.part = part;
    mg.defects = defects;
    const int k = static_cast<int>(defects.size());
    const int P = parity & 1;
    if (k == 0) return mg;
    mg.num_a = (k % 2 == P) ? k : k + 1;
    mg.num_b = k + P;
    const int a0 = k;
    const int b0 = k + mg.num_a;
    auto& e = mg.edges;
    e.reserve(static_cast<std::size_t>(k * k / 2 + k * (mg.num_a + mg.num_b) + mg.num_a * mg.num_a / 2 +
                                       mg.num_b * mg.num_b / 2));
    for (int u = 0; u < k; ++u) {
        const int su = defects[static_cast<std::size_t>(u)];
        for (int v = u + 1; v < k; ++v) e.push_back({u, v, g.dist(su, defects[static_cast<std::size_t>(v)])});
        const int t = g.dist(su, g.boundary_a());
        const int b = g.dist(su, g.boundary_b());
        for (int i = 0; i < mg.num_a; ++i) e.push_back({u, a0 + i, t});
        for (int i = 0; i < mg.num_b; ++i) e.push_back({u, b0 + i, b});
    }
    for (int i = 0; i < mg.num_a; ++i)
        for (int j = i + 1; j < mg.num_a; ++j) e.push_back({a0 + i, a0 + j, 0});
    for (int i = 0; i < mg.num_b; ++i)
        for (int j = i + 1; j < mg.num_b; ++j) e.push_back({b0 + i, b0 + j, 0});
    return mg;
}

/// Same, taking a defect set that must contain defects of a single part.
inline MatchingGraph build_parity_graph(const Code& code, const DefectSet& defects, int parity) {
    if (!defects.x_part.empty() && !defects.z_part.empty())
        throw InvalidParameter("build_parity_graph: defects of both species supplied");
    Part part = defects.z_part.empty() ? Part::X : Part::Z;
    return build_parity_graph(code, part, defects.of(part), parity);
}

inline Matching mwpm_exact(int num_vertices, const std::vector<WeightedEdge>& edges) {
    Matching m;
    m.mate = min_weight_perfect_matching(num_vertices, edges);
    std::vector<std::int64_t> best(static_cast<std::size_t>(num_vertices), std::numeric_limits<std::int64_t>::max());
    for (const auto& e : edges) {
        if (m.mate[static_cast<std::size_t>(e.u)] == e.v) {
            // Parallel edges: the matcher used the lightest one.
            auto& slot = best[static_cast<std::size_t>(std::min(e.u, e.v))];
            slot = std::min(slot, e.w);
        }
    }
    for (int v = 0; v < num_vertices; ++v)
        if (m.mate[static_cast<std::size_t>(v)] > v) m.weight += best[static_cast<std::size_t>(v)];
    return m;
}

inline Matching mwpm_exact(const MatchingGraph& graph) { return mwpm_exact(graph.num_vertices(), graph.edges); }

/// Correction of the requested class for one part, with its weight.
struct SectorCorrection {
    std::vector<std::uint8_t> bits;
    int weight = 0;
};

inline SectorCorrection min_weight_in_sector(const Code& code, Part part, const std::vector<int>& defects,
                                             int cls) {
    const CheckGraph& g = code.graph(part);
    SectorCorrection out;
    out.bits.assign(static_cast<std::size_t>(code.num_qubits()), 0);
    auto flip = [&out](int q) { out.bits[static_cast<std::size_t>(q)] ^= 1; };
    if (defects.empty()) {
        if (cls & 1) g.for_each_path_qubit(g.boundary_a(), g.boundary_b(), flip);
    } else {
        MatchingGraph mg = build_parity_graph(code, part, defects, cls);
        Matching m = mwpm_exact(mg);
        for (int u = 0; u < mg.num_bulk(); ++u) {
            const int v = m.mate[static_cast<std::size_t>(u)];
            const int su = defects[static_cast<std::size_t>(u)];
            if (v < mg.num_bulk()) {
                if (v > u) g.for_each_path_qubit(su, defects[static_cast<std::size_t>(v)], flip);
            } else {
                g.for_each_path_qubit(su, mg.is_a(v) ? g.boundary_a() : g.boundary_b(), flip);
            }
        }
    }
    for (auto b : out.bits) out.weight += b;
    return out;
}

inline SectorCorrection min_weight_in_sector(const Code& code, const DefectSet& defects, int cls) {
    if (!defects.x_part.empty() && !defects.z_part.empty())
        throw InvalidParameter("min_weight_in_sector: defects of both species supplied");
    Part part = defects.z_part.empty() ? Part::X : Part::Z;
    return min_weight_in_sector(code, part, defects.of(part), cls);
}

/// Least correction weight in each class for one part.
inline std::array<int, 2> class_weights(const Code& code, Part part, const std::vector<int>& defects) {
    if (defects.empty()) return {0, code.distance()};
    std::array<int, 2> w{};
    for (int cls = 0; cls < 2; ++cls)
        w[static_cast<std::size_t>(cls)] = static_cast<int>(mwpm_exact(build_parity_graph(code, part, defects, cls)).weight);
    return w;
}

struct SpeciesDecision {
    std::array<int, 2> weight{-1, -1};  // -1 when not computed
    int chosen = 0;                     // class of the chosen correction
    int delta = 0;
    bool abort = false;
};

inline SpeciesDecision decide_from_weights(int d, const std::array<int, 2>& w, double c) {
    SpeciesDecision s;
    s.weight = w;
    s.chosen = w[1] < w[0] ? 1 : 0;
    s.delta = std::abs(w[0] - w[1]);
    s.abort = gap_aborts(d, s.delta, c);
    return s;
}

struct DecodeOutcome {
    bool aborted = false;
    PauliError correction;                 // empty on abort
    Sector correction_class = Sector::I;   // raw class of the correction
    std::array<SpeciesDecision, 2> species;

    bool accepted() const { return !aborted; }
    /// Logical sector of error * correction.
    Sector residual_sector(const Code& code, const PauliError& error) const {
        return raw_sector(code, error) * correction_class;
    }
};

/// Verdict on one part of a sampled error: abort flag and residual class bit.
struct PartVerdict {
    bool abort = false;
    std::uint8_t residual = 0;
};

/// Verdict for one sampled error: whether the decoder aborted and, if not,
/// the logical sector of the residual.
struct ShotVerdict {
    bool aborted = false;
    Sector residual = Sector::I;
};

/// Decoder bound to one code. Class weights are tabulated per syndrome when
/// a part has at most `kMaxTableChecks` checks.
class MatchingDecoder {
  public:
    static constexpr int kMaxTableChecks = 16;

    explicit MatchingDecoder(Code code, bool tabulate = true) : code_(std::move(code)) {
        for (Part p : kParts) masks_[static_cast<int>(p)] = syndrome_masks(code_, p);
        if (!tabulate) return;
        for (Part p : kParts) {
            const int m = code_.graph(p).num_checks;
            if (m > kMaxTableChecks) continue;
            auto& table = tables_[static_cast<int>(p)];
            table.resize(std::size_t{1} << m);
            std::vector<int> defects;
            for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
                defects.clear();
                for (int s = 0; s < m; ++s)
                    if (mask >> s & 1u) defects.push_back(s);
                auto w = class_weights(code_, p, defects);
                table[mask] = {static_cast<std::uint8_t>(w[0]), static_cast<std::uint8_t>(w[1])};
            }
        }
    }

    const Code& code() const { return code_; }
    bool tabulated(Part p) const { return !tables_[static_cast<int>(p)].empty(); }

    std::array<int, 2> weights(Part p, const std::vector<int>& defects) const {
        const auto& table = tables_[static_cast<int>(p)];
        if (table.empty()) return class_weights(code_, p, defects);
        std::uint32_t mask = 0;
        for (int s : defects) mask |= 1u << s;
        return {table[mask][0], table[mask][1]};
    }

    SpeciesDecision decide(Part p, const std::vector<int>& defects, const DecoderConfig& cfg) const {
        const int d = code_.distance();
        if (cfg.c == 0.0 && !defects.empty()) {
            SpeciesDecision s;
            s.abort = true;
            return s;
        }
        return decide_from_weights(d, weights(p, defects), cfg.c);
    }

    /// Full decode with an explicit correction.
    DecodeOutcome decode(const DefectSet& syndrome, const DecoderConfig& cfg) const {
        cfg.validate();
        DecodeOutcome out;
        for (Part p : kParts) {
            auto& s = out.species[static_cast<int>(p)];
            s = decide_from_weights(code_.distance(), weights(p, syndrome.of(p)), cfg.c);
            if (cfg.c == 0.0 && !syndrome.of(p).empty()) s.abort = true;
            out.aborted = out.aborted || s.abort;
        }
        if (out.aborted) return out;
        out.correction = PauliError(code_.num_qubits());
        for (Part p : kParts) {
            const auto& s = out.species[static_cast<int>(p)];
            out.correction.part(p) = min_weight_in_sector(code_, p, syndrome.of(p), s.chosen).bits;
        }
        out.correction_class = make_sector(static_cast<std::uint8_t>(out.species[0].chosen),
                                           static_cast<std::uint8_t>(out.species[1].chosen));
        return out;
    }

    PartVerdict part_verdict(Part p, const std::vector<std::uint8_t>& bits, const DecoderConfig& cfg) const {
        const auto& mk = masks_[static_cast<int>(p)];
        if (mk.usable()) {
            const std::uint64_t m = mk.syndrome(bits);
            if (cfg.c == 0.0 && m) return {true, 0};
            const auto& table = tables_[static_cast<int>(p)];
            std::array<int, 2> w;
            if (!table.empty())
                w = {table[m][0], table[m][1]};
            else
                w = class_weights(code_, p, mask_to_indices(m));
            SpeciesDecision s = decide_from_weights(code_.distance(), w, cfg.c);
            if (s.abort) return {true, 0};
            return {false, static_cast<std::uint8_t>(mk.parity(bits) ^ s.chosen)};
        }
        SpeciesDecision s = decide(p, bits_to_indices(check_bits(code_, p, bits)), cfg);
        if (s.abort) return {true, 0};
        return {false, static_cast<std::uint8_t>(class_parity(code_, p, bits) ^ s.chosen)};
    }

    /// Fast path for sampling: no correction is built and decoding stops at
    /// the first aborting part.
    ShotVerdict evaluate(const PauliError& error, const DecoderConfig& cfg) const {
        ShotVerdict v;
        std::array<std::uint8_t, 2> cls{};
        for (Part p : kParts) {
            PartVerdict pv = part_verdict(p, error.part(p), cfg);
            if (pv.abort) {
                v.aborted = true;
                return v;
            }
            cls[static_cast<int>(p)] = pv.residual;
        }
        v.residual = make_sector(cls[0], cls[1]);
        return v;
    }

  private:
    Code code_;
    std::array<SyndromeMasks, 2> masks_;
    std::array<std::vector<std::array<std::uint8_t, 2>>, 2> tables_;
};

/// One-shot exclusive decode.
inline DecodeOutcome decode_exclusive(const Code& code, const DefectSet& syndrome, const DecoderConfig& cfg) {
    return MatchingDecoder(code, false).decode(syndrome, cfg);
}

}  // namespace exdec
