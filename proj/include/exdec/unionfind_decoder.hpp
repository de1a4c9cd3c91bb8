#pragma once

// Exclusive union-find decoder.
//
// Per error part: clusters seeded by the erasure and by the defects grow in
// half-edge steps, smallest invalid clusters first, until every cluster has
// even defect parity or contains a boundary node. The survived distance is the
// length of the shortest boundary-to-boundary path counting only edges outside
// the grown erasure. The decoder aborts when 1 - d_surv / d > c for either
// part, and otherwise peels a correction inside the grown erasure.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "exdec/code.hpp"
#include "exdec/errors.hpp"
#include "exdec/matching_decoder.hpp"

namespace exdec {

namespace detail {

class ClusterForest {
  public:
    explicit ClusterForest(const CheckGraph& g)
        : parent_(static_cast<std::size_t>(g.num_nodes())),
          size_(static_cast<std::size_t>(g.num_nodes()), 1),
          parity_(static_cast<std::size_t>(g.num_nodes()), 0),
          boundary_(static_cast<std::size_t>(g.num_nodes()), 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
        boundary_[static_cast<std::size_t>(g.boundary_a())] = 1;
        boundary_[static_cast<std::size_t>(g.boundary_b())] = 1;
    }

    int find(int v) {
        while (parent_[static_cast<std::size_t>(v)] != v) {
            parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
            v = parent_[static_cast<std::size_t>(v)];
        }
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)] ||
            (size_[static_cast<std::size_t>(a)] == size_[static_cast<std::size_t>(b)] && b < a))
            std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
        parity_[static_cast<std::size_t>(a)] ^= parity_[static_cast<std::size_t>(b)];
        boundary_[static_cast<std::size_t>(a)] |= boundary_[static_cast<std::size_t>(b)];
    }
    void flip_parity(int v) { parity_[static_cast<std::size_t>(find(v))] ^= 1; }
    bool invalid_root(int r) const {
        return parity_[static_cast<std::size_t>(r)] && !boundary_[static_cast<std::size_t>(r)];
    }
    int size_of_root(int r) const { return size_[static_cast<std::size_t>(r)]; }
    bool is_root(int v) const { return parent_[static_cast<std::size_t>(v)] == v; }

  private:
    std::vector<int> parent_;
    std::vector<int> size_;
    std::vector<std::uint8_t> parity_;
    std::vector<std::uint8_t> boundary_;
};

}  // namespace detail

/// Final erasure for one part: every qubit reached by cluster growth, half-grown edges included.
inline std::vector<std::uint8_t> syndrome_validation(const Code& code, Part part,
                                                     const std::vector<std::uint8_t>& erasure,
                                                     const std::vector<int>& defects) {
    const CheckGraph& g = code.graph(part);
    const int n = code.num_qubits();
    if (static_cast<int>(erasure.size()) != n) throw InvalidParameter("syndrome_validation: erasure length mismatch");
    detail::ClusterForest forest(g);
    std::vector<std::uint8_t> support(static_cast<std::size_t>(n), 0);  // half-edges grown
    for (int q = 0; q < n; ++q) {
        if (!erasure[static_cast<std::size_t>(q)]) continue;
        support[static_cast<std::size_t>(q)] = 2;
        const auto& e = g.qubit_nodes[static_cast<std::size_t>(q)];
        forest.unite(e[0], e[1]);
    }
    for (int s : defects) {
        if (s < 0 || s >= g.num_checks) throw InvalidParameter("syndrome_validation: defect index out of range");
        forest.flip_parity(s);
    }
    const int nn = g.num_nodes();
    std::vector<int> fused;
    std::vector<std::uint8_t> growing(static_cast<std::size_t>(nn), 0);
    while (true) {
        // All invalid clusters of the smallest size grow together.
        int smallest = std::numeric_limits<int>::max();
        for (int v = 0; v < nn; ++v)
            if (forest.is_root(v) && forest.invalid_root(v)) smallest = std::min(smallest, forest.size_of_root(v));
        if (smallest == std::numeric_limits<int>::max()) break;
        for (int v = 0; v < nn; ++v) {
            int r = forest.find(v);
            growing[static_cast<std::size_t>(v)] = forest.invalid_root(r) && forest.size_of_root(r) == smallest;
        }
        fused.clear();
        for (int v = 0; v < nn; ++v) {
            if (!growing[static_cast<std::size_t>(v)]) continue;
            for (auto [w, q] : g.adjacency[static_cast<std::size_t>(v)]) {
                (void)w;
                auto& s = support[static_cast<std::size_t>(q)];
                if (s < 2 && ++s == 2) fused.push_back(q);
            }
        }
        for (int q : fused) {
            const auto& e = g.qubit_nodes[static_cast<std::size_t>(q)];
            forest.unite(e[0], e[1]);
        }
    }
    std::vector<std::uint8_t> grown(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) grown[static_cast<std::size_t>(q)] = support[static_cast<std::size_t>(q)] > 0;
    return grown;
}

/// Shortest boundary-to-boundary path for one part where erased edges are free.
inline int survived_distance(const Code& code, Part part, const std::vector<std::uint8_t>& erasure) {
    const CheckGraph& g = code.graph(part);
    const int nn = g.num_nodes();
    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(static_cast<std::size_t>(nn), kInf);
    std::deque<int> dq;
    dist[static_cast<std::size_t>(g.boundary_a())] = 0;
    dq.push_back(g.boundary_a());
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        if (u == g.boundary_b()) break;
        for (auto [v, q] : g.adjacency[static_cast<std::size_t>(u)]) {
            int cost = erasure[static_cast<std::size_t>(q)] ? 0 : 1;
            int nd = dist[static_cast<std::size_t>(u)] + cost;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                if (cost == 0)
                    dq.push_front(v);
                else
                    dq.push_back(v);
            }
        }
    }
    return dist[static_cast<std::size_t>(g.boundary_b())];
}

/// Minimum over both logical types.
inline int survived_distance(const Code& code, const std::vector<std::uint8_t>& erasure) {
    return std::min(survived_distance(code, Part::X, erasure), survived_distance(code, Part::Z, erasure));
}

/// Peeling decoder inside the grown erasure. Each connected piece is
/// spanned from a boundary node when it contains one; boundary nodes absorb
/// parity.
inline std::vector<std::uint8_t> peel(const Code& code, Part part, const std::vector<std::uint8_t>& grown,
                                      const std::vector<int>& defects) {
    const CheckGraph& g = code.graph(part);
    const int nn = g.num_nodes();
    std::vector<std::uint8_t> parity(static_cast<std::size_t>(nn), 0);
    for (int s : defects) parity[static_cast<std::size_t>(s)] ^= 1;
    std::vector<int> parent_edge(static_cast<std::size_t>(nn), -1);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(nn), 0);
    std::vector<int> order;
    auto span_from = [&](int root) {
        std::size_t head = order.size();
        seen[static_cast<std::size_t>(root)] = 1;
        order.push_back(root);
        while (head < order.size()) {
            int u = order[head++];
            for (auto [v, q] : g.adjacency[static_cast<std::size_t>(u)]) {
                if (!grown[static_cast<std::size_t>(q)] || seen[static_cast<std::size_t>(v)]) continue;
                seen[static_cast<std::size_t>(v)] = 1;
                parent_edge[static_cast<std::size_t>(v)] = q;
                order.push_back(v);
            }
        }
    };
    for (int v : {g.boundary_a(), g.boundary_b()})
        if (!seen[static_cast<std::size_t>(v)]) span_from(v);
    for (int v = 0; v < g.num_checks; ++v)
        if (!seen[static_cast<std::size_t>(v)]) span_from(v);
    std::vector<std::uint8_t> correction(static_cast<std::size_t>(code.num_qubits()), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        int q = parent_edge[static_cast<std::size_t>(v)];
        if (q < 0 || g.is_boundary(v) || !parity[static_cast<std::size_t>(v)]) continue;
        correction[static_cast<std::size_t>(q)] ^= 1;
        parity[static_cast<std::size_t>(v)] = 0;
        const auto& e = g.qubit_nodes[static_cast<std::size_t>(q)];
        int u = e[0] == v ? e[1] : e[0];
        parity[static_cast<std::size_t>(u)] ^= 1;
    }
    for (int v = 0; v < g.num_checks; ++v)
        if (parity[static_cast<std::size_t>(v)])
            throw std::logic_error("peel: a grown cluster without boundary has odd parity");
    return correction;
}

struct UfPartResult {
    std::vector<std::uint8_t> grown;
    int survived = 0;
    std::vector<std::uint8_t> correction;
};

inline UfPartResult decode_uf_part(const Code& code, Part part, const std::vector<std::uint8_t>& erasure,
                                   const std::vector<int>& defects) {
    UfPartResult r;
    r.grown = syndrome_validation(code, part, erasure, defects);
    r.survived = survived_distance(code, part, r.grown);
    r.correction = peel(code, part, r.grown, defects);
    return r;
}

/// Exclusive union-find decode. `erasure` may be empty for no erasure.
/// The per-part decision records d_surv in `delta`.
inline DecodeOutcome decode_uf_exclusive(const Code& code, const std::vector<std::uint8_t>& erasure,
                                         const DefectSet& syndrome, const DecoderConfig& cfg) {
    cfg.validate();
    const int n = code.num_qubits();
    std::vector<std::uint8_t> er = erasure.empty() ? std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0) : erasure;
    DecodeOutcome out;
    out.correction = PauliError(n);
    std::array<std::uint8_t, 2> cls{};
    for (Part p : kParts) {
        auto r = decode_uf_part(code, p, er, syndrome.of(p));
        auto& s = out.species[static_cast<int>(p)];
        s.delta = r.survived;
        s.abort = gap_aborts(code.distance(), r.survived, cfg.c);
        s.chosen = class_parity(code, p, r.correction);
        cls[static_cast<int>(p)] = static_cast<std::uint8_t>(s.chosen);
        out.correction.part(p) = std::move(r.correction);
        out.aborted = out.aborted || s.abort;
    }
    if (out.aborted) {
        out.correction = PauliError();
        return out;
    }
    out.correction_class = make_sector(cls[0], cls[1]);
    return out;
}

/// Union-find decoder bound to one code. Without erasure the outcome depends
/// only on the syndrome, so small codes tabulate (d_surv, class) per syndrome.
class UnionFindDecoder {
  public:
    static constexpr int kMaxTableChecks = 16;

    explicit UnionFindDecoder(Code code, bool tabulate = true) : code_(std::move(code)) {
        for (Part p : kParts) masks_[static_cast<int>(p)] = syndrome_masks(code_, p);
        if (!tabulate) return;
        const std::vector<std::uint8_t> none(static_cast<std::size_t>(code_.num_qubits()), 0);
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
                auto r = decode_uf_part(code_, p, none, defects);
                table[mask] = {static_cast<std::uint8_t>(r.survived), class_parity(code_, p, r.correction)};
            }
        }
    }

    const Code& code() const { return code_; }

    /// Verdict on one part pattern without erasure.
    PartVerdict part_verdict(Part p, const std::vector<std::uint8_t>& bits, const DecoderConfig& cfg) const {
        const auto& mk = masks_[static_cast<int>(p)];
        const auto& table = tables_[static_cast<int>(p)];
        std::vector<int> defects;
        if (mk.usable()) {
            const std::uint64_t m = mk.syndrome(bits);
            if (cfg.c == 0.0 && m) return {true, 0};
            if (!table.empty()) {
                const auto& row = table[m];
                return {gap_aborts(code_.distance(), row[0], cfg.c), static_cast<std::uint8_t>(mk.parity(bits) ^ row[1])};
            }
            defects = mask_to_indices(m);
        } else {
            defects = bits_to_indices(check_bits(code_, p, bits));
            if (cfg.c == 0.0 && !defects.empty()) return {true, 0};
        }
        auto r = decode_uf_part(code_, p, std::vector<std::uint8_t>(bits.size(), 0), defects);
        return {gap_aborts(code_.distance(), r.survived, cfg.c),
                static_cast<std::uint8_t>(class_parity(code_, p, bits) ^ class_parity(code_, p, r.correction))};
    }

    ShotVerdict evaluate(const PauliError& error, const DecoderConfig& cfg) const {
        ShotVerdict v;
        std::array<std::uint8_t, 2> res{};
        for (Part p : kParts) {
            auto pv = part_verdict(p, error.part(p), cfg);
            if (pv.abort) {
                v.aborted = true;
                return v;
            }
            res[static_cast<int>(p)] = pv.residual;
        }
        v.residual = make_sector(res[0], res[1]);
        return v;
    }

    /// Verdict with an erasure (no tabulation).
    ShotVerdict evaluate(const PauliError& error, const std::vector<std::uint8_t>& erasure,
                         const DecoderConfig& cfg) const {
        auto out = decode_uf_exclusive(code_, erasure, syndrome(code_, error), cfg);
        ShotVerdict v;
        v.aborted = out.aborted;
        if (!v.aborted) v.residual = out.residual_sector(code_, error);
        return v;
    }

  private:
    Code code_;
    std::array<SyndromeMasks, 2> masks_;
    std::array<std::vector<std::array<std::uint8_t, 2>>, 2> tables_;
};

}  // namespace exdec
