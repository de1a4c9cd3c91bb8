#pragma once

// Exhaustive ground truth for small instances.
//
// Code capacity: every decoder here acts on the X and Z parts independently
// and OR-combines the aborts, so a verdict table over all 2^n bit patterns of
// one part is enough. The 4^n Pauli errors are then the pairs (x, z) with
// weight popcount(x | z). Counts are kept per weight so the tables can be
// evaluated at any p.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "exdec/code.hpp"
#include "exdec/errors.hpp"
#include "exdec/matching_decoder.hpp"
#include "exdec/spacetime.hpp"
#include "exdec/unionfind_decoder.hpp"

namespace exdec {

enum class DecoderKind { Mwpm, UnionFind };

inline const char* decoder_name(DecoderKind k) { return k == DecoderKind::Mwpm ? "mwpm" : "uf"; }

/// Weight-resolved counts of every outcome.
struct ExactSectorTable {
    int n = 0;
    std::array<std::vector<std::uint64_t>, 4> accept;  // [sector][weight]
    std::vector<std::uint64_t> abort;                  // [weight]

    static double weight_probability(int n, int w, double p) {
        if (w == 0) return std::pow(1.0 - p, n);
        if (p == 1.0) return w == n ? std::pow(1.0 / 3.0, n) : 0.0;
        return std::pow(p / 3.0, w) * std::pow(1.0 - p, n - w);
    }
    double sum(const std::vector<std::uint64_t>& counts, double p) const {
        double s = 0.0;
        for (int w = 0; w <= n; ++w) s += static_cast<double>(counts[static_cast<std::size_t>(w)]) * weight_probability(n, w, p);
        return s;
    }
    double sector_probability(Sector s, double p) const { return sum(accept[static_cast<int>(s)], p); }
    double abort_probability(double p) const { return sum(abort, p); }
    double accept_probability(double p) const {
        double a = 0.0;
        for (Sector s : kSectors) a += sector_probability(s, p);
        return a;
    }
    /// P(accept and residual nontrivial) / P(accept).
    double failure(double p) const {
        double acc = accept_probability(p);
        if (acc <= 0.0) return std::nan("");
        return (acc - sector_probability(Sector::I, p)) / acc;
    }
    double g(double p) const { return abort_probability(p); }

    /// Smallest weight with a nonzero count in `counts`, or -1.
    static int min_weight(const std::vector<std::uint64_t>& counts) {
        for (std::size_t w = 0; w < counts.size(); ++w)
            if (counts[w]) return static_cast<int>(w);
        return -1;
    }
    std::vector<std::uint64_t> failing_counts() const {
        std::vector<std::uint64_t> out(static_cast<std::size_t>(n + 1), 0);
        for (Sector s : {Sector::X, Sector::Z, Sector::Y})
            for (int w = 0; w <= n; ++w) out[static_cast<std::size_t>(w)] += accept[static_cast<int>(s)][static_cast<std::size_t>(w)];
        return out;
    }
};

/// Bit masks of the checks flipped by each qubit, for one part.
inline std::vector<std::uint32_t> check_columns(const Code& code, Part part) {
    const CheckGraph& g = code.graph(part);
    if (g.num_checks > 32) throw BudgetExceeded("check_columns: too many checks for a 32-bit mask", g.num_checks);
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(code.num_qubits()), 0);
    for (int q = 0; q < code.num_qubits(); ++q)
        for (int node : g.qubit_nodes[static_cast<std::size_t>(q)])
            if (!g.is_boundary(node)) cols[static_cast<std::size_t>(q)] |= 1u << node;
    return cols;
}

inline std::uint32_t class_mask(const Code& code, Part part) {
    std::uint32_t m = 0;
    const auto& cut = code.graph(part).class_cut;
    for (std::size_t q = 0; q < cut.size(); ++q)
        if (cut[q]) m |= 1u << q;
    return m;
}

/// Minimum weight of a part pattern with each (syndrome, class), found by a
/// Gray-code walk over all 2^n patterns. Indexed [syndrome mask][class].
inline std::vector<std::array<int, 2>> coset_minima(const Code& code, Part part) {
    const int n = code.num_qubits();
    if (n > 25) throw BudgetExceeded("coset_minima: 2^n patterns exceed the enumeration budget", std::ldexp(1.0, n));
    const auto cols = check_columns(code, part);
    const std::uint32_t cmask = class_mask(code, part);
    const int m = code.graph(part).num_checks;
    std::vector<std::array<int, 2>> best(std::size_t{1} << m, {n + 1, n + 1});
    std::uint32_t pattern = 0, syn = 0;
    best[0][0] = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        int bit = std::countr_zero(i);
        pattern ^= 1u << bit;
        syn ^= cols[static_cast<std::size_t>(bit)];
        int cls = std::popcount(pattern & cmask) & 1;
        int w = std::popcount(pattern);
        auto& slot = best[syn][static_cast<std::size_t>(cls)];
        if (w < slot) slot = w;
    }
    return best;
}

/// Exclusive-MWPM decisions for every syndrome of one part, from coset minima.
inline std::vector<SpeciesDecision> mwpm_decisions_by_brute_force(const Code& code, Part part, double c) {
    auto minima = coset_minima(code, part);
    std::vector<SpeciesDecision> out(minima.size());
    for (std::size_t s = 0; s < minima.size(); ++s) {
        out[s] = decide_from_weights(code.distance(), minima[s], c);
        if (c == 0.0 && s != 0) out[s].abort = true;
    }
    return out;
}

namespace detail {

inline ExactSectorTable combine_parts(int n, const std::vector<PartVerdict>& xv, const std::vector<PartVerdict>& zv) {
    ExactSectorTable t;
    t.n = n;
    for (auto& a : t.accept) a.assign(static_cast<std::size_t>(n + 1), 0);
    t.abort.assign(static_cast<std::size_t>(n + 1), 0);
    const std::uint32_t total = 1u << n;
    for (std::uint32_t x = 0; x < total; ++x) {
        const PartVerdict& vx = xv[x];
        for (std::uint32_t z = 0; z < total; ++z) {
            const int w = std::popcount(x | z);
            const PartVerdict& vz = zv[z];
            if (vx.abort || vz.abort)
                ++t.abort[static_cast<std::size_t>(w)];
            else
                ++t.accept[static_cast<int>(make_sector(vx.residual, vz.residual))][static_cast<std::size_t>(w)];
        }
    }
    return t;
}

inline std::vector<std::uint8_t> mask_to_bits(std::uint32_t mask, int n) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) bits[static_cast<std::size_t>(q)] = (mask >> q) & 1u;
    return bits;
}

}  // namespace detail

/// Verdict on a single part pattern, used to plug in any per-part decoder.
using PartDecoder = std::function<PartVerdict(Part, const std::vector<std::uint8_t>&)>;

/// Exact outcome table over all 4^n errors with a caller-supplied per-part
/// decoder.
inline ExactSectorTable enumerate_code_capacity(const Code& code, const PartDecoder& decoder) {
    const int n = code.num_qubits();
    if (n > 9) throw BudgetExceeded("enumerate_code_capacity: 4^n errors exceed the enumeration budget", std::pow(4.0, n));
    std::array<std::vector<PartVerdict>, 2> verdicts;
    for (Part p : kParts) {
        auto& v = verdicts[static_cast<int>(p)];
        v.resize(std::size_t{1} << n);
        for (std::uint32_t m = 0; m < (1u << n); ++m) v[m] = decoder(p, detail::mask_to_bits(m, n));
    }
    return detail::combine_parts(n, verdicts[0], verdicts[1]);
}

/// Exact table for exclusive MWPM. Class weights come from coset minima, not
/// from the matching code.
inline ExactSectorTable enumerate_code_capacity_mwpm(const Code& code, double c) {
    const int n = code.num_qubits();
    if (n > 9) throw BudgetExceeded("enumerate_code_capacity: 4^n errors exceed the enumeration budget", std::pow(4.0, n));
    std::array<std::vector<PartVerdict>, 2> verdicts;
    for (Part p : kParts) {
        auto decisions = mwpm_decisions_by_brute_force(code, p, c);
        const auto cols = check_columns(code, p);
        const std::uint32_t cmask = class_mask(code, p);
        auto& v = verdicts[static_cast<int>(p)];
        v.resize(std::size_t{1} << n);
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            std::uint32_t syn = 0;
            for (int q = 0; q < n; ++q)
                if (m >> q & 1u) syn ^= cols[static_cast<std::size_t>(q)];
            const auto& dec = decisions[syn];
            v[m].abort = dec.abort;
            v[m].residual = static_cast<std::uint8_t>((std::popcount(m & cmask) & 1) ^ dec.chosen);
        }
    }
    return detail::combine_parts(n, verdicts[0], verdicts[1]);
}

/// Exact table for either decoder. UF verdicts come from the decoder itself.
inline ExactSectorTable exact_table(const Code& code, DecoderKind kind, double c) {
    DecoderConfig cfg{c};
    cfg.validate();
    if (kind == DecoderKind::Mwpm) return enumerate_code_capacity_mwpm(code, c);
    UnionFindDecoder uf(code, false);
    return enumerate_code_capacity(code, [&](Part p, const std::vector<std::uint8_t>& bits) {
        return uf.part_verdict(p, bits, cfg);
    });
}

/// Outcome counts of every Pauli error of weight at most `max_weight`.
struct LowWeightCounts {
    std::vector<std::uint64_t> total;
    std::vector<std::uint64_t> failing;  // accepted with a nontrivial residual
    std::vector<std::uint64_t> aborting;

    int min_failing_weight() const { return ExactSectorTable::min_weight(failing); }
    int min_abort_weight() const { return ExactSectorTable::min_weight(aborting); }
};

/// Exclusive-MWPM sweep over all low-weight errors, using coset minima as the
/// decoder truth. Feasible for d <= 5.
inline LowWeightCounts low_weight_sweep_mwpm(const Code& code, double c, int max_weight) {
    const int n = code.num_qubits();
    double work = 0.0;
    for (int w = 0; w <= max_weight; ++w) work += std::tgamma(n + 1.0) / (std::tgamma(w + 1.0) * std::tgamma(n - w + 1.0)) * std::pow(3.0, w);
    if (work > 5e8) throw BudgetExceeded("low_weight_sweep: too many errors to enumerate", work);
    std::array<std::vector<SpeciesDecision>, 2> dec;
    std::array<std::vector<std::uint32_t>, 2> cols;
    std::array<std::uint32_t, 2> cmask{};
    for (Part p : kParts) {
        dec[static_cast<int>(p)] = mwpm_decisions_by_brute_force(code, p, c);
        cols[static_cast<int>(p)] = check_columns(code, p);
        cmask[static_cast<int>(p)] = class_mask(code, p);
    }
    LowWeightCounts out;
    out.total.assign(static_cast<std::size_t>(max_weight + 1), 0);
    out.failing = out.aborting = out.total;
    std::vector<int> sites;
    // Recursive choice of sites in increasing order with a Pauli on each.
    std::function<void(int, std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t, int)> rec =
        [&](int start, std::uint32_t xm, std::uint32_t zm, std::uint32_t xs, std::uint32_t zs, int w) {
            const auto& dx = dec[0][xs];
            const auto& dz = dec[1][zs];
            ++out.total[static_cast<std::size_t>(w)];
            if (dx.abort || dz.abort) {
                ++out.aborting[static_cast<std::size_t>(w)];
            } else {
                int rx = (std::popcount(xm & cmask[0]) & 1) ^ dx.chosen;
                int rz = (std::popcount(zm & cmask[1]) & 1) ^ dz.chosen;
                if (rx || rz) ++out.failing[static_cast<std::size_t>(w)];
            }
            if (w == max_weight) return;
            for (int q = start; q < n; ++q) {
                const std::uint32_t bit = 1u << q;
                const std::uint32_t cx = cols[0][static_cast<std::size_t>(q)];
                const std::uint32_t cz = cols[1][static_cast<std::size_t>(q)];
                rec(q + 1, xm | bit, zm, xs ^ cx, zs, w + 1);
                rec(q + 1, xm, zm | bit, xs, zs ^ cz, w + 1);
                rec(q + 1, xm | bit, zm | bit, xs ^ cx, zs ^ cz, w + 1);
            }
        };
    rec(0, 0, 0, 0, 0, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Fault-tolerant low-weight enumeration.

/// Accepted spacetime configurations per sector and weight.
struct FtCounts {
    int max_weight = 0;
    std::map<std::string, std::vector<std::uint64_t>> by_sector;  // label -> [weight]
    // label -> [weight]: sum over configurations of (1/3)^{data sites} (2/3)^{measurement sites},
    // the coefficient of p^w at measurement rate 2p/3 to leading order.
    std::map<std::string, std::vector<double>> coefficient;

    /// Leading-order coefficient of p^w summed over nontrivial labels.
    double failing_coefficient(int w) const {
        double s = 0.0;
        for (const auto& [label, v] : coefficient)
            if (label != "II00" && w <= max_weight) s += v[static_cast<std::size_t>(w)];
        return s;
    }

    std::uint64_t count(const std::string& label, int w) const {
        auto it = by_sector.find(label);
        if (it == by_sector.end() || w > max_weight) return 0;
        return it->second[static_cast<std::size_t>(w)];
    }
    /// Accepted configurations of weight w with a nontrivial label.
    std::uint64_t failing(int w) const {
        std::uint64_t s = 0;
        for (const auto& [label, v] : by_sector)
            if (label != "II00") s += v[static_cast<std::size_t>(w)];
        return s;
    }
};

namespace detail {

/// One trivially-detected configuration of a single subsystem.
struct FtHalf {
    std::vector<std::uint32_t> data_sites;  // round * n + qubit
    int meas_weight = 0;
    std::vector<std::uint8_t> total;        // data pattern summed over rounds
    std::uint8_t wrap = 0;                   // measurement faults at round 0
};

/// Enumerate subsets of at most `max_weight` elements whose detectors all
/// vanish. Elements are data sites (flip two detectors in one round) and
/// measurement sites (flip one detector in two consecutive rounds).
inline std::vector<FtHalf> enumerate_half(const SpacetimeCodeModel& m, Part part, int max_weight) {
    const int n = m.num_qubits();
    const int t = m.rounds();
    const int ns = m.num_checks(part);
    const int num_det = ns * t;
    struct Element {
        std::array<int, 2> dets;
        int data_site;  // -1 for measurement
        int meas_round;
    };
    std::vector<Element> elems;
    for (int r = 0; r < t; ++r)
        for (int q = 0; q < n; ++q) {
            const auto& c = m.checks_of(part, q);
            elems.push_back({{r * ns + c[0], r * ns + c[1]}, r * n + q, -1});
        }
    for (int r = 0; r < t; ++r)
        for (int s = 0; s < ns; ++s) elems.push_back({{r * ns + s, ((r + 1) % t) * ns + s}, -1, r});
    const int ne = static_cast<int>(elems.size());
    std::vector<std::uint8_t> det(static_cast<std::size_t>(num_det), 0);
    int lit = 0;
    std::vector<int> chosen;
    std::vector<FtHalf> out;
    auto toggle = [&](int d) {
        auto& b = det[static_cast<std::size_t>(d)];
        b ^= 1;
        lit += b ? 1 : -1;
    };
    std::function<void(int)> rec = [&](int start) {
        if (lit == 0) {
            FtHalf h;
            h.total.assign(static_cast<std::size_t>(n), 0);
            for (int e : chosen) {
                const auto& el = elems[static_cast<std::size_t>(e)];
                if (el.data_site >= 0) {
                    h.data_sites.push_back(static_cast<std::uint32_t>(el.data_site));
                    h.total[static_cast<std::size_t>(el.data_site % n)] ^= 1;
                } else {
                    ++h.meas_weight;
                    if (el.meas_round == 0) h.wrap ^= 1;
                }
            }
            out.push_back(std::move(h));
        }
        const int remaining = max_weight - static_cast<int>(chosen.size());
        if (remaining == 0) return;
        // Each element clears at most two detectors.
        if (lit > 2 * remaining) return;
        for (int e = start; e < ne; ++e) {
            const auto& el = elems[static_cast<std::size_t>(e)];
            chosen.push_back(e);
            toggle(el.dets[0]);
            toggle(el.dets[1]);
            rec(e + 1);
            toggle(el.dets[1]);
            toggle(el.dets[0]);
            chosen.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace detail

/// Counts of zero-tolerance-accepted spacetime configurations of weight at
/// most `max_weight`, by sector label. A Y on one data site counts once.
inline FtCounts enumerate_low_weight_ft(const SpacetimeCodeModel& model, int max_weight) {
    const double sites = 2.0 * model.num_data_sites() + model.num_measurement_sites(Part::X) +
                         model.num_measurement_sites(Part::Z);
    double work = 1.0;
    for (int i = 0; i < max_weight; ++i) work *= sites;
    if (max_weight > 6 || work > 1e15) throw BudgetExceeded("enumerate_low_weight_ft: search space too large", work);
    auto xs = detail::enumerate_half(model, Part::X, max_weight);
    auto zs = detail::enumerate_half(model, Part::Z, max_weight);
    FtCounts out;
    out.max_weight = max_weight;
    for (const auto& hx : xs) {
        const int wx = static_cast<int>(hx.data_sites.size()) + hx.meas_weight;
        for (const auto& hz : zs) {
            const int wz = static_cast<int>(hz.data_sites.size()) + hz.meas_weight;
            if (wx + wz - std::min(hx.data_sites.size(), hz.data_sites.size()) > static_cast<std::size_t>(max_weight))
                continue;
            int shared = 0;
            for (auto s : hx.data_sites)
                if (std::find(hz.data_sites.begin(), hz.data_sites.end(), s) != hz.data_sites.end()) ++shared;
            const int w = wx + wz - shared;
            if (w > max_weight) continue;
            FtSector sec = ft_sector_unchecked(model, hx.total, hz.total, hx.wrap, hz.wrap);
            const std::string label = sec.to_string();
            auto& v = out.by_sector[label];
            auto& cf = out.coefficient[label];
            if (v.empty()) {
                v.assign(static_cast<std::size_t>(max_weight + 1), 0);
                cf.assign(static_cast<std::size_t>(max_weight + 1), 0.0);
            }
            ++v[static_cast<std::size_t>(w)];
            const int data = w - hx.meas_weight - hz.meas_weight;
            cf[static_cast<std::size_t>(w)] += std::pow(1.0 / 3.0, data) * std::pow(2.0 / 3.0, w - data);
        }
    }
    return out;
}

}  // namespace exdec
