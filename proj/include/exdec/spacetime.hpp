#pragma once

// Phenomenological spacetime model: rotated toric layout (periodic in both
// spatial directions, two logical qubits) repeated over t rounds with periodic
// time.
//
// Plaquette (i, j) on the d x d torus touches qubits (i..i+1, j..j+1) mod d;
// it is X-type when i + j is even. The checkerboard closes only for even d.
//
// Round r applies data errors E_r, then measures every stabilizer with
// outcome flips m_r. The detector for stabilizer s at round r is
//     m_r[s] ^ m_{r-1 mod t}[s] ^ syndrome_s(E_r),
// which equals comparing consecutive cumulative observed syndromes with the
// wrap-around comparison closed by the total data error. A configuration is
// accepted at zero tolerance when every detector is trivial.
//
// Logical operators: X1 = X on row 0, Z1 = Z on column 0, X2 = X on column 0,
// Z2 = Z on row 0.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "exdec/code.hpp"

namespace exdec {

struct SpacetimeError {
    std::vector<PauliError> data;                  // per round
    std::vector<std::vector<std::uint8_t>> meas_x;  // per round, per X-type stabilizer
    std::vector<std::vector<std::uint8_t>> meas_z;  // per round, per Z-type stabilizer

    int data_weight() const {
        int w = 0;
        for (const auto& e : data) w += e.weight();
        return w;
    }
    int measurement_weight() const {
        int w = 0;
        for (const auto& m : meas_x)
            for (auto b : m) w += b;
        for (const auto& m : meas_z)
            for (auto b : m) w += b;
        return w;
    }
    int weight() const { return data_weight() + measurement_weight(); }
};

/// Label of an accepted spacetime configuration: logical Pauli on each of
/// the two encoded qubits, then the Z-type and X-type measurement wrap parity.
struct FtSector {
    Sector q1 = Sector::I;
    Sector q2 = Sector::I;
    std::uint8_t z_wrap = 0;
    std::uint8_t x_wrap = 0;

    bool trivial() const { return q1 == Sector::I && q2 == Sector::I && z_wrap == 0 && x_wrap == 0; }
    std::string to_string() const {
        std::string s;
        s += sector_char(q1);
        s += sector_char(q2);
        s += static_cast<char>('0' + z_wrap);
        s += static_cast<char>('0' + x_wrap);
        return s;
    }
    /// Index in [0, 64) for tabulation.
    int index() const {
        return static_cast<int>(q1) | (static_cast<int>(q2) << 2) | (z_wrap << 4) | (x_wrap << 5);
    }
    static FtSector from_index(int i) {
        return {static_cast<Sector>(i & 3), static_cast<Sector>((i >> 2) & 3), static_cast<std::uint8_t>((i >> 4) & 1),
                static_cast<std::uint8_t>((i >> 5) & 1)};
    }
    friend bool operator==(const FtSector&, const FtSector&) = default;
};

class SpacetimeCodeModel {
  public:
    int distance() const { return d_; }
    int rounds() const { return t_; }
    int num_qubits() const { return d_ * d_; }
    int qubit(int row, int col) const { return ((row % d_ + d_) % d_) * d_ + ((col % d_ + d_) % d_); }

    int num_x_stabilizers() const { return static_cast<int>(x_stabs_.size()); }
    int num_z_stabilizers() const { return static_cast<int>(z_stabs_.size()); }
    const std::vector<std::vector<int>>& x_stabilizers() const { return x_stabs_; }
    const std::vector<std::vector<int>>& z_stabilizers() const { return z_stabs_; }

    int num_data_sites() const { return num_qubits() * t_; }
    int num_measurement_sites(Part detected_by_checks_of) const {
        // Part::X errors are seen by Z-type checks.
        return (detected_by_checks_of == Part::X ? num_z_stabilizers() : num_x_stabilizers()) * t_;
    }

    /// The two checks (of the type that sees `part`) touching qubit q.
    const std::array<int, 2>& checks_of(Part part, int q) const {
        return qubit_checks_[static_cast<int>(part)][static_cast<std::size_t>(q)];
    }
    int num_checks(Part part) const { return part == Part::X ? num_z_stabilizers() : num_x_stabilizers(); }

    const std::vector<int>& row0() const { return row0_; }
    const std::vector<int>& col0() const { return col0_; }

    SpacetimeError empty_error() const {
        SpacetimeError e;
        e.data.assign(static_cast<std::size_t>(t_), PauliError(num_qubits()));
        e.meas_x.assign(static_cast<std::size_t>(t_), std::vector<std::uint8_t>(x_stabs_.size(), 0));
        e.meas_z.assign(static_cast<std::size_t>(t_), std::vector<std::uint8_t>(z_stabs_.size(), 0));
        return e;
    }

    friend SpacetimeCodeModel build_spacetime(int d, int rounds);

  private:
    int d_ = 0;
    int t_ = 0;
    std::vector<std::vector<int>> x_stabs_;
    std::vector<std::vector<int>> z_stabs_;
    std::array<std::vector<std::array<int, 2>>, 2> qubit_checks_;
    std::vector<int> row0_;
    std::vector<int> col0_;
};

inline SpacetimeCodeModel build_spacetime(int d, int rounds = 0) {
    if (d < 2) throw InvalidParameter("build_spacetime: distance must be at least 2");
    if (d % 2 != 0) throw InvalidParameter("build_spacetime: the rotated toric layout requires even distance");
    if (rounds == 0) rounds = d;
    if (rounds < 2) throw InvalidParameter("build_spacetime: at least two rounds are required");
    SpacetimeCodeModel m;
    m.d_ = d;
    m.t_ = rounds;
    const int n = d * d;
    std::array<std::vector<std::vector<int>>, 2> touching;
    touching[0].resize(static_cast<std::size_t>(n));
    touching[1].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            std::vector<int> support{m.qubit(i, j), m.qubit(i, j + 1), m.qubit(i + 1, j), m.qubit(i + 1, j + 1)};
            bool is_x = (i + j) % 2 == 0;
            auto& list = is_x ? m.x_stabs_ : m.z_stabs_;
            int idx = static_cast<int>(list.size());
            // X-type checks see the Z part.
            Part seen = is_x ? Part::Z : Part::X;
            for (int q : support) touching[static_cast<int>(seen)][static_cast<std::size_t>(q)].push_back(idx);
            list.push_back(std::move(support));
        }
    }
    for (Part p : kParts) {
        auto& out = m.qubit_checks_[static_cast<int>(p)];
        out.resize(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            const auto& t = touching[static_cast<int>(p)][static_cast<std::size_t>(q)];
            if (t.size() != 2) throw std::logic_error("toric layout: each qubit must touch two checks per type");
            out[static_cast<std::size_t>(q)] = {t[0], t[1]};
        }
    }
    for (int c = 0; c < d; ++c) m.row0_.push_back(m.qubit(0, c));
    for (int r = 0; r < d; ++r) m.col0_.push_back(m.qubit(r, 0));
    return m;
}

/// Detector bits per round for the checks that see `part`
/// (Part::X -> Z-type detectors).
inline std::vector<std::vector<std::uint8_t>> detectors(const SpacetimeCodeModel& model, const SpacetimeError& fault,
                                                        Part part) {
    const int t = model.rounds();
    const auto& meas = part == Part::X ? fault.meas_z : fault.meas_x;
    std::vector<std::vector<std::uint8_t>> out(static_cast<std::size_t>(t));
    for (int r = 0; r < t; ++r) {
        auto& row = out[static_cast<std::size_t>(r)];
        const auto& cur = meas[static_cast<std::size_t>(r)];
        const auto& prev = meas[static_cast<std::size_t>((r + t - 1) % t)];
        row.resize(cur.size());
        for (std::size_t s = 0; s < cur.size(); ++s) row[s] = cur[s] ^ prev[s];
        const auto& bits = fault.data[static_cast<std::size_t>(r)].part(part);
        for (int q = 0; q < model.num_qubits(); ++q) {
            if (!bits[static_cast<std::size_t>(q)]) continue;
            for (int s : model.checks_of(part, q)) row[static_cast<std::size_t>(s)] ^= 1;
        }
    }
    return out;
}

inline bool all_detectors_trivial(const SpacetimeCodeModel& model, const SpacetimeError& fault) {
    for (Part p : kParts)
        for (const auto& row : detectors(model, fault, p))
            for (auto b : row)
                if (b) return false;
    return true;
}

namespace detail {
inline std::uint8_t overlap_parity(const std::vector<std::uint8_t>& bits, const std::vector<int>& support) {
    std::uint8_t v = 0;
    for (int q : support) v ^= bits[static_cast<std::size_t>(q)];
    return v;
}
}  // namespace detail

/// Label from the accumulated data error and round-0 measurement faults.
/// Assumes (does not check) that every detector is trivial.
inline FtSector ft_sector_unchecked(const SpacetimeCodeModel& model, const std::vector<std::uint8_t>& x_total,
                                    const std::vector<std::uint8_t>& z_total, std::uint8_t z_wrap,
                                    std::uint8_t x_wrap) {
    FtSector s;
    s.q1 = make_sector(detail::overlap_parity(x_total, model.col0()), detail::overlap_parity(z_total, model.row0()));
    s.q2 = make_sector(detail::overlap_parity(x_total, model.row0()), detail::overlap_parity(z_total, model.col0()));
    s.z_wrap = z_wrap;
    s.x_wrap = x_wrap;
    return s;
}

inline FtSector ft_sector(const SpacetimeCodeModel& model, const SpacetimeError& fault) {
    if (!all_detectors_trivial(model, fault))
        throw PreconditionViolation("ft_sector: configuration has a nontrivial detector");
    const int n = model.num_qubits();
    std::vector<std::uint8_t> xt(static_cast<std::size_t>(n), 0), zt(static_cast<std::size_t>(n), 0);
    for (const auto& e : fault.data) {
        for (int q = 0; q < n; ++q) {
            xt[static_cast<std::size_t>(q)] ^= e.part(Part::X)[static_cast<std::size_t>(q)];
            zt[static_cast<std::size_t>(q)] ^= e.part(Part::Z)[static_cast<std::size_t>(q)];
        }
    }
    std::uint8_t zw = 0, xw = 0;
    for (auto b : fault.meas_z.front()) zw ^= b;
    for (auto b : fault.meas_x.front()) xw ^= b;
    return ft_sector_unchecked(model, xt, zt, zw, xw);
}

inline SpacetimeError sample_spacetime_error(const SpacetimeCodeModel& model, const NoiseParams& noise, Rng& rng) {
    SpacetimeError e = model.empty_error();
    const double p = noise.p;
    for (int r = 0; r < model.rounds(); ++r) {
        auto& data = e.data[static_cast<std::size_t>(r)];
        if (p > 0.0) {
            for (int q = 0; q < model.num_qubits(); ++q) {
                double u = rng.uniform();
                if (u < p) {
                    int k = static_cast<int>(u * 3.0 / p);
                    data.set(q, k == 0 ? Pauli::X : (k == 1 ? Pauli::Y : Pauli::Z));
                }
            }
        }
        if (noise.p_m > 0.0) {
            for (auto& b : e.meas_x[static_cast<std::size_t>(r)]) b = rng.uniform() < noise.p_m;
            for (auto& b : e.meas_z[static_cast<std::size_t>(r)]) b = rng.uniform() < noise.p_m;
        }
    }
    return e;
}

}  // namespace exdec
