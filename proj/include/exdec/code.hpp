#pragma once

// Rotated surface code with open boundaries (code-capacity setting).
//
// Layout convention: data qubit q = r * d + c sits at row r, column c.
// Plaquette (i, j), i, j in [-1, d-1], touches qubits (i..i+1, j..j+1) that
// lie on the grid. It is X-type when i + j is even, Z-type otherwise. Bulk
// plaquettes of both types are kept; weight-2 X plaquettes sit on the top and
// bottom rows, weight-2 Z plaquettes on the left and right columns.
//
// Consequently X errors (detected by Z checks) terminate on the top/bottom
// boundaries and Z errors on the left/right boundaries. The logical X
// representative is column 0, the logical Z representative is row 0.

#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exdec/errors.hpp"
#include "exdec/rng.hpp"

namespace exdec {

/// Pauli on one qubit, bit 0 = X component, bit 1 = Z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

/// Which half of a Pauli error a decoding problem concerns. The X part is
/// seen by Z-type checks and vice versa.
enum class Part : std::uint8_t { X = 0, Z = 1 };

inline constexpr std::array<Part, 2> kParts{Part::X, Part::Z};

class PauliError {
  public:
    PauliError() = default;
    explicit PauliError(int n) : x_(static_cast<std::size_t>(n), 0), z_(static_cast<std::size_t>(n), 0) {}

    int size() const { return static_cast<int>(x_.size()); }

    Pauli at(int q) const {
        return static_cast<Pauli>(x_[static_cast<std::size_t>(q)] | (z_[static_cast<std::size_t>(q)] << 1));
    }
    void set(int q, Pauli p) {
        auto v = static_cast<std::uint8_t>(p);
        x_[static_cast<std::size_t>(q)] = v & 1;
        z_[static_cast<std::size_t>(q)] = (v >> 1) & 1;
    }

    /// Number of qubits acted on nontrivially (a Y counts once).
    int weight() const {
        int w = 0;
        for (std::size_t q = 0; q < x_.size(); ++q) w += (x_[q] | z_[q]);
        return w;
    }
    bool is_identity() const { return weight() == 0; }

    std::vector<std::uint8_t>& part(Part p) { return p == Part::X ? x_ : z_; }
    const std::vector<std::uint8_t>& part(Part p) const { return p == Part::X ? x_ : z_; }

    /// Product up to phase.
    PauliError& operator*=(const PauliError& other) {
        if (other.size() != size()) throw InvalidParameter("PauliError: length mismatch in product");
        for (std::size_t q = 0; q < x_.size(); ++q) {
            x_[q] ^= other.x_[q];
            z_[q] ^= other.z_[q];
        }
        return *this;
    }
    friend PauliError operator*(PauliError a, const PauliError& b) { return a *= b; }
    friend bool operator==(const PauliError&, const PauliError&) = default;

    std::string to_string() const {
        static constexpr char kChars[] = {'I', 'X', 'Z', 'Y'};
        std::string s;
        for (int q = 0; q < size(); ++q) s += kChars[static_cast<int>(at(q))];
        return s;
    }

  private:
    std::vector<std::uint8_t> x_;
    std::vector<std::uint8_t> z_;
};

/// Logical class of a trivially-syndromed residual. Bit 0 = logical X
/// present, bit 1 = logical Z present, so the product of labels is XOR.
enum class Sector : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr std::array<Sector, 4> kSectors{Sector::I, Sector::X, Sector::Z, Sector::Y};

inline Sector operator*(Sector a, Sector b) {
    return static_cast<Sector>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
inline Sector make_sector(std::uint8_t x_class, std::uint8_t z_class) {
    return static_cast<Sector>((x_class & 1) | ((z_class & 1) << 1));
}
inline std::uint8_t class_bit(Sector s, Part p) {
    return (static_cast<std::uint8_t>(s) >> static_cast<int>(p)) & 1;
}
inline char sector_char(Sector s) {
    static constexpr char kChars[] = {'I', 'X', 'Z', 'Y'};
    return kChars[static_cast<int>(s)];
}

/// Decoding graph for one error part: nodes are the checks of the opposite
/// type plus two boundary nodes, edges are data qubits.
struct CheckGraph {
    int num_checks = 0;
    /// Boundary whose match parity labels the logical class.
    int boundary_a() const { return num_checks; }
    int boundary_b() const { return num_checks + 1; }
    int num_nodes() const { return num_checks + 2; }
    bool is_boundary(int node) const { return node >= num_checks; }

    std::vector<std::array<int, 2>> qubit_nodes;
    std::vector<std::vector<std::pair<int, int>>> adjacency;  // node -> (neighbor, qubit)
    std::vector<std::uint8_t> class_cut;                        // qubit is incident to boundary A
    std::vector<std::vector<int>> check_support;

    /// Shortest-path lengths and last-edge qubits between nodes. Paths never
    /// pass through a boundary node except at their ends.
    std::vector<int> dist_table;
    std::vector<int> via_table;
    int dist(int from, int to) const { return dist_table[static_cast<std::size_t>(from * num_nodes() + to)]; }
    int via(int from, int to) const { return via_table[static_cast<std::size_t>(from * num_nodes() + to)]; }

    /// Qubits of the stored shortest path between two nodes.
    template <class F>
    void for_each_path_qubit(int from, int to, F&& f) const {
        while (to != from) {
            int q = via(from, to);
            f(q);
            const auto& ends = qubit_nodes[static_cast<std::size_t>(q)];
            to = ends[0] == to ? ends[1] : ends[0];
        }
    }
};

/// Violated checks, grouped by the error part that flips them.
struct DefectSet {
    std::vector<int> x_part;  // violated Z-type stabilizers
    std::vector<int> z_part;  // violated X-type stabilizers

    std::vector<int>& of(Part p) { return p == Part::X ? x_part : z_part; }
    const std::vector<int>& of(Part p) const { return p == Part::X ? x_part : z_part; }
    bool empty() const { return x_part.empty() && z_part.empty(); }
    friend bool operator==(const DefectSet&, const DefectSet&) = default;
};

struct NoiseParams {
    double p = 0.0;
    double p_m = 0.0;

    static NoiseParams code_capacity(double p) {
        validate(p);
        return {p, 0.0};
    }
    /// Phenomenological noise with the default measurement coupling 2p/3.
    static NoiseParams phenomenological(double p) {
        validate(p);
        return {p, 2.0 * p / 3.0};
    }
    static void validate(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("noise strength must lie in [0, 1]");
    }
};

class Code {
  public:
    int distance() const { return d_; }
    int num_qubits() const { return d_ * d_; }
    int qubit(int row, int col) const { return row * d_ + col; }
    std::pair<int, int> coords(int q) const { return {q / d_, q % d_}; }

    const std::vector<std::vector<int>>& x_stabilizers() const { return x_stabs_; }
    const std::vector<std::vector<int>>& z_stabilizers() const { return z_stabs_; }
    const std::vector<int>& logical_x() const { return logical_x_; }
    const std::vector<int>& logical_z() const { return logical_z_; }

    /// Graph used to decode the given part of an error.
    const CheckGraph& graph(Part p) const { return graphs_[static_cast<int>(p)]; }

    /// Boundary labels: X errors end on "top"/"bottom" (class boundary first),
    /// Z errors end on "left"/"right".
    static constexpr std::array<const char*, 2> boundary_names(Part p) {
        return p == Part::X ? std::array<const char*, 2>{"top", "bottom"}
                            : std::array<const char*, 2>{"left", "right"};
    }

    friend Code build_code(int d);

  private:
    int d_ = 0;
    std::vector<std::vector<int>> x_stabs_;
    std::vector<std::vector<int>> z_stabs_;
    std::vector<int> logical_x_;
    std::vector<int> logical_z_;
    std::array<CheckGraph, 2> graphs_;
};

namespace detail {

inline CheckGraph make_check_graph(int d, const std::vector<std::vector<int>>& checks, bool rows_are_boundary) {
    CheckGraph g;
    g.num_checks = static_cast<int>(checks.size());
    g.check_support = checks;
    const int n = d * d;
    std::vector<std::vector<int>> touching(static_cast<std::size_t>(n));
    for (int s = 0; s < g.num_checks; ++s)
        for (int q : checks[static_cast<std::size_t>(s)]) touching[static_cast<std::size_t>(q)].push_back(s);
    g.qubit_nodes.resize(static_cast<std::size_t>(n));
    g.class_cut.assign(static_cast<std::size_t>(n), 0);
    g.adjacency.assign(static_cast<std::size_t>(g.num_nodes()), {});
    for (int q = 0; q < n; ++q) {
        const auto& t = touching[static_cast<std::size_t>(q)];
        std::array<int, 2> ends{};
        if (t.size() == 2) {
            ends = {t[0], t[1]};
        } else if (t.size() == 1) {
            int line = rows_are_boundary ? q / d : q % d;
            int b;
            if (line == 0) {
                b = g.boundary_a();
                g.class_cut[static_cast<std::size_t>(q)] = 1;
            } else if (line == d - 1) {
                b = g.boundary_b();
            } else {
                throw std::logic_error("rotated layout: qubit off the boundary touches a single check");
            }
            ends = {t[0], b};
        } else {
            throw std::logic_error("rotated layout: qubit touches an unexpected number of checks");
        }
        g.qubit_nodes[static_cast<std::size_t>(q)] = ends;
        g.adjacency[static_cast<std::size_t>(ends[0])].emplace_back(ends[1], q);
        g.adjacency[static_cast<std::size_t>(ends[1])].emplace_back(ends[0], q);
    }
    const int nn = g.num_nodes();
    g.dist_table.assign(static_cast<std::size_t>(nn * nn), std::numeric_limits<int>::max());
    g.via_table.assign(static_cast<std::size_t>(nn * nn), -1);
    std::vector<int> frontier;
    for (int s = 0; s < nn; ++s) {
        int* dist = &g.dist_table[static_cast<std::size_t>(s * nn)];
        int* via = &g.via_table[static_cast<std::size_t>(s * nn)];
        dist[s] = 0;
        frontier.assign(1, s);
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            int u = frontier[head];
            if (u != s && g.is_boundary(u)) continue;
            for (auto [v, q] : g.adjacency[static_cast<std::size_t>(u)]) {
                if (dist[v] != std::numeric_limits<int>::max()) continue;
                dist[v] = dist[u] + 1;
                via[v] = q;
                frontier.push_back(v);
            }
        }
    }
    return g;
}

}  // namespace detail

inline Code build_code(int d) {
    if (d < 2) throw InvalidParameter("build_code: distance must be at least 2");
    Code code;
    code.d_ = d;
    auto on_grid = [d](int r, int c) { return r >= 0 && r < d && c >= 0 && c < d; };
    for (int i = -1; i <= d - 1; ++i) {
        for (int j = -1; j <= d - 1; ++j) {
            bool is_x = ((i + j) % 2 + 2) % 2 == 0;
            bool row_edge = (i == -1 || i == d - 1);
            bool col_edge = (j == -1 || j == d - 1);
            if (row_edge && col_edge) continue;
            if (row_edge && !is_x) continue;
            if (col_edge && is_x) continue;
            std::vector<int> support;
            for (int r = i; r <= i + 1; ++r)
                for (int c = j; c <= j + 1; ++c)
                    if (on_grid(r, c)) support.push_back(code.qubit(r, c));
            (is_x ? code.x_stabs_ : code.z_stabs_).push_back(std::move(support));
        }
    }
    for (int r = 0; r < d; ++r) code.logical_x_.push_back(code.qubit(r, 0));
    for (int c = 0; c < d; ++c) code.logical_z_.push_back(code.qubit(0, c));
    code.graphs_[static_cast<int>(Part::X)] = detail::make_check_graph(d, code.z_stabs_, true);
    code.graphs_[static_cast<int>(Part::Z)] = detail::make_check_graph(d, code.x_stabs_, false);
    return code;
}

/// Check bits (one per check in `graph(part)`) flipped by one error part.
inline std::vector<std::uint8_t> check_bits(const Code& code, Part part, const std::vector<std::uint8_t>& bits) {
    const CheckGraph& g = code.graph(part);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(g.num_checks), 0);
    for (int q = 0; q < code.num_qubits(); ++q) {
        if (!bits[static_cast<std::size_t>(q)]) continue;
        for (int node : g.qubit_nodes[static_cast<std::size_t>(q)])
            if (!g.is_boundary(node)) out[static_cast<std::size_t>(node)] ^= 1;
    }
    return out;
}

inline std::vector<int> bits_to_indices(const std::vector<std::uint8_t>& bits) {
    std::vector<int> out;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.push_back(static_cast<int>(i));
    return out;
}

inline DefectSet syndrome(const Code& code, const PauliError& error) {
    if (error.size() != code.num_qubits()) throw InvalidParameter("syndrome: error length does not match code");
    DefectSet s;
    for (Part p : kParts) s.of(p) = bits_to_indices(check_bits(code, p, error.part(p)));
    return s;
}

/// Parity of one error part across the class-defining boundary cut.
inline std::uint8_t class_parity(const Code& code, Part part, const std::vector<std::uint8_t>& bits) {
    const auto& cut = code.graph(part).class_cut;
    std::uint8_t parity = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) parity ^= (bits[q] & cut[q]);
    return parity;
}

/// Per-qubit check masks of one part, for parts with at most 64 checks.
struct SyndromeMasks {
    std::vector<std::uint64_t> column;  // empty when the part has more than 64 checks
    std::vector<int> cut;               // qubits on the class cut

    bool usable() const { return !column.empty(); }
    std::uint64_t syndrome(const std::vector<std::uint8_t>& bits) const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < column.size(); ++q)
            if (bits[q]) m ^= column[q];
        return m;
    }
    std::uint8_t parity(const std::vector<std::uint8_t>& bits) const {
        std::uint8_t x = 0;
        for (int q : cut) x ^= bits[static_cast<std::size_t>(q)];
        return x;
    }
};

inline SyndromeMasks syndrome_masks(const Code& code, Part part) {
    const CheckGraph& g = code.graph(part);
    SyndromeMasks out;
    for (int q = 0; q < code.num_qubits(); ++q)
        if (g.class_cut[static_cast<std::size_t>(q)]) out.cut.push_back(q);
    if (g.num_checks > 64) return out;
    out.column.assign(static_cast<std::size_t>(code.num_qubits()), 0);
    for (int q = 0; q < code.num_qubits(); ++q)
        for (int node : g.qubit_nodes[static_cast<std::size_t>(q)])
            if (!g.is_boundary(node)) out.column[static_cast<std::size_t>(q)] |= std::uint64_t{1} << node;
    return out;
}

inline std::vector<int> mask_to_indices(std::uint64_t m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

/// Sector label ignoring the syndrome; meaningful as a relative label for
/// operators sharing a syndrome.
inline Sector raw_sector(const Code& code, const PauliError& e) {
    return make_sector(class_parity(code, Part::X, e.part(Part::X)), class_parity(code, Part::Z, e.part(Part::Z)));
}

inline Sector logical_sector(const Code& code, const PauliError& residual) {
    if (!syndrome(code, residual).empty())
        throw PreconditionViolation("logical_sector: residual has a nontrivial syndrome");
    return raw_sector(code, residual);
}

/// i.i.d. depolarizing: X, Y, Z each with probability p / 3.
inline PauliError sample_error(const Code& code, const NoiseParams& noise, Rng& rng) {
    PauliError e(code.num_qubits());
    const double p = noise.p;
    if (p <= 0.0) return e;
    for (int q = 0; q < code.num_qubits(); ++q) {
        double u = rng.uniform();
        if (u < p) {
            int k = static_cast<int>(u * 3.0 / p);
            e.set(q, k == 0 ? Pauli::X : (k == 1 ? Pauli::Y : Pauli::Z));
        }
    }
    return e;
}

/// Operator with the given Pauli on every qubit of `support`.
inline PauliError operator_on(const Code& code, const std::vector<int>& support, Pauli p) {
    PauliError e(code.num_qubits());
    for (int q : support) e.set(q, p);
    return e;
}

/// A trivially-syndromed representative of `s`.
inline PauliError sector_representative(const Code& code, Sector s) {
    PauliError e(code.num_qubits());
    if (class_bit(s, Part::X)) e *= operator_on(code, code.logical_x(), Pauli::X);
    if (class_bit(s, Part::Z)) e *= operator_on(code, code.logical_z(), Pauli::Z);
    return e;
}

}  // namespace exdec
