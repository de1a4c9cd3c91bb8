#pragma once

// Splitting estimators for rare decoder events.
//
// A level is a depolarizing strength p. At each level a Metropolis chain
// samples P_p(E | E in S) for a fixed event S; adjacent levels are linked by
// Bennett's acceptance-ratio estimate of P_{p'}(S) / P_p(S). Because the
// likelihood ratio of two depolarizing channels depends only on the error
// weight, chains only need to record weights.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "exdec/code.hpp"
#include "exdec/errors.hpp"
#include "exdec/evaluator.hpp"
#include "exdec/parallel.hpp"
#include "exdec/rng.hpp"

namespace exdec {

enum class EventKind { Failure, Abort, Accept, InSector };

/// Set of error configurations defined through a decoder verdict.
struct Event {
    EventKind kind = EventKind::Failure;
    Sector sector = Sector::I;

    static Event failure() { return {EventKind::Failure, Sector::I}; }
    static Event abort() { return {EventKind::Abort, Sector::I}; }
    static Event accept() { return {EventKind::Accept, Sector::I}; }
    static Event in_sector(Sector s) { return {EventKind::InSector, s}; }

    bool contains(const ShotVerdict& v) const {
        switch (kind) {
            case EventKind::Failure: return !v.aborted && v.residual != Sector::I;
            case EventKind::Abort: return v.aborted;
            case EventKind::Accept: return !v.aborted;
            case EventKind::InSector: return !v.aborted && v.residual == sector;
        }
        return false;
    }
    std::string name() const {
        switch (kind) {
            case EventKind::Failure: return "failure";
            case EventKind::Abort: return "abort";
            case EventKind::Accept: return "accept";
            case EventKind::InSector: return std::string("sector_") + sector_char(sector);
        }
        return "";
    }
};

using Predicate = std::function<bool(const PauliError&)>;

inline Predicate make_predicate(Evaluator ev, Event event) {
    return [ev = std::move(ev), event](const PauliError& e) { return event.contains(ev(e)); };
}

// ---------------------------------------------------------------------------
// Conditional Metropolis sampler

struct ChainSettings {
    long burn_in_sweeps = -1;  // negative: 10 * n
    long samples = 1000;
    long thin_sweeps = 1;
    double stabilizer_move_fraction = 0.5;

    long burn_in(int n) const { return burn_in_sweeps < 0 ? 10L * n : burn_in_sweeps; }
};

/// log of the weight factor (p/3)/(1-p) picked up by each extra error.
inline double log_weight_factor(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("chain error probability must lie in (0, 1)");
    return std::log(p / 3.0) - std::log1p(-p);
}

/// Metropolis chain on Pauli errors restricted to a predicate. Moves are
/// single-site replacements (uniform among the three other Paulis) and
/// multiplication by a uniformly chosen stabilizer generator; both are
/// symmetric, so the stationary law is P_p restricted to the predicate.
class ConditionalChain {
  public:
    using Generator = std::pair<std::vector<int>, Pauli>;

    ConditionalChain(int num_qubits, double p, Predicate predicate, PauliError init, std::vector<Generator> generators,
                     double stabilizer_move_fraction)
        : n_(num_qubits), log_factor_(log_weight_factor(p)), predicate_(std::move(predicate)), state_(std::move(init)),
          stab_fraction_(generators.empty() ? 0.0 : stabilizer_move_fraction), generators_(std::move(generators)) {
        if (n_ < 1 || state_.size() != n_) throw InvalidParameter("chain: initial error length mismatch");
        if (!(stabilizer_move_fraction >= 0.0 && stabilizer_move_fraction <= 1.0))
            throw InvalidParameter("chain: move fraction must lie in [0, 1]");
        if (!predicate_(state_)) throw InvalidParameter("chain: initial error violates the predicate");
        weight_ = state_.weight();
    }
    ConditionalChain(const Code& code, double p, Predicate predicate, PauliError init, double stabilizer_move_fraction = 0.5)
        : ConditionalChain(code.num_qubits(), p, std::move(predicate), std::move(init), generators_of(code),
                           stabilizer_move_fraction) {}

    static std::vector<Generator> generators_of(const Code& code) {
        std::vector<Generator> g;
        for (const auto& s : code.x_stabilizers()) g.emplace_back(s, Pauli::X);
        for (const auto& s : code.z_stabilizers()) g.emplace_back(s, Pauli::Z);
        return g;
    }

    /// One proposal. Returns true if accepted.
    bool step(Rng& rng) {
        ++proposals_;
        const bool stab = stab_fraction_ > 0.0 && rng.uniform() < stab_fraction_;
        return stab ? stabilizer_move(rng) : site_move(rng);
    }
    void sweep(Rng& rng) {
        for (int i = 0; i < n_; ++i) step(rng);
    }

    int weight() const { return weight_; }
    const PauliError& state() const { return state_; }
    long proposals() const { return proposals_; }
    long accepted() const { return accepted_; }

  private:
    bool metropolis(int dw, Rng& rng) const {
        if (dw == 0) return true;
        const double la = dw * log_factor_;
        if (la >= 0.0) return true;
        return std::log(rng.uniform()) < la;
    }
    bool site_move(Rng& rng) {
        const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
        const Pauli old = state_.at(q);
        auto shift = static_cast<std::uint8_t>(1 + rng.below(3));
        const auto np = static_cast<Pauli>(static_cast<std::uint8_t>(old) ^ shift);
        const int dw = (np != Pauli::I) - (old != Pauli::I);
        if (!metropolis(dw, rng)) return false;
        state_.set(q, np);
        if (!predicate_(state_)) {
            state_.set(q, old);
            return false;
        }
        weight_ += dw;
        ++accepted_;
        return true;
    }
    void apply(const std::vector<int>& support, Pauli p) {
        auto& bits = state_.part(p == Pauli::X ? Part::X : Part::Z);
        for (int q : support) bits[static_cast<std::size_t>(q)] ^= 1;
    }
    bool stabilizer_move(Rng& rng) {
        const auto& g = generators_[rng.below(generators_.size())];
        int before = 0, after = 0;
        for (int q : g.first) before += state_.at(q) != Pauli::I;
        apply(g.first, g.second);
        for (int q : g.first) after += state_.at(q) != Pauli::I;
        const int dw = after - before;
        if (!metropolis(dw, rng) || !predicate_(state_)) {
            apply(g.first, g.second);
            return false;
        }
        weight_ += dw;
        ++accepted_;
        return true;
    }

    int n_;
    double log_factor_;
    Predicate predicate_;
    PauliError state_;
    double stab_fraction_;
    std::vector<Generator> generators_;
    int weight_ = 0;
    long proposals_ = 0;
    long accepted_ = 0;
};

struct ChainRun {
    std::vector<int> weights;
    long proposals = 0;
    long accepted = 0;
    PauliError state;

    double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0; }
};

/// Burn in, then record the weight once every `thin_sweeps` sweeps.
inline ChainRun mcmc_conditional(const Code& code, double p, const Predicate& predicate, const PauliError& init,
                                 const ChainSettings& settings, Rng& rng) {
    if (settings.samples < 0 || settings.thin_sweeps < 1) throw InvalidParameter("chain: bad sample settings");
    ConditionalChain chain(code, p, predicate, init, settings.stabilizer_move_fraction);
    const long burn = settings.burn_in(code.num_qubits());
    for (long s = 0; s < burn; ++s) chain.sweep(rng);
    ChainRun run;
    run.weights.reserve(static_cast<std::size_t>(settings.samples));
    for (long i = 0; i < settings.samples; ++i) {
        for (long s = 0; s < settings.thin_sweeps; ++s) chain.sweep(rng);
        run.weights.push_back(chain.weight());
    }
    run.proposals = chain.proposals();
    run.accepted = chain.accepted();
    run.state = chain.state();
    return run;
}

// ---------------------------------------------------------------------------
// Acceptance-ratio estimator

struct RatioEstimate {
    double log_ratio = 0.0;
    double log_ratio_se = 0.0;
    double ess_forward = 0.0;   // Kish ESS of P_to/P_from weights on the `from` samples
    double ess_backward = 0.0;  // and of the inverse weights on the `to` samples
    std::size_t n_from = 0;
    std::size_t n_to = 0;

    double ratio() const { return std::exp(log_ratio); }
    double min_ess_fraction() const {
        if (n_from == 0 || n_to == 0) return 0.0;
        return std::min(ess_forward / static_cast<double>(n_from), ess_backward / static_cast<double>(n_to));
    }
};

/// log P_to(E) - log P_from(E) for a weight-w error on n qubits.
inline double log_likelihood_ratio(int w, int n, double p_from, double p_to) {
    return w * (std::log(p_to) - std::log(p_from)) + (n - w) * (std::log1p(-p_to) - std::log1p(-p_from));
}

namespace detail {

inline double log_sigmoid(double z) { return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

inline double log_sum_exp(const std::vector<double>& v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline double kish_ess(const std::vector<double>& log_w) {
    std::vector<double> twice(log_w.size());
    for (std::size_t i = 0; i < log_w.size(); ++i) twice[i] = 2.0 * log_w[i];
    return std::exp(2.0 * log_sum_exp(log_w) - log_sum_exp(twice));
}

/// Root r of sum_from sigmoid(l - r + M) = sum_to sigmoid(r - M - l),
/// M = log(n_to / n_from). The left side falls and the right side rises in r.
inline std::vector<std::pair<double, double>> tally(const std::vector<double>& v) {
    std::map<double, double> m;
    for (double x : v) m[x] += 1.0;
    return {m.begin(), m.end()};
}

inline double bar_solve(const std::vector<double>& l_from, const std::vector<double>& l_to) {
    const double m = std::log(static_cast<double>(l_to.size()) / static_cast<double>(l_from.size()));
    const auto tf = tally(l_from);
    const auto tt = tally(l_to);
    std::vector<double> a(tf.size()), b(tt.size());
    auto balance = [&](double r) {
        for (std::size_t i = 0; i < tf.size(); ++i) a[i] = log_sigmoid(tf[i].first - r + m) + std::log(tf[i].second);
        for (std::size_t i = 0; i < tt.size(); ++i) b[i] = log_sigmoid(r - m - tt[i].first) + std::log(tt[i].second);
        return log_sum_exp(a) - log_sum_exp(b);
    };
    double lo = std::min(tf.front().first, tt.front().first);
    double hi = std::max(tf.back().first, tt.back().first);
    lo -= 60.0 + std::abs(m);
    hi += 60.0 + std::abs(m);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (balance(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Two-sided acceptance-ratio estimate of P_to(S) / P_from(S) from weights
/// sampled under P_from(. | S) and P_to(. | S). Standard error by a
/// delete-one-batch jackknife over contiguous batches, which absorbs chain
/// autocorrelation shorter than a batch.
inline RatioEstimate ratio_estimate(const std::vector<int>& w_from, const std::vector<int>& w_to, int n, double p_from,
                                    double p_to, int batches = 20) {
    if (w_from.empty() || w_to.empty()) throw InvalidParameter("ratio_estimate: empty sample set");
    if (!(p_from > 0.0 && p_from < 1.0 && p_to > 0.0 && p_to < 1.0))
        throw InvalidParameter("ratio_estimate: probabilities must lie in (0, 1)");
    RatioEstimate out;
    out.n_from = w_from.size();
    out.n_to = w_to.size();
    std::vector<double> lf(w_from.size()), lt(w_to.size());
    for (std::size_t i = 0; i < w_from.size(); ++i) lf[i] = log_likelihood_ratio(w_from[i], n, p_from, p_to);
    for (std::size_t i = 0; i < w_to.size(); ++i) lt[i] = log_likelihood_ratio(w_to[i], n, p_from, p_to);
    std::vector<double> neg(lt.size());
    for (std::size_t i = 0; i < lt.size(); ++i) neg[i] = -lt[i];
    out.ess_forward = detail::kish_ess(lf);
    out.ess_backward = detail::kish_ess(neg);
    if (p_from == p_to) {
        out.log_ratio = 0.0;
        out.log_ratio_se = 0.0;
        return out;
    }
    const auto [fmin, fmax] = std::minmax_element(w_from.begin(), w_from.end());
    const auto [tmin, tmax] = std::minmax_element(w_to.begin(), w_to.end());
    if (*fmax < *tmin || *tmax < *fmin) throw OverlapFailure("ratio_estimate: sample weight ranges are disjoint", -1);
    out.log_ratio = detail::bar_solve(lf, lt);

    const int b = std::max(2, std::min<int>(batches, static_cast<int>(std::min(lf.size(), lt.size()))));
    if (std::min(lf.size(), lt.size()) < 2) {
        out.log_ratio_se = std::numeric_limits<double>::infinity();
        return out;
    }
    std::vector<double> jack;
    for (int k = 0; k < b; ++k) {
        auto drop = [&](const std::vector<double>& v) {
            const std::size_t lo = v.size() * static_cast<std::size_t>(k) / static_cast<std::size_t>(b);
            const std::size_t hi = v.size() * static_cast<std::size_t>(k + 1) / static_cast<std::size_t>(b);
            std::vector<double> r;
            r.reserve(v.size() - (hi - lo));
            r.insert(r.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo));
            r.insert(r.end(), v.begin() + static_cast<std::ptrdiff_t>(hi), v.end());
            return r;
        };
        jack.push_back(detail::bar_solve(drop(lf), drop(lt)));
    }
    const double mean = std::accumulate(jack.begin(), jack.end(), 0.0) / b;
    double ss = 0.0;
    for (double j : jack) ss += (j - mean) * (j - mean);
    out.log_ratio_se = std::sqrt(ss * (b - 1) / b);
    return out;
}

// ---------------------------------------------------------------------------
// Splitting over a schedule of error probabilities

struct SplitSettings {
    ChainSettings chain;
    int chains_per_level = 2;
    double max_ratio = 1.25;         // largest allowed p ratio between adjacent levels
    double min_ess_fraction = 0.1;   // overlap diagnostic triggering refinement
    int max_refinements = 12;
    int batches = 20;
    std::uint64_t seed = 1;
    int threads = 0;
};

/// Record of one link between adjacent levels.
struct SplitStep {
    int j = 0;  // link from level j to level j + 1
    double p_from = 0.0;
    double p_to = 0.0;
    double log_ratio = 0.0;
    double log_ratio_se = 0.0;
    double ess = 0.0;  // smaller of the two Kish ESS values
};

struct SplittingResult {
    std::vector<double> p;
    std::vector<double> log_prob;
    std::vector<double> log_prob_se;
    std::vector<double> acceptance_rate;  // Metropolis acceptance per level
    std::vector<SplitStep> steps;
    std::vector<std::string> warnings;

    std::size_t index_of(double q) const {
        for (std::size_t j = 0; j < p.size(); ++j)
            if (std::abs(p[j] - q) <= 1e-12 * q) return j;
        throw InvalidParameter("splitting result has no level at the requested p");
    }
    double prob(std::size_t j) const { return std::exp(log_prob[j]); }
    double prob_at(double q) const { return prob(index_of(q)); }
    /// Standard error of the probability (delta method on the log).
    double prob_se_at(double q) const {
        auto j = index_of(q);
        return prob(j) * log_prob_se[j];
    }
};

/// Requested points plus geometric fill so adjacent ratios stay within
/// `max_ratio`. The schedule must be strictly monotone inside (0, 1).
inline std::vector<double> densify_schedule(const std::vector<double>& requested, double max_ratio) {
    if (requested.empty()) throw InvalidParameter("schedule is empty");
    if (!(max_ratio > 1.0)) throw InvalidParameter("schedule: max ratio must exceed 1");
    for (double q : requested)
        if (!(q > 0.0 && q < 1.0)) throw InvalidParameter("schedule points must lie in (0, 1)");
    if (requested.size() > 1) {
        const bool down = requested[1] < requested[0];
        for (std::size_t i = 1; i < requested.size(); ++i)
            if (down ? !(requested[i] < requested[i - 1]) : !(requested[i] > requested[i - 1]))
                throw InvalidParameter("schedule must be strictly monotone");
    }
    std::vector<double> out{requested.front()};
    for (std::size_t i = 1; i < requested.size(); ++i) {
        const double a = requested[i - 1], b = requested[i];
        const double span = std::abs(std::log(b / a));
        const int k = std::max(1, static_cast<int>(std::ceil(span / std::log(max_ratio) - 1e-9)));
        for (int s = 1; s < k; ++s) out.push_back(a * std::exp(std::log(b / a) * s / k));
        out.push_back(b);
    }
    return out;
}

namespace detail {

/// Stream index for the chain at (p, chain, target): a function of the
/// level's value, so inserted levels never shift other levels' streams.
inline std::uint64_t level_stream(double p, int chain, int target) {
    return mix64(std::bit_cast<std::uint64_t>(p)) ^ (static_cast<std::uint64_t>(chain) << 40) ^
           (static_cast<std::uint64_t>(target) << 52);
}

}  // namespace detail

/// Splitting for several events over a shared schedule. Level 0 of target t
/// is fixed to log_anchor[t]. A link whose overlap diagnostic fails for any
/// target gets a geometric midpoint for all targets.
inline std::vector<SplittingResult> run_splitting_multi(const Code& code, const std::vector<double>& schedule,
                                                        const std::vector<Predicate>& predicates,
                                                        const std::vector<PauliError>& inits,
                                                        const std::vector<double>& log_anchor,
                                                        const std::vector<double>& log_anchor_se,
                                                        const SplitSettings& settings) {
    const std::size_t nt = predicates.size();
    if (nt == 0 || inits.size() != nt || log_anchor.size() != nt || log_anchor_se.size() != nt)
        throw InvalidParameter("run_splitting: one init and anchor per predicate required");
    if (settings.chains_per_level < 1) throw InvalidParameter("run_splitting: need at least one chain per level");
    for (std::size_t t = 0; t < nt; ++t)
        if (!predicates[t](inits[t])) throw InvalidParameter("run_splitting: initial error violates its predicate");
    std::vector<double> levels = densify_schedule(schedule, settings.max_ratio);
    const int n = code.num_qubits();

    struct LevelData {
        std::vector<std::vector<int>> weights;  // per target, chains concatenated
        std::vector<double> acceptance;
    };
    std::map<double, LevelData> cache;
    std::vector<SplittingResult> out(nt);

    for (int round = 0;; ++round) {
        std::vector<double> missing;
        for (double q : levels)
            if (!cache.count(q)) missing.push_back(q);
        const std::size_t chains = static_cast<std::size_t>(settings.chains_per_level);
        std::vector<ChainRun> runs(missing.size() * nt * chains);
        parallel_for(
            runs.size(),
            [&](std::size_t i) {
                const std::size_t level = i / (nt * chains);
                const std::size_t target = (i / chains) % nt;
                const std::size_t chain = i % chains;
                Rng rng(settings.seed, detail::level_stream(missing[level], static_cast<int>(chain), static_cast<int>(target)));
                runs[i] = mcmc_conditional(code, missing[level], predicates[target], inits[target], settings.chain, rng);
            },
            settings.threads);
        for (std::size_t l = 0; l < missing.size(); ++l) {
            LevelData data;
            data.weights.resize(nt);
            data.acceptance.resize(nt);
            for (std::size_t t = 0; t < nt; ++t) {
                long prop = 0, acc = 0;
                for (std::size_t c = 0; c < chains; ++c) {
                    const auto& r = runs[(l * nt + t) * chains + c];
                    data.weights[t].insert(data.weights[t].end(), r.weights.begin(), r.weights.end());
                    prop += r.proposals;
                    acc += r.accepted;
                }
                data.acceptance[t] = prop ? static_cast<double>(acc) / static_cast<double>(prop) : 0.0;
            }
            cache[missing[l]] = std::move(data);
        }

        std::vector<std::vector<RatioEstimate>> links(levels.size() - (levels.empty() ? 0 : 1), std::vector<RatioEstimate>(nt));
        std::vector<std::size_t> bad;
        for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
            bool ok = true;
            for (std::size_t t = 0; t < nt; ++t) {
                try {
                    links[j][t] = ratio_estimate(cache[levels[j]].weights[t], cache[levels[j + 1]].weights[t], n,
                                                 levels[j], levels[j + 1], settings.batches);
                } catch (const OverlapFailure&) {
                    links[j][t] = RatioEstimate{};
                }
                if (links[j][t].min_ess_fraction() < settings.min_ess_fraction) ok = false;
            }
            if (!ok) bad.push_back(j);
        }
        if (bad.empty()) {
            for (std::size_t t = 0; t < nt; ++t) {
                auto& r = out[t];
                r.p = levels;
                r.log_prob.assign(levels.size(), 0.0);
                r.log_prob_se.assign(levels.size(), 0.0);
                r.acceptance_rate.assign(levels.size(), 0.0);
                r.log_prob[0] = log_anchor[t];
                r.log_prob_se[0] = log_anchor_se[t];
                double var = log_anchor_se[t] * log_anchor_se[t];
                for (std::size_t j = 0; j < levels.size(); ++j) {
                    r.acceptance_rate[j] = cache[levels[j]].acceptance[t];
                    if (r.acceptance_rate[j] < 1e-3)
                        r.warnings.push_back("Metropolis acceptance collapsed to " + std::to_string(r.acceptance_rate[j]) +
                                             " at p=" + std::to_string(levels[j]));
                    if (j == 0) continue;
                    const auto& e = links[j - 1][t];
                    r.log_prob[j] = r.log_prob[j - 1] + e.log_ratio;
                    var += e.log_ratio_se * e.log_ratio_se;
                    r.log_prob_se[j] = std::sqrt(var);
                    r.steps.push_back({static_cast<int>(j - 1), levels[j - 1], levels[j], e.log_ratio, e.log_ratio_se,
                                       std::min(e.ess_forward, e.ess_backward)});
                }
            }
            return out;
        }
        if (round >= settings.max_refinements) {
            const auto& worst = links[bad.front()];
            double ess = std::numeric_limits<double>::infinity();
            for (const auto& e : worst) ess = std::min(ess, e.min_ess_fraction());
            throw OverlapFailure("splitting: adjacent levels do not overlap (ESS fraction " + std::to_string(ess) + ")",
                                 static_cast<int>(bad.front()));
        }
        std::vector<double> refined;
        std::size_t bi = 0;
        for (std::size_t j = 0; j < levels.size(); ++j) {
            refined.push_back(levels[j]);
            if (bi < bad.size() && bad[bi] == j) {
                refined.push_back(std::sqrt(levels[j] * levels[j + 1]));
                ++bi;
            }
        }
        levels = std::move(refined);
    }
}

/// Splitting for one event. The anchor is P_{schedule[0]}(S) with its
/// standard error.
inline SplittingResult run_splitting(const Code& code, const std::vector<double>& schedule, const Predicate& predicate,
                                     const PauliError& init, double anchor_prob, double anchor_se,
                                     const SplitSettings& settings) {
    if (!(anchor_prob > 0.0)) throw InvalidParameter("run_splitting: anchor probability must be positive");
    return run_splitting_multi(code, schedule, {predicate}, {init}, {std::log(anchor_prob)}, {anchor_se / anchor_prob},
                               settings)
        .front();
}

/// Some error satisfying `predicate`, drawn from P_p by rejection.
inline PauliError find_initial_error(const Code& code, double p, const Predicate& predicate, std::uint64_t seed,
                                     long max_draws = 10000000) {
    Rng rng(seed, 0, 0x1717);
    for (long i = 0; i < max_draws; ++i) {
        PauliError e = sample_error(code, NoiseParams::code_capacity(p), rng);
        if (predicate(e)) return e;
    }
    throw BudgetExceeded("find_initial_error: no configuration found in the draw budget", static_cast<double>(max_draws));
}

// ---------------------------------------------------------------------------
// Sector splitting

inline constexpr double kSymmetricAnchor = 0.75;

struct SectorSplittingResult {
    std::vector<double> p;
    std::array<SplittingResult, 4> sector;  // indexed by Sector value, P~_0 = 1
    std::vector<double> f, f_se;
    std::vector<double> log_total, log_total_se;  // log sum_L P~_j(L)

    std::size_t index_of(double q) const { return sector[0].index_of(q); }
    double f_at(double q) const { return f[index_of(q)]; }

    /// Acceptance probabilities h_j with the constant fixed by h(p_ref) = h_ref.
    /// Writes standard errors into `se` when given.
    std::vector<double> acceptance(double p_ref, double h_ref, double h_ref_se, std::vector<double>* se = nullptr) const {
        if (!(h_ref > 0.0)) throw InvalidParameter("acceptance: reference acceptance must be positive");
        const std::size_t r = index_of(p_ref);
        std::vector<double> h(p.size());
        if (se) se->assign(p.size(), 0.0);
        const double rel_ref = h_ref_se / h_ref;
        for (std::size_t j = 0; j < p.size(); ++j) {
            h[j] = std::exp(log_total[j] - log_total[r] + std::log(h_ref));
            if (se) {
                // Links between j and r are shared; their variance is the difference of the cumulative variances.
                const double link_var = std::abs(log_total_se[j] * log_total_se[j] - log_total_se[r] * log_total_se[r]);
                (*se)[j] = h[j] * std::sqrt(link_var + rel_ref * rel_ref);
            }
        }
        return h;
    }
};

/// Per-sector splitting from the fully depolarizing point p = 3/4, where all
/// Paulis are equally likely and so all sector probabilities coincide.
inline SectorSplittingResult run_sector_splitting(const Code& code, const std::vector<double>& schedule,
                                                  const Evaluator& evaluator, const SplitSettings& settings) {
    if (schedule.empty() || schedule.front() != kSymmetricAnchor)
        throw InvalidParameter("sector splitting must be anchored at p = 0.75");
    std::vector<Predicate> preds;
    std::vector<PauliError> inits;
    for (Sector s : kSectors) {
        preds.push_back(make_predicate(evaluator, Event::in_sector(s)));
        inits.push_back(sector_representative(code, s));
    }
    auto runs = run_splitting_multi(code, schedule, preds, inits, {0, 0, 0, 0}, {0, 0, 0, 0}, settings);
    SectorSplittingResult out;
    for (Sector s : kSectors) out.sector[static_cast<std::size_t>(s)] = std::move(runs[static_cast<std::size_t>(s)]);
    out.p = out.sector[0].p;
    const std::size_t m = out.p.size();
    out.f.resize(m);
    out.f_se.resize(m);
    out.log_total.resize(m);
    out.log_total_se.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::array<double, 4> lp{}, se{};
        for (std::size_t s = 0; s < 4; ++s) {
            lp[s] = out.sector[s].log_prob[j];
            se[s] = out.sector[s].log_prob_se[j];
        }
        const double top = *std::max_element(lp.begin(), lp.end());
        std::array<double, 4> v{};
        double total = 0.0;
        for (std::size_t s = 0; s < 4; ++s) total += v[s] = std::exp(lp[s] - top);
        const double bad = total - v[0];
        out.f[j] = bad / total;
        out.log_total[j] = top + std::log(total);
        double var_f = (v[0] * bad / (total * total)) * (v[0] * bad / (total * total)) * se[0] * se[0];
        double var_t = (v[0] / total) * (v[0] / total) * se[0] * se[0];
        for (std::size_t s = 1; s < 4; ++s) {
            const double df = v[s] * v[0] / (total * total);
            var_f += df * df * se[s] * se[s];
            var_t += (v[s] / total) * (v[s] / total) * se[s] * se[s];
        }
        out.f_se[j] = std::sqrt(var_f);
        out.log_total_se[j] = std::sqrt(var_t);
    }
    return out;
}

}  // namespace exdec
