#pragma once

// Direct Monte Carlo estimators, closed-form ansatz evaluators and the
// finite-size fits used on their outputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "exdec/code.hpp"
#include "exdec/errors.hpp"
#include "exdec/evaluator.hpp"
#include "exdec/parallel.hpp"
#include "exdec/rng.hpp"
#include "exdec/spacetime.hpp"

namespace exdec {

// ---------------------------------------------------------------------------
// Direct Monte Carlo

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    long count = 0;
};

struct DirectMcResult {
    long shots = 0;
    long accepts = 0;
    long aborts = 0;
    long failures = 0;  // accepted with a nontrivial residual

    Estimate g() const {
        const double v = shots ? static_cast<double>(aborts) / static_cast<double>(shots) : 0.0;
        return {v, shots ? std::sqrt(v * (1.0 - v) / static_cast<double>(shots)) : 0.0, shots};
    }
    Estimate h() const {
        auto a = g();
        return {1.0 - a.value, a.se, shots};
    }
    bool f_defined() const { return accepts > 0; }
    /// Post-selected failure rate; NaN when no shot was accepted.
    Estimate f() const {
        if (!f_defined()) return {std::nan(""), std::nan(""), 0};
        const double v = static_cast<double>(failures) / static_cast<double>(accepts);
        return {v, std::sqrt(v * (1.0 - v) / static_cast<double>(accepts)), accepts};
    }
    DirectMcResult& operator+=(const DirectMcResult& o) {
        shots += o.shots;
        accepts += o.accepts;
        aborts += o.aborts;
        failures += o.failures;
        return *this;
    }
};

inline constexpr long kShotBlock = 4096;

namespace detail {

/// Runs `shot(rng)` over fixed-size blocks, each with its own stream, and
/// merges in block order.
template <class Shot>
DirectMcResult blocked_mc(long shots, std::uint64_t seed, std::uint64_t salt, int threads, Shot&& shot) {
    if (shots < 1) throw InvalidParameter("direct_mc: shots must be at least 1");
    const long blocks = (shots + kShotBlock - 1) / kShotBlock;
    std::vector<DirectMcResult> parts(static_cast<std::size_t>(blocks));
    parallel_for(
        static_cast<std::size_t>(blocks),
        [&](std::size_t b) {
            Rng rng(seed, b, salt);
            const long lo = static_cast<long>(b) * kShotBlock;
            const long hi = std::min(shots, lo + kShotBlock);
            DirectMcResult r;
            for (long i = lo; i < hi; ++i) shot(rng, r);
            parts[b] = r;
        },
        threads);
    DirectMcResult out;
    for (const auto& r : parts) out += r;
    return out;
}

}  // namespace detail

/// Code-capacity (or any data-only) direct Monte Carlo of a decoder verdict.
inline DirectMcResult direct_mc(const Code& code, const Evaluator& evaluator, const NoiseParams& noise, long shots,
                                std::uint64_t seed, int threads = 0) {
    return detail::blocked_mc(shots, seed, 0xCC, threads, [&](Rng& rng, DirectMcResult& r) {
        const PauliError e = sample_error(code, noise, rng);
        const ShotVerdict v = evaluator(e);
        ++r.shots;
        if (v.aborted) {
            ++r.aborts;
            return;
        }
        ++r.accepts;
        if (v.residual != Sector::I) ++r.failures;
    });
}

/// Zero-tolerance decoding on the spacetime model: abort on any nontrivial
/// detector, otherwise fail when the accepted configuration is a nontrivial
/// spacetime logical.
inline DirectMcResult direct_mc_zero_tolerance_ft(const SpacetimeCodeModel& model, const NoiseParams& noise, long shots,
                                                  std::uint64_t seed, int threads = 0) {
    return detail::blocked_mc(shots, seed, 0xF7, threads, [&](Rng& rng, DirectMcResult& r) {
        const SpacetimeError e = sample_spacetime_error(model, noise, rng);
        ++r.shots;
        if (!all_detectors_trivial(model, e)) {
            ++r.aborts;
            return;
        }
        ++r.accepts;
        if (!ft_sector(model, e).trivial()) ++r.failures;
    });
}

// ---------------------------------------------------------------------------
// Closed-form ansatz

/// Exponent of post-selected failure: f ~ p^{k d}.
inline double k_of_tolerance(double c) { return 1.0 - c / 2.0; }
/// Exponent of aborts: g ~ p^{1 + k~ d}.
inline double ktilde_of_tolerance(double c) { return c / 2.0; }

inline double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Leading-order prefactor of zero-tolerance fault-tolerant failure, f = A(d) p^d.
inline double ft_prefactor(int d) {
    if (d < 2 || d % 2 != 0) throw InvalidParameter("ft_prefactor: distance must be even and at least 2");
    const double dd = static_cast<double>(d) * d;
    return 4.0 * dd / 2.0 * binomial_coefficient(d, d / 2) * std::pow(1.0 / 3.0, d) + dd * std::pow(2.0 / 3.0, d) +
           4.0 * dd * std::pow(1.0 / 3.0, d);
}

inline double ztft_failure(double p, int d) { return ft_prefactor(d) * std::pow(p, d); }

/// Zero-tolerance fault-tolerant abort probability over t rounds.
inline double ztft_abort(double p, int d, int t, double p_m) {
    const double sites = static_cast<double>(t) * d * d;
    return 1.0 - std::pow(1.0 - p, sites) * std::pow(1.0 - p_m, sites);
}
inline double ztft_abort_first_order(double p, int d, int t, double p_m) {
    return static_cast<double>(t) * d * d * (p + p_m);
}

/// Zero-tolerance code-capacity abort probability.
inline double zero_tolerance_abort(double p, int d) { return 1.0 - std::pow(1.0 - p, static_cast<double>(d) * d); }
inline double zero_tolerance_abort_first_order(double p, int d) { return p * d * d; }

struct AnsatzParams {
    std::optional<double> c;         // tolerance, fixes k and k~ when they are absent
    std::optional<double> k, ktilde;
    std::optional<double> A, C;      // f = C (A p)^{k d}
    std::optional<double> At, Ct;    // g = C~ p (A~ p)^{k~ d}
    std::optional<double> lambda_h, C_h;  // h = C_h Lambda_h^n
    std::optional<int> t;            // rounds, default d
    std::optional<double> p_m;       // measurement flip rate, default 2p/3
};

namespace detail {
inline double need(const std::optional<double>& v, const char* what) {
    if (!v) throw InvalidParameter(std::string("eval_ansatz: missing parameter ") + what);
    return *v;
}
}  // namespace detail

/// Evaluates a named closed form. Names: k, ktilde, f, g, h, A_ft, ztft_f,
/// ztft_abort, ztft_abort_first_order, zero_tolerance_abort,
/// zero_tolerance_abort_first_order.
inline double eval_ansatz(const std::string& name, const AnsatzParams& a, double p, int d) {
    auto k = [&] { return a.k ? *a.k : k_of_tolerance(detail::need(a.c, "c or k")); };
    auto kt = [&] { return a.ktilde ? *a.ktilde : ktilde_of_tolerance(detail::need(a.c, "c or ktilde")); };
    const int t = a.t.value_or(d);
    const double pm = a.p_m.value_or(2.0 * p / 3.0);
    if (name == "k") return k();
    if (name == "ktilde") return kt();
    if (name == "f") return detail::need(a.C, "C") * std::pow(detail::need(a.A, "A") * p, k() * d);
    if (name == "g") return detail::need(a.Ct, "Ct") * p * std::pow(detail::need(a.At, "At") * p, kt() * d);
    if (name == "h") return detail::need(a.C_h, "C_h") * std::pow(detail::need(a.lambda_h, "lambda_h"), d * d);
    if (name == "A_ft") return ft_prefactor(d);
    if (name == "ztft_f") return ztft_failure(p, d);
    if (name == "ztft_abort") return ztft_abort(p, d, t, pm);
    if (name == "ztft_abort_first_order") return ztft_abort_first_order(p, d, t, pm);
    if (name == "zero_tolerance_abort") return zero_tolerance_abort(p, d);
    if (name == "zero_tolerance_abort_first_order") return zero_tolerance_abort_first_order(p, d);
    throw InvalidParameter("eval_ansatz: unknown ansatz " + name);
}

// ---------------------------------------------------------------------------
// Fits

struct DataPoint {
    int d = 0;
    double p = 0.0;
    double value = 0.0;
    double se = 0.0;
    long events = -1;  // successes behind the value; negative when unknown
};

inline constexpr long kMinEvents = 10;

struct CriticalFit {
    double p_th = 0.0, nu = 0.0, A = 0.0, B = 0.0, C = 0.0;
    Eigen::Matrix<double, 5, 5> covariance = Eigen::Matrix<double, 5, 5>::Zero();  // order A, B, C, p_th, nu
    double chi2 = 0.0;
    double r2 = 0.0;
    int dof = 0;
    bool degenerate = false;
    std::vector<std::string> warnings;

    double p_th_se() const { return std::sqrt(std::max(0.0, covariance(3, 3))); }
    double nu_se() const { return std::sqrt(std::max(0.0, covariance(4, 4))); }
    double model(double p, int d) const {
        const double x = (p - p_th) * std::pow(static_cast<double>(d), -nu);
        return A * x * x + B * x + C;
    }
};

namespace detail {

struct CriticalFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<DataPoint>* pts;
    std::vector<double> w;
    CriticalFunctor(const std::vector<DataPoint>& p, std::vector<double> weights) : pts(&p), w(std::move(weights)) {}
    int inputs() const { return 5; }
    int values() const { return static_cast<int>(pts->size()); }
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
        for (std::size_t i = 0; i < pts->size(); ++i) {
            const auto& pt = (*pts)[i];
            const double s = (pt.p - x[3]) * std::pow(static_cast<double>(pt.d), -x[4]);
            fvec[static_cast<Eigen::Index>(i)] = (x[0] * s * s + x[1] * s + x[2] - pt.value) * w[i];
        }
        return 0;
    }
};

/// Crossing of two curves sampled at shared p values, by linear interpolation
/// of their difference; empty when the difference keeps its sign.
inline std::vector<double> crossings(const std::map<double, double>& a, const std::map<double, double>& b) {
    std::vector<std::pair<double, double>> diff;
    for (const auto& [p, v] : a)
        if (auto it = b.find(p); it != b.end()) diff.emplace_back(p, v - it->second);
    std::vector<double> out;
    for (std::size_t i = 1; i < diff.size(); ++i) {
        const auto [p0, d0] = diff[i - 1];
        const auto [p1, d1] = diff[i];
        if (d0 == 0.0) out.push_back(p0);
        else if (d0 * d1 < 0.0) out.push_back(p0 + (p1 - p0) * d0 / (d0 - d1));
    }
    return out;
}

}  // namespace detail

/// Weighted least squares of value = A x^2 + B x + C with
/// x = (p - p_th) d^{-nu}, all five parameters free.
inline CriticalFit fit_critical_exponent(const std::vector<DataPoint>& data) {
    CriticalFit out;
    std::vector<DataPoint> pts;
    for (const auto& pt : data) {
        if (pt.events >= 0 && pt.events < kMinEvents) {
            out.warnings.push_back("excluded d=" + std::to_string(pt.d) + " p=" + std::to_string(pt.p) + " (" +
                                   std::to_string(pt.events) + " events)");
            continue;
        }
        pts.push_back(pt);
    }
    std::map<int, std::map<double, double>> by_d;
    std::map<double, int> ps;
    for (const auto& pt : pts) {
        by_d[pt.d][pt.p] = pt.value;
        ++ps[pt.p];
    }
    if (by_d.size() < 3 || ps.size() < 5)
        throw InvalidParameter("fit_critical_exponent: need at least 3 distances and 5 probabilities");

    std::vector<double> guesses;
    for (auto i = by_d.begin(); i != by_d.end(); ++i)
        for (auto j = std::next(i); j != by_d.end(); ++j)
            for (double x : detail::crossings(i->second, j->second)) guesses.push_back(x);
    double p0;
    if (guesses.empty()) {
        out.degenerate = true;
        out.warnings.push_back("no crossing inside the data range");
        p0 = 0.5 * (ps.begin()->first + ps.rbegin()->first);
    } else {
        std::sort(guesses.begin(), guesses.end());
        p0 = guesses[guesses.size() / 2];
    }

    std::vector<double> w(pts.size());
    double min_se = std::numeric_limits<double>::infinity();
    for (const auto& pt : pts)
        if (pt.se > 0.0) min_se = std::min(min_se, pt.se);
    if (!std::isfinite(min_se)) min_se = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) w[i] = 1.0 / std::max(pts[i].se, 1e-3 * min_se);

    using Diff = Eigen::NumericalDiff<detail::CriticalFunctor>;
    Eigen::VectorXd best;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (double nu0 : {-1.5, -1.0, -0.5, -0.25}) {
        // Start from a straight line through the rescaled data.
        Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), 3);
        Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double s = (pts[i].p - p0) * std::pow(static_cast<double>(pts[i].d), -nu0);
            const auto r = static_cast<Eigen::Index>(i);
            X(r, 0) = s * s * w[i];
            X(r, 1) = s * w[i];
            X(r, 2) = w[i];
            y[r] = pts[i].value * w[i];
        }
        Eigen::Vector3d abc = X.colPivHouseholderQr().solve(y);
        Eigen::VectorXd x(5);
        x << abc[0], abc[1], abc[2], p0, nu0;
        Diff functor(detail::CriticalFunctor(pts, w));
        Eigen::LevenbergMarquardt<Diff> lm(functor);
        lm.parameters.maxfev = 20000;
        lm.parameters.xtol = 1e-12;
        lm.parameters.ftol = 1e-12;
        lm.minimize(x);
        Eigen::VectorXd fvec(static_cast<Eigen::Index>(pts.size()));
        functor(x, fvec);
        const double chi2 = fvec.squaredNorm();
        if (std::isfinite(chi2) && chi2 < best_chi2) {
            best_chi2 = chi2;
            best = x;
        }
    }
    if (best.size() != 5) throw InvalidParameter("fit_critical_exponent: fit did not converge");
    out.A = best[0];
    out.B = best[1];
    out.C = best[2];
    out.p_th = best[3];
    out.nu = best[4];
    out.chi2 = best_chi2;
    out.dof = static_cast<int>(pts.size()) - 5;

    Diff functor(detail::CriticalFunctor(pts, w));
    Eigen::MatrixXd J(static_cast<Eigen::Index>(pts.size()), 5);
    functor.df(best, J);
    const double scale = out.dof > 0 ? std::max(1.0, best_chi2 / out.dof) : 1.0;
    Eigen::MatrixXd jtj = J.transpose() * J;
    out.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse() * scale;

    double mean = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        mean += w[i] * w[i] * pts[i].value;
        sw += w[i] * w[i];
    }
    mean /= sw;
    double tot = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) tot += w[i] * w[i] * (pts[i].value - mean) * (pts[i].value - mean);
    out.r2 = tot > 0.0 ? 1.0 - best_chi2 / tot : 1.0;
    if (out.p_th < ps.begin()->first || out.p_th > ps.rbegin()->first) {
        out.degenerate = true;
        out.warnings.push_back("fitted crossing lies outside the data range");
    }
    return out;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    double slope_se = 0.0, intercept_se = 0.0;
    double r2 = 0.0;
    int points = 0;
};

/// Weighted least-squares line; zero or missing sigmas give equal weights.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma = {}) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n < 2 || y.size() != x.size()) throw InvalidParameter("fit_line: need at least two matching points");
    bool weighted = sigma.size() == x.size() && std::all_of(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; });
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd Y(n), W(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        W[i] = weighted ? 1.0 / sigma[u] : 1.0;
        X(i, 0) = x[u] * W[i];
        X(i, 1) = W[i];
        Y[i] = y[u] * W[i];
    }
    Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
    LineFit out;
    out.points = static_cast<int>(n);
    out.slope = beta[0];
    out.intercept = beta[1];
    const double chi2 = (X * beta - Y).squaredNorm();
    double mean = 0.0, sw = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        mean += W[i] * W[i] * y[static_cast<std::size_t>(i)];
        sw += W[i] * W[i];
    }
    mean /= sw;
    double tot = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = y[static_cast<std::size_t>(i)] - mean;
        tot += W[i] * W[i] * r * r;
    }
    out.r2 = tot > 0.0 ? 1.0 - chi2 / tot : 1.0;
    Eigen::Matrix2d cov = (X.transpose() * X).inverse();
    if (!weighted) cov *= n > 2 ? chi2 / static_cast<double>(n - 2) : 0.0;
    out.slope_se = std::sqrt(std::max(0.0, cov(0, 0)));
    out.intercept_se = std::sqrt(std::max(0.0, cov(1, 1)));
    return out;
}

enum class Abscissa { Distance, Qubits };

struct DecayFit {
    double p = 0.0;
    double log_lambda = 0.0, log_lambda_se = 0.0;
    double log_offset = 0.0, log_offset_se = 0.0;
    double r2 = 0.0;
    int points = 0;

    double lambda() const { return std::exp(log_lambda); }
    double offset() const { return std::exp(log_offset); }
};

struct DecayFits {
    std::vector<DecayFit> per_p;
    std::vector<std::string> warnings;
};

/// Per p, log value = x log Lambda(p) + log C(p) with x = d or n = d^2.
inline DecayFits fit_decay(const std::vector<DataPoint>& data, Abscissa abscissa) {
    DecayFits out;
    std::map<double, std::vector<DataPoint>> by_p;
    for (const auto& pt : data) {
        if (!(pt.value > 0.0)) {
            out.warnings.push_back("dropped nonpositive value at d=" + std::to_string(pt.d) + " p=" + std::to_string(pt.p));
            continue;
        }
        by_p[pt.p].push_back(pt);
    }
    for (const auto& [p, pts] : by_p) {
        if (pts.size() < 3) {
            out.warnings.push_back("skipped p=" + std::to_string(p) + ": fewer than 3 points");
            continue;
        }
        std::vector<double> x, y, s;
        for (const auto& pt : pts) {
            x.push_back(abscissa == Abscissa::Distance ? pt.d : static_cast<double>(pt.d) * pt.d);
            y.push_back(std::log(pt.value));
            s.push_back(pt.se / pt.value);
        }
        auto line = fit_line(x, y, s);
        out.per_p.push_back({p, line.slope, line.slope_se, line.intercept, line.intercept_se, line.r2, line.points});
    }
    return out;
}

struct PowerLawFit {
    double k = 0.0, k_se = 0.0;
    double A = 0.0;
    double r2 = 0.0;
};

/// log Lambda = k log p + k log A, so Lambda = (A p)^k.
inline PowerLawFit fit_exponent(const std::vector<DecayFit>& decays) {
    std::vector<double> x, y, s;
    for (const auto& f : decays) {
        x.push_back(std::log(f.p));
        y.push_back(f.log_lambda);
        s.push_back(f.log_lambda_se);
    }
    auto line = fit_line(x, y, s);
    return {line.slope, line.slope_se, std::exp(line.intercept / line.slope), line.r2};
}

}  // namespace exdec
