#pragma once

// Resource-overhead arithmetic for repeat-until-accept execution.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "exdec/analysis.hpp"
#include "exdec/errors.hpp"

namespace exdec {

struct Repetitions {
    double R = 1.0;
    double log_R = 0.0;
    bool undefined = false;  // p^{k~ d} >= 1: every attempt aborts
};

/// R = (1 - p^{k~ d})^{-q} with k~ = c/2.
inline Repetitions repetitions(double p, double c, int d, double q) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("repetitions: p must lie in (0, 1)");
    if (!(q >= 1.0)) throw InvalidParameter("repetitions: q must be at least 1");
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidParameter("repetitions: c must lie in [0, 1]");
    const double g = std::pow(p, ktilde_of_tolerance(c) * d);
    Repetitions out;
    if (g >= 1.0) {
        out.undefined = true;
        out.R = out.log_R = std::numeric_limits<double>::infinity();
        return out;
    }
    out.log_R = -q * std::log1p(-g);
    out.R = std::exp(out.log_R);
    return out;
}

/// R = (1 - a/x)^{-a x} in the rescaled variables a = sqrt(eps) q / q0, x = q0 / sqrt(eps).
inline double repetitions_rescaled(double a, double x) {
    if (!(a > 0.0 && x > a)) throw InvalidParameter("repetitions_rescaled: need 0 < a < x");
    return std::exp(-a * x * std::log1p(-a / x));
}
inline double repetitions_approx(double a) { return std::exp(a * a); }

struct DepthBoost {
    double q = 0.0;
    double cap = 0.0;  // q0^2 / eps
    bool clipped = false;
};

/// q = sqrt(log R / eps) q0, clipped at q0^2 / eps.
inline DepthBoost depth_boost(double R, double eps, double q0) {
    if (!(R > 1.0)) throw InvalidParameter("depth_boost: R must exceed 1");
    if (!(eps > 0.0) || !(q0 > 0.0)) throw InvalidParameter("depth_boost: eps and q0 must be positive");
    DepthBoost out;
    out.cap = q0 * q0 / eps;
    out.q = std::sqrt(std::log(R) / eps) * q0;
    if (out.q > out.cap) {
        out.q = out.cap;
        out.clipped = true;
    }
    return out;
}

/// log R = eps^{2 sqrt(m/m0) - 1} q^{2 (1 - sqrt(m/m0))}.
inline double footprint_logR(double eps, double q, double m_ratio) {
    if (!(m_ratio > 0.0 && m_ratio <= 1.0)) throw InvalidParameter("footprint_logR: m/m0 must lie in (0, 1]");
    if (!(eps > 0.0) || !(q > 0.0)) throw InvalidParameter("footprint_logR: eps and q must be positive");
    const double s = std::sqrt(m_ratio);
    return std::pow(eps, 2.0 * s - 1.0) * std::pow(q, 2.0 * (1.0 - s));
}

/// How the qubit count shrinks with the failure exponent k.
enum class FootprintConvention {
    Geometric,  // d = d0 / (2k) so m = m0 / (4 k^2)
    AsPrinted,  // m = m0 / (4k)^2
};

inline double footprint_ratio(double k, FootprintConvention conv = FootprintConvention::Geometric) {
    if (!(k >= 0.5 && k <= 1.0)) throw InvalidParameter("footprint_ratio: k must lie in [1/2, 1]");
    return conv == FootprintConvention::Geometric ? 1.0 / (4.0 * k * k) : 1.0 / ((4.0 * k) * (4.0 * k));
}

struct RepetitionReading {
    std::string name;
    double g = 0.0;
    double R = 0.0;
};

struct OverheadReport {
    double p = 1e-4;
    int d = 4;
    int d0 = 8;
    double q = 90.0;
    double eps_T = 0.0;
    double A = 0.0;
    double f = 0.0;
    double epsilon = 0.0;
    std::vector<RepetitionReading> readings;
    double qubit_ratio = 0.0;
    double paper_R = 3.2;
    double spacetime_ratio = 0.0;  // with paper_R
    double spacetime_ratio_computed = 0.0;  // with the first reading

    const RepetitionReading& reading(const std::string& name) const {
        for (const auto& r : readings)
            if (r.name == name) return r;
        throw InvalidParameter("no repetition reading named " + name);
    }
};

/// 15-to-1 distillation at p = 1e-4: zero-tolerance d = 4 versus standard d = 8.
inline OverheadReport magic_state_case_study() {
    OverheadReport r;
    const double p = r.p;
    const int d = r.d;
    r.eps_T = 10.0 * p * p * p;
    r.A = ft_prefactor(d);
    r.f = ztft_failure(p, d);
    r.epsilon = r.f * r.q;
    const double pm = 2.0 * p / 3.0;
    auto add = [&](std::string name, double g) { r.readings.push_back({std::move(name), g, std::pow(1.0 - g, -r.q)}); };
    add("block_exact", ztft_abort(p, d, d, pm));
    add("block_first_order", ztft_abort_first_order(p, d, d, pm));
    add("block_meas_rate_p", ztft_abort(p, d, d, p));
    add("block_meas_rate_p_first_order", ztft_abort_first_order(p, d, d, p));
    add("per_round", ztft_abort(p, d, 1, pm));
    r.qubit_ratio = static_cast<double>(d * d) / static_cast<double>(r.d0 * r.d0);
    const double vol = static_cast<double>(d) * d * d / (static_cast<double>(r.d0) * r.d0 * r.d0);
    r.spacetime_ratio = vol * r.paper_R;
    r.spacetime_ratio_computed = vol * r.readings.front().R;
    return r;
}

}  // namespace exdec
