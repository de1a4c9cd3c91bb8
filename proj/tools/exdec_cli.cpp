// exdec: command-line front end.

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exdec/analysis.hpp"
#include "exdec/cli_support.hpp"
#include "exdec/evaluator.hpp"
#include "exdec/oracle.hpp"
#include "exdec/planner.hpp"
#include "exdec/rare_event.hpp"

using namespace exdec;
using namespace exdec::cli;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitRuntime = 4;
constexpr double kMaxShots = 1e10;

using Config = std::map<std::string, std::string>;

const std::vector<std::string> kColumns{"kind", "decoder", "setting", "d", "t", "p", "c", "shots", "accepts", "aborts",
                                        "failures", "g", "g_se", "f", "f_se", "seed"};
const std::vector<std::string> kSplitColumns{"j", "p_j", "R_j", "R_j_se", "ess"};

std::string num(double v) { return std::isfinite(v) ? format_double(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

std::string join(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ",") + num(x);
    return s;
}
std::string join(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

void emit_csv(const CsvTable& t, const Config& cfg, const std::string& out) {
    if (out.empty() || out == "-") {
        write_csv(std::cout, t, cfg);
    } else {
        std::ofstream f(out);
        if (!f) throw InvalidParameter("cannot write '" + out + "'");
        write_csv(f, t, cfg);
    }
    std::cerr << "config_hash=" << config_hash(cfg) << "\n";
}

void emit_json(json j, const Config& cfg, const std::string& out) {
    j["version"] = kVersion;
    j["config"] = cfg;
    j["config_hash"] = config_hash(cfg);
    const std::string text = j.dump(2, ' ', false, json::error_handler_t::replace);
    if (out.empty() || out == "-") {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw InvalidParameter("cannot write '" + out + "'");
        f << text << "\n";
    }
    std::cerr << "config_hash=" << config_hash(cfg) << "\n";
}

void check_shots(double shots, double units) {
    if (shots < 1) throw InvalidParameter("shots must be at least 1");
    if (shots * units > kMaxShots)
        throw BudgetExceeded("requested work exceeds the per-run budget of 1e10 shots", shots * units);
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string decoder = "mwpm", setting = "cc", d, p, out;
    double c = 1.0;
    long shots = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
};

void run_simulate(const SimulateArgs& a) {
    const DecoderKind kind = parse_decoder(a.decoder);
    const Setting setting = parse_setting(a.setting);
    const auto ds = parse_int_list(a.d);
    const auto ps = parse_double_list(a.p);
    DecoderConfig{a.c}.validate();
    check_shots(static_cast<double>(a.shots), static_cast<double>(ds.size() * ps.size()));
    if (setting == Setting::Phenomenological && a.c != 0.0)
        throw InvalidParameter("phenomenological simulation supports the zero-tolerance decoder only (c = 0)");
    Config cfg{{"command", "simulate"}, {"decoder", decoder_name(kind)}, {"setting", setting_name(setting)},
               {"d", join(ds)},         {"p", join(ps)},                 {"c", num(a.c)},
               {"shots", std::to_string(a.shots)}, {"seed", std::to_string(a.seed)}};
    CsvTable t;
    t.header = kColumns;
    for (int d : ds) {
        if (setting == Setting::CodeCapacity) {
            const Code code = build_code(d);
            const Evaluator ev = make_evaluator(code, kind, a.c);
            for (double p : ps) {
                auto r = direct_mc(code, ev, NoiseParams::code_capacity(p), a.shots, a.seed, a.threads);
                t.add_row({"direct", decoder_name(kind), "cc", std::to_string(d), "0", num(p), num(a.c),
                           std::to_string(r.shots), std::to_string(r.accepts), std::to_string(r.aborts),
                           std::to_string(r.failures), num(r.g().value), num(r.g().se), num(r.f().value), num(r.f().se),
                           std::to_string(a.seed)});
            }
        } else {
            const auto model = build_spacetime(d);
            for (double p : ps) {
                auto r = direct_mc_zero_tolerance_ft(model, NoiseParams::phenomenological(p), a.shots, a.seed, a.threads);
                t.add_row({"direct", "zero-tolerance", "phenom", std::to_string(d), std::to_string(model.rounds()), num(p),
                           "0", std::to_string(r.shots), std::to_string(r.accepts), std::to_string(r.aborts),
                           std::to_string(r.failures), num(r.g().value), num(r.g().se), num(r.f().value), num(r.f().se),
                           std::to_string(a.seed)});
            }
        }
    }
    emit_csv(t, cfg, a.out);
}

// ---------------------------------------------------------------------------

struct SplitArgs {
    std::string decoder = "mwpm", event = "failure", d, schedule, out;
    double c = 1.0, max_ratio = 1.25;
    long anchor_shots = 100000, samples = 1000, burn_in = -1;
    int chains = 2;
    std::uint64_t seed = 1;
    int threads = 0;
};

SplitSettings split_settings(long samples, long burn_in, int chains, double max_ratio, std::uint64_t seed, int threads) {
    SplitSettings s;
    s.chain.samples = samples;
    s.chain.burn_in_sweeps = burn_in;
    s.chains_per_level = chains;
    s.max_ratio = max_ratio;
    s.seed = seed;
    s.threads = threads;
    return s;
}

std::vector<std::string> level_row(const std::string& kind, DecoderKind dec, int d, double p, double c, const Event& ev,
                                   double prob, double se, std::uint64_t seed, const SplittingResult& r, std::size_t j) {
    const bool is_abort = ev.kind == EventKind::Abort;
    std::string R = "", R_se = "", ess = "";
    if (j > 0) {
        const auto& s = r.steps[j - 1];
        R = num(std::exp(s.log_ratio));
        R_se = num(std::exp(s.log_ratio) * s.log_ratio_se);
        ess = num(s.ess);
    }
    return {kind, decoder_name(dec), "cc", std::to_string(d), "0", num(p), num(c), "", "", "", "",
            is_abort ? num(prob) : "", is_abort ? num(se) : "", is_abort ? "" : num(prob), is_abort ? "" : num(se),
            std::to_string(seed), std::to_string(j), num(p), R, R_se, ess};
}

void run_split(const SplitArgs& a) {
    const DecoderKind kind = parse_decoder(a.decoder);
    const Event event = parse_event(a.event);
    const auto ds = parse_int_list(a.d);
    const auto requested = parse_double_list(a.schedule);
    DecoderConfig{a.c}.validate();
    check_shots(static_cast<double>(a.anchor_shots), static_cast<double>(ds.size()));
    const auto schedule = densify_schedule(requested, a.max_ratio);
    Config cfg{{"command", "split"}, {"decoder", decoder_name(kind)}, {"event", event.name()},
               {"d", join(ds)}, {"schedule", join(requested)}, {"c", num(a.c)}, {"max_ratio", num(a.max_ratio)},
               {"anchor_shots", std::to_string(a.anchor_shots)}, {"samples", std::to_string(a.samples)},
               {"burn_in", std::to_string(a.burn_in)}, {"chains", std::to_string(a.chains)}, {"seed", std::to_string(a.seed)}};
    CsvTable t;
    t.header = kColumns;
    t.header.insert(t.header.end(), kSplitColumns.begin(), kSplitColumns.end());
    const auto settings = split_settings(a.samples, a.burn_in, a.chains, a.max_ratio, a.seed, a.threads);
    for (int d : ds) {
        const Code code = build_code(d);
        const Evaluator ev = make_evaluator(code, kind, a.c);
        const double p0 = schedule.front();
        auto mc = direct_mc(code, ev, NoiseParams::code_capacity(p0), a.anchor_shots, a.seed, a.threads);
        const long hits = event.kind == EventKind::Abort ? mc.aborts
                          : event.kind == EventKind::Accept ? mc.accepts
                                                            : mc.failures;
        if (hits == 0)
            throw BudgetExceeded("split: no event in the anchor run at p=" + num(p0) + "; raise anchor_shots or the anchor p",
                                 static_cast<double>(a.anchor_shots));
        const double n = static_cast<double>(mc.shots);
        const double anchor = static_cast<double>(hits) / n;
        const double anchor_se = std::sqrt(anchor * (1.0 - anchor) / n);
        const Predicate pred = make_predicate(ev, event);
        const PauliError init = find_initial_error(code, p0, pred, a.seed);
        auto r = run_splitting(code, schedule, pred, init, anchor, anchor_se, settings);
        for (const auto& w : r.warnings) t.comments.push_back("warning d=" + std::to_string(d) + ": " + w);
        for (std::size_t j = 0; j < r.p.size(); ++j)
            t.add_row(level_row("split", kind, d, r.p[j], a.c, event, r.prob(j), r.prob(j) * r.log_prob_se[j], a.seed, r, j));
    }
    emit_csv(t, cfg, a.out);
}

// ---------------------------------------------------------------------------

struct SectorArgs {
    std::string decoder = "mwpm", d, schedule, out;
    double c = 0.0, max_ratio = 1.25, ref_p = 0.0;
    long ref_shots = 100000, samples = 1000, burn_in = -1;
    int chains = 2;
    std::uint64_t seed = 1;
    int threads = 0;
};

void run_sector_split(const SectorArgs& a) {
    const DecoderKind kind = parse_decoder(a.decoder);
    const auto ds = parse_int_list(a.d);
    auto requested = parse_double_list(a.schedule);
    if (requested.front() != kSymmetricAnchor) requested.insert(requested.begin(), kSymmetricAnchor);
    const double ref_p = a.ref_p > 0.0 ? a.ref_p : requested.back();
    if (!(ref_p > 0.0 && ref_p <= kSymmetricAnchor)) throw InvalidParameter("ref_p must lie in (0, 0.75]");
    if (std::find(requested.begin(), requested.end(), ref_p) == requested.end()) {
        requested.push_back(ref_p);
        std::sort(requested.begin(), requested.end(), std::greater<>());
    }
    DecoderConfig{a.c}.validate();
    check_shots(static_cast<double>(a.ref_shots), static_cast<double>(ds.size()));
    const auto schedule = densify_schedule(requested, a.max_ratio);
    Config cfg{{"command", "sector-split"}, {"decoder", decoder_name(kind)}, {"d", join(ds)},
               {"schedule", join(requested)}, {"c", num(a.c)}, {"max_ratio", num(a.max_ratio)},
               {"ref_p", num(ref_p)}, {"ref_shots", std::to_string(a.ref_shots)}, {"samples", std::to_string(a.samples)},
               {"burn_in", std::to_string(a.burn_in)}, {"chains", std::to_string(a.chains)}, {"seed", std::to_string(a.seed)}};
    CsvTable t;
    t.header = kColumns;
    t.header.insert(t.header.end(), kSplitColumns.begin(), kSplitColumns.end());
    const auto settings = split_settings(a.samples, a.burn_in, a.chains, a.max_ratio, a.seed, a.threads);
    for (int d : ds) {
        const Code code = build_code(d);
        const Evaluator ev = make_evaluator(code, kind, a.c);
        auto r = run_sector_splitting(code, schedule, ev, settings);
        auto mc = direct_mc(code, ev, NoiseParams::code_capacity(ref_p), a.ref_shots, a.seed, a.threads);
        if (mc.accepts == 0)
            throw BudgetExceeded("sector-split: no accepted shot at ref_p; raise ref_shots or choose a lower ref_p",
                                 static_cast<double>(a.ref_shots));
        std::vector<double> h_se;
        auto h = r.acceptance(ref_p, mc.h().value, mc.h().se, &h_se);
        for (std::size_t s = 0; s < 4; ++s)
            for (const auto& w : r.sector[s].warnings)
                t.comments.push_back("warning d=" + std::to_string(d) + " sector " + sector_char(static_cast<Sector>(s)) + ": " + w);
        const auto& id = r.sector[0];
        for (std::size_t j = 0; j < r.p.size(); ++j) {
            std::string R = "", R_se = "", ess = "";
            if (j > 0) {
                const double lr = r.log_total[j] - r.log_total[j - 1];
                R = num(std::exp(lr));
                R_se = num(std::exp(lr) * std::sqrt(std::abs(r.log_total_se[j] * r.log_total_se[j] -
                                                             r.log_total_se[j - 1] * r.log_total_se[j - 1])));
                double e = id.steps[j - 1].ess;
                for (std::size_t s = 1; s < 4; ++s) e = std::min(e, r.sector[s].steps[j - 1].ess);
                ess = num(e);
            }
            t.add_row({"sector-split", decoder_name(kind), "cc", std::to_string(d), "0", num(r.p[j]), num(a.c), "", "", "", "",
                       num(1.0 - h[j]), num(h_se[j]), num(r.f[j]), num(r.f_se[j]), std::to_string(a.seed),
                       std::to_string(j), num(r.p[j]), R, R_se, ess});
        }
    }
    emit_csv(t, cfg, a.out);
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string in, kind = "critical", column = "f", abscissa = "distance", out;
};

void run_fit(const FitArgs& a) {
    const CsvTable t = read_csv_file(a.in);
    Config cfg{{"command", "fit"}, {"in", a.in}, {"kind", a.kind}, {"column", a.column}, {"abscissa", a.abscissa}};
    const bool acceptance = a.column == "h";
    const std::string col = acceptance ? "g" : a.column;
    if (col != "f" && col != "g") throw InvalidParameter("fit column must be f, g or h");
    const std::string se_col = col + "_se";
    std::vector<DataPoint> pts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& v = t.at(i, col);
        if (v.empty() || v == "nan") continue;
        DataPoint pt;
        pt.d = static_cast<int>(parse_long(t.at(i, "d")));
        pt.p = parse_double(t.at(i, "p"));
        pt.value = parse_double(v);
        pt.se = parse_double(t.at(i, se_col));
        if (acceptance) pt.value = 1.0 - pt.value;
        const std::string& events = t.at(i, col == "f" ? "failures" : "aborts");
        if (!acceptance && !events.empty()) pt.events = parse_long(events);
        pts.push_back(pt);
    }
    json j;
    if (a.kind == "critical") {
        auto f = fit_critical_exponent(pts);
        j = {{"fit", "critical"}, {"p_th", f.p_th}, {"p_th_se", f.p_th_se()}, {"nu", f.nu}, {"nu_se", f.nu_se()},
             {"A", f.A}, {"B", f.B}, {"C", f.C}, {"chi2", f.chi2}, {"dof", f.dof}, {"r2", f.r2},
             {"degenerate", f.degenerate}, {"warnings", f.warnings}};
    } else if (a.kind == "decay") {
        Abscissa ab;
        if (a.abscissa == "distance") ab = Abscissa::Distance;
        else if (a.abscissa == "qubits") ab = Abscissa::Qubits;
        else throw InvalidParameter("abscissa must be distance or qubits");
        auto fits = fit_decay(pts, ab);
        json per = json::array();
        for (const auto& f : fits.per_p)
            per.push_back({{"p", f.p}, {"log_lambda", f.log_lambda}, {"log_lambda_se", f.log_lambda_se},
                           {"log_offset", f.log_offset}, {"log_offset_se", f.log_offset_se}, {"r2", f.r2},
                           {"points", f.points}});
        j = {{"fit", "decay"}, {"per_p", per}, {"warnings", fits.warnings}};
        if (fits.per_p.size() >= 2) {
            auto k = fit_exponent(fits.per_p);
            j["exponent"] = {{"k", k.k}, {"k_se", k.k_se}, {"A", k.A}, {"r2", k.r2}};
        }
    } else {
        throw InvalidParameter("fit kind must be critical or decay");
    }
    emit_json(j, cfg, a.out);
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    std::string decoder = "mwpm", p, out;
    int d = 3;
    double c = 0.0;
};

void run_oracle(const OracleArgs& a) {
    const DecoderKind kind = parse_decoder(a.decoder);
    const auto ps = parse_double_list(a.p);
    Config cfg{{"command", "oracle"}, {"decoder", decoder_name(kind)}, {"d", std::to_string(a.d)}, {"c", num(a.c)}, {"p", join(ps)}};
    const Code code = build_code(a.d);
    const auto table = exact_table(code, kind, a.c);
    CsvTable t;
    t.header = kColumns;
    t.comments.push_back("weight,accept_I,accept_X,accept_Z,accept_Y,abort");
    for (int w = 0; w <= table.n; ++w) {
        std::string line = std::to_string(w);
        for (Sector s : kSectors) line += "," + std::to_string(table.accept[static_cast<int>(s)][static_cast<std::size_t>(w)]);
        line += "," + std::to_string(table.abort[static_cast<std::size_t>(w)]);
        t.comments.push_back(line);
    }
    for (double p : ps)
        t.add_row({"oracle", decoder_name(kind), "cc", std::to_string(a.d), "0", num(p), num(a.c), "", "", "", "",
                   num(table.g(p)), "0", num(table.failure(p)), "0", ""});
    emit_csv(t, cfg, a.out);
}

// ---------------------------------------------------------------------------

struct OverheadArgs {
    std::string what = "magic-state", convention = "geometric", out;
    double p = 1e-4, c = 0.0, q = 90.0, q0 = 10.0, eps = 1e-2, R = 0.0, m_ratio = 0.25, k = 0.5;
    int d = 4;
};

void run_overhead(const OverheadArgs& a) {
    Config cfg{{"command", "overhead"}, {"what", a.what}};
    json j;
    if (a.what == "magic-state") {
        const auto r = magic_state_case_study();
        json readings = json::array();
        for (const auto& x : r.readings) readings.push_back({{"name", x.name}, {"g", x.g}, {"R", x.R}});
        j = {{"p", r.p}, {"d", r.d}, {"d0", r.d0}, {"q", r.q}, {"eps_T", r.eps_T}, {"A", r.A}, {"f", r.f},
             {"epsilon", r.epsilon}, {"readings", readings}, {"qubit_ratio", r.qubit_ratio}, {"paper_R", r.paper_R},
             {"spacetime_ratio", r.spacetime_ratio}, {"spacetime_ratio_computed", r.spacetime_ratio_computed},
             {"footprint_logR", footprint_logR(r.epsilon, r.q, r.qubit_ratio)}};
    } else if (a.what == "repetitions") {
        cfg.insert({{"p", num(a.p)}, {"c", num(a.c)}, {"d", std::to_string(a.d)}, {"q", num(a.q)}});
        auto r = repetitions(a.p, a.c, a.d, a.q);
        j = {{"R", r.R}, {"log_R", r.log_R}, {"undefined", r.undefined}};
    } else if (a.what == "depth-boost") {
        cfg.insert({{"R", num(a.R)}, {"eps", num(a.eps)}, {"q0", num(a.q0)}});
        auto b = depth_boost(a.R, a.eps, a.q0);
        j = {{"q", b.q}, {"cap", b.cap}, {"clipped", b.clipped}};
    } else if (a.what == "footprint") {
        cfg.insert({{"eps", num(a.eps)}, {"q", num(a.q)}, {"m_ratio", num(a.m_ratio)}, {"k", num(a.k)},
                    {"convention", a.convention}});
        FootprintConvention conv;
        if (a.convention == "geometric") conv = FootprintConvention::Geometric;
        else if (a.convention == "as-printed") conv = FootprintConvention::AsPrinted;
        else throw InvalidParameter("convention must be geometric or as-printed");
        j = {{"log_R", footprint_logR(a.eps, a.q, a.m_ratio)}, {"m_ratio_for_k", footprint_ratio(a.k, conv)}};
    } else {
        throw InvalidParameter("overhead target must be magic-state, repetitions, depth-boost or footprint");
    }
    emit_json(j, cfg, a.out);
}

template <class T>
CLI::Option* seed_option(CLI::App* s, T& seed) {
    return s->add_option("--seed", seed, "Master seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exclusive decoders: simulation, rare-event estimation, fits and overhead planning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    app.option_defaults()->always_capture_default();
    const int env_threads = default_threads();

    SimulateArgs sim;
    sim.threads = env_threads;
    auto* s1 = app.add_subcommand("simulate", "Direct Monte Carlo of abort and post-selected failure rates");
    s1->add_option("--decoder", sim.decoder, "mwpm or uf");
    s1->add_option("--setting", sim.setting, "cc or phenom");
    s1->add_option("--d", sim.d, "Distances, comma separated")->required();
    s1->add_option("--p", sim.p, "Error probabilities, comma separated")->required();
    s1->add_option("--c", sim.c, "Exclusive tolerance in [0, 1]");
    s1->add_option("--shots", sim.shots, "Shots per point");
    seed_option(s1, sim.seed);

    SplitArgs spl;
    spl.threads = env_threads;
    auto* s2 = app.add_subcommand("split", "Splitting estimate of a rare event along a p schedule");
    s2->add_option("--decoder", spl.decoder);
    s2->add_option("--event", spl.event, "failure, abort or accept");
    s2->add_option("--d", spl.d)->required();
    s2->add_option("--schedule", spl.schedule, "p values; the first is the direct-MC anchor")->required();
    s2->add_option("--c", spl.c);
    s2->add_option("--max-ratio", spl.max_ratio, "Largest p ratio between levels");
    s2->add_option("--anchor-shots", spl.anchor_shots);
    s2->add_option("--samples", spl.samples, "Samples per chain");
    s2->add_option("--burn-in", spl.burn_in, "Burn-in sweeps; negative selects 10 n");
    s2->add_option("--chains", spl.chains, "Chains per level");
    seed_option(s2, spl.seed);

    SectorArgs sec;
    sec.threads = env_threads;
    auto* s3 = app.add_subcommand("sector-split", "Per-sector splitting anchored at p = 0.75");
    s3->add_option("--decoder", sec.decoder);
    s3->add_option("--d", sec.d)->required();
    s3->add_option("--schedule", sec.schedule, "p values below 0.75")->required();
    s3->add_option("--c", sec.c);
    s3->add_option("--max-ratio", sec.max_ratio);
    s3->add_option("--ref-p", sec.ref_p, "p of the direct-MC acceptance reference (default: lowest schedule point)");
    s3->add_option("--ref-shots", sec.ref_shots);
    s3->add_option("--samples", sec.samples);
    s3->add_option("--burn-in", sec.burn_in);
    s3->add_option("--chains", sec.chains);
    seed_option(s3, sec.seed);

    FitArgs fit;
    auto* s4 = app.add_subcommand("fit", "Fit threshold or decay laws to a result CSV");
    s4->add_option("--in", fit.in, "CSV written by simulate, split or sector-split")->required();
    s4->add_option("--kind", fit.kind, "critical or decay");
    s4->add_option("--column", fit.column, "f, g or h");
    s4->add_option("--abscissa", fit.abscissa, "distance or qubits (decay fits)");

    OracleArgs orc;
    auto* s5 = app.add_subcommand("oracle", "Exact outcome table by exhaustive enumeration");
    s5->add_option("--decoder", orc.decoder);
    s5->add_option("--d", orc.d);
    s5->add_option("--c", orc.c);
    s5->add_option("--p", orc.p)->required();

    OverheadArgs ovh;
    auto* s6 = app.add_subcommand("overhead", "Repetition and footprint arithmetic");
    s6->add_option("what", ovh.what, "magic-state, repetitions, depth-boost or footprint");
    s6->add_option("--p", ovh.p);
    s6->add_option("--c", ovh.c);
    s6->add_option("--d", ovh.d);
    s6->add_option("--q", ovh.q);
    s6->add_option("--q0", ovh.q0);
    s6->add_option("--eps", ovh.eps);
    s6->add_option("--R", ovh.R);
    s6->add_option("--m-ratio", ovh.m_ratio);
    s6->add_option("--k", ovh.k);
    s6->add_option("--convention", ovh.convention, "geometric or as-printed");

    std::string config_path;
    for (auto* s : {s1, s2, s3, s4, s5, s6}) {
        s->add_option("--config", config_path, "Flat key = value file; flags on the command line win");
        s->add_option("--out", s == s1 ? sim.out : s == s2 ? spl.out : s == s3 ? sec.out : s == s4 ? fit.out
                                        : s == s5 ? orc.out : ovh.out,
                      "Output path; '-' or empty for stdout");
    }
    for (auto* s : {s1, s2, s3}) {
        int& th = s == s1 ? sim.threads : s == s2 ? spl.threads : sec.threads;
        s->add_option("--threads", th, "Worker threads (default from EXDEC_THREADS)");
    }

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = merge_config(args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("usage", e.what(), kExitUsage) << "\n";
        return kExitUsage;
    } catch (const InvalidParameter& e) {
        std::cerr << error_json("usage", e.what(), kExitUsage) << "\n";
        return kExitUsage;
    }

    try {
        if (*s1) run_simulate(sim);
        else if (*s2) run_split(spl);
        else if (*s3) run_sector_split(sec);
        else if (*s4) run_fit(fit);
        else if (*s5) run_oracle(orc);
        else run_overhead(ovh);
    } catch (const BudgetExceeded& e) {
        std::cerr << error_json("budget", e.what(), kExitBudget, {{"estimate", e.estimate}}) << "\n";
        return kExitBudget;
    } catch (const InvalidParameter& e) {
        std::cerr << error_json("usage", e.what(), kExitUsage) << "\n";
        return kExitUsage;
    } catch (const OverlapFailure& e) {
        std::cerr << error_json("overlap", e.what(), kExitRuntime, {{"step", e.step}}) << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << error_json("runtime", e.what(), kExitRuntime) << "\n";
        return kExitRuntime;
    }
    return 0;
}
