#include "esbgk/cli.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "esbgk/entropy.hpp"
#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"

namespace esbgk {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

fs::path resolve_output_dir(const std::string& configured) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return fs::path(env);
    return fs::path(configured.empty() ? "." : configured);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double abs_slack(const Stamp& s) { return 1e-12 * s.state.rho * (1.0 + std::abs(s.report.H_f)); }

TrajectoryCheck ratio_check(std::string name) { return {std::move(name), 0.0, true}; }

void observe(TrajectoryCheck& c, double value, double bound) {
    const double r = bound > 0.0 ? value / bound : (value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    c.worst = std::max(c.worst, r);
    c.passed = c.passed && value <= bound;
}

}  // namespace

DecayFit fit_log_decay(const Trajectory& traj) {
    DecayFit fit;
    if (traj.stamps.empty()) return fit;
    const double r0 = traj.stamps.front().report.rel_target();
    const double floor = std::max(1e-13, 1e-9 * r0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& s : traj.stamps) {
        const double r = s.report.rel_target();
        if (!(r > floor)) break;
        const double y = std::log(r);
        sx += s.t;
        sy += y;
        sxx += s.t * s.t;
        sxy += s.t * y;
        ++n;
    }
    if (n < 3) return fit;
    const double dn = static_cast<double>(n);
    const double den = dn * sxx - sx * sx;
    if (!(den > 0.0)) return fit;
    fit.slope = (dn * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / dn;
    fit.points = n;
    fit.valid = true;
    return fit;
}

bool TrajectoryChecks::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const TrajectoryCheck& c) { return c.passed; });
}

TrajectoryChecks check_trajectory(const Trajectory& traj, const ModelParams& params, double conservation_tol) {
    TrajectoryChecks out;
    if (traj.stamps.empty()) return out;
    const Stamp& s0 = traj.stamps.front();
    const double A0 = s0.report.A;
    const double theta = params.theta;

    if (theta > 0.0) {
        out.reference_rate = theta * A0;
        auto decay = ratio_check("entropy_decay_bound");
        auto temp = ratio_check("temperature_relaxation_bound");
        const double r0 = s0.report.rel_H01;
        const double dT0 = std::abs(s0.state.T_tr - s0.state.T_delta);
        for (const auto& s : traj.stamps) {
            const double e = std::exp(-theta * A0 * s.t);
            observe(decay, s.report.rel_H01, e * r0 * 1.05 + abs_slack(s));
            observe(temp, std::abs(s.state.T_tr - s.state.T_delta), e * dT0 * 1.05 + 1e-12 * s.state.T_delta);
        }
        out.checks.push_back(decay);
        out.checks.push_back(temp);
    } else {
        const double c = coercivity_constant(params);
        out.reference_rate = 0.5 * A0 * c;
        auto l1 = ratio_check("l1_decay_bound");
        auto ttr = ratio_check("translational_temperature_frozen");
        auto tint = ratio_check("internal_temperature_frozen");
        const double k0 = std::sqrt(2.0 * s0.state.rho * std::max(0.0, s0.report.rel_H00));
        for (const auto& s : traj.stamps) {
            observe(l1, s.report.l1_to_target, std::exp(-out.reference_rate * s.t) * k0 + 1e-3 * s0.state.rho);
            observe(ttr, std::abs(s.state.T_tr - s0.state.T_tr), 1e-6 * s0.state.T_tr);
            observe(tint, std::abs(s.state.T_int - s0.state.T_int), 1e-6 * s0.state.T_int);
        }
        out.checks.push_back(l1);
        out.checks.push_back(ttr);
        out.checks.push_back(tint);
    }

    out.fit = fit_log_decay(traj);
    if (theta > 0.0 && out.fit.valid) {
        auto fitc = ratio_check("fitted_decay_rate");
        // passes iff slope <= -0.95 theta A
        observe(fitc, 0.95 * out.reference_rate, -out.fit.slope);
        out.checks.push_back(fitc);
    }

    auto mono = ratio_check("entropy_non_increasing");
    const double tol = s0.report.tol_quad;
    for (std::size_t i = 1; i < traj.entropy_history.size(); ++i)
        observe(mono, traj.entropy_history[i].second - traj.entropy_history[i - 1].second, tol);
    out.checks.push_back(mono);

    auto mass = ratio_check("mass_conservation");
    auto mom = ratio_check("momentum_conservation");
    auto energy = ratio_check("energy_conservation");
    for (const auto& s : traj.stamps) {
        observe(mass, s.drift.mass, conservation_tol);
        observe(mom, s.drift.momentum, conservation_tol);
        observe(energy, s.drift.energy, conservation_tol);
    }
    out.checks.push_back(mass);
    out.checks.push_back(mom);
    out.checks.push_back(energy);
    return out;
}

std::vector<std::string> trajectory_csv_header(int d) {
    std::vector<std::string> h{"t", "rho"};
    for (int a = 1; a <= d; ++a) h.push_back("U_" + std::to_string(a));
    for (const char* c : {"T_tr", "T_int", "T_delta", "H_f", "D", "A", "rel_H_target", "theorem_gap", "l1_to_target",
                          "kullback_bound", "mass_drift", "mom_drift", "energy_drift"})
        h.emplace_back(c);
    return h;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int d) {
    const auto header = trajectory_csv_header(d);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& s : traj.stamps) {
        const auto& r = s.report;
        os << fmt(s.t) << ',' << fmt(s.state.rho);
        for (int a = 0; a < d; ++a) os << ',' << fmt(s.state.U[a]);
        for (double v : {s.state.T_tr, s.state.T_int, s.state.T_delta, r.H_f, r.D, r.A, r.rel_target(), r.theorem_gap,
                         r.l1_to_target, r.kullback_bound, s.drift.mass, s.drift.momentum, s.drift.energy})
            os << ',' << fmt(v);
        os << '\n';
    }
}

void write_transport_csv(std::ostream& os, const TransportTrajectory& traj) {
    os << "t,total_mass,mass_drift,H_total,H_min_cell,H_max_cell,min_theorem_gap,finite,certificates_passed\n";
    for (const auto& s : traj.stamps)
        os << fmt(s.t) << ',' << fmt(s.total_mass) << ',' << fmt(s.mass_drift) << ',' << fmt(s.H_total) << ','
           << fmt(s.H_min_cell) << ',' << fmt(s.H_max_cell) << ',' << fmt(s.min_theorem_gap) << ',' << int(s.finite)
           << ',' << int(s.certificates_passed) << '\n';
}

namespace {

ordered_json params_json(const ModelParams& p) {
    return {{"d", p.d}, {"delta", p.delta}, {"nu", p.nu}, {"theta", p.theta}, {"mu", p.mu}};
}

ordered_json grid_json(const GridSpec& g, int d) {
    ordered_json n_v = ordered_json::array(), L = ordered_json::array(), c = ordered_json::array();
    for (int a = 0; a < d; ++a) {
        n_v.push_back(g.n_v[a]);
        L.push_back(g.half_width[a]);
        c.push_back(g.center[a]);
    }
    return {{"n_v", n_v}, {"half_width", L}, {"center", c}, {"n_I", g.n_I}, {"I_max", g.I_max}};
}

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json mat_json(const Mat& m) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
    return a;
}

ordered_json state_json(const MacroState& s) {
    return {{"rho", s.rho},     {"U", vec_json(s.U)},   {"Theta", mat_json(s.Theta)},
            {"T_tr", s.T_tr},   {"T_int", s.T_int},     {"T_delta", s.T_delta}};
}

ordered_json report_json(const EntropyReport& r) {
    ordered_json certs = ordered_json::array();
    for (const auto& c : r.certificates)
        certs.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    return {{"target", to_string(r.target)},
            {"H_f", r.H_f},
            {"H_M_nu_theta", r.H_M_nu_theta},
            {"H_M01", r.H_M01},
            {"H_M00", r.H_M00},
            {"H_MTheta", r.H_MTheta},
            {"D", r.D},
            {"A", r.A},
            {"coercivity", r.coercivity},
            {"rel_H01", r.rel_H01},
            {"rel_H00", r.rel_H00},
            {"theorem_gap", r.theorem_gap},
            {"convexity_gap", r.convexity_gap},
            {"lemma_gap", r.lemma_gap},
            {"lemma22_gap_closures", r.lemma22_gap_closures},
            {"lemma22_gap_f", r.lemma22_gap_f},
            {"l1_to_target", r.l1_to_target},
            {"kullback_bound", r.kullback_bound},
            {"tol_quad", r.tol_quad},
            {"floor_nodes", r.floor_nodes},
            {"all_passed", r.all_passed()},
            {"certificates", certs}};
}

ordered_json solver_json(const SolverConfig& c) {
    ordered_json j = {{"scheme", c.scheme == Scheme::exponential ? "exponential" : "rk4"},
                      {"dt", c.dt},
                      {"t_end", c.t_end},
                      {"report_every", c.report_every},
                      {"matched_closures", c.matched_closures}};
    if (c.transport) j["transport"] = {{"n_x", c.transport->n_x}, {"dx", c.transport->dx}, {"periodic", true}};
    return j;
}

}  // namespace

std::string homogeneous_report_json(const Scenario& s, const SolverConfig& cfg, const GridSpec& grid,
                                    const Trajectory& traj, const TrajectoryChecks& checks) {
    const int d = s.params.d;
    ordered_json j;
    j["params"] = params_json(s.params);
    j["initial_family"] = to_string(s.initial.family);
    j["seed"] = s.seed;
    j["grid"] = grid_json(grid, d);
    j["solver"] = solver_json(cfg);
    j["stamps"] = traj.stamps.size();
    j["failure"] = traj.failure ? ordered_json(*traj.failure) : ordered_json(nullptr);

    std::size_t failed_stamps = 0;
    double min_theorem_gap = std::numeric_limits<double>::infinity();
    double worst_theorem_ratio = -std::numeric_limits<double>::infinity();
    ConservationDrift max_drift;
    for (const auto& st : traj.stamps) {
        failed_stamps += st.report.all_passed() ? 0 : 1;
        min_theorem_gap = std::min(min_theorem_gap, st.report.theorem_gap);
        worst_theorem_ratio = std::max(worst_theorem_ratio, -st.report.theorem_gap / st.report.tol_quad);
        max_drift.mass = std::max(max_drift.mass, st.drift.mass);
        max_drift.momentum = std::max(max_drift.momentum, st.drift.momentum);
        max_drift.energy = std::max(max_drift.energy, st.drift.energy);
    }
    j["certificates"] = {{"failed_stamps", failed_stamps},
                         {"min_theorem_gap", traj.stamps.empty() ? ordered_json(nullptr) : ordered_json(min_theorem_gap)},
                         {"worst_gap_over_tol", traj.stamps.empty() ? ordered_json(nullptr) : ordered_json(worst_theorem_ratio)}};
    j["conservation"] = {{"max_mass_drift", max_drift.mass},
                         {"max_momentum_drift", max_drift.momentum},
                         {"max_energy_drift", max_drift.energy}};

    ordered_json decay;
    decay["target"] = traj.stamps.empty() ? "" : to_string(traj.stamps.front().report.target);
    decay["reference_rate"] = checks.reference_rate;
    if (checks.fit.valid) {
        decay["fitted_log_slope"] = checks.fit.slope;
        decay["fitted_intercept"] = checks.fit.intercept;
        decay["fit_points"] = checks.fit.points;
        decay["slope_over_reference"] = checks.reference_rate > 0 ? -checks.fit.slope / checks.reference_rate : 0.0;
    } else {
        decay["fitted_log_slope"] = nullptr;
    }
    j["decay"] = decay;

    ordered_json tc = ordered_json::array();
    for (const auto& c : checks.checks) tc.push_back({{"name", c.name}, {"worst_ratio", c.worst}, {"passed", c.passed}});
    j["trajectory_checks"] = tc;

    if (!traj.stamps.empty()) {
        j["initial"] = {{"state", state_json(traj.stamps.front().state)}, {"report", report_json(traj.stamps.front().report)}};
        j["final"] = {{"t", traj.stamps.back().t},
                      {"state", state_json(traj.stamps.back().state)},
                      {"report", report_json(traj.stamps.back().report)}};
    }
    j["all_certificates_passed"] = traj.all_certificates_passed() && checks.all_passed();
    return j.dump(2);
}

std::string transport_report_json(const Scenario& s, const SolverConfig& cfg, const GridSpec& grid,
                                  const TransportTrajectory& traj) {
    ordered_json j;
    j["params"] = params_json(s.params);
    j["initial_family"] = to_string(s.initial.family);
    j["grid"] = grid_json(grid, s.params.d);
    j["solver"] = solver_json(cfg);
    j["stamps"] = traj.stamps.size();
    j["failure"] = traj.failure ? ordered_json(*traj.failure) : ordered_json(nullptr);
    double max_drift = 0.0;
    bool finite = true, certs = true;
    for (const auto& st : traj.stamps) {
        max_drift = std::max(max_drift, st.mass_drift);
        finite = finite && st.finite;
        certs = certs && st.certificates_passed;
    }
    j["max_mass_drift"] = max_drift;
    j["all_finite"] = finite;
    j["cell_certificates_passed"] = certs;
    if (!traj.stamps.empty()) {
        const auto& f = traj.stamps.back();
        j["final"] = {{"t", f.t}, {"total_mass", f.total_mass}, {"H_total", f.H_total},
                      {"H_min_cell", f.H_min_cell}, {"H_max_cell", f.H_max_cell}, {"min_theorem_gap", f.min_theorem_gap}};
    }
    j["all_certificates_passed"] = !traj.failure && finite && certs && max_drift <= 1e-10;
    return j.dump(2);
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    if (!os) throw Error("cannot open " + p.string() + " for writing");
    os << text;
    if (!os) throw Error("write failed: " + p.string());
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const SnapshotError& e) {
        err << "snapshot error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
}

}  // namespace

int run_scenario_file(const std::string& path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(path);
        const GridSpec gs = scenario_grid(s);
        const PhaseGrid grid(gs, s.params);
        const DistSnapshot f0 = initial_data(s, grid);
        const SolverConfig cfg = resolve_solver(s, f0, grid);

        const fs::path dir = resolve_output_dir(s.outputs.dir);
        fs::create_directories(dir);
        const std::string stem = (dir / s.outputs.prefix).string();
        if (s.outputs.snapshots == SnapshotPolicy::initial_and_final)
            write_snapshot(stem + "_initial.snap", {gs, s.params, f0});

        bool passed = false;
        std::optional<std::string> failure;
        if (!cfg.transport) {
            const Trajectory traj = run_homogeneous(f0.values, cfg, grid);
            const TrajectoryChecks checks = check_trajectory(traj, s.params);
            std::ofstream csv(stem + "_trajectory.csv");
            if (!csv) throw Error("cannot open " + stem + "_trajectory.csv for writing");
            write_trajectory_csv(csv, traj, s.params.d);
            write_text(stem + "_report.json", homogeneous_report_json(s, cfg, gs, traj, checks) + "\n");
            if (s.outputs.snapshots != SnapshotPolicy::none)
                write_snapshot(stem + "_final.snap", {gs, s.params, DistSnapshot(traj.final_state)});
            passed = traj.all_certificates_passed() && checks.all_passed();
            failure = traj.failure;
            out << "stamps: " << traj.stamps.size() << '\n';
            for (const auto& c : checks.checks)
                out << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (worst ratio " << fmt(c.worst) << ")\n";
        } else {
            const TransportTrajectory traj = run_transport(f0, cfg, grid);
            std::ofstream csv(stem + "_transport.csv");
            if (!csv) throw Error("cannot open " + stem + "_transport.csv for writing");
            write_transport_csv(csv, traj);
            const std::string report = transport_report_json(s, cfg, gs, traj);
            write_text(stem + "_report.json", report + "\n");
            if (s.outputs.snapshots != SnapshotPolicy::none)
                write_snapshot(stem + "_final.snap", {gs, s.params, traj.final_state});
            passed = nlohmann::json::parse(report).at("all_certificates_passed").get<bool>();
            failure = traj.failure;
            out << "stamps: " << traj.stamps.size() << '\n';
        }
        out << "artifacts: " << stem << "_*\n";
        if (failure) {
            err << "run aborted: " << *failure << '\n';
            return kExitRuntimeError;
        }
        out << (passed ? "all certificates passed" : "certificate failure") << '\n';
        return passed ? kExitOk : kExitCertificateFailure;
    });
}

SweepSummary certify_sweep(std::size_t samples, std::uint64_t seed, Regime regime, const SampleRanges& ranges) {
    validate(ranges, regime);
    const auto start = std::chrono::steady_clock::now();
    SweepSummary s;
    s.regime = regime;
    s.samples = samples;
    s.seed = seed;
    s.min_gap = std::numeric_limits<double>::infinity();
    s.max_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        StateSampler sampler(derive_seed(seed, i));
        const SampledCase c = sample_case(sampler, ranges, regime);
        double gap = 0.0;
        bool ok = false;
        if (regime == Regime::theta_pos) {
            const auto cert = certify_lemma21(c.state, c.params);
            gap = cert.gap;
            ok = cert.passed;
        } else {
            const auto cert = certify_lemma31(c.state, c.params);
            gap = cert.gap;
            ok = cert.passed;
            const double scale = std::max(std::abs(cert.generic_difference), std::numeric_limits<double>::min());
            const double mismatch = std::abs(cert.explicit_difference - cert.generic_difference) / scale;
            s.explicit_max_rel_mismatch = std::max(s.explicit_max_rel_mismatch, mismatch);
            if (!(mismatch <= s.explicit_rel_tol)) ++s.explicit_mismatches;
        }
        if (!ok) ++s.failures;
        if (gap < s.min_gap) {
            s.min_gap = gap;
            s.min_gap_sample = i;
        }
        s.max_gap = std::max(s.max_gap, gap);
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

std::string sweep_json(const SweepSummary& s) {
    ordered_json j = {{"regime", s.regime == Regime::theta_pos ? "theta_pos" : "theta_zero"},
                      {"samples", s.samples},
                      {"seed", s.seed},
                      {"failures", s.failures},
                      {"min_gap", s.samples ? ordered_json(s.min_gap) : ordered_json(nullptr)},
                      {"min_gap_sample", s.min_gap_sample},
                      {"max_gap", s.samples ? ordered_json(s.max_gap) : ordered_json(nullptr)},
                      {"seconds", s.seconds}};
    if (s.regime == Regime::theta_zero)
        j["explicit_formula"] = {{"max_rel_mismatch", s.explicit_max_rel_mismatch},
                                 {"rel_tol", s.explicit_rel_tol},
                                 {"mismatches", s.explicit_mismatches}};
    return j.dump(2);
}

RefinementStudy refinement_study(const MacroState& state, const ModelParams& params, const GridSpec& base,
                                 const std::vector<MixtureComponent>* f0) {
    RefinementStudy st;
    st.base = base;
    st.refined = base.refined();
    const CorrectedTensor ct = corrected_tensor(state, params);
    constexpr GaussianKind kinds[] = {GaussianKind::nu_theta, GaussianKind::theta, GaussianKind::m01, GaussianKind::m00};
    for (GaussianKind k : kinds) {
        RefinementRow r;
        r.kind = k;
        r.H_closed = h_closed_form(k, state, ct, params);
        r.budget = 1e-3 * (1.0 + std::abs(r.H_closed));
        st.rows.push_back(r);
    }
    auto measure = [&](const GridSpec& spec, bool refined) {
        const PhaseGrid grid(spec, params);
        for (auto& r : st.rows) {
            const GridFunction g = Gaussian(closure_spec(r.kind, state, ct, params)).sample(grid);
            (refined ? r.H_refined : r.H_base) = h_functional(g, grid);
        }
        if (f0) (refined ? st.H_f0_refined : st.H_f0_base) = h_functional(sample_mixture(*f0, params, grid), grid);
    };
    measure(st.base, false);
    measure(st.refined, true);
    for (auto& r : st.rows) {
        r.err_base = std::abs(r.H_base - r.H_closed);
        r.err_refined = std::abs(r.H_refined - r.H_closed);
        r.ratio = r.err_refined > 0.0 ? r.err_base / r.err_refined : std::numeric_limits<double>::infinity();
        st.calibrated_tol_rel = std::max(st.calibrated_tol_rel, r.err_base / (state.rho * (1.0 + std::abs(r.H_closed))));
    }
    return st;
}

std::string refinement_json(const RefinementStudy& st) {
    const int d = [&] {
        int n = 0;
        while (n < kMaxDim && st.base.n_v[n] > 0) ++n;
        return n;
    }();
    ordered_json rows = ordered_json::array();
    for (const auto& r : st.rows)
        rows.push_back({{"kind", to_string(r.kind)},
                        {"H_closed", r.H_closed},
                        {"H_base", r.H_base},
                        {"H_refined", r.H_refined},
                        {"err_base", r.err_base},
                        {"err_refined", r.err_refined},
                        {"ratio", r.ratio},
                        {"budget", r.budget},
                        {"within_budget", r.err_base <= r.budget},
                        {"ratio_in_range", r.ratio >= 2.5 && r.ratio <= 6.0}});
    ordered_json j = {{"base_grid", grid_json(st.base, d)},
                      {"refined_grid", grid_json(st.refined, d)},
                      {"closures", rows},
                      {"calibrated_tol_quad_rel", st.calibrated_tol_rel}};
    if (st.H_f0_base != 0.0 || st.H_f0_refined != 0.0)
        j["initial_data"] = {{"H_base", st.H_f0_base},
                             {"H_refined", st.H_f0_refined},
                             {"richardson_error_estimate", std::abs(st.H_f0_base - st.H_f0_refined) * 4.0 / 3.0}};
    return j.dump(2);
}

int refine_scenario_file(const std::string& path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(path);
        const GridSpec gs = scenario_grid(s);
        const MacroState st = mixture_moments(s.initial.components, s.params.delta);
        const RefinementStudy study = refinement_study(st, s.params, gs, &s.initial.components);
        const std::string text = refinement_json(study);
        const fs::path dir = resolve_output_dir(s.outputs.dir);
        fs::create_directories(dir);
        write_text(dir / (s.outputs.prefix + "_refinement.json"), text + "\n");
        out << text << '\n';
        bool ok = true;
        for (const auto& r : study.rows) ok = ok && r.err_base <= r.budget && r.ratio >= 2.5 && r.ratio <= 6.0;
        return ok ? kExitOk : kExitCertificateFailure;
    });
}

SnapshotDiff diff_snapshots(const SnapshotFile& a, const SnapshotFile& b) {
    SnapshotDiff d;
    const std::string ea = encode_snapshot(a), eb = encode_snapshot(b);
    const std::size_t meta = 16 + 8 * kSnapshotMetaFields;
    d.metadata_equal = ea.compare(0, meta, eb, 0, meta) == 0;
    d.values_a = static_cast<std::size_t>(a.data.values.size());
    d.values_b = static_cast<std::size_t>(b.data.values.size());
    const std::size_t n = std::min(d.values_a, d.values_b);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.data.values[static_cast<Eigen::Index>(i)];
        const double y = b.data.values[static_cast<Eigen::Index>(i)];
        if (std::bit_cast<std::uint64_t>(x) != std::bit_cast<std::uint64_t>(y)) {
            ++d.differing_values;
            const double diff = std::abs(x - y);
            d.max_abs_diff = std::isnan(diff) ? diff : std::max(d.max_abs_diff, diff);
        }
    }
    return d;
}

int snapshot_diff_files(const std::string& a, const std::string& b, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SnapshotDiff d = diff_snapshots(read_snapshot(a), read_snapshot(b));
        if (d.identical()) {
            out << "identical\n";
            return kExitOk;
        }
        out << "metadata: " << (d.metadata_equal ? "equal" : "different") << '\n'
            << "values: " << d.values_a << " vs " << d.values_b << '\n'
            << "differing values: " << d.differing_values << '\n'
            << "max |a - b|: " << fmt(d.max_abs_diff) << '\n';
        return kExitCertificateFailure;
    });
}

}  // namespace esbgk
