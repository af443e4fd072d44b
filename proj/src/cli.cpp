#include "hscaler/cli.hpp"

#include "hscaler/errors.hpp"
#include "hscaler/io.hpp"
#include "hscaler/units.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

namespace hscaler::cli {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError(context + ": unknown key '" + it.key() + "'");
    }
}

double get_num(const json& j, const std::string& context, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(context + "." + key + ": expected a number");
    return j[key].get<double>();
}

std::int64_t get_int(const json& j, const std::string& context, const char* key,
                     std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw ConfigError(context + "." + key + ": expected an integer");
    return j[key].get<std::int64_t>();
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

json base_meta(const RunConfig& cfg) {
    json meta;
    meta["config_hash"] = to_hex(fnv1a64(cfg.canonical.dump()));
    meta["code_units"] = {{"mass", cfg.spec.mass},
                          {"hbar", cfg.spec.hbar},
                          {"t_f", cfg.spec.t_f},
                          {"length_l", cfg.length_unit()}};
    return meta;
}

void note(const CommonOptions& opt, const std::string& line) {
    if (!opt.quiet) std::cout << line << "\n";
}

CodeUnits units_of(const ScalingSpec& spec) { return {spec.mass, spec.hbar, spec.t_f}; }

// Trajectory in code units: same polynomial in s, unit process time.
ReferenceTrajectory dimensionless_trajectory(const ReferenceTrajectory& traj) {
    return ReferenceTrajectory(traj.poly(), 1.0, traj.mode());
}

std::vector<double> moment_row(double t, const MomentState& m, const InvariantRecord& inv) {
    return {t, m.q_mean, m.p_mean, m.var_q(), m.var_p(), m.cov_qp(), inv.G_mean, inv.I_mean};
}

const std::vector<std::string> kMomentHeader = {"t",     "q_mean", "p_mean", "var_q",
                                                "var_p", "cov_qp", "G_mean", "I_mean"};

std::optional<double> loglog_slope(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0 && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

} // namespace

RunConfig parse_config(const json& doc) {
    check_keys(doc, "config",
               {"mode", "scale_factor", "t_f", "u0", "udot0", "mass", "hbar", "grid",
                "initial_state", "ensemble", "outputs", "sweep"});
    RunConfig cfg;

    if (!doc.contains("mode")) throw ConfigError("config.mode is required");
    std::string mode = doc["mode"].get<std::string>();
    if (mode == "momentum")
        cfg.spec.mode = ScalingMode::MomentumScaling;
    else if (mode == "position")
        cfg.spec.mode = ScalingMode::PositionScaling;
    else
        throw ConfigError("config.mode must be 'momentum' or 'position'");

    if (!doc.contains("scale_factor")) throw ConfigError("config.scale_factor is required");
    cfg.spec.scale_factor = get_num(doc, "config", "scale_factor", 1.0);
    cfg.spec.t_f = get_num(doc, "config", "t_f", 1.0);
    cfg.spec.u0 = get_num(doc, "config", "u0", 1.0);
    cfg.spec.udot0 = get_num(doc, "config", "udot0", 1.0);
    cfg.spec.mass = get_num(doc, "config", "mass", 1.0);
    cfg.spec.hbar = get_num(doc, "config", "hbar", 1.0);
    try {
        cfg.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        check_keys(g, "config.grid", {"n_points", "q_min", "q_max", "dt"});
        cfg.grid.n_points = static_cast<int>(get_int(g, "config.grid", "n_points", 2048));
        cfg.grid.q_min = get_num(g, "config.grid", "q_min", -40.0);
        cfg.grid.q_max = get_num(g, "config.grid", "q_max", 40.0);
        cfg.grid.dt = get_num(g, "config.grid", "dt", 2e-4);
    }
    try {
        cfg.grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.grid: ") + e.what());
    }

    if (doc.contains("initial_state")) {
        const json& s = doc["initial_state"];
        if (s.contains("sigma_q")) {
            check_keys(s, "config.initial_state", {"q_mean", "p_mean", "sigma_q"});
            cfg.initial_is_gaussian = true;
            cfg.init_q_mean = get_num(s, "config.initial_state", "q_mean", 1.0);
            cfg.init_p_mean = get_num(s, "config.initial_state", "p_mean", 1.0);
            cfg.init_sigma_q = get_num(s, "config.initial_state", "sigma_q", M_SQRT1_2);
            if (!(cfg.init_sigma_q > 0))
                throw ConfigError("config.initial_state.sigma_q must be positive");
        } else {
            check_keys(s, "config.initial_state", {"q_mean", "p_mean", "q2", "p2", "qp_sym"});
            cfg.initial_is_gaussian = false;
            cfg.init_moments.q_mean = get_num(s, "config.initial_state", "q_mean", 0.0);
            cfg.init_moments.p_mean = get_num(s, "config.initial_state", "p_mean", 0.0);
            cfg.init_moments.q2 = get_num(s, "config.initial_state", "q2", 1.0);
            cfg.init_moments.p2 = get_num(s, "config.initial_state", "p2", 1.0);
            cfg.init_moments.qp_sym = get_num(s, "config.initial_state", "qp_sym", 0.0);
        }
    }
    if (cfg.initial_is_gaussian) {
        cfg.init_moments = MomentState::minimum_uncertainty(cfg.init_q_mean, cfg.init_p_mean,
                                                            cfg.init_sigma_q);
    }
    try {
        cfg.init_moments.require_valid();
    } catch (const BadCovariance& e) {
        throw ConfigError(std::string("config.initial_state: ") + e.what());
    }

    if (doc.contains("ensemble")) {
        const json& e = doc["ensemble"];
        check_keys(e, "config.ensemble", {"n", "seed"});
        cfg.ensemble_n = get_int(e, "config.ensemble", "n", 100000);
        if (cfg.ensemble_n <= 0) throw ConfigError("config.ensemble.n must be positive");
        std::int64_t seed = get_int(e, "config.ensemble", "seed", 1);
        if (seed < 0) throw ConfigError("config.ensemble.seed must be nonnegative");
        cfg.ensemble_seed = static_cast<std::uint64_t>(seed);
    }

    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        check_keys(o, "config.outputs", {"dir", "snapshots", "wigner_points"});
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        cfg.snapshots = static_cast<int>(get_int(o, "config.outputs", "snapshots", 12));
        if (cfg.snapshots < 2) throw ConfigError("config.outputs.snapshots must be >= 2");
        cfg.wigner_points = static_cast<int>(get_int(o, "config.outputs", "wigner_points", 128));
        if (cfg.wigner_points < 2 || cfg.wigner_points > cfg.grid.n_points)
            throw ConfigError("config.outputs.wigner_points out of range");
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        check_keys(s, "config.sweep", {"t_f_values", "scale_factors"});
        if (s.contains("t_f_values") == s.contains("scale_factors"))
            throw ConfigError("config.sweep: give exactly one of t_f_values, scale_factors");
        auto read_list = [&](const char* key) {
            if (!s[key].is_array()) throw ConfigError("config.sweep: expected an array");
            std::vector<double> vals = s[key].get<std::vector<double>>();
            if (vals.empty()) throw ConfigError("config.sweep: empty sweep");
            return vals;
        };
        if (s.contains("t_f_values")) {
            cfg.sweep_t_f = read_list("t_f_values");
            for (double v : *cfg.sweep_t_f)
                if (!(v > 0)) throw ConfigError("config.sweep.t_f_values must be positive");
        } else {
            cfg.sweep_scale_factors = read_list("scale_factors");
            for (double v : *cfg.sweep_scale_factors)
                if (v == 0) throw ConfigError("config.sweep.scale_factors must be nonzero");
        }
    }

    cfg.canonical = doc;
    return cfg;
}

RunConfig load_config(const CommonOptions& opt) {
    if (opt.config_path.empty()) throw ConfigError("missing --config <path>");
    std::string text;
    try {
        text = read_text(opt.config_path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg = parse_config(doc);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.seed) cfg.ensemble_seed = *opt.seed;
    // The hash identifies the run content; where it lands on disk is not
    // part of it.
    if (cfg.canonical.contains("outputs")) cfg.canonical["outputs"].erase("dir");
    cfg.canonical["ensemble"]["seed"] = cfg.ensemble_seed;
    return cfg;
}

namespace {

struct Designed {
    ReferenceTrajectory traj;
    FrequencyProgram program;
};

Designed design(const ScalingSpec& spec) {
    ReferenceTrajectory traj = design_trajectory(spec);
    FrequencyProgram program = synthesize_omega2(traj);
    return {std::move(traj), std::move(program)};
}

json report_to_json(const ValidationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return {{"checks", checks},
            {"eq_motion_residual", rep.eq_motion_residual},
            {"symmetry_defect", rep.symmetry_defect},
            {"peak_abs_omega2", rep.peak_abs_omega2},
            {"max_abs_q_mean", rep.max_abs_q_mean},
            {"passed", rep.passed()}};
}

} // namespace

int cmd_design(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);

    const MomentState init_dim = units_of(cfg.spec).to_dimensional(cfg.init_moments);
    ValidationReport rep = validate_protocol(
        d.traj, d.program, Eigen::Vector2d(init_dim.q_mean, init_dim.p_mean));

    CsvWriter csv({"s", "t", "u", "udot", "omega2"});
    const int n = 1001;
    for (int i = 0; i < n; ++i) {
        double s = double(i) / (n - 1);
        double t = s * cfg.spec.t_f;
        csv.add_row({s, t, d.traj.u(t), d.traj.udot(t), d.program.omega2(t)});
    }
    csv.write(out_path(cfg, "protocol.csv"));

    json meta = base_meta(cfg);
    meta["validation"] = report_to_json(rep);
    meta["peak_abs_omega2"] = rep.peak_abs_omega2;
    write_text_atomic(out_path(cfg, "protocol.meta.json"), meta.dump(2) + "\n");

    note(opt, "wrote protocol.csv, protocol.meta.json (peak |omega^2| = " +
                  format_double(rep.peak_abs_omega2) + ")");
    if (!rep.passed()) {
        std::cerr << "protocol validation failed\n";
        return 2;
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);
    const MomentState init_dim = units_of(cfg.spec).to_dimensional(cfg.init_moments);
    ValidationReport rep = validate_protocol(
        d.traj, d.program, Eigen::Vector2d(init_dim.q_mean, init_dim.p_mean));

    json meta = base_meta(cfg);
    meta["validation"] = report_to_json(rep);
    write_text_atomic(out_path(cfg, "validation.json"), meta.dump(2) + "\n");
    note(opt, std::string("validation ") + (rep.passed() ? "passed" : "FAILED"));
    return rep.passed() ? 0 : 2;
}

int cmd_moments(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);
    const MomentState initial = units_of(cfg.spec).to_dimensional(cfg.init_moments);

    FundamentalSolution fs(d.program, cfg.spec.mass);
    CsvWriter csv(kMomentHeader);
    const int n = 1001;
    for (int i = 0; i < n; ++i) {
        double t = cfg.spec.t_f * double(i) / (n - 1);
        MomentState m = propagate_second_moments(fs.at(t), initial);
        csv.add_row(moment_row(t, m, invariant_expectations(d.traj, m)));
    }
    csv.write(out_path(cfg, "moments.csv"));

    json meta = base_meta(cfg);
    write_text_atomic(out_path(cfg, "moments.meta.json"), meta.dump(2) + "\n");
    note(opt, "wrote moments.csv, moments.meta.json");
    return 0;
}

namespace {

PropagationResult run_quantum(const RunConfig& cfg, const Designed& d) {
    if (!cfg.initial_is_gaussian)
        throw ConfigError("quantum commands need a (q_mean, p_mean, sigma_q) initial state");
    WaveFunction psi0 =
        gaussian_state(cfg.grid, cfg.init_q_mean, cfg.init_p_mean, cfg.init_sigma_q);
    return propagate(psi0, d.program, cfg.snapshots);
}

std::string snap_name(const char* prefix, int k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%02d.csv", prefix, k);
    return buf;
}

} // namespace

int cmd_qsim(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);
    PropagationResult run = run_quantum(cfg, d);
    ReferenceTrajectory dimless = dimensionless_trajectory(d.traj);

    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        const WaveFunction& wf = run.snapshots[k];
        CsvWriter csv({"Q", "re_psi", "im_psi", "abs2"});
        for (int i = 0; i < wf.grid.n_points; ++i) {
            std::complex<double> a = wf.amplitudes[i];
            csv.add_row({wf.grid.q(i), a.real(), a.imag(), std::norm(a)});
        }
        csv.write(out_path(cfg, snap_name("qsim_snapshot", static_cast<int>(k))));
    }

    CsvWriter mom(kMomentHeader);
    for (const WaveFunction& wf : run.snapshots) {
        MomentState m = measure_moments(wf);
        mom.add_row(moment_row(wf.time, m, invariant_expectations(dimless, m)));
    }
    mom.write(out_path(cfg, "qsim_moments.csv"));

    json meta = base_meta(cfg);
    meta["snapshot_times"] = run.snapshot_times;
    meta["max_norm_drift"] = run.max_norm_drift;
    meta["boundary_warning"] = run.boundary_warning;
    meta["max_boundary_probability"] = run.max_boundary_probability;
    write_text_atomic(out_path(cfg, "qsim.meta.json"), meta.dump(2) + "\n");

    if (run.boundary_warning)
        std::cerr << "warning: packet probability near the grid edge exceeded 1e-10\n";
    note(opt, "wrote " + std::to_string(run.snapshots.size()) +
                  " snapshots, qsim_moments.csv, qsim.meta.json");
    return 0;
}

int cmd_wigner(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);
    PropagationResult run = run_quantum(cfg, d);

    // Fixed plotting window, decimated from the native transform.
    const double window = 20.0;
    double level = 0.0;
    std::vector<double> areas;
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        WignerGrid wg = wigner(run.snapshots[k]);
        if (k == 0) level = wg.W.maxCoeff() / M_E;
        if (k == 0 || k + 1 == run.snapshots.size())
            areas.push_back(level_set_area(wg, level));

        std::vector<int> qi, pj;
        const int n_q = static_cast<int>(wg.q.size());
        const int n_p = static_cast<int>(wg.p.size());
        int q_stride = std::max(1, n_q / cfg.wigner_points);
        int p_stride = std::max(1, n_p / cfg.wigner_points);
        for (int i = 0; i < n_q; i += q_stride)
            if (std::abs(wg.q[i]) <= window) qi.push_back(i);
        for (int j = 0; j < n_p; j += p_stride)
            if (std::abs(wg.p[j]) <= window) pj.push_back(j);

        CsvWriter csv({"Q", "P", "W"});
        for (int i : qi)
            for (int j : pj) csv.add_row({wg.q[i], wg.p[j], wg.W(i, j)});
        csv.write(out_path(cfg, snap_name("wigner", static_cast<int>(k))));
    }

    json meta = base_meta(cfg);
    meta["snapshot_times"] = run.snapshot_times;
    meta["contour_level"] = level;
    meta["contour_area_initial"] = areas.front();
    meta["contour_area_final"] = areas.back();
    meta["window"] = window;
    write_text_atomic(out_path(cfg, "wigner.meta.json"), meta.dump(2) + "\n");
    note(opt, "wrote " + std::to_string(run.snapshots.size()) +
                  " Wigner grids, wigner.meta.json");
    return 0;
}

int cmd_csim(const RunConfig& cfg, const CommonOptions& opt) {
    Designed d = design(cfg.spec);
    const MomentState initial = units_of(cfg.spec).to_dimensional(cfg.init_moments);

    Ensemble e0 = sample_gaussian(initial, cfg.ensemble_n, cfg.ensemble_seed);
    FundamentalSolution fs(d.program, cfg.spec.mass);

    auto write_ensemble = [&](const Ensemble& e, const std::string& name) {
        CsvWriter csv({"q", "p", "weight"});
        for (std::int64_t i = 0; i < e.size(); ++i)
            csv.add_row({e.points(i, 0), e.points(i, 1), e.weights[i]});
        csv.write(out_path(cfg, name));
    };

    CsvWriter mom(kMomentHeader);
    json comparison = json::array();
    double worst = 0.0;
    Ensemble e_final = e0;
    for (int k = 0; k < cfg.snapshots; ++k) {
        double t = cfg.spec.t_f * double(k) / (cfg.snapshots - 1);
        Ensemble et = propagate_exact(e0, fs, t);
        MomentState sampled = ensemble_moments(et);
        mom.add_row(moment_row(t, sampled, invariant_expectations(d.traj, sampled)));

        // Deviation from the analytic prediction in empirical standard errors.
        MomentState analytic = propagate_second_moments(fs.at(t), initial);
        double inv_sqrt_n = 1.0 / std::sqrt(double(et.size()));
        auto dev = [&](double got, double want, double per_point_sd) {
            double se = per_point_sd * inv_sqrt_n;
            return se > 0 ? std::abs(got - want) / se : 0.0;
        };
        double sd_q = std::sqrt(std::max(analytic.var_q(), 0.0));
        double sd_p = std::sqrt(std::max(analytic.var_p(), 0.0));
        double max_dev = std::max(dev(sampled.q_mean, analytic.q_mean, sd_q),
                                  dev(sampled.p_mean, analytic.p_mean, sd_p));
        worst = std::max(worst, max_dev);
        comparison.push_back({{"t", t}, {"max_mean_deviation_se", max_dev}});
        if (k == cfg.snapshots - 1) e_final = std::move(et);
    }
    write_ensemble(e0, "ensemble_initial.csv");
    write_ensemble(e_final, "ensemble_final.csv");
    mom.write(out_path(cfg, "csim_moments.csv"));

    json meta = base_meta(cfg);
    meta["n_points"] = cfg.ensemble_n;
    meta["seed"] = cfg.ensemble_seed;
    meta["comparison"] = comparison;
    meta["max_mean_deviation_se"] = worst;
    meta["within_5_se"] = worst <= 5.0;
    write_text_atomic(out_path(cfg, "csim.meta.json"), meta.dump(2) + "\n");
    note(opt, "wrote ensemble_initial.csv, ensemble_final.csv, csim_moments.csv, csim.meta.json");
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const CommonOptions& opt) {
    if (!cfg.sweep_t_f && !cfg.sweep_scale_factors)
        throw ConfigError("sweep: config.sweep is required");

    CsvWriter csv({"t_f", "scale_factor", "peak_abs_omega2", "I_f", "max_abs_q_mean"});
    std::vector<double> tfs, peaks, ifs;
    const std::size_t count =
        cfg.sweep_t_f ? cfg.sweep_t_f->size() : cfg.sweep_scale_factors->size();

    for (std::size_t i = 0; i < count; ++i) {
        ScalingSpec spec = cfg.spec;
        if (cfg.sweep_t_f)
            spec.t_f = (*cfg.sweep_t_f)[i];
        else
            spec.scale_factor = (*cfg.sweep_scale_factors)[i];
        Designed d = design(spec);

        double peak = d.program.peak_abs_omega2();
        double I_f = std::numeric_limits<double>::quiet_NaN();
        try {
            I_f = quadrature_integrals(d.traj, spec.t_f).I;
        } catch (const SingularIntegrand&) {
            // mirror-type protocol: I_f genuinely divergent, reported as nan
        }

        MomentState init = units_of(spec).to_dimensional(cfg.init_moments);
        FundamentalSolution fs(d.program, spec.mass);
        double peak_q = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            double t = spec.t_f * double(k) / 2000.0;
            Eigen::Vector2d x = fs.matrix(t) * Eigen::Vector2d(init.q_mean, init.p_mean);
            peak_q = std::max(peak_q, std::abs(x(0)));
        }

        csv.add_row({spec.t_f, spec.scale_factor, peak, I_f, peak_q});
        tfs.push_back(spec.t_f);
        peaks.push_back(peak);
        ifs.push_back(I_f);
    }
    csv.write(out_path(cfg, "sweep.csv"));

    json meta = base_meta(cfg);
    if (cfg.sweep_t_f) {
        auto s1 = loglog_slope(tfs, peaks);
        auto s2 = loglog_slope(tfs, ifs);
        meta["slope_peak_omega2_vs_t_f"] = s1 ? json(*s1) : json("n/a");
        meta["slope_I_f_vs_t_f"] = s2 ? json(*s2) : json("n/a");
    } else {
        meta["slope_peak_omega2_vs_t_f"] = "n/a";
        meta["slope_I_f_vs_t_f"] = "n/a";
    }
    write_text_atomic(out_path(cfg, "sweep.meta.json"), meta.dump(2) + "\n");
    note(opt, "wrote sweep.csv, sweep.meta.json");
    return 0;
}

int dispatch(const std::string& command, const CommonOptions& opt) {
    try {
        RunConfig cfg = load_config(opt);
        if (command == "design") return cmd_design(cfg, opt);
        if (command == "validate") return cmd_validate(cfg, opt);
        if (command == "moments") return cmd_moments(cfg, opt);
        if (command == "qsim") return cmd_qsim(cfg, opt);
        if (command == "wigner") return cmd_wigner(cfg, opt);
        if (command == "csim") return cmd_csim(cfg, opt);
        if (command == "sweep") return cmd_sweep(cfg, opt);
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const GenuineSingularity& e) {
        std::cerr << "protocol rejected: " << e.what() << "\n";
        return 2;
    } catch (const BadCovariance& e) {
        std::cerr << "invalid state: " << e.what() << "\n";
        return 2;
    } catch (const GridTooSmall& e) {
        std::cerr << "grid too small: " << e.what() << "\n";
        return 2;
    } catch (const IntegratorFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularIntegrand& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace hscaler::cli
