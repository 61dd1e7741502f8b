#include "duomode/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "duomode/analytic.hpp"
#include "duomode/csvfmt.hpp"
#include "duomode/dynamics.hpp"
#include "duomode/figures.hpp"
#include "duomode/model.hpp"
#include "duomode/stochastic.hpp"
#include "duomode/verify.hpp"

namespace duomode::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitUnphysical = 3;
constexpr int kExitIo = 4;

struct BaseOptions {
    double kappa = 1.0;
    double g = 0.0;
    double lambda = 0.0;
    double phi = 0.0;
    double n = 0.0;
    double m = 0.0;
    std::string m_mode;  // empty = literal m (default thermal m = 0)
    std::uint64_t seed = 1;
    std::string config_path;

    SdeConfig sde;

    CLI::Option* opt_kappa = nullptr;
    CLI::Option* opt_g = nullptr;
    CLI::Option* opt_lambda = nullptr;
    CLI::Option* opt_phi = nullptr;
    CLI::Option* opt_n = nullptr;
    CLI::Option* opt_m = nullptr;
    CLI::Option* opt_m_mode = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_traj = nullptr;
    CLI::Option* opt_dt = nullptr;
    CLI::Option* opt_t_end = nullptr;
    CLI::Option* opt_burn_in = nullptr;
};

void add_base_options(CLI::App* cmd, BaseOptions& b) {
    b.opt_kappa = cmd->add_option("--kappa", b.kappa, "damping rate (default 1)");
    b.opt_g = cmd->add_option("--g", b.g, "nonlinear coupling rate");
    b.opt_lambda = cmd->add_option("--lambda", b.lambda, "linear coupling rate");
    b.opt_phi = cmd->add_option("--phi", b.phi, "mode-b reservoir phase (rad)");
    b.opt_n = cmd->add_option("--n", b.n, "reservoir thermal photon number");
    b.opt_m = cmd->add_option("--m", b.m, "reservoir two-photon correlation (literal)");
    b.opt_m_mode = cmd->add_option("--m-mode", b.m_mode,
                                   "m slice: thermal | classical-max | quantum-max");
    b.opt_m->excludes(b.opt_m_mode);
    b.opt_seed = cmd->add_option("--seed", b.seed, "RNG seed");
    cmd->add_option("--config", b.config_path,
                    "JSON file with any of: kappa,g,lambda,phi,n,m,m_mode,seed,"
                    "traj,dt,t_end,burn_in (flags win)");
    b.opt_traj = cmd->add_option("--traj", b.sde.n_traj, "Monte Carlo trajectories");
    b.opt_dt = cmd->add_option("--dt", b.sde.dt, "Monte Carlo time step");
    b.opt_t_end = cmd->add_option("--t-end", b.sde.t_end, "Monte Carlo horizon");
    b.opt_burn_in = cmd->add_option("--burn-in", b.sde.burn_in,
                                    "fraction of the horizon discarded");
}

void apply_config_file(BaseOptions& b) {
    if (b.config_path.empty()) return;
    std::ifstream in(b.config_path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + b.config_path);
    nlohmann::json j;
    in >> j;
    auto take = [&](const char* key, auto& slot, const CLI::Option* opt) {
        if (j.contains(key) && (opt == nullptr || opt->count() == 0)) {
            j.at(key).get_to(slot);
        }
    };
    take("kappa", b.kappa, b.opt_kappa);
    take("g", b.g, b.opt_g);
    take("lambda", b.lambda, b.opt_lambda);
    take("phi", b.phi, b.opt_phi);
    take("n", b.n, b.opt_n);
    take("m", b.m, b.opt_m);
    take("m_mode", b.m_mode, b.opt_m_mode);
    take("seed", b.seed, b.opt_seed);
    take("traj", b.sde.n_traj, b.opt_traj);
    take("dt", b.sde.dt, b.opt_dt);
    take("t_end", b.sde.t_end, b.opt_t_end);
    take("burn_in", b.sde.burn_in, b.opt_burn_in);
}

MMode parse_m_mode(const std::string& name) {
    if (name == "thermal") return MMode::Thermal;
    if (name == "classical-max") return MMode::ClassicalMax;
    if (name == "quantum-max") return MMode::QuantumMax;
    throw std::invalid_argument("unknown --m-mode: " + name +
                                " (expected thermal|classical-max|quantum-max)");
}

SystemParams params_from(const BaseOptions& b) {
    return {b.kappa, b.g, b.lambda, b.phi};
}

ReservoirSpec reservoir_from(const BaseOptions& b) {
    if (!b.m_mode.empty()) return make_reservoir(b.n, parse_m_mode(b.m_mode));
    return {b.n, b.m};
}

struct ReportField {
    const char* name;
    double (*get)(const SteadyStateReport&);
    bool is_degree;
};

const ReportField kReportFields[] = {
    {"var_xa", [](const SteadyStateReport& r) { return r.var_xa; }, false},
    {"var_ya", [](const SteadyStateReport& r) { return r.var_ya; }, false},
    {"var_xb", [](const SteadyStateReport& r) { return r.var_xb; }, false},
    {"var_yb", [](const SteadyStateReport& r) { return r.var_yb; }, false},
    {"xy_a", [](const SteadyStateReport& r) { return r.xy_a; }, false},
    {"xy_b", [](const SteadyStateReport& r) { return r.xy_b; }, false},
    {"pop_a", [](const SteadyStateReport& r) { return r.pop_a; }, false},
    {"pop_b", [](const SteadyStateReport& r) { return r.pop_b; }, false},
    {"corr_aa_re", [](const SteadyStateReport& r) { return r.corr_aa.real(); }, false},
    {"corr_aa_im", [](const SteadyStateReport& r) { return r.corr_aa.imag(); }, false},
    {"corr_bb_re", [](const SteadyStateReport& r) { return r.corr_bb.real(); }, false},
    {"corr_bb_im", [](const SteadyStateReport& r) { return r.corr_bb.imag(); }, false},
    {"corr_ab_re", [](const SteadyStateReport& r) { return r.corr_ab.real(); }, false},
    {"corr_ab_im", [](const SteadyStateReport& r) { return r.corr_ab.imag(); }, false},
    {"corr_adagb_re", [](const SteadyStateReport& r) { return r.corr_adag_b.real(); }, false},
    {"corr_adagb_im", [](const SteadyStateReport& r) { return r.corr_adag_b.imag(); }, false},
    {"eta_aa", [](const SteadyStateReport& r) { return r.eta_aa; }, true},
    {"eta_bb", [](const SteadyStateReport& r) { return r.eta_bb; }, true},
    {"gamma_ab", [](const SteadyStateReport& r) { return r.gamma_ab; }, true},
    {"eta_ab", [](const SteadyStateReport& r) { return r.eta_ab; }, true},
};

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Exponential: return "exponential";
        case Regime::Oscillatory: return "oscillatory";
        case Regime::ExceptionalPoint: return "exceptional-point";
    }
    return "?";
}

std::string fmt_root(const std::complex<double>& p) {
    if (p.imag() == 0.0) return fmt12(p.real());
    std::ostringstream os;
    os << fmt12(p.real()) << (p.imag() >= 0 ? "+" : "-") << fmt12(std::abs(p.imag())) << "i";
    return os.str();
}

int cmd_report(const BaseOptions& b, bool verify, bool with_mc, double tol,
               std::ostream& out, std::ostream& err) {
    const SystemParams params = params_from(b);
    const ReservoirSpec res = reservoir_from(b);
    const RegimeInfo info = classify_regime(params);

    out << "parameters: kappa=" << fmt12(params.kappa()) << " g=" << fmt12(params.g())
        << " lambda=" << fmt12(params.lambda()) << " phi=" << fmt12(params.phi())
        << " n=" << fmt12(res.n()) << " m=" << fmt12(res.m()) << "\n";
    out << "regime: " << regime_name(info.regime) << "  roots/kappa: " << fmt_root(info.p1)
        << ", " << fmt_root(info.p2) << "\n";
    switch (info.regime) {
        case Regime::Exponential:
            out << "alpha=" << fmt12(info.alpha) << " psi=" << fmt12(info.psi)
                << " u=" << fmt12(info.u) << "\n";
            break;
        case Regime::Oscillatory:
            out << "beta=" << fmt12(info.beta) << " chi=" << fmt12(info.chi)
                << " w=" << fmt12(info.w) << "\n";
            break;
        case Regime::ExceptionalPoint:
            out << "exceptional point: roots coalesce at -kappa\n";
            break;
    }
    if (!stability(params)) {
        err << "unstable: kappa^2+lambda^2-g^2 <= 0\n";
        return kExitUnstable;
    }
    out << "stable: yes\n";

    const SteadyStateReport ana = steady_state_report(params, res);
    std::optional<SteadyStateReport> lya;
    std::optional<SteadyStateReport> mc;
    std::optional<EnsembleEstimate> est;
    if (verify) {
        lya = moments_from_covariance(
            steady_state_lyapunov(drift_matrix(params), diffusion_matrix(params, res)));
        if (with_mc) {
            SdeConfig cfg = b.sde;
            cfg.seed = b.seed;
            est = run_ensemble(params, res, cfg);
            mc = moments_from_covariance(est->sigma_hat);
        }
    }

    out << "\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %18s", "field", "analytic");
    out << line;
    if (lya) out << "           lyapunov            rel_dev";
    if (mc) out << "        monte_carlo";
    out << "\n";
    double max_rel = 0.0;
    for (const auto& f : kReportFields) {
        if (f.is_degree && !ana.degrees_defined) {
            std::snprintf(line, sizeof(line), "%-14s %18s", f.name, "undefined");
            out << line << "\n";
            continue;
        }
        const double a = f.get(ana);
        std::snprintf(line, sizeof(line), "%-14s %18s", f.name, fmt12(a).c_str());
        out << line;
        if (lya) {
            const double l = f.get(*lya);
            const double scale = std::max({std::abs(a), std::abs(l), 1e-12});
            const double rel = std::abs(a - l) / scale;
            max_rel = std::max(max_rel, rel);
            std::snprintf(line, sizeof(line), " %18s %18s", fmt12(l).c_str(),
                          fmt12(rel).c_str());
            out << line;
        }
        if (mc) {
            const double v = f.get(*mc);
            std::snprintf(line, sizeof(line), " %18s", fmt12(v).c_str());
            out << line;
        }
        out << "\n";
    }
    if (ana.degrees_defined) {
        out << "\nreservoir class: "
            << (res.is_thermal() ? "thermal" : res.is_classical() ? "classical-squeezed"
                                                                  : "quantum-squeezed")
            << "\n";
    }
    if (lya) {
        out << "max relative deviation (analytic vs lyapunov): " << fmt12(max_rel) << "\n";
        if (max_rel > tol) {
            err << "verification failed: max relative deviation " << fmt12(max_rel)
                << " exceeds tol " << fmt12(tol) << "\n";
            return kExitVerification;
        }
    }
    if (est) {
        double worst_se = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                const double se = est->std_error(i, j);
                if (se > 0.0) {
                    const Mat4 exact = covariance_from_report(ana);
                    worst_se = std::max(
                        worst_se, std::abs(est->sigma_hat(i, j) - exact(i, j)) / se);
                }
            }
        }
        out << "monte carlo worst deviation: " << fmt12(worst_se) << " std errors ("
            << est->n_effective << " trajectories)\n";
    }
    return kExitOk;
}

int open_output(const std::string& path, std::ofstream& file, std::ostream*& sink,
                std::ostream& out, std::ostream& err) {
    if (path == "-") {
        sink = &out;
        return kExitOk;
    }
    file.open(path);
    if (!file) {
        err << "cannot open output file: " << path << "\n";
        return kExitIo;
    }
    sink = &file;
    return kExitOk;
}

int cmd_figure(const std::string& id_name, const std::string& out_path,
               std::optional<double> lambda_override, std::ostream& out, std::ostream& err) {
    const auto id = figure_from_name(id_name);
    if (!id) {
        err << "unknown figure id: " << id_name
            << " (expected fig2a|fig2b|fig5|fig6|fig7|fig8|fig9|fig10)\n";
        return kExitUnphysical;
    }
    std::ofstream file;
    std::ostream* sink = nullptr;
    if (const int rc = open_output(out_path, file, sink, out, err); rc != kExitOk) return rc;
    write_figure(*id, *sink, lambda_override);
    sink->flush();
    if (sink == &file && !file) {
        err << "write error: " << out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_verify(const BaseOptions& b, double tol, const std::string& out_path, bool with_mc,
               std::ostream& out, std::ostream& err) {
    const auto grid = default_verification_grid();
    const double abs_tol = tol * 1e-3;  // 1e-12 at the default tol
    const EquivalenceResult result = run_equivalence(grid, tol, abs_tol);
    out << "equivalence: " << result.points_checked << " grid points, "
        << result.fields.size() << " fields, tol rel=" << fmt12(tol)
        << " abs=" << fmt12(abs_tol) << "\n";
    double worst_rel = 0.0;
    std::string worst_field;
    for (const auto& f : result.fields) {
        if (f.rel_dev >= worst_rel) {
            worst_rel = f.rel_dev;
            worst_field = f.field;
        }
    }
    out << "worst relative deviation: " << fmt12(worst_rel) << " (" << worst_field << ")\n";
    out << "physicality: min eig(Sigma + i/2 Omega) = " << fmt12(result.min_symplectic_eig)
        << "\n";

    if (!out_path.empty()) {
        std::ofstream file;
        std::ostream* sink = nullptr;
        if (const int rc = open_output(out_path, file, sink, out, err); rc != kExitOk) {
            return rc;
        }
        *sink << "field,max_abs_dev,max_rel_dev,at_g,at_lambda,at_n,at_m_mode,at_phi\n";
        for (const auto& f : result.fields) {
            *sink << f.field << ',' << fmt12(f.abs_dev) << ',' << fmt12(f.rel_dev) << ','
                  << fmt12(f.worst_point.gbar) << ',' << fmt12(f.worst_point.lbar) << ','
                  << fmt12(f.worst_point.n) << ',' << mmode_name(f.worst_point.mmode) << ','
                  << fmt12(f.worst_point.phi) << '\n';
        }
        sink->flush();
    }

    bool pass = result.pass;
    if (!result.pass) {
        err << "equivalence failure: " << result.first_failure << "\n";
    }
    if (with_mc) {
        SdeConfig cfg = b.sde;
        cfg.seed = b.seed;
        for (const auto& pt : monte_carlo_points()) {
            const McCheckResult mc = run_mc_check(pt, cfg);
            out << "mc g=" << fmt12(pt.gbar) << " lambda=" << fmt12(pt.lbar)
                << " n=" << fmt12(pt.n) << " m-mode=" << mmode_name(pt.mmode)
                << " phi=" << fmt12(pt.phi) << ": worst " << fmt12(mc.worst_sigma_dev)
                << " se, rel " << fmt12(mc.worst_rel_dev) << (mc.pass ? " ok" : " FAIL")
                << "\n";
            if (!mc.pass) {
                err << mc.detail << "\n";
                pass = false;
            }
        }
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitVerification;
}

void write_report_row(std::ostream& os, const SystemParams& params, const ReservoirSpec& res) {
    os << fmt12(params.kappa()) << ',' << fmt12(params.g()) << ',' << fmt12(params.lambda())
       << ',' << fmt12(params.phi()) << ',' << fmt12(res.n()) << ',' << fmt12(res.m());
    if (!stability(params)) {
        os << ",false";
        for (int i = 0; i < 22; ++i) os << ',';
        os << '\n';
        return;
    }
    const SteadyStateReport r = steady_state_report(params, res);
    os << ",true";
    const double plain[] = {r.var_xa, r.var_ya, r.var_xb, r.var_yb, r.xy_a,
                            r.xy_b,  r.pop_a,  r.pop_b};
    for (double v : plain) os << ',' << fmt12(v);
    for (const Complex& c : {r.corr_aa, r.corr_bb, r.corr_ab, r.corr_adag_b}) {
        os << ',' << fmt12(c.real()) << ',' << fmt12(c.imag()) << ',' << fmt12(std::abs(c));
    }
    if (r.degrees_defined) {
        os << ',' << fmt12(r.eta_aa) << ',' << fmt12(r.eta_bb) << ',' << fmt12(r.gamma_ab)
           << ',' << fmt12(r.eta_ab);
    } else {
        os << ",,,,";
    }
    os << '\n';
}

int cmd_sweep(const BaseOptions& b, const std::string& var, double from, double to, int steps,
              const std::string& var2, double from2, double to2, int steps2,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    const char* allowed[] = {"g", "lambda", "phi", "n"};
    auto check_var = [&](const std::string& v) {
        for (const char* a : allowed) {
            if (v == a) return;
        }
        throw std::invalid_argument("unknown sweep variable: " + v);
    };
    check_var(var);
    if (!var2.empty()) check_var(var2);
    if (steps < 1 || (!var2.empty() && steps2 < 1)) {
        throw std::invalid_argument("sweep steps must be >= 1");
    }

    std::ofstream file;
    std::ostream* sink = nullptr;
    if (const int rc = open_output(out_path, file, sink, out, err); rc != kExitOk) return rc;

    *sink << "kappa,g,lambda,phi,n,m,stable,var_xa,var_ya,var_xb,var_yb,xy_a,xy_b,"
             "pop_a,pop_b,corr_aa_re,corr_aa_im,corr_aa_abs,corr_bb_re,corr_bb_im,"
             "corr_bb_abs,corr_ab_re,corr_ab_im,corr_ab_abs,corr_adagb_re,corr_adagb_im,"
             "corr_adagb_abs,eta_aa,eta_bb,gamma_ab,eta_ab\n";

    auto value_at = [](double lo, double hi, int count, int i) {
        return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    };
    const int outer = var2.empty() ? 1 : steps2;
    for (int o = 0; o < outer; ++o) {
        for (int i = 0; i < steps; ++i) {
            BaseOptions point = b;
            auto assign = [&](const std::string& v, double x) {
                if (v == "g") point.g = x;
                else if (v == "lambda") point.lambda = x;
                else if (v == "phi") point.phi = x;
                else point.n = x;
            };
            assign(var, value_at(from, to, steps, i));
            if (!var2.empty()) assign(var2, value_at(from2, to2, steps2, o));
            const SystemParams params = params_from(point);
            ReservoirSpec res{0.0, 0.0};
            try {
                res = reservoir_from(point);
            } catch (const unphysical_reservoir_error&) {
                // Row left unevaluated (flagged) when the swept n makes a
                // literal m unphysical.
                *sink << fmt12(params.kappa()) << ',' << fmt12(params.g()) << ','
                      << fmt12(params.lambda()) << ',' << fmt12(params.phi()) << ','
                      << fmt12(point.n) << ',' << fmt12(point.m) << ",false";
                for (int k = 0; k < 24; ++k) *sink << ',';
                *sink << '\n';
                continue;
            }
            write_report_row(*sink, params, res);
        }
    }
    sink->flush();
    if (sink == &file && !file) {
        err << "write error: " << out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"duomode: steady-state and transient statistics of two bosonic modes\n"
                 "coupled by simultaneous photon-exchange and two-mode-squeezing\n"
                 "interactions, damped into thermal or squeezed reservoirs"};
    app.require_subcommand(1);

    BaseOptions b_report, b_verify, b_sweep;
    bool verify_flag = false, mc_flag = false, verify_mc_flag = false;
    double report_tol = 1e-9, verify_tol = 1e-9;
    std::string fig_id, fig_out, verify_out;
    std::string sweep_var, sweep_var2, sweep_out = "-";
    double sweep_from = 0.0, sweep_to = 0.0, sweep_from2 = 0.0, sweep_to2 = 0.0;
    int sweep_steps = 100, sweep_steps2 = 1;
    std::optional<double> fig_lambda;

    CLI::App* report = app.add_subcommand("report", "steady-state report for one point");
    add_base_options(report, b_report);
    report->add_flag("--verify", verify_flag, "cross-check against the Lyapunov solution");
    report->add_flag("--mc", mc_flag, "also run the Monte Carlo estimate (with --verify)");
    report->add_option("--tol", report_tol, "relative tolerance for --verify");

    CLI::App* figure = app.add_subcommand("figure", "emit the CSV behind a study figure");
    figure->add_option("--id", fig_id, "fig2a|fig2b|fig5|fig6|fig7|fig8|fig9|fig10")
        ->required();
    figure->add_option("--out", fig_out, "output CSV path ('-' for stdout)")->required();
    double fig_lambda_raw = 0.0;
    CLI::Option* fig_lambda_opt =
        figure->add_option("--lambda", fig_lambda_raw, "lambda override (fig7)");

    CLI::App* verify = app.add_subcommand(
        "verify", "analytic vs Lyapunov equivalence over the default grid");
    add_base_options(verify, b_verify);
    verify->add_option("--tol", verify_tol, "relative tolerance (absolute floor 1e-12)");
    verify->add_option("--out", verify_out, "per-field summary CSV path");
    verify->add_flag("--mc", verify_mc_flag, "add the Monte Carlo cross-check");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep a variable, CSV of full reports");
    add_base_options(sweep, b_sweep);
    sweep->add_option("--var", sweep_var, "swept variable: g|lambda|phi|n")->required();
    sweep->add_option("--from", sweep_from, "sweep start")->required();
    sweep->add_option("--to", sweep_to, "sweep end")->required();
    sweep->add_option("--steps", sweep_steps, "number of points (default 100)");
    sweep->add_option("--var2", sweep_var2, "second swept variable (2-D grid)");
    sweep->add_option("--from2", sweep_from2, "second sweep start");
    sweep->add_option("--to2", sweep_to2, "second sweep end");
    sweep->add_option("--steps2", sweep_steps2, "second sweep points");
    sweep->add_option("--out", sweep_out, "output CSV path ('-' for stdout, default)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUnphysical;
    }

    try {
        if (report->parsed()) {
            apply_config_file(b_report);
            return cmd_report(b_report, verify_flag || mc_flag, mc_flag, report_tol, out, err);
        }
        if (figure->parsed()) {
            if (fig_lambda_opt->count() > 0) fig_lambda = fig_lambda_raw;
            return cmd_figure(fig_id, fig_out, fig_lambda, out, err);
        }
        if (verify->parsed()) {
            apply_config_file(b_verify);
            return cmd_verify(b_verify, verify_tol, verify_out, verify_mc_flag, out, err);
        }
        if (sweep->parsed()) {
            apply_config_file(b_sweep);
            return cmd_sweep(b_sweep, sweep_var, sweep_from, sweep_to, sweep_steps, sweep_var2,
                             sweep_from2, sweep_to2, sweep_steps2, sweep_out, out, err);
        }
    } catch (const instability_error& e) {
        err << e.what() << "\n";
        return kExitUnstable;
    } catch (const unphysical_reservoir_error& e) {
        err << e.what() << "\n";
        return kExitUnphysical;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUnphysical;
    } catch (const std::ios_base::failure& e) {
        err << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace duomode::cli
