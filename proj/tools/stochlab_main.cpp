// Command-line front end: scenario configs, verdict CSVs, convergence sweeps.
#include "stochlab/csv.hpp"
#include "stochlab/expr.hpp"
#include "stochlab/quadrature.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace stochlab;

namespace {

struct SpecOptions {
    std::string preset_name = "euclidean_radial";
    double n = 3.0;
    double alpha = 3.0;
    double beta = 0.0;
    std::string rho_expr;
};

struct Options {
    SpecOptions s1, s2;
    std::string mu_expr;
    std::vector<std::string> mu_list;
    double phi_support = 1.0;
    Budget budget;
    std::string out;
    std::string axis = "h";
    std::string config_path;
    bool plot = false;
};

OperatorSpec build_spec(const SpecOptions& so) {
    std::vector<double> params;
    if (so.preset_name == "euclidean_radial" || so.preset_name == "hyperbolic_radial")
        params = {so.n};
    else if (so.preset_name == "rapid_model")
        params = {so.alpha};
    else if (so.preset_name == "drifted_line")
        params = {so.beta};
    else
        throw ConfigError("unknown preset '" + so.preset_name + "'");
    OperatorSpec spec = preset(so.preset_name, params);
    if (!so.rho_expr.empty()) {
        RealFn rho = parse_expr(so.rho_expr);
        // positivity probe on a few nodes before committing
        for (double r : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0}) {
            double v = rho(spec.coeffs.left == LeftBoundary::EntireLine ? r - 5.0 : r);
            if (!(v > 0.0))
                throw ConfigError("rho expression is not positive on the sampled nodes");
        }
        spec = rescale(spec, rho, so.rho_expr);
    }
    return spec;
}

std::string timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file '" + path + "'");
    return os;
}

void apply_config_file(Options& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot read config file '" + opt.config_path + "'");
    std::string line, section;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("bad section header: " + line);
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value: " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        kv[section.empty() ? key : section + "." + key] = val;
    }
    auto getd = [&](const std::string& k, double& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stod(it->second);
    };
    auto gets = [&](const std::string& k, std::string& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = it->second;
    };
    gets("spec.preset", opt.s1.preset_name);
    getd("spec.n", opt.s1.n);
    getd("spec.alpha", opt.s1.alpha);
    getd("spec.beta", opt.s1.beta);
    gets("spec.rho", opt.s1.rho_expr);
    gets("spec.mu", opt.mu_expr);
    getd("spec.phi_support", opt.phi_support);
    getd("budget.h", opt.budget.h);
    getd("budget.dt", opt.budget.dt);
    getd("budget.tmax", opt.budget.t_max);
    std::string sched;
    gets("budget.rmax_schedule", sched);
    if (!sched.empty()) {
        opt.budget.R_schedule.clear();
        std::stringstream ss(sched);
        std::string tok;
        while (std::getline(ss, tok, ',')) opt.budget.R_schedule.push_back(std::stod(tok));
    }
    gets("outputs.out", opt.out);
}

int exit_code_for(const DiagnosticsReport& rep) {
    if (!rep.consistent) {
        std::cerr << "stochlab: consistency failure in stage diagnose:\n";
        for (const auto& n : rep.notes) std::cerr << "  " << n << "\n";
        return 1;
    }
    bool inconclusive = rep.criticality == Criticality::Inconclusive ||
                        rep.completeness == CompletenessVerdict::Inconclusive ||
                        rep.l1.verdict == L1Verdict::Inconclusive;
    return inconclusive ? 2 : 0;
}

int cmd_diagnose(const Options& opt) {
    OperatorSpec spec = build_spec(opt.s1);
    DiagnosticsReport rep = diagnose(spec, opt.budget);
    std::ostringstream body;
    csv::write_verdict_header(body, "stochlab diagnose, generated " + timestamp());
    csv::write_verdict_row(body, rep);
    csv::write_evidence_comment(body, rep);
    if (opt.out.empty()) std::cout << body.str();
    else open_out(opt.out) << body.str();
    return exit_code_for(rep);
}

int cmd_theorem24(const Options& opt) {
    OperatorSpec spec = build_spec(opt.s1);
    std::vector<std::pair<RealFn, std::string>> mu_set;
    std::vector<std::string> exprs = opt.mu_list;
    if (exprs.empty())
        exprs = {"(1+r^2)^-1.5", "(1+r^2)^-2", "(1+r^2)^-3"};
    for (const auto& e : exprs) mu_set.emplace_back(parse_expr(e), e);

    Theorem24Summary sum = theorem24_suite(spec, mu_set, opt.budget);

    std::ostringstream body;
    body << "# stochlab theorem24, generated " << timestamp() << "\n";
    body << "mu,admissible,claim1_incomplete,claim2_l1_invariant,witness_residual_dev,"
            "oy_min_floor,oy_flagged,skip_reason\n";
    for (const auto& c : sum.cases) {
        body << c.mu_label << ',' << (c.admissible ? "true" : "false") << ','
             << (c.claim1_incomplete ? "true" : "false") << ','
             << (c.claim2_l1_invariant ? "true" : "false") << ','
             << csv::fmt(c.witness_residual_dev) << ',' << csv::fmt(c.oy_min_floor) << ','
             << (c.oy_flagged ? "true" : "false") << ",\"" << c.skip_reason << "\"\n";
    }
    if (opt.out.empty()) std::cout << body.str();
    else open_out(opt.out) << body.str();

    bool any_admissible = false;
    for (const auto& c : sum.cases) any_admissible |= c.admissible;
    if (!any_admissible) {
        std::cerr << "stochlab: theorem24 suite skipped for every mu (precondition unmet)\n";
        return 2;
    }
    return sum.all_passed ? 0 : 1;
}

int cmd_hardy(const Options& opt) {
    OperatorSpec spec = build_spec(opt.s1);
    Grid1D grid = grid_for(spec, opt.budget.R_schedule.back(), opt.budget.h);
    double K = opt.phi_support;
    HardyWeight hw = hardy_weight(spec, grid, bump_density(spec.coeffs.r_min, K), K);
    RhoRecipe rec = rho_from_hardy(hw, grid, K);
    OperatorSpec resc = rescale(spec, rec.rho, rec.rho_label);
    DiagnosticsReport rep = diagnose(resc, opt.budget);

    std::ostringstream body;
    body << "# stochlab hardy, generated " << timestamp() << "\n";
    std::vector<std::vector<double>> cols(4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cols[0].push_back(grid.nodes[i]);
        cols[1].push_back(hw.W[i]);
        cols[2].push_back(hw.W_ff[i]);
        cols[3].push_back(rec.rho_samples[i]);
    }
    csv::write_series(body, "r,W,W_ff,rho", cols);
    body << "# rescaled verdicts\n";
    csv::write_verdict_header(body, "stochlab hardy rescaled spec");
    csv::write_verdict_row(body, rep);
    csv::write_evidence_comment(body, rep);
    if (opt.out.empty()) std::cout << body.str();
    else open_out(opt.out) << body.str();
    return exit_code_for(rep);
}

int cmd_skew(const Options& opt) {
    OperatorSpec a = build_spec(opt.s1);
    OperatorSpec b = build_spec(opt.s2);
    DiagnosticsReport da = diagnose(a, opt.budget);
    DiagnosticsReport db = diagnose(b, opt.budget);
    ProductDiagnostics pd = theorem54_table(da, db, symmetric_compatible(a),
                                            symmetric_compatible(b));
    std::ostringstream body;
    body << "# stochlab skew, generated " << timestamp() << "\n";
    body << "first,second,property,verdict,rule\n";
    csv::write_product_table(body, pd);
    if (opt.out.empty()) std::cout << body.str();
    else open_out(opt.out) << body.str();
    int ca = exit_code_for(da), cb = exit_code_for(db);
    return std::max(ca, cb);
}

int cmd_sweep(const Options& opt) {
    OperatorSpec spec = build_spec(opt.s1);
    std::ostringstream body;
    body << "# stochlab sweep axis=" << opt.axis << ", generated " << timestamp() << "\n";
    body << "axis,value,metric,result\n";
    const Budget& B = opt.budget;
    double o = spec.coeffs.left == LeftBoundary::EntireLine ? 0.0 : spec.coeffs.r_min + 1.0;

    if (opt.axis == "h") {
        auto kern = SymmetricGreenKernel::build(spec);
        if (!kern || !kern->subcritical())
            throw NumericalError("sweep", "h-sweep needs a symmetric subcritical spec");
        for (double h : {B.h, B.h / 2.0, B.h / 4.0}) {
            Grid1D g = grid_for(spec, B.R_schedule.back(), h);
            int yi = g.index_of(o);
            GreenTable gt = green_closed_form(spec, g, yi);
            DiscreteOperator op = assemble(spec, g);
            std::vector<double> res = op.apply(gt.values);
            auto [lo, hi] = probe_window(op);
            double worst = 0.0;
            for (int i = lo; i <= hi; ++i)
                if (std::abs(i - yi) > 2)
                    worst = std::max(worst, std::fabs(res[static_cast<std::size_t>(i)]));
            body << "h," << csv::fmt(h) << ",harmonic_residual_max," << csv::fmt(worst) << "\n";
        }
    } else if (opt.axis == "dt") {
        Grid1D g = grid_for(spec, B.R_schedule.back(), B.h);
        int yi = g.index_of(o + 1.0);
        DiscreteOperator op = assemble(spec, g);
        for (double dt : {B.dt, B.dt / 2.0}) {
            KernelSlice ks = kernel_slice(spec, g, yi, {0.5, 1.0}, dt);
            double d = chapman_kolmogorov_defect(op, ks, 0.5, 0.5);
            body << "dt," << csv::fmt(dt) << ",ck_defect," << csv::fmt(d) << "\n";
        }
    } else if (opt.axis == "R") {
        for (double R : B.R_schedule) {
            Grid1D g = grid_for(spec, R, B.h);
            MassCurve mc = mass_curve(spec, g, {B.mass_t}, B.dt);
            double mmax = 0.0;
            for (int i = mc.probe_lo; i <= mc.probe_hi; ++i)
                mmax = std::max(mmax, mc.values[0][static_cast<std::size_t>(i)]);
            body << "R," << csv::fmt(R) << ",mass_max," << csv::fmt(mmax) << "\n";
        }
    } else if (opt.axis == "T_max") {
        Grid1D g = grid_for(spec, B.R_schedule.back(), B.h);
        int yi = g.index_of(o);
        for (double T : {B.t_max / 4.0, B.t_max / 2.0, B.t_max}) {
            GreenTable gt = green_via_time(spec, g, yi, T, B.dt);
            int probe = g.index_of(o + 1.0);
            body << "T_max," << csv::fmt(T) << ",green_at_probe,"
                 << csv::fmt(gt.values[static_cast<std::size_t>(probe)]) << "\n";
        }
    } else {
        throw ConfigError("sweep axis must be one of h, dt, R, T_max");
    }

    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        open_out(opt.out) << body.str();
        if (opt.plot) {
            std::ofstream gp(opt.out + ".gp");
            gp << "# gnuplot script for " << opt.out << "\n"
               << "set datafile separator ','\n"
               << "set logscale xy\n"
               << "plot '" << opt.out << "' using 2:4 with linespoints title '" << opt.axis
               << " sweep'\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochlab: verdicts for 1-D model diffusions (completeness, criticality, "
                 "L1-Liouville) with rescaling constructions and a Feller oracle"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    Options opt;

    auto add_spec_flags = [&](CLI::App* cmd, SpecOptions& so, const std::string& suffix) {
        cmd->add_option("--preset" + suffix, so.preset_name, "preset name");
        cmd->add_option("--n" + suffix, so.n, "dimension for radial presets");
        cmd->add_option("--alpha" + suffix, so.alpha, "rapid_model exponent");
        cmd->add_option("--beta" + suffix, so.beta, "drifted_line drift");
        cmd->add_option("--rho" + suffix, so.rho_expr, "multiplier expression over r");
    };
    auto add_budget_flags = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help");  // frees -h for the grid spacing
        cmd->add_option("--h", opt.budget.h, "grid spacing");
        cmd->add_option("--dt", opt.budget.dt, "time step");
        cmd->add_option("--tmax", opt.budget.t_max, "time-route horizon");
        cmd->add_option("--rmax-schedule", opt.budget.R_schedule, "exhaustion radii")
            ->delimiter(',');
        cmd->add_option("--out", opt.out, "output CSV path (stdout when absent)");
        cmd->add_option("--config", opt.config_path, "key=value config file with [sections]");
    };

    CLI::App* d = app.add_subcommand("diagnose", "full verdict row for one spec");
    add_spec_flags(d, opt.s1, "");
    add_budget_flags(d);

    CLI::App* t24 = app.add_subcommand("theorem24", "inverse-measure rescaling suite");
    add_spec_flags(t24, opt.s1, "");
    add_budget_flags(t24);
    t24->add_option("--mu", opt.mu_list, "mu density expressions (repeatable)");

    CLI::App* hy = app.add_subcommand("hardy", "optimal-Hardy rescaling route");
    add_spec_flags(hy, opt.s1, "");
    add_budget_flags(hy);
    hy->add_option("--phi-support", opt.phi_support, "right edge of the phi bump support");

    CLI::App* sk = app.add_subcommand("skew", "product verdict table for two specs");
    add_spec_flags(sk, opt.s1, "");
    add_spec_flags(sk, opt.s2, "2");
    add_budget_flags(sk);

    CLI::App* sw = app.add_subcommand("sweep", "convergence sweep along one axis");
    add_spec_flags(sw, opt.s1, "");
    add_budget_flags(sw);
    sw->add_option("--axis", opt.axis, "h | dt | R | T_max");
    sw->add_flag("--plot", opt.plot, "emit a gnuplot script next to the CSV");

    // config file loads first so explicit flags keep precedence
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") {
                opt.config_path = argv[i + 1];
                apply_config_file(opt);
            }
    } catch (const ConfigError& e) {
        std::cerr << "stochlab: config error: " << e.what() << "\n";
        return 64;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    }

    try {
        if (d->parsed()) return cmd_diagnose(opt);
        if (t24->parsed()) return cmd_theorem24(opt);
        if (hy->parsed()) return cmd_hardy(opt);
        if (sk->parsed()) return cmd_skew(opt);
        if (sw->parsed()) return cmd_sweep(opt);
    } catch (const ConfigError& e) {
        std::cerr << "stochlab: config error: " << e.what() << "\n";
        return 64;
    } catch (const NumericalError& e) {
        std::cerr << "stochlab: numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "stochlab: invalid request: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stochlab: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
