// Command-line front end: evaluate transforms over frequency grids, run the
// walk recurrences, compare the generating-function identities, and run the
// built-in oracle cross-checks. Emits CSV or JSON; identical configuration
// and seed produce byte-identical output.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cfpp/cfpp.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct GridSpec {
    double lo = -5.0;
    double hi = 5.0;
    int count = 101;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw CLI::ValidationError("--grid expects min:max:count");
    try {
        g.lo = std::stod(text.substr(0, p1));
        g.hi = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
        g.count = std::stoi(text.substr(p2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid expects numeric min:max:count");
    }
    if (g.count < 1) throw CLI::ValidationError("--grid count must be >= 1");
    if (g.count > 1 && !(g.hi > g.lo)) throw CLI::ValidationError("--grid needs max > min");
    return g;
}

std::vector<double> grid_points(const GridSpec& g) {
    std::vector<double> pts(static_cast<std::size_t>(g.count));
    if (g.count == 1) {
        pts[0] = g.lo;
        return pts;
    }
    for (int i = 0; i < g.count; ++i)
        pts[static_cast<std::size_t>(i)] =
            g.lo + (g.hi - g.lo) * static_cast<double>(i) / static_cast<double>(g.count - 1);
    return pts;
}

cfpp::DistributionSpec load_distribution(const std::string& arg) {
    // Inline JSON starts with '{'; anything else is a file path.
    std::string text = arg;
    if (arg.empty() || arg[0] != '{') {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open distribution file '" + arg + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return cfpp::parse_distribution_text(text);
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    out << content;
}

struct CommonOpts {
    std::string dist;
    std::string grid = "-5:5:101";
    double cutoff_a = 50.0;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_grid = true) {
    cmd->add_option("--dist", c.dist, "distribution: JSON file path or inline JSON")->required();
    if (with_grid) cmd->add_option("--grid", c.grid, "frequency grid min:max:count");
    cmd->add_option("--cutoff-A", c.cutoff_a, "quadrature cutoff A");
    cmd->add_option("--tol", c.tol, "per-panel quadrature tolerance");
    cmd->add_option("--seed", c.seed, "base RNG seed");
    cmd->add_option("--format", c.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "output path (default stdout)");
}

cfpp::QuadratureConfig quad_from(const CommonOpts& c) {
    cfpp::QuadratureConfig q;
    q.outer_cutoff = c.cutoff_a;
    q.panel_tol = c.tol;
    q.validate();
    return q;
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

struct TransformArgs {
    CommonOpts common;
    std::string kind;
    double a = 0.0, b = 1.0, strike = 0.0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

int run_transform(const TransformArgs& args) {
    const auto spec = load_distribution(args.common.dist);
    const cfpp::CfFunction f{spec};
    const auto quad = quad_from(args.common);
    const auto pts = grid_points(parse_grid(args.common.grid));

    std::vector<cfpp::JResult> rows(pts.size());
    auto eval_one = [&](std::size_t i) {
        const double t = pts[i];
        if (args.kind == "positive-part") {
            rows[i] = cfpp::cf_positive_part(f, t, quad);
        } else if (args.kind == "abs") {
            rows[i] = cfpp::cf_abs(f, t, quad);
        } else if (args.kind == "clamp") {
            rows[i] = cfpp::cf_clamped(f, args.a, args.b, t, quad);
        } else if (args.kind == "joint") {
            rows[i] = cfpp::cf_joint(f, args.alpha, args.beta + t, args.gamma, quad);
        } else if (args.kind == "option") {
            rows[i] = cfpp::option_joint_cf(f, args.strike, args.alpha, args.beta + t,
                                            args.gamma, quad);
        } else if (args.kind == "signed-tail") {
            rows[i] = cfpp::signed_tail(f, t, quad);  // grid scans the anchor a
        } else {  // "j"
            rows[i] = cfpp::j_transform(f, args.a, t, quad);
        }
    };
    cfpp::parallel_for(pts.size(), eval_one);

    bool all_converged = true;
    for (const auto& r : rows) all_converged = all_converged && r.converged;

    std::string content;
    if (args.common.format == "csv") {
        std::ostringstream os;
        os << "t,re,im,err,converged\n";
        for (std::size_t i = 0; i < pts.size(); ++i)
            os << fmt_double(pts[i]) << ',' << fmt_double(rows[i].value.real()) << ','
               << fmt_double(rows[i].value.imag()) << ',' << fmt_double(rows[i].err_estimate)
               << ',' << (rows[i].converged ? 1 : 0) << '\n';
        content = os.str();
    } else {
        json doc;
        doc["command"] = "transform";
        doc["kind"] = args.kind;
        doc["dist"] = cfpp::distribution_to_json(spec);
        doc["params"] = {{"a", args.a},         {"b", args.b},        {"strike", args.strike},
                         {"alpha", args.alpha}, {"gamma", args.gamma}, {"cutoff_A", args.common.cutoff_a},
                         {"tol", args.common.tol}, {"seed", args.common.seed}};
        json jrows = json::array();
        for (std::size_t i = 0; i < pts.size(); ++i)
            jrows.push_back({{"t", pts[i]},
                             {"re", rows[i].value.real()},
                             {"im", rows[i].value.imag()},
                             {"err", rows[i].err_estimate},
                             {"converged", rows[i].converged}});
        doc["rows"] = jrows;
        content = doc.dump(2) + "\n";
    }
    write_output(args.common.out, content);
    if (!all_converged) {
        std::cerr << "warning: some rows did not converge to the panel tolerance\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// walk
// ---------------------------------------------------------------------------

struct WalkArgs {
    CommonOpts common;
    std::string kind;
    int n_max = 8;
    double a = 0.0, b = 1.0, x = 0.0;
    bool with_dp = false;
    std::string mode = "auto";
};

int run_walk(const WalkArgs& args) {
    const auto spec = load_distribution(args.common.dist);
    const cfpp::CfFunction f{spec};
    const auto g = parse_grid(args.common.grid);
    if (std::abs(g.lo + g.hi) > 1e-12 || g.count < 5 || g.count % 2 == 0)
        throw std::invalid_argument("walk grids must be symmetric (min = -max) with odd count >= 5");

    cfpp::WalkRecurrenceConfig w;
    w.grid_half_width = g.hi;
    w.grid_step = (g.hi - g.lo) / static_cast<double>(g.count - 1);
    w.quad = quad_from(args.common);
    w.n_max = args.n_max;
    if (args.mode == "lattice")
        w.mode = cfpp::WalkRecurrenceConfig::Mode::lattice;
    else if (args.mode == "decay")
        w.mode = cfpp::WalkRecurrenceConfig::Mode::decay;

    const auto steps = args.kind == "lindley"
                           ? cfpp::lindley_cf_recurrence(f, w)
                           : cfpp::barrier_cf_recurrence(f, args.a, args.b, args.x, w);

    std::vector<std::vector<std::complex<double>>> dp_values;
    if (args.with_dp) {
        const auto law = cfpp::lattice_law_from_spec(spec);
        for (int n = 0; n <= args.n_max; ++n) {
            const auto exact = args.kind == "lindley"
                                   ? cfpp::dp_lattice_max(law, n).max_marginal()
                                   : cfpp::dp_clamped_walk(law, args.a, args.b, args.x, n);
            std::vector<std::complex<double>> vals(steps[static_cast<std::size_t>(n)].cf.size());
            for (std::size_t k = 0; k < vals.size(); ++k)
                vals[k] = cfpp::law_to_cf(exact, steps[static_cast<std::size_t>(n)].cf.node(k));
            dp_values.push_back(std::move(vals));
        }
    }

    bool all_converged = true;
    std::string content;
    if (args.common.format == "csv") {
        std::ostringstream os;
        os << "n,t,re,im,err,converged";
        if (args.with_dp) os << ",dp_re,dp_im,dp_gap";
        os << '\n';
        for (std::size_t n = 0; n < steps.size(); ++n) {
            const auto& st = steps[n];
            for (std::size_t k = 0; k < st.cf.size(); ++k) {
                all_converged = all_converged && st.node_converged[k];
                os << n << ',' << fmt_double(st.cf.node(k)) << ','
                   << fmt_double(st.cf.samples[k].real()) << ','
                   << fmt_double(st.cf.samples[k].imag()) << ',' << fmt_double(st.node_err[k])
                   << ',' << (st.node_converged[k] ? 1 : 0);
                if (args.with_dp) {
                    const auto dp = dp_values[n][k];
                    os << ',' << fmt_double(dp.real()) << ',' << fmt_double(dp.imag()) << ','
                       << fmt_double(std::abs(dp - st.cf.samples[k]));
                }
                os << '\n';
            }
        }
        content = os.str();
    } else {
        json doc;
        doc["command"] = "walk";
        doc["kind"] = args.kind;
        doc["dist"] = cfpp::distribution_to_json(spec);
        doc["params"] = {{"n_max", args.n_max}, {"a", args.a},   {"b", args.b},
                         {"x", args.x},         {"mode", args.mode}, {"grid", args.common.grid}};
        json jsteps = json::array();
        for (std::size_t n = 0; n < steps.size(); ++n) {
            const auto& st = steps[n];
            json jrows = json::array();
            for (std::size_t k = 0; k < st.cf.size(); ++k) {
                all_converged = all_converged && st.node_converged[k];
                json row = {{"t", st.cf.node(k)},
                            {"re", st.cf.samples[k].real()},
                            {"im", st.cf.samples[k].imag()},
                            {"err", st.node_err[k]},
                            {"converged", static_cast<bool>(st.node_converged[k])}};
                if (args.with_dp) {
                    row["dp_re"] = dp_values[n][k].real();
                    row["dp_im"] = dp_values[n][k].imag();
                    row["dp_gap"] = std::abs(dp_values[n][k] - st.cf.samples[k]);
                }
                jrows.push_back(row);
            }
            jsteps.push_back({{"n", n}, {"rows", jrows}});
        }
        doc["steps"] = jsteps;
        content = doc.dump(2) + "\n";
    }
    write_output(args.common.out, content);
    if (!all_converged) {
        std::cerr << "warning: some nodes did not converge to the panel tolerance\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spitzer
// ---------------------------------------------------------------------------

struct SpitzerArgs {
    CommonOpts common;
    std::vector<double> s{0.0};
    std::vector<double> t{0.0};
    std::vector<double> z_re{0.5};
    std::vector<double> z_im{0.0};
    int order = 40;
    std::string lhs_mode = "auto";  // auto | dp | mc
    std::int64_t mc_paths = 200000;
    double compare_tol = 1e-4;
};

int run_spitzer(const SpitzerArgs& args) {
    if (args.z_re.size() != args.z_im.size())
        throw std::invalid_argument("--z-re and --z-im must have the same length");
    const auto spec = load_distribution(args.common.dist);
    const cfpp::CfFunction f{spec};
    const auto quad = quad_from(args.common);

    bool use_dp = false;
    std::optional<cfpp::LatticeLaw> law;
    if (args.lhs_mode != "mc") {
        try {
            law = cfpp::lattice_law_from_spec(spec);
            use_dp = true;
        } catch (const std::invalid_argument&) {
            if (args.lhs_mode == "dp") throw;
        }
    }

    struct Tuple {
        double s, t;
        std::complex<double> z;
        cfpp::JResult lhs, rhs, classic;
        double lhs_stat_err = 0.0;
        bool pass_lhs = false, pass_classic = false;
    };
    std::vector<Tuple> tuples;
    for (double s : args.s)
        for (double t : args.t)
            for (std::size_t iz = 0; iz < args.z_re.size(); ++iz)
                tuples.push_back({s, t, {args.z_re[iz], args.z_im[iz]}, {}, {}, {}, 0.0, false,
                                  false});

    bool all_pass = true;
    bool all_converged = true;
    for (auto& tp : tuples) {
        cfpp::SpitzerParams p{tp.z, tp.s, tp.t, args.order};
        p.validate();
        if (use_dp) {
            tp.lhs = cfpp::spitzer_lhs(p, cfpp::dp_phi_provider(*law, p.order, p.s, p.t));
        } else {
            const auto phis =
                cfpp::mc_walk_phi(spec, p.order, p.s, p.t, args.mc_paths, args.common.seed);
            double stat = 0.0;
            tp.lhs = cfpp::spitzer_lhs(p, [&phis](int n) { return phis[static_cast<std::size_t>(n)].value; });
            std::complex<double> zn{1.0, 0.0};
            for (int n = 0; n <= p.order; ++n) {
                stat += std::abs(zn) * 4.0 * phis[static_cast<std::size_t>(n)].std_err;
                zn *= p.z;
            }
            tp.lhs_stat_err = stat;
        }
        tp.rhs = cfpp::spitzer_rhs(f, p, quad);
        tp.classic = cfpp::spitzer_classic_rhs(f, p, quad);
        const double budget_lhs = tp.lhs.err_estimate + tp.lhs_stat_err + tp.rhs.err_estimate +
                                  args.compare_tol;
        const double budget_classic =
            tp.classic.err_estimate + tp.rhs.err_estimate + args.compare_tol;
        tp.pass_lhs = std::abs(tp.lhs.value - tp.rhs.value) <= budget_lhs;
        tp.pass_classic = std::abs(tp.classic.value - tp.rhs.value) <= budget_classic;
        all_pass = all_pass && tp.pass_lhs && tp.pass_classic;
        all_converged = all_converged && tp.rhs.converged && tp.classic.converged;
    }

    std::string content;
    if (args.common.format == "csv") {
        std::ostringstream os;
        os << "s,t,z_re,z_im,lhs_re,lhs_im,rhs_re,rhs_im,classic_re,classic_im,"
              "lhs_err,rhs_err,classic_err,gap_lhs_rhs,gap_classic_rhs,pass\n";
        for (const auto& tp : tuples)
            os << fmt_double(tp.s) << ',' << fmt_double(tp.t) << ',' << fmt_double(tp.z.real())
               << ',' << fmt_double(tp.z.imag()) << ',' << fmt_double(tp.lhs.value.real()) << ','
               << fmt_double(tp.lhs.value.imag()) << ',' << fmt_double(tp.rhs.value.real()) << ','
               << fmt_double(tp.rhs.value.imag()) << ',' << fmt_double(tp.classic.value.real())
               << ',' << fmt_double(tp.classic.value.imag()) << ','
               << fmt_double(tp.lhs.err_estimate + tp.lhs_stat_err) << ','
               << fmt_double(tp.rhs.err_estimate) << ',' << fmt_double(tp.classic.err_estimate)
               << ',' << fmt_double(std::abs(tp.lhs.value - tp.rhs.value)) << ','
               << fmt_double(std::abs(tp.classic.value - tp.rhs.value)) << ','
               << ((tp.pass_lhs && tp.pass_classic) ? 1 : 0) << '\n';
        content = os.str();
    } else {
        json doc;
        doc["command"] = "spitzer";
        doc["dist"] = cfpp::distribution_to_json(spec);
        doc["params"] = {{"order", args.order},
                         {"lhs", use_dp ? "dp" : "mc"},
                         {"mc_paths", args.mc_paths},
                         {"compare_tol", args.compare_tol},
                         {"cutoff_A", args.common.cutoff_a},
                         {"tol", args.common.tol},
                         {"seed", args.common.seed}};
        json jt = json::array();
        for (const auto& tp : tuples)
            jt.push_back({{"s", tp.s},
                          {"t", tp.t},
                          {"z_re", tp.z.real()},
                          {"z_im", tp.z.imag()},
                          {"lhs_re", tp.lhs.value.real()},
                          {"lhs_im", tp.lhs.value.imag()},
                          {"rhs_re", tp.rhs.value.real()},
                          {"rhs_im", tp.rhs.value.imag()},
                          {"classic_re", tp.classic.value.real()},
                          {"classic_im", tp.classic.value.imag()},
                          {"lhs_err", tp.lhs.err_estimate + tp.lhs_stat_err},
                          {"rhs_err", tp.rhs.err_estimate},
                          {"classic_err", tp.classic.err_estimate},
                          {"gap_lhs_rhs", std::abs(tp.lhs.value - tp.rhs.value)},
                          {"gap_classic_rhs", std::abs(tp.classic.value - tp.rhs.value)},
                          {"compare_tol", args.compare_tol},
                          {"pass", tp.pass_lhs && tp.pass_classic}});
        doc["tuples"] = jt;
        doc["verdict"] = all_pass ? "pass" : "fail";
        content = doc.dump(2) + "\n";
    }
    write_output(args.common.out, content);
    if (!all_pass) return kExitValidation;
    if (!all_converged) {
        std::cerr << "warning: some quadratures did not converge to the panel tolerance\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(std::uint64_t seed) {
    using namespace cfpp;
    int failures = 0;
    auto report = [&failures](const char* name, bool ok, double detail) {
        std::printf("%-42s %s (%.3e)\n", name, ok ? "PASS" : "FAIL", detail);
        if (!ok) ++failures;
    };

    {  // point-mass exactness
        double worst = 0.0;
        for (double x : {-2.0, 0.5, 3.0})
            for (double a : {-1.0, 0.0, 2.0})
                for (double t : {-3.0, 0.0, 1.0}) {
                    const auto r = j_transform(CfFunction{DistributionSpec(PointMass{x})}, a, t);
                    const auto exact = 0.5 * unit_phase(t * x) * sign(x - a);
                    worst = std::max(worst,
                                     std::abs(r.value - exact) - std::max(1e-6, r.err_estimate));
                }
        report("point-mass sign kernel", worst <= 0.0, worst);
    }
    {  // parity
        double worst = 0.0;
        for (auto spec : {DistributionSpec(Normal{0.3, 1.2}), DistributionSpec(TwoPoint{-1, 0.5, 1}),
                          DistributionSpec(Exponential{0.7})}) {
            CfFunction f{spec};
            CfFunction fr = reflect_cf(f);
            for (double a : {-1.0, 0.5})
                for (double t : {-2.0, 1.0}) {
                    const auto lhs = j_transform(f, a, -t);
                    const auto rhs = j_transform(fr, -a, t);
                    worst = std::max(worst, std::abs(lhs.value + rhs.value) -
                                                (lhs.err_estimate + rhs.err_estimate));
                }
        }
        report("reflection parity", worst <= 0.0, worst);
    }
    {  // transform modulus bound
        double worst = 0.0;
        for (auto spec : {DistributionSpec(Cauchy{0.0, 1.0}), DistributionSpec(Uniform{-1, 2}),
                          DistributionSpec(Lattice{0.5, {-2, 0, 3}, {0.3, 0.5, 0.2}})}) {
            CfFunction f{spec};
            for (double a : {-2.0, 0.0, 1.5})
                for (double t : {-5.0, -1.0, 2.0}) {
                    const auto r = j_transform(f, a, t);
                    worst = std::max(worst, std::abs(r.value) - (0.5 + r.err_estimate + 1e-9));
                }
        }
        report("transform modulus bound", worst <= 0.0, worst);
    }
    {  // nonnegative fixed point
        CfFunction f{DistributionSpec(Exponential{1.0})};
        double worst = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double t = -10.0 + i;
            const auto r = cf_positive_part(f, t);
            const auto exact = 1.0 / std::complex<double>(1.0, -t);
            worst = std::max(worst, std::abs(r.value - exact) - (1e-6 + r.err_estimate));
        }
        report("nonnegative positive-part fixed point", worst <= 0.0, worst);
    }
    {  // psi_k against path enumeration
        CfFunction f{DistributionSpec(TwoPoint{-1.0, 0.5, 1.0})};
        std::complex<double> exact{0.0, 0.0};
        for (int mask = 0; mask < 16; ++mask) {
            double s = 0.0;
            for (int b = 0; b < 4; ++b) s += (mask >> b & 1) ? 1.0 : -1.0;
            exact += unit_phase(0.7 * std::max(0.0, s)) / 16.0;
        }
        const auto got = psi_k(f, 4, 0.7);
        const double gap = std::abs(got.value - exact);
        report("psi_k vs path enumeration", gap <= 1e-6 + got.err_estimate, gap);
    }
    {  // generating-function round trip
        DistributionSpec tp(TwoPoint{-1.0, 0.5, 1.0});
        CfFunction f{tp};
        SpitzerParams p{{0.5, 0.0}, 0.7, 0.4, 40};
        const auto lhs = spitzer_lhs(p, dp_phi_provider(lattice_law_from_spec(tp), p.order, p.s, p.t));
        const auto rhs = spitzer_rhs(f, p);
        const double gap = std::abs(lhs.value - rhs.value);
        report("generating-function round trip", gap <= lhs.err_estimate + rhs.err_estimate + 1e-4,
               gap);
    }
    {  // Monte Carlo concordance
        DistributionSpec nm(Normal{0.0, 1.0});
        const auto mc = mc_functional_cf(nm, McFunctional::positive_part(), 1.0, 1'000'000, seed);
        const auto tr = cf_positive_part(CfFunction{nm}, 1.0);
        const double gap = std::abs(mc.value - tr.value);
        report("Monte Carlo concordance", gap <= 4.0 * mc.std_err + tr.err_estimate, gap);
    }
    {  // exact walk DP
        const auto law = lattice_law_from_spec(DistributionSpec(TwoPoint{-1.0, 0.5, 1.0}));
        const auto m2 = dp_lattice_max(law, 2).max_marginal();
        const bool ok = m2.probs.size() == 3 && std::abs(m2.probs[0] - 0.5) < 1e-12 &&
                        std::abs(m2.probs[1] - 0.25) < 1e-12 &&
                        std::abs(m2.probs[2] - 0.25) < 1e-12;
        report("walk maximum DP", ok, ok ? 0.0 : 1.0);
    }

    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"characteristic functions of transformed random variables"};
    app.require_subcommand(1);
    // Options may come from an INI/TOML file ([subcommand] sections);
    // anything given on the command line overrides the file.
    app.set_config("--config", "", "read options from a config file");

    TransformArgs targs;
    auto* t_cmd = app.add_subcommand("transform", "evaluate a transform over a frequency grid")->configurable();
    t_cmd->add_option("kind", targs.kind, "positive-part|abs|clamp|joint|option|signed-tail|j")
        ->required()
        ->check(CLI::IsMember(
            {"positive-part", "abs", "clamp", "joint", "option", "signed-tail", "j"}));
    add_common(t_cmd, targs.common);
    t_cmd->add_option("--a", targs.a, "lower barrier / sign anchor");
    t_cmd->add_option("--b", targs.b, "upper barrier");
    t_cmd->add_option("--strike", targs.strike, "option strike K");
    t_cmd->add_option("--alpha", targs.alpha, "joint c.f. alpha (held fixed)");
    t_cmd->add_option("--beta", targs.beta, "joint c.f. beta offset (grid value adds to it)");
    t_cmd->add_option("--gamma", targs.gamma, "joint c.f. gamma (held fixed)");

    WalkArgs wargs;
    auto* w_cmd = app.add_subcommand("walk", "run a walk recurrence on a grid")->configurable();
    w_cmd->add_option("kind", wargs.kind, "lindley|barrier")
        ->required()
        ->check(CLI::IsMember({"lindley", "barrier"}));
    add_common(w_cmd, wargs.common);
    wargs.common.grid = "-3.14159265358979312:3.14159265358979312:129";
    w_cmd->add_option("--n", wargs.n_max, "number of recurrence steps");
    w_cmd->add_option("--a", wargs.a, "lower barrier");
    w_cmd->add_option("--b", wargs.b, "upper barrier");
    w_cmd->add_option("--x", wargs.x, "barrier walk start point");
    w_cmd->add_flag("--dp", wargs.with_dp, "append exact DP comparison columns (lattice only)");
    w_cmd->add_option("--mode", wargs.mode, "auto|lattice|decay")
        ->check(CLI::IsMember({"auto", "lattice", "decay"}));

    SpitzerArgs sargs;
    auto* s_cmd = app.add_subcommand("spitzer", "compare the generating-function identities")->configurable();
    add_common(s_cmd, sargs.common, /*with_grid=*/false);
    s_cmd->add_option("--s", sargs.s, "s values")->delimiter(',');
    s_cmd->add_option("--t", sargs.t, "t values")->delimiter(',');
    s_cmd->add_option("--z-re", sargs.z_re, "Re z values (zipped with --z-im)")->delimiter(',');
    s_cmd->add_option("--z-im", sargs.z_im, "Im z values")->delimiter(',');
    s_cmd->add_option("--N", sargs.order, "series truncation order");
    s_cmd->add_option("--lhs", sargs.lhs_mode, "series side oracle: auto|dp|mc")
        ->check(CLI::IsMember({"auto", "dp", "mc"}));
    s_cmd->add_option("--mc-paths", sargs.mc_paths, "paths for the Monte Carlo series side");
    s_cmd->add_option("--compare-tol", sargs.compare_tol, "extra tolerance in the pass budget");

    std::uint64_t validate_seed = 1;
    auto* v_cmd = app.add_subcommand("validate", "run the oracle cross-check battery")->configurable();
    v_cmd->add_option("--seed", validate_seed, "base RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*t_cmd) return run_transform(targs);
        if (*w_cmd) return run_walk(wargs);
        if (*s_cmd) return run_spitzer(sargs);
        if (*v_cmd) return run_validate(validate_seed);
    } catch (const cfpp::GridDomainError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const cfpp::StateCapError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
