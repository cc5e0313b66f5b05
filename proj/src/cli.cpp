#include "e3top/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "e3top/config.hpp"
#include "e3top/diagram.hpp"
#include "e3top/dynamics.hpp"
#include "e3top/fibers.hpp"

namespace e3top {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void print_rank0(std::ostream& out, const Rank0Report& r) {
    out << "P" << (r.sign > 0 ? "+" : "-") << "  S=(" << g17(r.point.S.x) << ", "
        << g17(r.point.S.y) << ", " << g17(r.point.S.z) << ")  R=("
        << g17(r.point.R.x) << ", " << g17(r.point.R.y) << ", "
        << g17(r.point.R.z) << ")\n";
    out << "  q = " << g17(r.q) << "  p = " << g17(r.p) << "  type = "
        << to_string(r.type) << "\n";
    out << "  H11 = " << g17(r.h11) << "  H12 = " << g17(r.h12.real()) << " + "
        << g17(r.h12.imag()) << "i  H22 = " << g17(r.h22) << "\n";
    const auto sp = r.spectrum();
    out << "  spectrum:";
    for (const auto& z : sp)
        out << "  " << g17(z.real()) << (z.imag() >= 0 ? "+" : "")
            << g17(z.imag()) << "i";
    out << "\n";
}

int cmd_rank0(std::ostream& out, const RunConfig& cfg) {
    const SystemSpec sys = cfg.make_system();
    for (int sign : {+1, -1})
        print_rank0(out, rank0_classify(sys, cfg.orbit, sign, cfg.tol));
    return 0;
}

int cmd_rank1(std::ostream& out, const RunConfig& cfg) {
    const SystemSpec sys = cfg.make_system();
    const ThetaDecomposition th =
        theta_decomposition(sys, cfg.orbit, cfg.x_steps, cfg.tol);
    out << "Theta intervals: " << th.intervals.size() << "\n";
    for (const ThetaInterval& iv : th.intervals)
        out << "  " << (iv.closed_lo ? "[" : "(") << g17(iv.lo) << ", "
            << g17(iv.hi) << (iv.closed_hi ? "]" : ")") << "\n";
    out << "isolated points: " << th.isolated.size() << "\n";
    for (double x : th.isolated) out << "  x0 = " << g17(x) << "\n";
    if (th.degenerate_family)
        out << "degenerate family at x = 0 (every k critical)\n";
    out << "critical set samples (x, k, m, lambda, w_xx, type):\n";
    for (const ThetaInterval& iv : th.intervals) {
        for (int i = 1; i <= 15; ++i) {
            const double x = iv.lo + (iv.hi - iv.lo) * i / 16.0;
            const KRoots roots = rank1_solve_k(sys, cfg.orbit, x, cfg.tol);
            if (roots.kind != KRoots::Kind::One &&
                roots.kind != KRoots::Kind::Two)
                continue;
            for (double k : {roots.lo, roots.hi}) {
                const Rank1Point pt = rank1_classify(sys, cfg.orbit, k, x, cfg.tol);
                out << "  " << g17(pt.x) << "  " << g17(pt.k) << "  " << g17(pt.m)
                    << "  " << g17(pt.lambda) << "  " << g17(pt.w_dxx) << "  "
                    << to_string(pt.type) << "\n";
                if (roots.kind == KRoots::Kind::One) break;
            }
        }
    }
    return 0;
}

int cmd_diagram(std::ostream& out, const RunConfig& cfg) {
    const SystemSpec sys = cfg.make_system();
    const BifurcationDiagram d =
        compute_diagram(sys, cfg.orbit, cfg.samples_per_interval, cfg.tol);
    write_file(cfg.out_dir, "diagram.csv", export_csv(d));
    write_file(cfg.out_dir, "diagram.svg", export_svg(d));
    write_file(cfg.out_dir, "diagram.json", export_json(d));
    out << "Z+ = (" << g17(d.z_points[0].h) << ", " << g17(d.z_points[0].k)
        << ") " << to_string(d.z_points[0].type) << "\n";
    out << "Z- = (" << g17(d.z_points[1].h) << ", " << g17(d.z_points[1].k)
        << ") " << to_string(d.z_points[1].type) << "\n";
    out << "curves: " << d.curves.size() << "\n";
    for (const CurveBranch& br : d.curves)
        out << "  " << (br.branch == CurveBranch::Sign::Plus ? "plus " : "minus")
            << " on (" << g17(br.x_lo) << ", " << g17(br.x_hi) << ")  "
            << br.samples.size() << " samples  [" << to_string(br.tag_lo) << " -> "
            << to_string(br.tag_hi) << "]\n";
    out << "isolated points: " << d.isolated_points.size() << "\n";
    for (const IsolatedPoint& p : d.isolated_points)
        out << "  (h, k) = (" << g17(p.h) << ", " << g17(p.k) << ") at x0 = "
            << g17(p.x0) << "\n";
    if (d.special_point)
        out << "special point: (" << g17(d.special_point->h) << ", "
            << g17(d.special_point->k) << ")\n";
    if (d.parabola)
        out << "exceptional parabola: h = k^2/" << g17(2 * d.parabola->beta)
            << " + " << g17(d.parabola->g3_0) << " k + " << g17(d.parabola->c)
            << "\n";
    out << "wrote " << cfg.out_dir << "/diagram.{csv,svg,json}\n";
    return 0;
}

int cmd_fiber(std::ostream& out, const RunConfig& cfg, double h, double k) {
    const SystemSpec sys = cfg.make_system();
    const FiberReport rep =
        fiber_analyze(sys, cfg.orbit, h, k, cfg.fiber_grid, cfg.tol);
    out << "fiber at (h, k) = (" << g17(h) << ", " << g17(k) << ")\n";
    out << "regions:\n";
    for (const FiberRegion& r : rep.regions) {
        out << "  [" << g17(r.lo) << ", " << g17(r.hi) << "]"
            << (r.pole_lo ? " pole-" : "") << (r.pole_hi ? " pole+" : "");
        if (!r.pinches.empty()) {
            out << "  pinches:";
            for (double p : r.pinches) out << " " << g17(p);
        }
        out << "\n";
    }
    out << "components: " << rep.components << "  tori: " << rep.tori << "\n";
    if (rep.tangency_warning)
        out << "warning: degenerate tangency, atom classification withheld\n";
    else if (rep.atom)
        out << "atom: " << rep.atom->name << " (" << rep.atom->circles
            << " critical circle" << (rep.atom->circles == 1 ? "" : "s")
            << ")\n";
    else
        out << "regular fiber\n";
    return 0;
}

int cmd_isoenergy(std::ostream& out, const RunConfig& cfg, double h) {
    const SystemSpec sys = cfg.make_system();
    const IsoenergyReport rep =
        isoenergy_classify(sys, cfg.orbit, h, cfg.fiber_grid);
    out << "isoenergy surface at h = " << g17(h) << "\n";
    for (std::size_t i = 0; i < rep.image_intervals.size(); ++i)
        out << "  x in [" << g17(rep.image_intervals[i].first) << ", "
            << g17(rep.image_intervals[i].second) << "] -> "
            << to_string(rep.pieces[i]) << "\n";
    if (rep.pieces.empty()) out << "  empty\n";
    return 0;
}

int cmd_simulate(std::ostream& out, const RunConfig& cfg,
                 const std::string& from, double dt, int steps) {
    const SystemSpec sys = cfg.make_system();
    std::array<double, 6> v{};
    std::istringstream in(from);
    std::string tok;
    for (int i = 0; i < 6; ++i) {
        if (!std::getline(in, tok, ','))
            throw ConfigError("--from: expected 6 comma-separated numbers");
        try {
            v[i] = std::stod(tok);
        } catch (const std::exception&) {
            throw ConfigError("--from: not a number: '" + tok + "'");
        }
    }
    const Trajectory traj = integrate(sys, from_vec6(v), dt, steps);
    write_file(cfg.out_dir, "trajectory.csv", trajectory_csv(sys, traj));
    const Drifts d = conservation_report(sys, traj);
    out << "steps: " << traj.samples.size() - 1
        << (traj.aborted ? " (aborted: left the domain)" : "") << "\n";
    out << "max drift  H: " << g17(d.h) << "  K: " << g17(d.k)
        << "  F1: " << g17(d.f1) << "  F2: " << g17(d.f2) << "\n";
    out << "wrote " << cfg.out_dir << "/trajectory.csv\n";
    return 0;
}

// ---- verify: oracle-agreement suite -------------------------------------

struct Suite {
    std::ostream& out;
    bool ok = true;
    void check(const std::string& name, bool pass, const std::string& note = "") {
        out << (pass ? "PASS" : "FAIL") << "  " << name;
        if (!pass && !note.empty()) out << "  (" << note << ")";
        out << "\n";
        ok = ok && pass;
    }
};

PhasePoint random_on_chart(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    PhasePoint p;
    do {
        p = {{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    } while (p.R.x * p.R.x + p.R.y * p.R.y < 0.1 || dot(p.R, p.R) < 0.25);
    return p;
}

int cmd_verify(std::ostream& out, const RunConfig& cfg) {
    const SystemSpec sys = cfg.make_system();
    Suite s{out};
    std::mt19937 rng(20240817);

    // conservation structure at random points
    {
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            const PhasePoint p = random_on_chart(rng);
            Vec3 dS, dR;
            grad_h(sys, p, dS, dR);
            const double scale =
                1 + std::sqrt(dot(dS, dS) + dot(dR, dR));
            const Vec6 fk = sgrad_k(p);
            const Vec6 fh = sgrad_h(sys, p);
            const double dhk = dS.x * fk[0] + dS.y * fk[1] + dS.z * fk[2] +
                               dR.x * fk[3] + dR.y * fk[4] + dR.z * fk[5];
            const double df1 = 2 * (p.R.x * fh[3] + p.R.y * fh[4] + p.R.z * fh[5]);
            const double df2 = p.R.x * fh[0] + p.R.y * fh[1] + p.R.z * fh[2] +
                               p.S.x * fh[3] + p.S.y * fh[4] + p.S.z * fh[5];
            worst = std::max({worst, std::fabs(dhk) / scale,
                              std::fabs(df1) / scale, std::fabs(df2) / scale});
        }
        s.check("commutation and Casimir invariance at 100 random points",
                worst <= 1e-9, "worst residual " + g17(worst));
    }

    // rank-0: stationarity and spectrum vs numeric linearization
    {
        double worst = 0, specworst = 0;
        for (int sign : {+1, -1}) {
            const Rank0Report rep = rank0_classify(sys, cfg.orbit, sign, cfg.tol);
            const Vec6 f = sgrad_h(sys, rep.point);
            for (double v : f) worst = std::max(worst, std::fabs(v));
            const LinearizationReport lin = linearize_reduced(
                sys, cfg.orbit, sign * std::sqrt(cfg.orbit.a), 0, rep.point.S.z,
                1, 0);
            double mag = 0;
            for (const auto& z : rep.spectrum()) mag = std::max(mag, std::abs(z));
            specworst = std::max(specworst,
                                 match_spectra(rep.spectrum(), lin.eigenvalues) /
                                     (mag > 0 ? mag : 1));
        }
        s.check("sgrad H vanishes at P+-", worst <= 1e-10, g17(worst));
        s.check("rank-0 spectrum formula vs numeric linearization",
                specworst <= 1e-5, "relative mismatch " + g17(specworst));
    }

    // rank-1: envelope residuals on every traced sample; spectrum spot check
    {
        const auto curves =
            trace_curves(sys, cfg.orbit, cfg.samples_per_interval, cfg.tol);
        double worst = 0;
        std::vector<const CurveSample*> probes;
        for (const CurveBranch& br : curves)
            for (const CurveSample& cs : br.samples) {
                const auto [r1, r2] =
                    envelope_residual(sys, cfg.orbit, cs.h, cs.k, cs.x);
                worst = std::max(
                    {worst, std::fabs(r1), std::fabs(r2) / (1 + cs.k * cs.k)});
                // probe candidates stay clear of the poles so that the
                // finite-difference linearization never leaves the chart
                if (cs.type != Rank1Type::Degenerate && std::fabs(cs.k) < 10 &&
                    cfg.orbit.a - cs.x * cs.x >= 0.2 * cfg.orbit.a)
                    probes.push_back(&cs);
            }
        const CurveSample* probe =
            probes.empty() ? nullptr : probes[probes.size() / 2];
        s.check("envelope residuals <= 1e-9 on all traced samples",
                worst <= 1e-9, "worst " + g17(worst));
        if (probe) {
            const Rank1Point pt =
                rank1_classify(sys, cfg.orbit, probe->k, probe->x, cfg.tol);
            const LinearizationReport lin = linearize_reduced(
                sys, cfg.orbit, pt.x, pt.m, pt.k, 1, -pt.lambda);
            const std::array<std::complex<double>, 4> formula = {
                pt.mu.first, pt.mu.second, 0.0, 0.0};
            const double mag = std::max(1.0, std::abs(pt.mu.first));
            s.check("rank-1 spectrum formula vs numeric linearization",
                    match_spectra(formula, lin.eigenvalues) / mag <= 1e-4,
                    g17(match_spectra(formula, lin.eigenvalues) / mag));
        }
    }

    // numeric oracle integrity
    {
        const PhasePoint p0{{0.3, 0, 0.5}, {0, 0.6, 0.8}};
        const Drifts d =
            conservation_report(sys, integrate(sys, p0, 1e-3, 2000));
        s.check("RK4 conservation drift <= 1e-8 over 2000 steps",
                std::max({d.h, d.k, d.f1, d.f2}) <= 1e-8,
                "worst " + g17(std::max({d.h, d.k, d.f1, d.f2})));

        const Trajectory kt = integrate_field(
            [](const PhasePoint& p) { return sgrad_k(p); }, p0, 2 * M_PI / 4096,
            4096);
        const Vec6 v0 = to_vec6(kt.samples.front().second);
        const Vec6 v1 = to_vec6(kt.samples.back().second);
        double dist = 0;
        for (int i = 0; i < 6; ++i) dist = std::max(dist, std::fabs(v1[i] - v0[i]));
        s.check("sgrad K flow is 2*pi periodic", dist <= 1e-6, g17(dist));
    }

    out << (s.ok ? "verify: all checks passed\n" : "verify: FAILURES\n");
    return s.ok ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{
        "Momentum-map singularities, bifurcation diagrams, atoms, and "
        "isoenergy surfaces for integrable systems on e(3)*"};
    app.require_subcommand(1);
    // free the -h short flag for the --h energy options below
    app.set_help_flag("--help", "print help");

    std::string config_path;
    app.add_option("-c,--config", config_path, "path to config file")
        ->required();

    double opt_h = 0, opt_k = 0, opt_dt = 1e-3;
    int opt_steps = 1000;
    std::string opt_from = "0.3,0,0.5,0,0.6,0.8";

    app.add_subcommand("rank0", "classify the two rank-0 singular points");
    app.add_subcommand("rank1", "Theta decomposition and critical-set table");
    app.add_subcommand("diagram", "trace the bifurcation diagram and export");
    auto* sub_fiber = app.add_subcommand("fiber", "analyze a momentum-map fiber");
    sub_fiber->set_help_flag("--help", "print help");
    sub_fiber->add_option("--h", opt_h, "energy value")->required();
    sub_fiber->add_option("--k", opt_k, "momentum value")->required();
    auto* sub_iso =
        app.add_subcommand("isoenergy", "classify the isoenergy 3-surface");
    sub_iso->set_help_flag("--help", "print help");
    sub_iso->add_option("--h", opt_h, "energy value")->required();
    auto* sub_sim = app.add_subcommand("simulate", "integrate the Euler equations");
    sub_sim->add_option("--from", opt_from, "initial point S1,S2,S3,R1,R2,R3");
    sub_sim->add_option("--dt", opt_dt, "time step");
    sub_sim->add_option("--steps", opt_steps, "number of steps");
    app.add_subcommand("verify", "run the oracle-agreement suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const RunConfig cfg = load_config(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "rank0") return cmd_rank0(out, cfg);
        if (sub == "rank1") return cmd_rank1(out, cfg);
        if (sub == "diagram") return cmd_diagram(out, cfg);
        if (sub == "fiber") return cmd_fiber(out, cfg, opt_h, opt_k);
        if (sub == "isoenergy") return cmd_isoenergy(out, cfg, opt_h);
        if (sub == "simulate")
            return cmd_simulate(out, cfg, opt_from, opt_dt, opt_steps);
        if (sub == "verify") return cmd_verify(out, cfg);
        err << "unknown subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const expr::ParseError& e) {
        err << "expression error at offset " << e.offset() << ": " << e.what()
            << "\n";
        return 1;
    } catch (const expr::DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace e3top
