#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kpplab/cocycle.hpp"
#include "kpplab/errors.hpp"
#include "kpplab/frontspeed.hpp"
#include "kpplab/io/artifacts.hpp"
#include "kpplab/io/config.hpp"
#include "kpplab/kam/reduce.hpp"
#include "kpplab/kpp_sim.hpp"
#include "kpplab/potentials.hpp"
#include "kpplab/spectrum.hpp"
#include "kpplab/version.hpp"

using kpplab::Potential;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string potential_spec;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 1;
};

// The output directory and seed stay out of the config hash: artifacts from
// the same numerical configuration must be byte-identical wherever written.
kpplab::io::Config load_config(const CommonArgs& args) {
    kpplab::io::Config cfg;
    if (!args.config_path.empty())
        cfg = kpplab::io::Config::from_file(args.config_path);
    if (!args.potential_spec.empty()) cfg.set("potential.spec", args.potential_spec);
    return cfg;
}

Potential make_potential(const kpplab::io::Config& cfg) {
    return kpplab::io::potential_from_config(cfg);
}

kpplab::io::ArtifactMeta meta_of(const kpplab::io::Config& cfg,
                                 std::uint64_t seed) {
    return {cfg.hash(), seed};
}

std::vector<double> energy_grid(double lo, double hi, int count) {
    std::vector<double> g;
    if (count <= 1) {
        g.push_back(lo);
        return g;
    }
    for (int i = 0; i < count; ++i)
        g.push_back(lo + (hi - lo) * i / (count - 1));
    return g;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value with [sections])");
    cmd->add_option("--potential", args.potential_spec,
                    "potential spec: constant:<c0> | periodic:<v0>,<v1>,... | "
                    "amo:<kappa>,<C>[,<alpha>[,<phase>]]");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed recorded in artifacts");
    cmd->add_option("--workers", args.workers, "worker-count hint");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("kpplab ") + kpplab::kVersion +
                 " - lattice KPP fronts in almost periodic media"};
    app.require_subcommand(1);

    CommonArgs args;

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "spectral edge lambda1 by window doubling");
    double spec_tol = 1e-8;
    add_common(c_spec, args);
    c_spec->add_option("--tol", spec_tol, "edge tolerance");

    // lyapunov
    auto* c_lyap = app.add_subcommand("lyapunov", "Lyapunov exponent L(E)");
    double ly_e = std::nan(""), ly_lo = 0.0, ly_hi = 0.0;
    int ly_count = 1;
    std::int64_t ly_iters = 100000;
    int ly_phases = 8;
    add_common(c_lyap, args);
    c_lyap->add_option("--E", ly_e, "single energy");
    c_lyap->add_option("--e-min", ly_lo);
    c_lyap->add_option("--e-max", ly_hi);
    c_lyap->add_option("--e-count", ly_count);
    c_lyap->add_option("--n-iters", ly_iters);
    c_lyap->add_option("--phases", ly_phases);

    // rotation
    auto* c_rot = app.add_subcommand("rotation", "fibered rotation number");
    double rot_e = std::nan(""), rot_lo = 0.0, rot_hi = 0.0;
    int rot_count = 1;
    std::int64_t rot_iters = 100000;
    add_common(c_rot, args);
    c_rot->add_option("--E", rot_e);
    c_rot->add_option("--e-min", rot_lo);
    c_rot->add_option("--e-max", rot_hi);
    c_rot->add_option("--e-count", rot_count);
    c_rot->add_option("--n-iters", rot_iters);

    // ids
    auto* c_ids = app.add_subcommand("ids", "integrated density of states");
    double ids_lo = 0.0, ids_hi = 1.0;
    int ids_count = 21;
    std::int64_t ids_n = 2000;
    add_common(c_ids, args);
    c_ids->add_option("--e-min", ids_lo)->required();
    c_ids->add_option("--e-max", ids_hi)->required();
    c_ids->add_option("--e-count", ids_count);
    c_ids->add_option("--N", ids_n);

    // speed
    auto* c_speed = app.add_subcommand("speed", "minimal front speed w*");
    add_common(c_speed, args);
    std::int64_t sp_iters = 400000;
    int sp_phases = 12;
    c_speed->add_option("--n-iters", sp_iters);
    c_speed->add_option("--phases", sp_phases);

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "Heaviside release and front tracking");
    double sim_t = 200.0, sim_theta = 0.25;
    std::int64_t sim_window = 1200, sim_stride = 100;
    add_common(c_sim, args);
    c_sim->add_option("--T", sim_t);
    c_sim->add_option("--window", sim_window);
    c_sim->add_option("--theta", sim_theta);
    c_sim->add_option("--save-stride", sim_stride);

    // pullback-front
    auto* c_pull = app.add_subcommand("pullback-front", "front built by pullback from the supersolution");
    double pb_e = std::nan(""), pb_tend = 12.0;
    std::int64_t pb_left = -260, pb_right = 80;
    add_common(c_pull, args);
    c_pull->add_option("--E", pb_e, "front energy (default 1.5 lambda1)");
    c_pull->add_option("--t-end", pb_tend);
    c_pull->add_option("--left", pb_left);
    c_pull->add_option("--right", pb_right);

    // critical-front
    auto* c_crit = app.add_subcommand("critical-front", "Heaviside level-crossing times s_k");
    double cf_theta = 0.25;
    int cf_kmax = 20;
    add_common(c_crit, args);
    c_crit->add_option("--theta", cf_theta);
    c_crit->add_option("--k-max", cf_kmax);

    // kam-reduce
    auto* c_kam = app.add_subcommand("kam-reduce", "KAM reducibility at the spectral edge");
    double kam_e = std::nan("");
    std::int64_t kam_window = 0;
    add_common(c_kam, args);
    c_kam->add_option("--E", kam_e, "energy (default: computed lambda1)");
    c_kam->add_option("--solution-window", kam_window,
                      "emit the positive solution u(n) on [-w, w]");

    // amo-verify
    auto* c_amo = app.add_subcommand("amo-verify", "almost Mathieu cross-checks");
    double amo_kappa = 2.0, amo_c = 5.0, amo_alpha = kpplab::io::kGoldenMean;
    add_common(c_amo, args);
    c_amo->add_option("--kappa", amo_kappa);
    c_amo->add_option("--C", amo_c);
    c_amo->add_option("--alpha", amo_alpha);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load_config(args);
        const auto meta = meta_of(cfg, args.seed);
        const std::string out = args.out_dir + "/";

        if (app.got_subcommand(c_spec)) {
            const Potential p = make_potential(cfg);
            const auto edge = kpplab::spectral_edge(p, spec_tol);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < edge.window_sizes.size(); ++i)
                rows.push_back({static_cast<double>(edge.window_sizes[i]),
                                edge.lambda1_per_N[i]});
            kpplab::io::write_csv(out + "edge_trace.csv", meta, {"N", "lambda1_N"}, rows);
            kpplab::io::write_json(out + "spectrum.json", meta,
                                   json{{"lambda1", edge.lambda1},
                                        {"extrapolation_error", edge.extrapolation_error},
                                        {"uh_check", edge.uh_check},
                                        {"rot_check", edge.rot_check}});
            std::printf("spectrum: lambda1 = %.12g (err %.3g)\n", edge.lambda1,
                        edge.extrapolation_error);
        } else if (app.got_subcommand(c_lyap)) {
            const Potential p = make_potential(cfg);
            std::vector<double> grid = std::isnan(ly_e)
                                           ? energy_grid(ly_lo, ly_hi, ly_count)
                                           : std::vector<double>{ly_e};
            std::vector<std::vector<double>> rows;
            for (double e : grid) {
                const auto est = kpplab::lyapunov(e, p, ly_iters, ly_phases);
                rows.push_back({est.E, est.value, est.std_error,
                                static_cast<double>(est.n_iters),
                                static_cast<double>(est.phases_averaged)});
            }
            kpplab::io::write_csv(out + "lyapunov.csv", meta,
                                  {"E", "L", "std_error", "n_iters", "phases"}, rows);
            std::printf("lyapunov: %zu energies, L(%.6g) = %.9g\n", grid.size(),
                        rows.back()[0], rows.back()[1]);
        } else if (app.got_subcommand(c_rot)) {
            const Potential p = make_potential(cfg);
            std::vector<double> grid = std::isnan(rot_e)
                                           ? energy_grid(rot_lo, rot_hi, rot_count)
                                           : std::vector<double>{rot_e};
            std::vector<std::vector<double>> rows;
            for (double e : grid) {
                const auto est = kpplab::rotation_number(e, p, rot_iters);
                rows.push_back({est.E, est.rho, static_cast<double>(est.iters)});
            }
            kpplab::io::write_csv(out + "rotation.csv", meta, {"E", "rho", "n_iters"}, rows);
            std::printf("rotation: %zu energies, rho(%.6g) = %.6g\n", grid.size(),
                        rows.back()[0], rows.back()[1]);
        } else if (app.got_subcommand(c_ids)) {
            const Potential p = make_potential(cfg);
            std::vector<std::vector<double>> rows;
            for (double e : energy_grid(ids_lo, ids_hi, ids_count)) {
                const auto pt = kpplab::ids(p, e, ids_n);
                rows.push_back({pt.E, pt.k, static_cast<double>(pt.window_size)});
            }
            kpplab::io::write_csv(out + "ids.csv", meta, {"E", "k", "N"}, rows);
            std::printf("ids: %zu energies on window N=%lld\n", rows.size(),
                        static_cast<long long>(ids_n));
        } else if (app.got_subcommand(c_speed)) {
            const Potential p = make_potential(cfg);
            kpplab::SpeedOptions opts;
            opts.n_iters = sp_iters;
            opts.n_phases = sp_phases;
            opts.workers = args.workers;
            const auto rep = kpplab::minimal_speed(p, opts);
            std::vector<std::vector<double>> rows;
            for (const auto& pt : rep.curve.points)
                rows.push_back({pt.E, pt.value, pt.E / pt.value});
            kpplab::io::write_csv(out + "speed_curve.csv", meta, {"E", "L", "E_over_L"}, rows);
            kpplab::io::write_json(
                out + "speed.json", meta,
                json{{"lambda1", rep.lambda1},
                     {"E_star", rep.e_star},
                     {"w_star", rep.w_star},
                     {"underline_w", rep.underline_w_infinite
                                         ? json("inf")
                                         : json(rep.underline_w)},
                     {"L_at_edge", rep.l_at_edge},
                     {"flags",
                      {{"underline_w_infinite", rep.underline_w_infinite},
                       {"bracket_warning", rep.bracket_warning}}}});
            std::printf("speed: w* = %.9g at E* = %.9g (underline_w %s)\n",
                        rep.w_star, rep.e_star,
                        rep.underline_w_infinite
                            ? "inf"
                            : kpplab::io::format_double(rep.underline_w).c_str());
        } else if (app.got_subcommand(c_sim)) {
            const Potential p = make_potential(cfg);
            std::vector<std::vector<double>> traj;
            std::int64_t steps = 0;
            const auto diag = kpplab::spreading_speed(
                p, sim_t, sim_window, sim_theta, kpplab::simd::Mode::Auto,
                [&](const kpplab::LatticeField& g) {
                    if (steps++ % sim_stride != 0) return;
                    for (std::int64_t n = g.a; n <= g.b; ++n)
                        traj.push_back({g.t, static_cast<double>(n), g.at(n)});
                });
            kpplab::io::write_csv(out + "trajectory.csv", meta, {"t", "n", "u"}, traj);
            json times = json::array(), nof = json::array();
            for (std::size_t i = 0; i < diag.times.size(); i += 50) {
                times.push_back(diag.times[i]);
                nof.push_back(diag.n_of_t[i]);
            }
            kpplab::io::write_json(out + "front.json", meta,
                                   json{{"theta_level", diag.theta_level},
                                        {"fitted_speed", diag.fitted_speed},
                                        {"fit_residual", diag.fit_residual},
                                        {"times", times},
                                        {"N_of_t", nof}});
            std::printf("simulate: fitted speed %.6g (residual %.3g)\n",
                        diag.fitted_speed, diag.fit_residual);
        } else if (app.got_subcommand(c_pull)) {
            const Potential p = make_potential(cfg);
            const auto edge = kpplab::spectral_edge(p, 1e-7);
            const double e = std::isnan(pb_e) ? 1.5 * edge.lambda1 : pb_e;
            kpplab::SuperSubOptions sopts;
            sopts.lambda1_hint = edge.lambda1;
            const auto pair = kpplab::build_super_sub(e, p, pb_left, pb_right, sopts);
            kpplab::PullbackOptions popts;
            popts.t_end = pb_tend;
            const auto res = kpplab::pullback_front(pair, p, popts);
            std::vector<std::vector<double>> traj;
            for (std::size_t s = 0; s < res.states.size(); ++s)
                for (std::int64_t n = pair.a; n <= pair.b; ++n)
                    traj.push_back({res.times[s], static_cast<double>(n),
                                    res.states[s][static_cast<std::size_t>(n - pair.a)]});
            kpplab::io::write_csv(out + "pullback.csv", meta, {"t", "n", "u"}, traj);
            kpplab::io::write_json(
                out + "pullback.json", meta,
                json{{"E", e},
                     {"epsilon", pair.epsilon},
                     {"kappa", pair.kappa},
                     {"amplitude_A", pair.amplitude_A},
                     {"level_speed", res.level_speed},
                     {"envelope_violation", res.envelope_violation},
                     {"monotone_violation", res.monotone_violation},
                     {"i_used", res.i_used}});
            std::printf("pullback-front: level speed %.6g (E/L target ratio)\n",
                        res.level_speed);
        } else if (app.got_subcommand(c_crit)) {
            const Potential p = make_potential(cfg);
            const auto ct = kpplab::critical_front_times(p, cf_theta, cf_kmax);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < ct.s_k.size(); ++i)
                rows.push_back({static_cast<double>(i + 1), ct.s_k[i], ct.residuals[i]});
            kpplab::io::write_csv(out + "critical_times.csv", meta,
                                  {"k", "s_k", "residual"}, rows);
            std::printf("critical-front: s_1 = %.6g .. s_%d = %.6g\n", ct.s_k.front(),
                        cf_kmax, ct.s_k.back());
        } else if (app.got_subcommand(c_kam)) {
            const Potential p = make_potential(cfg);
            const auto cert = kpplab::kam::reduce_at_edge(p, kam_e);
            json steps = json::array();
            for (const auto& st : cert.steps)
                steps.push_back({{"epsilon_in", st.epsilon_in},
                                 {"epsilon_out", st.epsilon_out},
                                 {"norm_Y", st.norm_y},
                                 {"K_used", st.k_used}});
            std::string cls = cert.parabolic ? "parabolic"
                              : cert.inconclusive ? "inconclusive"
                                                  : "elliptic";
            json rep{{"steps", steps},
                     {"trace", cert.a_tilde.trace()},
                     {"residual", cert.residual},
                     {"distance_to_identity", cert.distance_to_identity},
                     {"rot_drift_max", cert.rot_drift_max},
                     {"classification", cls},
                     {"lambda1", cert.lambda1},
                     {"E", cert.energy}};
            kpplab::io::write_json(out + "kam.json", meta, rep);
            if (kam_window > 0) {
                const auto sol = kpplab::kam::positive_solution_from_conjugacy(
                    cert, p, cert.energy, kam_window);
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < sol.u.size(); ++i)
                    rows.push_back({static_cast<double>(sol.a + static_cast<std::int64_t>(i)),
                                    sol.u[i]});
                kpplab::io::write_csv(out + "kam_solution.csv", meta, {"n", "u"}, rows);
            }
            std::printf("kam-reduce: %s, residual %.3g, |B-id| %.3g\n", cls.c_str(),
                        cert.residual, cert.distance_to_identity);
        } else if (app.got_subcommand(c_amo)) {
            const Potential p = Potential::amo(amo_kappa, amo_c, amo_alpha);
            const auto edge = kpplab::spectral_edge(p, 1e-7);
            const auto le = kpplab::lyapunov(edge.lambda1, p, 1000000, 16);
            const double l_theory = std::fmax(0.0, std::log(std::fabs(amo_kappa)));
            kpplab::SpeedOptions sopts;
            const auto rep = kpplab::minimal_speed(p, sopts);
            json j{{"kappa", amo_kappa},
                   {"C", amo_c},
                   {"alpha", amo_alpha},
                   {"lambda1", edge.lambda1},
                   {"L_at_lambda1", le.value},
                   {"L_theory", l_theory},
                   {"L_error", std::fabs(le.value - l_theory)},
                   {"w_star", rep.w_star},
                   {"underline_w", rep.underline_w_infinite ? json("inf")
                                                            : json(rep.underline_w)}};
            if (l_theory > 0.0)
                j["lambda1_over_ln_kappa"] = edge.lambda1 / l_theory;
            kpplab::io::write_json(out + "amo_verify.json", meta, j);
            std::printf("amo-verify: |L(lambda1) - max(0, ln|kappa|)| = %.4g\n",
                        std::fabs(le.value - l_theory));
        }
        return 0;
    } catch (const kpplab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const kpplab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
