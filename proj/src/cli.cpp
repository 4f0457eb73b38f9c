#include "dlambda/cli.hpp"

#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlambda/config.hpp"
#include "dlambda/csv.hpp"
#include "dlambda/dynamics.hpp"
#include "dlambda/floquet.hpp"
#include "dlambda/presets.hpp"
#include "dlambda/spectra.hpp"
#include "dlambda/steady.hpp"

namespace dlambda {

namespace {

namespace fs = std::filesystem;
using cd = std::complex<double>;

struct Context {
    RunConfig config;
    fs::path output_dir;
    std::ostream& out;
};

fs::path output_dir(const RunConfig& config)
{
    if (config.has("output_dir"))
        return config.text("output_dir");
    if (const char* env = std::getenv(kOutputDirEnv); env && *env)
        return env;
    return ".";
}

template <typename Writer> fs::path write_file(const Context& ctx, const std::string& name, Writer&& writer)
{
    std::error_code ec;
    fs::create_directories(ctx.output_dir, ec);
    const fs::path path = ctx.output_dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    writer(file);
    file.flush();
    if (!file)
        throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
    return path;
}

std::string header(const Context& ctx, const SystemParamsD& p, std::string_view extra = {})
{
    std::string info = "resolved parameters:\n" + describe_params(p);
    if (!extra.empty())
        info += std::string(extra);
    return reproducibility_header(ctx.config, info);
}

std::vector<std::string> complex_row(std::string name, cd z)
{
    return {std::move(name), format_number(z.real()), format_number(z.imag())};
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t k = 0; k < row.size(); ++k) {
            width.resize(std::max(width.size(), row.size()));
            width[k] = std::max(width[k], row[k].size());
        }
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << row[k];
            if (k + 1 < row.size())
                out << std::string(width[k] - row[k].size() + 2, ' ');
        }
        out << '\n';
    }
}

int cmd_steady(const Context& ctx)
{
    const auto p = validate_params(resolve_params(ctx.config)).params;
    const auto parts = build_liouvillian(p);
    const auto loop = loop_params(p);
    const auto s = solve_steady(parts, loop);
    const DensityMatrixD rho = to_density_matrix(s.r);

    std::vector<std::vector<std::string>> rows{{"component", "re", "im"}};
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            rows.push_back(complex_row("rho" + std::to_string(i) + std::to_string(j), rho(i - 1, j - 1)));
    rows.push_back(complex_row("rho41_hat", probe_frame(s.rho41(), loop, 0.0)));

    const auto path = write_file(ctx, "steady.csv", [&](std::ostream& f) {
        write_rows(f, rows,
                   header(ctx, p, "condition number = " + format_number(s.condition_number) +
                                      "\nresidual = " + format_number(s.residual)));
    });
    print_table(ctx.out, rows);
    ctx.out << "condition number " << format_number(s.condition_number) << ", residual "
            << format_number(s.residual) << "\nwrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_floquet(const Context& ctx)
{
    const auto p = validate_params(resolve_params(ctx.config)).params;
    const auto parts = build_liouvillian(p);
    const auto loop = loop_params(p);
    const auto sol = solve_floquet(parts, loop);
    const double t = ctx.config.real("t", 0.0);
    const auto c = assemble_components(sol, parts, loop, t);

    std::optional<MediumConstants> medium;
    if (ctx.config.boolean("medium", false))
        medium = MediumConstants::sodium_d1(std::abs(p.g41));

    std::vector<std::vector<std::string>> rows{{"component", "re", "im", "phase_multiple", "frequency"}};
    if (medium) {
        rows[0].push_back("re_chi");
        rows[0].push_back("im_chi");
    }
    const auto add = [&](std::string name, cd z, int multiple) {
        auto row = complex_row(std::move(name), z);
        row.push_back(std::to_string(multiple));
        row.push_back(format_number(multiple * loop.delta));
        if (medium) {
            const cd chi = susceptibility(z, medium);
            row.push_back(format_number(chi.real()));
            row.push_back(format_number(chi.imag()));
        }
        rows.push_back(std::move(row));
    };
    add("direct", c.direct, 0);
    add("loop_scatter", c.loop_scatter, 1);
    add("counter", c.counter, 2);
    if (std::abs(loop.delta) <= kResonanceTolerance)
        add("total", c.total(), 0);

    const std::string info = "t = " + format_number(t) + "\ndelta = " + format_number(loop.delta) +
                             "\ncondition numbers = " + format_number(sol.cond0) + ", " + format_number(sol.cond1) +
                             ", " + format_number(sol.condm1);
    const auto path = write_file(ctx, "floquet.csv", [&](std::ostream& f) { write_rows(f, rows, header(ctx, p, info)); });
    print_table(ctx.out, rows);
    ctx.out << "delta = " << format_number(loop.delta) << ", t = " << format_number(t) << "\nwrote "
            << path.string() << '\n';
    return kExitOk;
}

int cmd_dynamics(const Context& ctx)
{
    const auto p = validate_params(resolve_params(ctx.config)).params;
    const auto parts = build_liouvillian(p);
    const auto loop = loop_params(p);
    const double t_end = ctx.config.real("t_end", 100.0);
    const double dt = ctx.config.real("dt", std::min(kDefaultStep, max_step(parts, loop)));
    const double t_a = ctx.config.real("t_a", kDefaultSettleTime);
    const int store_every = ctx.config.integer("store_every", 10);

    const auto traj = integrate(parts, loop, ground_state<double>(), t_end, dt, store_every);
    const auto path = write_file(ctx, "trajectory.csv", [&](std::ostream& f) {
        write_trajectory_csv(f, traj, header(ctx, p, "initial state = |1>\nstep = " + format_number(traj.step)));
    });

    std::vector<std::vector<std::string>> rows{{"quantity", "re", "im"}};
    rows.push_back(complex_row("rho41_hat(t_end)", probe_frame(traj.states.back()(kRho41), loop, t_end)));
    if (std::abs(loop.delta) > kResonanceTolerance) {
        // Needs the full trajectory on the demodulation window.
        const auto fine = integrate(parts, loop, ground_state<double>(), t_end, dt);
        const auto h = demodulate(fine, loop, t_a, t_end);
        const auto sol = solve_floquet(parts, loop);
        rows.push_back(complex_row("harmonic_0", h.zero));
        rows.push_back(complex_row("floquet_r0", sol.r0(kRho41)));
        rows.push_back(complex_row("harmonic_minus", h.minus));
        rows.push_back(complex_row("floquet_gbar_r1", parts.gbar41 * sol.r1(kRho41)));
        rows.push_back(complex_row("harmonic_plus", h.plus));
        rows.push_back(complex_row("floquet_gbar_conj_rm1", std::conj(parts.gbar41) * sol.rm1(kRho41)));
        print_table(ctx.out, rows);
        ctx.out << "demodulated " << h.periods << " periods on [" << format_number(h.t_start) << ", "
                << format_number(h.t_stop) << "]\n";
    } else {
        const auto s = solve_steady(parts, loop);
        print_table(ctx.out, rows);
        ctx.out << "max |R(t_end) - R_steady| = " << format_number((traj.states.back() - s.r).cwiseAbs().maxCoeff())
                << '\n';
    }
    ctx.out << "wrote " << path.string() << '\n';
    return kExitOk;
}

Spectrum run_sweep(const SystemParamsD& p, const SweepSpec& spec)
{
    return sweep(p, spec.axis, linear_grid(spec.grid_min, spec.grid_max, spec.grid_points), spec.mode);
}

std::string sweep_info(const SweepSpec& spec)
{
    return "axis = " + std::string(to_string(spec.axis)) + "\nmode = " + std::string(to_string(spec.mode)) +
           "\ngrid = " + format_number(spec.grid_min) + " .. " + format_number(spec.grid_max) + ", " +
           std::to_string(spec.grid_points) + " points";
}

int cmd_sweep(const Context& ctx)
{
    const auto p = validate_params(resolve_params(ctx.config)).params;
    const auto spec = resolve_sweep(ctx.config);
    const auto s = run_sweep(p, spec);
    const auto path = write_file(ctx, "sweep.csv",
                                 [&](std::ostream& f) { write_spectrum_csv(f, s, header(ctx, p, sweep_info(spec))); });
    ctx.out << "wrote " << path.string() << " (" << s.points.size() << " points)\n";
    return kExitOk;
}

int cmd_group_index(const Context& ctx)
{
    const auto p = validate_params(resolve_params(ctx.config)).params;
    const auto spec = resolve_sweep(ctx.config);
    const auto s = run_sweep(p, spec);
    std::optional<MediumConstants> medium;
    if (ctx.config.boolean("medium", false))
        medium = MediumConstants::sodium_d1(std::abs(p.g41));
    const auto g = group_index(s, spec.at, spec.component, medium, spec.carrier);

    const std::vector<std::vector<std::string>> rows{
        {"quantity", "value"},
        {"component", std::string(to_string(spec.component))},
        {"at", format_number(g.at)},
        {"carrier", format_number(spec.carrier)},
        {"chi_prime", format_number(g.chi_prime)},
        {"chi_double_prime", format_number(g.chi_double_prime)},
        {"dispersion_slope", format_number(g.dispersion_slope)},
        {"n_g", format_number(g.n_g)},
        {"v_g_over_c", format_number(g.v_g_over_c)},
        {"classification", std::string(to_string(g.classification))},
        {"gain_flag", g.gain_flag ? "true" : "false"},
    };
    const std::string info = sweep_info(spec);
    write_file(ctx, "sweep.csv", [&](std::ostream& f) { write_spectrum_csv(f, s, header(ctx, p, info)); });
    const auto path =
        write_file(ctx, "group_index.csv", [&](std::ostream& f) { write_rows(f, rows, header(ctx, p, info)); });
    print_table(ctx.out, rows);
    ctx.out << "wrote " << path.string() << '\n';
    return kExitOk;
}

nlohmann::ordered_json params_json(const SystemParamsD& p)
{
    const auto cx = [](cd z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); };
    return {{"g31", cx(p.g31)},         {"g32", cx(p.g32)},         {"g42", cx(p.g42)},
            {"g41", cx(p.g41)},         {"d31", p.d31},             {"d32", p.d32},
            {"d42", p.d42},             {"d41", p.d41},             {"gamma13", p.gamma13},
            {"gamma14", p.gamma14},     {"gamma23", p.gamma23},     {"gamma24", p.gamma24},
            {"gamma12_deph", p.gamma12_deph}, {"phi0", p.phi0},     {"kr", p.kr}};
}

int cmd_reproduce(const Context& ctx)
{
    const std::string target = ctx.config.text("figure");
    const auto overrides = model_overrides(ctx.config);
    std::string override_list;
    for (const auto& k : overrides)
        override_list += (override_list.empty() ? "" : ", ") + k;

    nlohmann::ordered_json manifest;
    manifest["figure"] = target;
    manifest["config_hash"] = hex(fnv1a(echo_config(ctx.config)));
    manifest["overridden_parameters"] = overrides;
    manifest["subfigures"] = nlohmann::ordered_json::array();

    bool all_passed = true;
    for (const auto& id : expand_figure(target)) {
        const auto& f = figure_preset(id);
        SweepSpec spec;
        spec.axis = f.axis;
        spec.mode = f.mode;
        spec.grid_min = ctx.config.real("grid_min", f.grid_min);
        spec.grid_max = ctx.config.real("grid_max", f.grid_max);
        spec.grid_points = ctx.config.integer("grid_points", f.grid_points);
        if (ctx.config.has("mode"))
            spec.mode = *parse_mode(ctx.config.text("mode"));

        nlohmann::ordered_json sub;
        sub["id"] = f.id;
        sub["title"] = f.title;
        sub["axis"] = to_string(spec.axis);
        sub["component"] = to_string(f.component);
        sub["mode"] = to_string(spec.mode);
        sub["grid"] = {{"min", spec.grid_min}, {"max", spec.grid_max}, {"points", spec.grid_points}};
        sub["curves"] = nlohmann::ordered_json::array();

        std::vector<Spectrum> spectra;
        for (const auto& curve : f.curves) {
            const auto p = validate_params(apply_model_overrides(curve.params, ctx.config)).params;
            spectra.push_back(run_sweep(p, spec));
            const std::string file = curve.id + ".csv";
            const std::string info = "figure " + f.id + ": " + f.title + "\ncurve " + curve.id + ": " + curve.label +
                                     "\nplotted component = " + std::string(to_string(f.component)) + "\n" +
                                     sweep_info(spec);
            write_file(ctx, file, [&](std::ostream& o) { write_spectrum_csv(o, spectra.back(), header(ctx, p, info)); });
            sub["curves"].push_back({{"id", curve.id}, {"label", curve.label}, {"file", file}, {"params", params_json(p)}});
            ctx.out << "wrote " << (ctx.output_dir / file).string() << '\n';
        }

        sub["checks"] = nlohmann::ordered_json::array();
        if (!overrides.empty()) {
            sub["checks"].push_back({{"name", "all"},
                                     {"status", "skipped"},
                                     {"note", "model parameters overridden (" + override_list +
                                                  "); checks apply to the preset parameters only"}});
        } else {
            for (const auto& c : figure_checks(f, spectra)) {
                const std::string status = !c.passed ? "skipped" : (*c.passed ? "passed" : "failed");
                if (c.passed && !*c.passed)
                    all_passed = false;
                sub["checks"].push_back({{"name", c.name},
                                         {"expectation", c.expectation},
                                         {"observed", c.observed},
                                         {"status", status}});
                ctx.out << "  [" << status << "] " << f.id << ' ' << c.name << ": " << c.observed << '\n';
            }
        }
        manifest["subfigures"].push_back(std::move(sub));
    }
    manifest["all_passed"] = all_passed;

    const auto path = write_file(ctx, target + "_manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
    ctx.out << "wrote " << path.string() << '\n';
    return all_passed ? kExitOk : kExitChecksFailed;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::MissingRequired, "cannot read config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Four-level double-Lambda closed-loop simulator"};
    app.fallthrough();
    app.allow_extras();
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "INI configuration file; flags override its values");

    // One option per config key; aliases are accepted but not listed.
    std::deque<std::string> storage;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    for (const auto& k : config_keys()) {
        if (k.name == "command")
            continue;
        storage.emplace_back();
        options.emplace_back(std::string(k.name),
                             app.add_option("--" + std::string(k.name), storage.back(), std::string(k.help))
                                 ->group(std::string(k.section)));
    }
    for (const char* alias : {"delta31", "delta32", "delta42", "delta41", "gamma12"}) {
        storage.emplace_back();
        options.emplace_back(alias, app.add_option(std::string("--") + alias, storage.back())->group(""));
    }

    std::string figure_arg;
    std::vector<CLI::App*> subs;
    subs.push_back(app.add_subcommand("steady", "steady state at multiphoton resonance"));
    subs.push_back(app.add_subcommand("floquet", "first-order Floquet components at one detuning"));
    subs.push_back(app.add_subcommand("dynamics", "RK4 integration from |1> with harmonic demodulation"));
    subs.push_back(app.add_subcommand("sweep", "detuning sweep written as a spectrum CSV"));
    subs.push_back(app.add_subcommand("group-index", "sweep plus group index at one grid point"));
    auto* reproduce = app.add_subcommand("reproduce", "figure preset bundle: CSVs plus a checked manifest");
    reproduce->add_option("figure", figure_arg, "fig3a ... fig8, or fig3 / fig5 / fig6 for all panels");
    subs.push_back(reproduce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        std::vector<std::string> extras = app.remaining();
        for (auto* sub : subs)
            for (const auto& x : sub->remaining())
                extras.push_back(x);
        if (!extras.empty()) {
            std::string list;
            for (const auto& x : extras)
                list += (list.empty() ? "" : " ") + x;
            throw Error(ErrorKind::UnknownKey, "unrecognised arguments: " + list);
        }

        Overrides flags;
        for (auto* sub : subs)
            if (sub->parsed())
                flags.emplace_back("command", sub->get_name());
        if (!figure_arg.empty())
            flags.emplace_back("figure", figure_arg);
        for (const auto& [name, opt] : options)
            if (opt->count() > 0)
                flags.emplace_back(name, opt->as<std::string>());

        const std::string ini = config_path.empty() ? std::string() : read_file(config_path);
        const RunConfig config = parse_config(ini, flags);
        const Context ctx{config, output_dir(config), out};

        const std::string cmd = config.command();
        if (cmd == "steady")
            return cmd_steady(ctx);
        if (cmd == "floquet")
            return cmd_floquet(ctx);
        if (cmd == "dynamics")
            return cmd_dynamics(ctx);
        if (cmd == "sweep")
            return cmd_sweep(ctx);
        if (cmd == "group-index")
            return cmd_group_index(ctx);
        return cmd_reproduce(ctx);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_config_error(e.kind()) ? kExitConfig : kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

} // namespace dlambda
