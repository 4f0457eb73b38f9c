// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dlambda/dynamics.hpp"
#include "dlambda/floquet.hpp"
#include "dlambda/presets.hpp"
#include "dlambda/spectra.hpp"
#include "dlambda/steady.hpp"
#include "support/random_params.hpp"

using namespace dlambda;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail, double seconds)
{
    std::printf("%s  %-34s %s  [%.2f s]\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

template <typename F> void criterion(const std::string& name, F&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("threw ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(ok, name, detail, s);
}

// Closed form for g31 = g32 = g42 = g (real), equal rates gamma, all detunings zero,
// written out by hand: D = g^4 + 3 gamma^2 g^2.
cd symmetric_closed_form(double g, double gamma, cd g41, double phi0, double kr)
{
    const cd i(0, 1);
    const double d = g * g * g * g + 3 * gamma * gamma * g * g;
    const cd gbar = g41 * std::polar(1.0, kr - phi0);
    return -i * gamma * g * g * g / (2 * d) + i * 3.0 * std::pow(gamma, 3) * std::pow(g, 4) * gbar / (2 * d * d) -
           i * gamma * std::pow(g, 6) * std::conj(gbar) / (2 * d * d);
}

cd steady_rho41(const SystemParamsD& p)
{
    return solve_steady(build_liouvillian(p), loop_params(p)).rho41();
}

const Spectrum& spectrum_of(const std::string& curve_id)
{
    static std::vector<std::pair<std::string, Spectrum>> cache;
    for (const auto& [id, s] : cache)
        if (id == curve_id)
            return s;
    for (const auto& f : figure_presets())
        for (const auto& c : f.curves)
            if (c.id == curve_id) {
                const auto grid = linear_grid(f.grid_min, f.grid_max, f.grid_points);
                cache.emplace_back(curve_id, sweep(c.params, f.axis, grid, f.mode));
                return cache.back().second;
            }
    throw Error(ErrorKind::UnknownFigure, curve_id);
}

double slope_at(const std::string& id, double x, Component c)
{
    const auto& s = spectrum_of(id);
    return dispersion_slope(s, nearest_index(s, x), c);
}

double im_at(const std::string& id, double x, Component c)
{
    const auto& s = spectrum_of(id);
    return s.points[nearest_index(s, x)].value(c).value().imag();
}

const char* name_of(Propagation p)
{
    return to_string(p).data();
}

} // namespace

int main()
{
    criterion("closed-form agreement", [](std::string& detail) {
        double worst = 0;
        for (int k = 0; k < 8; ++k) {
            SystemParamsD p;
            p.g31 = p.g32 = p.g42 = 0.6;
            p.g41 = 0.01;
            p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
            p.phi0 = k * pi / 4;
            worst = std::max(worst, std::abs(steady_rho41(p) - symmetric_closed_form(0.6, 0.5, 0.01, p.phi0, 0)));
        }
        // Residual scaling with a tenfold weaker probe, worst over phi0.
        double ratio = 1e300;
        for (int k = 0; k < 8; ++k) {
            SystemParamsD p;
            p.g31 = p.g32 = p.g42 = 0.6;
            p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
            p.phi0 = k * pi / 4;
            p.g41 = 0.01;
            const double r1 = std::abs(steady_rho41(p) - symmetric_closed_form(0.6, 0.5, 0.01, p.phi0, 0));
            p.g41 = 0.001;
            const double r2 = std::abs(steady_rho41(p) - symmetric_closed_form(0.6, 0.5, 0.001, p.phi0, 0));
            ratio = std::min(ratio, r1 / r2);
        }
        detail = fmt("max |diff| = %.3e (<= 1e-3); residual ratio g41 0.01/0.001 = %.1f (expect ~100)", worst, ratio);
        return worst <= 1e-3 && ratio >= 50 && ratio <= 200;
    });

    criterion("floquet-oracle equivalence", [](std::string& detail) {
        double worst = 0;
        for (double d41 : {-3.0, -1.0, 0.5, 1.0, 3.0}) {
            auto p = preset_params("fig6a");
            p.d41 = d41;
            const auto parts = build_liouvillian(p);
            const auto loop = loop_params(p);
            const auto sol = solve_floquet(parts, loop);
            const auto h = demodulated_harmonics(parts, loop);
            const cd want[3] = {sol.r0(kRho41), parts.gbar41 * sol.r1(kRho41),
                                std::conj(parts.gbar41) * sol.rm1(kRho41)};
            const cd got[3] = {h.zero, h.minus, h.plus};
            for (int k = 0; k < 3; ++k)
                worst = std::max(worst, std::abs(got[k] - want[k]) / std::abs(want[k]));
        }
        detail = fmt("fig6a, d41 in {-3,-1,0.5,1,3}: max relative error %.2e (<= 1e-3)", worst);
        return worst <= 1e-3;
    });

    criterion("loop-scatter delta independence", [](std::string& detail) {
        std::vector<cd> r0;
        for (double delta : {0.0, 1.0, 5.0, 20.0}) {
            auto p = preset_params("fig6a");
            p.d41 = delta; // delta = d32 + d41 - d31 - d42 with the others zero
            const auto parts = build_liouvillian(p);
            const auto loop = loop_params(p);
            if (std::abs(loop.delta - delta) > 1e-15)
                throw Error(ErrorKind::PreconditionViolated, "unexpected multiphoton detuning");
            r0.push_back(solve_floquet(parts, loop).r0(kRho41));
        }
        double spread = 0;
        for (const auto& z : r0)
            spread = std::max(spread, std::abs(z - r0.front()));
        detail = fmt("[R0]13 spread over delta in {0,1,5,20} = %.2e (<= 1e-12)", spread);
        return spread <= 1e-12;
    });

    criterion("phase structure", [](std::string& detail) {
        auto components = [](double phi0) {
            auto p = preset_params("fig6a");
            p.d41 = 1.0;
            p.phi0 = phi0;
            const auto parts = build_liouvillian(p);
            const auto loop = loop_params(p);
            return assemble_components(solve_floquet(parts, loop), parts, loop, 0.0);
        };
        const auto a = components(0), b = components(pi / 2), c = components(pi);
        const double direct = std::max(std::abs(a.direct - b.direct), std::abs(a.direct - c.direct));
        const double counter_pi = std::abs(a.counter - c.counter);
        const double counter_half = std::abs(a.counter - b.counter);
        detail = fmt("direct spread %.1e (<= 1e-12); counter |0 - pi| %.1e (<= 1e-12); |0 - pi/2| %.2e (> 1e-3 relative)", direct,
                     counter_pi, counter_half);
        return direct <= 1e-12 && counter_pi <= 1e-12 && counter_half > 1e-3 * std::abs(a.counter);
    });

    criterion("fig3 qualitative", [](std::string& detail) {
        const auto t = Component::total;
        const double s0 = slope_at("fig3a", 0, t), i0 = im_at("fig3a", 0, t);
        const double s1 = slope_at("fig3b", 0, t), i1 = im_at("fig3b", 0, t);
        const auto re_half = real_part(spectrum_of("fig3c"), t);
        auto im_zero = imag_part(spectrum_of("fig3a"), t);
        const double signed_ncc = normalized_cross_correlation(re_half, im_zero);
        for (auto& v : im_zero)
            v = -v;
        const double ncc = normalized_cross_correlation(re_half, im_zero);
        detail = fmt("phi0=0: slope %+.3f, Im %+.3f; phi0=pi: slope %+.3f, Im %+.3f; "
                     "NCC(Re pi/2, -Im 0) = %.4f (>= 0.95, signed %.4f)",
                     s0, i0, s1, i1, ncc, signed_ncc);
        return s0 > 0 && i0 < 0 && s1 < 0 && i1 > 0 && ncc >= 0.95;
    });

    criterion("fig6a qualitative", [](std::string& detail) {
        const auto d = Component::direct;
        const double sp = slope_at("fig6a", 2, d), sm = slope_at("fig6a", -2, d), s0 = slope_at("fig6a", 0, d);
        const double ip = im_at("fig6a", 2, d), im = im_at("fig6a", -2, d);
        detail = fmt("slope(+-2) = %+.2e, %+.2e; Im(+-2) = %+.2e, %+.2e; slope(0) = %+.2e", sp, sm, ip, im, s0);
        return sp > 0 && sm > 0 && ip < 0 && im < 0 && s0 < 0;
    });

    criterion("fig7 switching", [](std::string& detail) {
        const auto lo = group_index(spectrum_of("fig7_g31_0.7"), 0.0, Component::direct);
        const auto hi = group_index(spectrum_of("fig7_g31_1.5"), 0.0, Component::direct);
        auto lossless = [](const GroupIndexResult& g) { return g.gain_flag || std::abs(g.chi_double_prime) <= 0.02; };
        detail = fmt("g31=0.7: %s (n_g %.3g); g31=1.5: %s (n_g %.3g); chi'' %.2e, %.2e", name_of(lo.classification),
                     lo.n_g, name_of(hi.classification), hi.n_g, lo.chi_double_prime, hi.chi_double_prime);
        return lo.classification == Propagation::subluminal && hi.classification != Propagation::subluminal &&
               lossless(lo) && lossless(hi);
    });

    criterion("fig8 qualitative", [](std::string& detail) {
        const auto g = group_index(spectrum_of("fig8_g31_0.7"), -5.0, Component::direct);
        detail = fmt("d41=-5, g31=0.7: %s (n_g %.3g), chi'' %.2e, gain %s", name_of(g.classification), g.n_g,
                     g.chi_double_prime, g.gain_flag ? "yes" : "no");
        return g.classification == Propagation::subluminal && g.gain_flag;
    });

    criterion("numerical hygiene", [](std::string& detail) {
        std::mt19937_64 rng(2024);
        double worst = 0;
        for (int n = 0; n < 100; ++n) {
            const auto p = testing_support::random_params(rng);
            const auto parts = build_liouvillian(p);
            const auto loop = loop_params(p);
            const double dt = std::min(kDefaultStep, max_step(parts, loop));
            const auto traj = integrate(parts, loop, ground_state<double>(), 10.0, dt, 10);
            for (const auto& s : traj.states) {
                const auto c = check_physical(s);
                worst = std::max({worst, c.hermiticity, c.trace_error});
            }
        }
        const auto p = preset_params("fig3a");
        const auto parts = build_liouvillian(p);
        const auto loop = loop_params(p);
        RVectorD ends[3];
        const double steps[3] = {0.04, 0.02, 0.01};
        for (int k = 0; k < 3; ++k)
            ends[k] = integrate(parts, loop, ground_state<double>(), 10.0, steps[k], 1 << 20).states.back();
        const double ratio =
            (ends[0] - ends[1]).cwiseAbs().maxCoeff() / (ends[1] - ends[2]).cwiseAbs().maxCoeff();
        detail = fmt("100 random runs: hermiticity/trace %.1e (<= 1e-9); step-halving ratio %.2f (16 +- 10%%)", worst,
                     ratio);
        return worst <= 1e-9 && std::abs(ratio - 16) <= 1.6;
    });

    std::printf("%s: %d failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
