#include "dlambda/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlambda/csv.hpp"
#include "dlambda/error.hpp"

namespace dlambda {

namespace {

constexpr double pi = std::numbers::pi;

// 2 gamma_ji = gamma0 on every radiative channel.
SystemParamsD base_rates()
{
    SystemParamsD p;
    p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
    p.g41 = 0.01;
    return p;
}

SystemParamsD resonance(double phi0)
{
    auto p = base_rates();
    p.g31 = p.g32 = p.g42 = 0.6;
    p.phi0 = phi0;
    return p;
}

SystemParamsD loop_time_dependent(bool detuned)
{
    auto p = base_rates();
    if (detuned) {
        p.g31 = p.g32 = 0.1;
        p.d31 = 10.0;
    } else {
        p.g31 = 1.8;
        p.g32 = 0.2;
    }
    p.g42 = 0.5;
    return p;
}

SystemParamsD open_loop(double g31, double g42, double d42)
{
    auto p = base_rates();
    p.g31 = g31;
    p.g32 = 0.0;
    p.g42 = g42;
    p.d42 = d42;
    return p;
}

// Pump strengths for fig7 and fig8, shared so both use 1.5 for the strong curve.
constexpr std::pair<double, std::string_view> pump_values[] = {{0.7, "0.7"}, {0.85, "0.85"}, {1.5, "1.5"}};

FigurePreset raman(std::string id, std::string title, Component component, double phi0, std::string phase)
{
    FigurePreset f;
    f.id = id;
    f.title = std::move(title);
    f.axis = SweepAxis::raman_delta12;
    f.grid_min = -2.0;
    f.grid_max = 2.0;
    f.component = component;
    f.curves = {{id, "phi0 = " + phase, resonance(phi0)}};
    return f;
}

FigurePreset probe(std::string id, std::string title, double lo, double hi, double at)
{
    FigurePreset f;
    f.id = std::move(id);
    f.title = std::move(title);
    f.axis = SweepAxis::probe_delta41;
    f.grid_min = lo;
    f.grid_max = hi;
    f.mode = SweepMode::floquet_direct;
    f.component = Component::direct;
    f.at = at;
    return f;
}

std::vector<FigurePreset> build_presets()
{
    std::vector<FigurePreset> all;
    all.push_back(raman("fig3a", "rho41_hat vs Raman detuning, phi0 = 0", Component::total, 0.0, "0"));
    all.push_back(raman("fig3b", "rho41_hat vs Raman detuning, phi0 = pi", Component::total, pi, "pi"));
    all.push_back(raman("fig3c", "rho41_hat vs Raman detuning, phi0 = pi/2", Component::total, pi / 2, "pi/2"));
    all.push_back(raman("fig4", "direct scattering g41 [R1]_13", Component::direct, 0.0, "0"));
    all.push_back(raman("fig5a", "counter-rotating term, phi0 = 0 (and pi)", Component::counter, 0.0, "0"));
    all.push_back(raman("fig5b", "counter-rotating term, phi0 = pi/2", Component::counter, pi / 2, "pi/2"));

    auto f6a = probe("fig6a", "direct term vs probe detuning, closed loop", -5.0, 5.0, 0.0);
    f6a.curves = {{"fig6a", "g31 = 1.8, g32 = 0.2, g42 = 0.5", loop_time_dependent(false)}};
    all.push_back(f6a);

    auto f6b = probe("fig6b", "direct term vs probe detuning, Delta31 = 10", -5.0, 5.0, 0.0);
    f6b.curves = {{"fig6b", "g31 = g32 = 0.1, g42 = 0.5, Delta31 = 10", loop_time_dependent(true)}};
    all.push_back(f6b);

    auto f7 = probe("fig7", "direct term without the loop, Delta42 = 0", -5.0, 5.0, 0.0);
    for (const auto& [g31, text] : pump_values)
        f7.curves.push_back({"fig7_g31_" + std::string(text), "g31 = " + std::string(text), open_loop(g31, 0.2, 0.0)});
    all.push_back(f7);

    auto f8 = probe("fig8", "direct term without the loop, Delta42 = -5", -10.0, 0.0, -5.0);
    for (const auto& [g31, text] : pump_values)
        f8.curves.push_back({"fig8_g31_" + std::string(text), "g31 = " + std::string(text), open_loop(g31, 0.6, -5.0)});
    all.push_back(f8);
    return all;
}

ManifestCheck check(std::string name, std::string expectation, std::string observed, bool passed)
{
    return {std::move(name), std::move(expectation), std::move(observed), passed, {}};
}

std::string num(double x)
{
    return format_number(x);
}

// Same curve and grid as `s`, different loop phase.
Spectrum companion(const FigurePreset& f, const Spectrum& s, double phi0)
{
    auto p = f.curves.front().params;
    p.phi0 = phi0;
    return sweep(p, s.axis, s.grid(), s.mode);
}

double max_difference(const Spectrum& a, const Spectrum& b, Component c)
{
    double worst = 0;
    for (std::size_t k = 0; k < a.points.size(); ++k)
        worst = std::max(worst, std::abs(*a.points[k].value(c) - *b.points[k].value(c)));
    return worst;
}

double max_magnitude(const Spectrum& a, Component c)
{
    double m = 0;
    for (const auto& pt : a.points)
        m = std::max(m, std::abs(*pt.value(c)));
    return m;
}

// Sign of the dispersion slope and of the imaginary part at x.
void slope_and_absorption(std::vector<ManifestCheck>& out, const Spectrum& s, Component c, double x,
                          int slope_sign, int imag_sign, const std::string& where)
{
    const auto k = nearest_index(s, x);
    const double slope = dispersion_slope(s, k, c);
    const double im = s.points[k].value(c)->imag();
    if (slope_sign)
        out.push_back(check("slope" + where, slope_sign > 0 ? "dRe/daxis > 0" : "dRe/daxis < 0",
                            "dRe/daxis = " + num(slope), slope_sign * slope > 0));
    if (imag_sign)
        out.push_back(check("absorption" + where, imag_sign > 0 ? "Im > 0 (absorption)" : "Im < 0 (gain)",
                            "Im = " + num(im), imag_sign * im > 0));
}

std::string classification_text(const GroupIndexResult& g)
{
    return std::string(to_string(g.classification)) + " (n_g = " + num(g.n_g) + ", Im chi = " +
           num(g.chi_double_prime) + ")";
}

} // namespace

const std::vector<FigurePreset>& figure_presets()
{
    static const std::vector<FigurePreset> all = build_presets();
    return all;
}

bool is_figure_id(std::string_view id)
{
    const auto& all = figure_presets();
    return std::any_of(all.begin(), all.end(), [&](const FigurePreset& f) { return f.id == id; });
}

const FigurePreset& figure_preset(std::string_view id)
{
    for (const auto& f : figure_presets())
        if (f.id == id)
            return f;
    throw Error(ErrorKind::UnknownFigure, "no figure preset named '" + std::string(id) + "'");
}

std::vector<std::string> expand_figure(std::string_view id)
{
    if (is_figure_id(id))
        return {std::string(id)};
    std::vector<std::string> out;
    for (const auto& f : figure_presets())
        if (f.id.size() == id.size() + 1 && f.id.starts_with(id))
            out.push_back(f.id);
    if (out.empty())
        throw Error(ErrorKind::UnknownFigure, "no figure preset named '" + std::string(id) + "'");
    return out;
}

SystemParamsD preset_params(std::string_view id)
{
    return figure_preset(expand_figure(id).front()).curves.front().params;
}

std::vector<ManifestCheck> figure_checks(const FigurePreset& f, const std::vector<Spectrum>& spectra)
{
    if (spectra.size() != f.curves.size())
        throw Error(ErrorKind::PreconditionViolated, "one spectrum per curve expected");
    std::vector<ManifestCheck> out;
    const Spectrum& s = spectra.front();

    if (f.id == "fig3a") {
        slope_and_absorption(out, s, Component::total, 0.0, +1, -1, "_at_resonance");
    } else if (f.id == "fig3b") {
        slope_and_absorption(out, s, Component::total, 0.0, -1, +1, "_at_resonance");
    } else if (f.id == "fig3c") {
        // Shapes swap between phi0 = 0 and pi/2: Re(pi/2) follows -Im(0), Im(pi/2) follows Re(0).
        const Spectrum zero = companion(f, s, 0.0);
        const auto re_c = real_part(s, Component::total), im_c = imag_part(s, Component::total);
        const auto re_0 = real_part(zero, Component::total), im_0 = imag_part(zero, Component::total);
        std::vector<double> minus_im_0(im_0.size());
        std::transform(im_0.begin(), im_0.end(), minus_im_0.begin(), [](double v) { return -v; });
        const double a = normalized_cross_correlation(re_c, minus_im_0);
        const double b = normalized_cross_correlation(im_c, re_0);
        out.push_back(check("re_matches_phi0_zero_imag_shape", "NCC(Re[pi/2], -Im[0]) >= 0.95",
                            "NCC = " + num(a) + ", signed NCC(Re[pi/2], Im[0]) = " +
                                num(normalized_cross_correlation(re_c, im_0)),
                            a >= 0.95));
        out.push_back(check("imag_matches_phi0_zero_re_shape", "NCC(Im[pi/2], Re[0]) >= 0.95", "NCC = " + num(b),
                            b >= 0.95));
    } else if (f.id == "fig4") {
        const double d = max_difference(s, companion(f, s, pi / 2), Component::direct);
        out.push_back(check("phase_independent", "direct term identical at phi0 = 0 and pi/2 (<= 1e-12)",
                            "max |difference| = " + num(d), d <= 1e-12));
    } else if (f.id == "fig5a") {
        const double d = max_difference(s, companion(f, s, pi), Component::counter);
        out.push_back(check("period_pi_in_phi0", "counter term identical at phi0 = 0 and pi (<= 1e-12)",
                            "max |difference| = " + num(d), d <= 1e-12));
    } else if (f.id == "fig5b") {
        const double d = max_difference(s, companion(f, s, 0.0), Component::counter);
        const double m = max_magnitude(s, Component::counter);
        out.push_back(check("depends_on_2phi0", "counter term at phi0 = pi/2 differs from phi0 = 0",
                            "max |difference| = " + num(d) + " vs max |counter| = " + num(m), d > 1e-3 * m));
    } else if (f.id == "fig6a") {
        for (double x : {-2.0, 2.0})
            slope_and_absorption(out, s, Component::direct, x, +1, -1, "_at_" + num(x));
        slope_and_absorption(out, s, Component::direct, 0.0, -1, 0, "_at_0");
    } else if (f.id == "fig6b") {
        const bool never_resonant =
            std::none_of(s.points.begin(), s.points.end(), [](const SpectrumPoint& pt) { return pt.total.has_value(); });
        out.push_back(check("no_multiphoton_resonance", "delta != 0 on the whole window",
                            never_resonant ? "delta != 0 everywhere" : "resonant grid point found", never_resonant));
        const auto g = group_index(s, 0.0, Component::direct);
        out.push_back(check("subluminal_at_0", "subluminal at Delta41 = 0", classification_text(g),
                            g.classification == Propagation::subluminal));
    } else if (f.id == "fig7") {
        const auto first = group_index(spectra.front(), 0.0, Component::direct);
        const auto last = group_index(spectra.back(), 0.0, Component::direct);
        out.push_back(check("subluminal_weak_pump", "subluminal for " + f.curves.front().label,
                            classification_text(first), first.classification == Propagation::subluminal));
        out.push_back(check("superluminal_strong_pump", "superluminal for " + f.curves.back().label,
                            classification_text(last), last.classification != Propagation::subluminal));
        out.push_back(check("slope_sign_flip", "dispersion slope changes sign between first and last curve",
                            num(first.dispersion_slope) + " -> " + num(last.dispersion_slope),
                            first.dispersion_slope * last.dispersion_slope < 0));
        for (const auto* g : {&first, &last}) {
            const bool ok = g->gain_flag || std::abs(g->chi_double_prime) <= 0.02;
            out.push_back(check(g == &first ? "low_absorption_weak_pump" : "low_absorption_strong_pump",
                                "gain or |Im chi| <= 0.02", "Im chi = " + num(g->chi_double_prime), ok));
        }
    } else if (f.id == "fig8") {
        const auto g = group_index(spectra.front(), f.at, Component::direct);
        out.push_back(check("subluminal_with_gain", "subluminal with gain at Delta41 = -5 for " + f.curves.front().label,
                            classification_text(g), g.classification == Propagation::subluminal && g.gain_flag));
    }
    return out;
}

} // namespace dlambda
