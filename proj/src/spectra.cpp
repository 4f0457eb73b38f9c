#include "dlambda/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "dlambda/csv.hpp"
#include "dlambda/steady.hpp"

namespace dlambda {

std::string_view to_string(SweepAxis axis)
{
    return axis == SweepAxis::raman_delta12 ? "raman_delta12" : "probe_delta41";
}

std::string_view to_string(SweepMode mode)
{
    return mode == SweepMode::steady_if_resonant ? "steady_if_resonant" : "floquet_direct";
}

std::string_view to_string(Component component)
{
    switch (component) {
    case Component::direct: return "direct";
    case Component::loop_scatter: return "loop_scatter";
    case Component::counter: return "counter";
    case Component::total: return "total";
    }
    return "direct";
}

std::string_view to_string(Propagation propagation)
{
    switch (propagation) {
    case Propagation::subluminal: return "subluminal";
    case Propagation::superluminal_positive: return "superluminal_positive";
    case Propagation::superluminal_negative: return "superluminal_negative";
    }
    return "subluminal";
}

std::optional<SweepAxis> parse_axis(std::string_view text)
{
    if (text == "raman_delta12" || text == "raman")
        return SweepAxis::raman_delta12;
    if (text == "probe_delta41" || text == "probe")
        return SweepAxis::probe_delta41;
    return std::nullopt;
}

std::optional<SweepMode> parse_mode(std::string_view text)
{
    if (text == "steady_if_resonant")
        return SweepMode::steady_if_resonant;
    if (text == "floquet_direct")
        return SweepMode::floquet_direct;
    return std::nullopt;
}

std::optional<Component> parse_component(std::string_view text)
{
    for (auto c : {Component::direct, Component::loop_scatter, Component::counter, Component::total})
        if (text == to_string(c))
            return c;
    if (text == "loop")
        return Component::loop_scatter;
    return std::nullopt;
}

std::optional<std::complex<double>> SpectrumPoint::value(Component component) const
{
    switch (component) {
    case Component::direct: return direct;
    case Component::loop_scatter: return loop_scatter;
    case Component::counter: return counter;
    case Component::total: return total;
    }
    return std::nullopt;
}

std::vector<double> Spectrum::grid() const
{
    std::vector<double> g;
    g.reserve(points.size());
    for (const auto& pt : points)
        g.push_back(pt.axis);
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int n)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo) || n < 2)
        throw Error(ErrorKind::InvalidGrid, "need finite grid_min < grid_max and at least 2 points");
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k)
        g[k] = lo + (hi - lo) * k / (n - 1);
    g.back() = hi;
    return g;
}

SystemParamsD at_axis(SystemParamsD p, SweepAxis axis, double x)
{
    if (axis == SweepAxis::raman_delta12) {
        p.d31 = p.d32 + x;
        p.d41 = p.d42 + x;
    } else {
        p.d41 = x;
    }
    return p;
}

namespace {

SpectrumPoint solve_point(const SystemParamsD& base, SweepAxis axis, SweepMode mode, double x)
{
    const auto p = validate_params(at_axis(base, axis, x)).params;
    const auto parts = build_liouvillian(p);
    const auto loop = loop_params(p);
    const auto sol = solve_floquet(parts, loop);
    const auto c = assemble_components(sol, parts, loop, 0.0);

    SpectrumPoint pt;
    pt.axis = x;
    pt.delta = loop.delta;
    pt.direct = c.direct;
    pt.loop_scatter = c.loop_scatter;
    pt.counter = c.counter;
    if (std::abs(loop.delta) <= kResonanceTolerance) {
        if (mode == SweepMode::steady_if_resonant)
            pt.total = probe_frame(solve_steady(parts, loop).rho41(), loop, 0.0);
        else
            pt.total = c.total();
    }
    return pt;
}

} // namespace

Spectrum sweep(const SystemParamsD& p, SweepAxis axis, const std::vector<double>& grid, SweepMode mode,
               unsigned threads)
{
    if (grid.size() < 2)
        throw Error(ErrorKind::InvalidGrid, "a sweep needs at least 2 grid points");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k]))
            throw Error(ErrorKind::InvalidGrid, "grid value is not finite");
        if (k && !(grid[k] > grid[k - 1]))
            throw Error(ErrorKind::InvalidGrid, "grid must be strictly increasing");
    }
    validate_params(p);

    Spectrum out;
    out.axis = axis;
    out.mode = mode;
    out.points.resize(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, grid.size());

    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            try {
                out.points[k] = solve_point(p, axis, mode, grid[k]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (grid.size() + threads - 1) / threads;
        for (std::size_t begin = chunk; begin < grid.size(); begin += chunk)
            pool.emplace_back(work, begin, std::min(grid.size(), begin + chunk));
        work(0, std::min(grid.size(), chunk));
    }

    // Report the first failing grid point, whatever thread hit it.
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!errors[k])
            continue;
        const std::string where = std::string(to_string(axis)) + " = " + format_number(grid[k]);
        try {
            std::rethrow_exception(errors[k]);
        } catch (const Error& e) {
            throw Error(e.kind(), "at " + where + ": " + e.detail());
        }
    }
    return out;
}

Propagation classify(double n_g)
{
    if (n_g > 1)
        return Propagation::subluminal;
    if (n_g > 0)
        return Propagation::superluminal_positive;
    return Propagation::superluminal_negative;
}

std::size_t nearest_index(const Spectrum& spectrum, double x)
{
    const auto& pts = spectrum.points;
    if (pts.empty())
        throw Error(ErrorKind::InvalidGrid, "empty spectrum");
    const auto it = std::lower_bound(pts.begin(), pts.end(), x,
                                     [](const SpectrumPoint& pt, double v) { return pt.axis < v; });
    std::size_t k = static_cast<std::size_t>(it - pts.begin());
    if (k == pts.size())
        return k - 1;
    if (k > 0 && std::abs(pts[k - 1].axis - x) <= std::abs(pts[k].axis - x))
        --k;
    return k;
}

namespace {

std::complex<double> require(const Spectrum& spectrum, std::size_t k, Component component)
{
    const auto v = spectrum.points[k].value(component);
    if (!v)
        throw Error(ErrorKind::PreconditionViolated,
                    "component total is only defined where delta = 0 (axis = " + format_number(spectrum.points[k].axis) +
                        ")");
    return *v;
}

} // namespace

double dispersion_slope(const Spectrum& spectrum, std::size_t k, Component component)
{
    const auto& pts = spectrum.points;
    if (k == 0 || k + 1 >= pts.size())
        throw Error(ErrorKind::EdgePoint, "central difference needs a neighbour on each side");
    const double hm = pts[k].axis - pts[k - 1].axis;
    const double hp = pts[k + 1].axis - pts[k].axis;
    if (std::abs(hp - hm) > 0.01 * std::max(hp, hm))
        throw Error(ErrorKind::NonUniformGrid, "local spacing varies by more than 1% at axis = " +
                                                   format_number(pts[k].axis));
    return (require(spectrum, k + 1, component).real() - require(spectrum, k - 1, component).real()) / (hp + hm);
}

GroupIndexResult group_index(const Spectrum& spectrum, double at, Component component,
                             const std::optional<MediumConstants>& medium, double carrier)
{
    const auto& pts = spectrum.points;
    if (pts.size() < 3 || !(at > pts.front().axis) || !(at < pts.back().axis))
        throw Error(ErrorKind::EdgePoint, "evaluation point " + format_number(at) + " is not strictly inside the grid");
    const std::size_t k = nearest_index(spectrum, at);

    const double scale = medium ? medium->prefactor() : 1.0;
    const std::complex<double> chi = scale * require(spectrum, k, component);

    GroupIndexResult r;
    r.at = pts[k].axis;
    r.dispersion_slope = scale * dispersion_slope(spectrum, k, component);
    r.chi_prime = chi.real();
    r.chi_double_prime = chi.imag();
    constexpr double two_pi = 2 * std::numbers::pi;
    r.n_g = 1 + two_pi * r.chi_prime + two_pi * carrier * r.dispersion_slope;
    r.v_g_over_c = r.n_g != 0 ? 1 / r.n_g : std::numeric_limits<double>::infinity();
    r.classification = classify(r.n_g);
    r.gain_flag = r.chi_double_prime < 0;
    return r;
}

double normalized_cross_correlation(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw Error(ErrorKind::PreconditionViolated, "curves must have equal length >= 2");
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (saa == 0 || sbb == 0)
        return 0;
    return sab / std::sqrt(saa * sbb);
}

namespace {

std::vector<double> part(const Spectrum& spectrum, Component component, bool imag)
{
    std::vector<double> out;
    out.reserve(spectrum.points.size());
    for (std::size_t k = 0; k < spectrum.points.size(); ++k) {
        const auto v = require(spectrum, k, component);
        out.push_back(imag ? v.imag() : v.real());
    }
    return out;
}

} // namespace

std::vector<double> real_part(const Spectrum& spectrum, Component component)
{
    return part(spectrum, component, false);
}

std::vector<double> imag_part(const Spectrum& spectrum, Component component)
{
    return part(spectrum, component, true);
}

} // namespace dlambda
