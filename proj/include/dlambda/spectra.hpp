#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/floquet.hpp"
#include "dlambda/model.hpp"

namespace dlambda {

enum class SweepAxis { raman_delta12, probe_delta41 };
enum class SweepMode { steady_if_resonant, floquet_direct };
enum class Component { direct, loop_scatter, counter, total };
enum class Propagation { subluminal, superluminal_positive, superluminal_negative };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(SweepMode mode);
std::string_view to_string(Component component);
std::string_view to_string(Propagation propagation);
std::optional<SweepAxis> parse_axis(std::string_view text);
std::optional<SweepMode> parse_mode(std::string_view text);
std::optional<Component> parse_component(std::string_view text);

/// omega_p / gamma0 for the sodium D1 line (589.6 nm, gamma0 = 2 pi x 9.76 MHz).
inline constexpr double kSodiumCarrier = 2.99792458e8 / 589.6e-9 / 9.76e6;

/// Response at one grid point, all components in the probe frame at t = 0.
struct SpectrumPoint {
    double axis = 0;
    double delta = 0;
    std::complex<double> direct, loop_scatter, counter;
    std::optional<std::complex<double>> total; // only where |delta| <= 1e-12

    std::optional<std::complex<double>> value(Component component) const;
};

struct Spectrum {
    SweepAxis axis = SweepAxis::probe_delta41;
    SweepMode mode = SweepMode::steady_if_resonant;
    std::vector<SpectrumPoint> points;

    std::vector<double> grid() const;
};

/// n points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

/// Detunings of p moved to grid coordinate x on the given axis.
SystemParamsD at_axis(SystemParamsD p, SweepAxis axis, double x);

/// Floquet solve per grid point (and a steady solve where delta vanishes, in
/// steady_if_resonant mode). Points are solved on worker threads; results and
/// the reported error do not depend on the thread count.
Spectrum sweep(const SystemParamsD& p, SweepAxis axis, const std::vector<double>& grid,
               SweepMode mode = SweepMode::steady_if_resonant, unsigned threads = 0);

struct GroupIndexResult {
    double at = 0; // grid coordinate actually used
    double n_g = 0;
    double v_g_over_c = 0;
    double dispersion_slope = 0; // d chi' / d axis
    double chi_prime = 0;
    double chi_double_prime = 0;
    Propagation classification = Propagation::subluminal;
    bool gain_flag = false;
};

Propagation classify(double n_g);

/// Group index 1 + 2 pi chi' + 2 pi (omega_p / gamma0) d chi'/d Delta41 with a
/// central difference at the grid point nearest to `at`.
GroupIndexResult group_index(const Spectrum& spectrum, double at, Component component,
                             const std::optional<MediumConstants>& medium = std::nullopt,
                             double carrier = kSodiumCarrier);

/// Central-difference slope of Re(component) at grid index k.
double dispersion_slope(const Spectrum& spectrum, std::size_t k, Component component);

/// Index of the grid point nearest to x.
std::size_t nearest_index(const Spectrum& spectrum, double x);

/// Normalized cross-correlation (Pearson) of two equal-length curves.
double normalized_cross_correlation(const std::vector<double>& a, const std::vector<double>& b);

std::vector<double> real_part(const Spectrum& spectrum, Component component);
std::vector<double> imag_part(const Spectrum& spectrum, Component component);

} // namespace dlambda
