#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "dlambda/error.hpp"
#include "dlambda/linear_solve.hpp"
#include "dlambda/model.hpp"

namespace dlambda {

/// First-order Floquet amplitudes of R(t) = r0 + gbar41 e^{-i delta t} r1 + conj(gbar41) e^{i delta t} rm1.
/// r1 and rm1 are per unit gbar41.
template <typename Real> struct FloquetSolution {
    RVector<Real> r0, r1, rm1;
    Real cond0{}, cond1{}, condm1{};

    /// The truncated ansatz at time t.
    RVector<Real> at(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop, Real t) const
    {
        const Complex<Real> plus = parts.gbar41 * std::polar(Real(1), -loop.delta * t);
        return r0 + plus * r1 + std::conj(plus) * rm1;
    }
};

template <typename Real>
FloquetSolution<Real> solve_floquet(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop)
{
    const Complex<Real> shift(0, loop.delta);
    const RMatrix<Real> id = RMatrix<Real>::Identity();

    FloquetSolution<Real> sol;
    auto h0 = solve_checked(parts.m0, parts.s0, "harmonic 0");
    sol.r0 = h0.x;
    sol.cond0 = h0.condition_number;

    auto hp = solve_checked<Real>(parts.m0 + shift * id, parts.s1 - parts.m1 * sol.r0, "harmonic +1");
    sol.r1 = hp.x;
    sol.cond1 = hp.condition_number;

    auto hm = solve_checked<Real>(parts.m0 - shift * id, parts.sm1 - parts.mm1 * sol.r0, "harmonic -1");
    sol.rm1 = hm.x;
    sol.condm1 = hm.condition_number;
    return sol;
}

/// e^{i n Phi(t)}: the time dependence carried by a response component.
template <typename Real> struct PhaseLaw {
    int multiple = 0;
    LoopParams<Real> loop{};

    Real frequency() const { return Real(multiple) * loop.delta; }
    Complex<Real> at(Real t) const { return std::polar(Real(1), Real(multiple) * loop.phi_of(t)); }
};

/// The three probe-frame contributions to rho41_hat:
///   direct       g41 [r1]_13                     in phase with the probe
///   loop_scatter [r0]_13 e^{i Phi(t)}            coupling fields scattered into the probe mode
///   counter      conj(g41) [rm1]_13 e^{2i Phi(t)} counter-rotating term
template <typename Real> struct ResponseComponents {
    Real t{};
    Complex<Real> direct{};
    Complex<Real> loop_scatter{};
    Complex<Real> counter{};

    Complex<Real> loop_amplitude{};    // [r0]_13
    Complex<Real> counter_amplitude{}; // conj(g41) [rm1]_13
    PhaseLaw<Real> loop_phase{1, {}};
    PhaseLaw<Real> counter_phase{2, {}};

    Complex<Real> total() const { return direct + loop_scatter + counter; }
};

template <typename Real>
ResponseComponents<Real> assemble_components(const FloquetSolution<Real>& sol, const LiouvillianParts<Real>& parts,
                                             const LoopParams<Real>& loop, Real t)
{
    ResponseComponents<Real> c;
    c.t = t;
    c.loop_amplitude = sol.r0(kRho41);
    c.counter_amplitude = std::conj(parts.g41) * sol.rm1(kRho41);
    c.loop_phase = {1, loop};
    c.counter_phase = {2, loop};
    c.direct = parts.g41 * sol.r1(kRho41);
    c.loop_scatter = c.loop_amplitude * c.loop_phase.at(t);
    c.counter = c.counter_amplitude * c.counter_phase.at(t);
    return c;
}

/// SI constants for turning rho41_hat into chi = 2 N d41 / (eps0 E41) rho41_hat.
struct MediumConstants {
    double gamma0 = 0;         // rad/s
    double dipole = 0;         // C m
    double number_density = 0; // m^-3
    double probe_rabi = 0;     // |g41| in units of gamma0

    static MediumConstants sodium_d1(double probe_rabi)
    {
        return {2.0 * std::numbers::pi * 9.76e6, 2.1e-29, 1.3e12 * 1e6, probe_rabi};
    }

    /// 2 N d41 / (eps0 E41) with E41 = hbar g41 / d41.
    double prefactor() const
    {
        constexpr double hbar = 1.054571817e-34;
        constexpr double eps0 = 8.8541878128e-12;
        if (!(probe_rabi > 0))
            throw Error(ErrorKind::ZeroProbeAmplitude, "probe Rabi frequency must be positive");
        const double field = hbar * probe_rabi * gamma0 / dipole;
        return 2.0 * number_density * dipole / (eps0 * field);
    }
};

/// Without medium constants the dimensionless convention chi = rho41_hat applies.
template <typename Real>
Complex<Real> susceptibility(Complex<Real> component, const std::optional<MediumConstants>& medium)
{
    if (!medium)
        return component;
    return component * Real(medium->prefactor());
}

} // namespace dlambda
