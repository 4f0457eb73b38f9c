#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "dlambda/error.hpp"
#include "dlambda/linear_solve.hpp"
#include "dlambda/model.hpp"

namespace dlambda {

inline constexpr double kResonanceTolerance = 1e-12;

template <typename Real> struct SteadyState {
    RVector<Real> r;
    Real condition_number{};
    Real residual{}; // max-norm of M r - Sigma

    Complex<Real> rho41() const { return r(kRho41); }
};

/// rho41 in the frame oscillating with the probe: multiply by e^{i Phi(t)}.
template <typename Real>
Complex<Real> probe_frame(Complex<Real> rho41_tilde, const LoopParams<Real>& loop, Real t)
{
    return rho41_tilde * std::polar(Real(1), loop.phi_of(t));
}

template <typename Real>
Complex<Real> interaction_frame(Complex<Real> rho41_hat, const LoopParams<Real>& loop, Real t)
{
    return rho41_hat * std::polar(Real(1), -loop.phi_of(t));
}

/// Time-independent steady state under multiphoton resonance (delta = 0).
template <typename Real> SteadyState<Real> solve_steady(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop)
{
    using std::abs;
    if (!(abs(loop.delta) <= Real(kResonanceTolerance)))
        throw Error(ErrorKind::NotMultiphotonResonant,
                    "multiphoton detuning " + std::to_string(double(loop.delta)) + " is nonzero");

    const Complex<Real> gp = parts.gbar41;
    const Complex<Real> gm = std::conj(gp);
    const RMatrix<Real> a = parts.m0 + gp * parts.m1 + gm * parts.mm1;
    const RVector<Real> b = parts.s0 + gp * parts.s1 + gm * parts.sm1;
    auto sol = solve_checked(a, b, "steady state");

    SteadyState<Real> out;
    out.r = sol.x;
    out.condition_number = sol.condition_number;
    out.residual = (a * sol.x - b).cwiseAbs().maxCoeff();
    return out;
}

/// Leading-order closed form for rho41 when all detunings vanish and the four
/// decay rates are equal. `terms` holds the probe-frame contributions in the
/// order loop scattering (~ g32* g31 g42), direct (~ g41), counter-rotating (~ g41*).
template <typename Real> struct AnalyticRho41 {
    Complex<Real> interaction_frame{};
    Complex<Real> probe_frame{};
    std::array<Complex<Real>, 3> terms{};
    Real d{};
};

template <typename Real> AnalyticRho41<Real> analytic_rho41(const SystemParams<Real>& p)
{
    using std::abs;
    using std::norm;
    const Real tol(kResonanceTolerance);
    const bool resonant = abs(p.d31) <= tol && abs(p.d32) <= tol && abs(p.d41) <= tol && abs(p.d42) <= tol;
    const Real gamma = p.gamma14;
    const bool equal_rates =
        abs(p.gamma24 - gamma) <= tol && abs(p.gamma13 - gamma) <= tol && abs(p.gamma23 - gamma) <= tol;
    if (!resonant || !equal_rates)
        throw Error(ErrorKind::PreconditionViolated,
                    "closed form needs all detunings zero and gamma13 = gamma14 = gamma23 = gamma24");

    const Complex<Real> i_unit(0, 1);
    const Real a31 = norm(p.g31), a32 = norm(p.g32), a42 = norm(p.g42);
    const Real sum = a31 + a32 + a42;
    const Real d = a31 * a42 + gamma * gamma * sum;
    const Real d2 = d * d;

    const LoopParams<Real> loop = loop_params(p);
    const Complex<Real> gbar = p.g41 * std::polar(Real(1), p.kr - p.phi0);
    const Complex<Real> closure = std::conj(p.g32) * p.g31 * p.g42;

    // Interaction frame. The counter-rotating term carries the loop product
    // squared; for phase-aligned couplings this is |g31|^2 |g32|^2 |g42|^2.
    const Complex<Real> t_loop = -i_unit * gamma * closure / (Real(2) * d);
    const Complex<Real> t_direct = i_unit * gamma * gamma * gamma * sum * a32 * gbar / (Real(2) * d2);
    const Complex<Real> t_counter = -i_unit * gamma * closure * closure * std::conj(gbar) / (Real(2) * d2);

    AnalyticRho41<Real> out;
    out.d = d;
    out.interaction_frame = t_loop + t_direct + t_counter;
    const Complex<Real> phase = std::polar(Real(1), loop.phi_of(Real(0)));
    out.terms = {t_loop * phase, t_direct * phase, t_counter * phase};
    out.probe_frame = out.interaction_frame * phase;
    return out;
}

} // namespace dlambda
