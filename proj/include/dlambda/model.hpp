#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

#include "dlambda/error.hpp"
#include "dlambda/rvector.hpp"

namespace dlambda {

/// One physical configuration of the closed-loop double-Lambda system.
///
/// Rabi frequencies, detunings and rates are in units of gamma0. The decay
/// rates are the gamma_ji of the master equation, i.e. half the population
/// decay rate |i> -> |j>, so the common "2 gamma_ji = gamma0" setting is 0.5.
template <typename Real> struct SystemParams {
    Complex<Real> g31{}, g32{}, g42{}; // coupling fields
    Complex<Real> g41{};               // weak probe
    Real d31{}, d32{}, d42{}, d41{};   // laser minus atomic transition frequency
    Real gamma13{}, gamma14{}, gamma23{}, gamma24{};
    Real gamma12_deph{};
    Real phi0{}; // combined initial phase of the four fields
    Real kr{};   // K.r, projection of the wave-vector mismatch at the observation point

    Real gamma3() const { return gamma13 + gamma23; }
    Real gamma4() const { return gamma14 + gamma24; }

    bool operator==(const SystemParams&) const = default;
};

using SystemParamsD = SystemParams<double>;

template <typename Real> struct ValidatedParams {
    SystemParams<Real> params;
    bool weak_probe_exceeded = false; // |g41| > 0.1 max coupling
};

template <typename Real> ValidatedParams<Real> validate_params(const SystemParams<Real>& p)
{
    using std::abs;
    using std::isfinite;
    const Real values[] = {p.g31.real(), p.g31.imag(), p.g32.real(), p.g32.imag(), p.g42.real(), p.g42.imag(),
                           p.g41.real(), p.g41.imag(), p.d31, p.d32, p.d42, p.d41, p.gamma13, p.gamma14,
                           p.gamma23, p.gamma24, p.gamma12_deph, p.phi0, p.kr};
    for (const Real v : values) {
        if (!isfinite(v))
            throw Error(ErrorKind::PreconditionViolated, "non-finite parameter");
    }
    if (p.gamma13 < 0 || p.gamma14 < 0 || p.gamma23 < 0 || p.gamma24 < 0 || p.gamma12_deph < 0)
        throw Error(ErrorKind::NegativeDecay, "decay and dephasing rates must be non-negative");
    if (!(p.gamma3() > 0) && !(p.gamma4() > 0))
        throw Error(ErrorKind::AllDecayZero, "no spontaneous decay channel from |3> or |4>");

    const Real coupling = std::max({abs(p.g31), abs(p.g32), abs(p.g42)});
    return {p, abs(p.g41) > Real(0.1) * coupling};
}

/// Multiphoton detuning and the loop phase Phi(t) = delta t - kr + phi0.
template <typename Real> struct LoopParams {
    Real delta{};
    Real phi0{};
    Real kr{};

    Real phi_of(Real t) const { return delta * t - kr + phi0; }
};

template <typename Real> LoopParams<Real> loop_params(const SystemParams<Real>& p)
{
    return {(p.d32 + p.d41) - (p.d31 + p.d42), p.phi0, p.kr};
}

/// Harmonic decomposition of dR/dt = M(t) R - Sigma(t):
///   M(t)     = m0 + gbar41 e^{-i delta t} m1 + conj(gbar41) e^{i delta t} mm1
///   Sigma(t) = s0 + gbar41 e^{-i delta t} s1 + conj(gbar41) e^{i delta t} sm1
/// with gbar41 = g41 e^{i(kr - phi0)}, so that gbar41 e^{-i delta t} = g41 e^{-i Phi(t)}.
template <typename Real> struct LiouvillianParts {
    RMatrix<Real> m0, m1, mm1;
    RVector<Real> s0, s1, sm1;
    Complex<Real> g41{};
    Complex<Real> gbar41{};
    Real rate_scale{}; // max(gamma3, gamma4, Gamma12, |g_ij|), sets the integration step bound
};

namespace detail {

template <typename Real> using Super = Eigen::Matrix<Complex<Real>, 16, 16>;
template <typename Real> using Op4 = Eigen::Matrix<Complex<Real>, 4, 4>;

// Row-major vectorisation: slot (i,j) -> 4i + j (0-based). Slots 0..14 coincide
// with the R-vector ordering and slot 15 is rho44.
constexpr int slot(int i, int j) { return 4 * i + j; }

// L(rho) = -i [H, rho]
template <typename Real> Super<Real> commutator_super(const Op4<Real>& h)
{
    const Complex<Real> i_unit(0, 1);
    Super<Real> l = Super<Real>::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                l(slot(i, j), slot(k, j)) -= i_unit * h(i, k);
                l(slot(i, j), slot(i, k)) += i_unit * h(k, j);
            }
    return l;
}

template <typename Real> Super<Real> decay_super(const SystemParams<Real>& p)
{
    Super<Real> l = Super<Real>::Zero();
    // Population transfer |u> -> |l> at rate 2 gamma_lu (0-based levels).
    const auto channel = [&](int lower, int upper, Real gamma) {
        l(slot(lower, lower), slot(upper, upper)) += Real(2) * gamma;
        l(slot(upper, upper), slot(upper, upper)) -= Real(2) * gamma;
    };
    channel(0, 2, p.gamma13);
    channel(1, 2, p.gamma23);
    channel(0, 3, p.gamma14);
    channel(1, 3, p.gamma24);

    // Coherence damping Gamma_ij = gamma_i + gamma_j with gamma_1 = gamma_2 = 0;
    // Gamma_12 is an independent dephasing input.
    const Real level_rate[4] = {Real(0), Real(0), p.gamma3(), p.gamma4()};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                continue;
            const bool ground_pair = (i < 2 && j < 2);
            const Real rate = ground_pair ? p.gamma12_deph : level_rate[i] + level_rate[j];
            l(slot(i, j), slot(i, j)) -= rate;
        }
    return l;
}

// Restrict a 16x16 superoperator to the 15 R components after substituting
// rho44 = 1 - rho11 - rho22 - rho33.  Returns {M, -constant}.
template <typename Real> std::pair<RMatrix<Real>, RVector<Real>> eliminate_rho44(const Super<Real>& l)
{
    RMatrix<Real> m = l.template topLeftCorner<kDim, kDim>();
    const auto col44 = l.template block<kDim, 1>(0, 15);
    for (const int pop : {kRho11, kRho22, kRho33})
        m.col(pop) -= col44;
    return {m, -col44};
}

} // namespace detail

template <typename Real> LiouvillianParts<Real> build_liouvillian(const SystemParams<Real>& p)
{
    using detail::Op4;
    const Complex<Real> i_unit(0, 1);

    // Interaction-frame level energies.
    Op4<Real> h0 = Op4<Real>::Zero();
    h0(1, 1) = p.d32 - p.d31;
    h0(2, 2) = -p.d31;
    h0(3, 3) = p.d32 - p.d31 - p.d42;
    const auto couple = [&h0](int upper, int lower, Complex<Real> g) {
        h0(upper, lower) -= g;
        h0(lower, upper) -= std::conj(g);
    };
    couple(2, 0, p.g31);
    couple(2, 1, p.g32);
    couple(3, 1, p.g42);

    // Probe coupling per unit gbar41: -|4><1| rotates as e^{-i delta t}, -|1><4| as e^{+i delta t}.
    Op4<Real> h_plus = Op4<Real>::Zero();
    h_plus(3, 0) = Complex<Real>(-1);
    const Op4<Real> h_minus = h_plus.adjoint();

    LiouvillianParts<Real> parts;
    std::tie(parts.m0, parts.s0) =
        detail::eliminate_rho44<Real>(detail::commutator_super<Real>(h0) + detail::decay_super(p));
    std::tie(parts.m1, parts.s1) = detail::eliminate_rho44<Real>(detail::commutator_super<Real>(h_plus));
    std::tie(parts.mm1, parts.sm1) = detail::eliminate_rho44<Real>(detail::commutator_super<Real>(h_minus));
    parts.g41 = p.g41;
    parts.gbar41 = p.g41 * std::exp(i_unit * (p.kr - p.phi0));
    using std::abs;
    parts.rate_scale = std::max({p.gamma3(), p.gamma4(), p.gamma12_deph, abs(p.g31), abs(p.g32), abs(p.g42), abs(p.g41)});
    return parts;
}

/// M(t) assembled from its harmonics.
template <typename Real>
RMatrix<Real> liouvillian_at(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop, Real t)
{
    const Complex<Real> rot = std::polar(Real(1), -loop.delta * t);
    return parts.m0 + (parts.gbar41 * rot) * parts.m1 + (std::conj(parts.gbar41) * std::conj(rot)) * parts.mm1;
}

template <typename Real>
RVector<Real> source_at(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop, Real t)
{
    const Complex<Real> rot = std::polar(Real(1), -loop.delta * t);
    return parts.s0 + (parts.gbar41 * rot) * parts.s1 + (std::conj(parts.gbar41) * std::conj(rot)) * parts.sm1;
}

/// dR/dt = M(t) R - Sigma(t)
template <typename Real>
RVector<Real> derivative(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop, Real t,
                         const RVector<Real>& r)
{
    const Complex<Real> rot = std::polar(Real(1), -loop.delta * t);
    const Complex<Real> plus = parts.gbar41 * rot;
    const Complex<Real> minus = std::conj(plus);
    RVector<Real> out = parts.m0 * r - parts.s0;
    out.noalias() += plus * (parts.m1 * r - parts.s1);
    out.noalias() += minus * (parts.mm1 * r - parts.sm1);
    return out;
}

} // namespace dlambda
