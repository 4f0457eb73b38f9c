#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dlambda/error.hpp"
#include "dlambda/model.hpp"

namespace dlambda {

inline constexpr double kPhysicalTolerance = 1e-6;
inline constexpr double kDefaultStep = 0.01;
inline constexpr double kDefaultSettleTime = 50.0;
inline constexpr int kMinDemodulationPeriods = 10;

template <typename Real> struct Trajectory {
    std::vector<Real> times;
    std::vector<RVector<Real>> states;
    Real step{};
};

/// Largest step allowed for the fixed-step integrator: 0.1 / max(rates, couplings, |delta|).
template <typename Real> Real max_step(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop)
{
    using std::abs;
    const Real scale = std::max(parts.rate_scale, abs(loop.delta));
    return scale > 0 ? Real(0.1) / scale : std::numeric_limits<Real>::infinity();
}

/// Classical RK4 on dR/dt = M(t) R - Sigma(t) with a fixed step t_end / ceil(t_end / dt_max).
template <typename Real>
Trajectory<Real> integrate(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop,
                           const RVector<Real>& r_init, Real t_end, Real dt_max, int store_every = 1)
{
    if (!(t_end > 0) || !(dt_max > 0) || store_every < 1)
        throw Error(ErrorKind::PreconditionViolated, "t_end, dt_max must be positive and store_every >= 1");
    if (dt_max > max_step(parts, loop) * Real(1 + 1e-12))
        throw Error(ErrorKind::PreconditionViolated,
                    "dt_max " + std::to_string(double(dt_max)) + " exceeds 0.1/max(gamma, |delta|, |g|) = " +
                        std::to_string(double(max_step(parts, loop))));
    if (check_physical(r_init).worst() > Real(kPhysicalTolerance))
        throw Error(ErrorKind::PreconditionViolated, "initial state is not a physical density matrix");

    using std::ceil;
    const long steps = std::max(1L, static_cast<long>(ceil(t_end / dt_max - Real(1e-9))));
    const Real dt = t_end / Real(steps);

    Trajectory<Real> traj;
    traj.step = dt;
    traj.times.reserve(steps / store_every + 2);
    traj.states.reserve(steps / store_every + 2);
    traj.times.push_back(0);
    traj.states.push_back(r_init);

    RVector<Real> r = r_init;
    for (long n = 0; n < steps; ++n) {
        const Real t = dt * Real(n);
        const RVector<Real> k1 = derivative(parts, loop, t, r);
        const RVector<Real> k2 = derivative<Real>(parts, loop, t + dt / 2, r + (dt / 2) * k1);
        const RVector<Real> k3 = derivative<Real>(parts, loop, t + dt / 2, r + (dt / 2) * k2);
        const RVector<Real> k4 = derivative<Real>(parts, loop, t + dt, r + dt * k3);
        r += (dt / 6) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);

        if ((n + 1) % store_every == 0 || n + 1 == steps) {
            const auto check = check_physical(r);
            if (!(check.worst() <= Real(kPhysicalTolerance)))
                throw Error(ErrorKind::UnphysicalState, "state at t = " + std::to_string(double(t + dt)) +
                                                            " violates density-matrix invariants; reduce the step");
            traj.times.push_back(dt * Real(n + 1));
            traj.states.push_back(r);
        }
    }
    return traj;
}

/// Windowed Fourier coefficients of rho41 at frequencies 0, -delta, +delta,
/// comparable to ([r0]_13, gbar41 [r1]_13, conj(gbar41) [rm1]_13).
template <typename Real> struct HarmonicAmplitudes {
    Complex<Real> zero{};
    Complex<Real> minus{}; // coefficient of e^{-i delta t}
    Complex<Real> plus{};  // coefficient of e^{+i delta t}
    int periods = 0;
    Real t_start{};
    Real t_stop{};
};

namespace detail {

// Linear interpolation of a sampled signal at t (times uniform or not).
template <typename Real>
Complex<Real> sample_at(const std::vector<Real>& times, const std::vector<Complex<Real>>& x, Real t)
{
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin())
        return x.front();
    if (it == times.end())
        return x.back();
    const auto k = static_cast<std::size_t>(it - times.begin());
    const Real w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return x[k - 1] * (Real(1) - w) + x[k] * w;
}

} // namespace detail

/// Demodulates rho41 over [t_a, t_a + n 2pi/|delta|] with n the largest whole
/// number of periods that fits before t_b. Trapezoid rule; exact for
/// trigonometric polynomials when the window endpoints fall on samples.
template <typename Real>
HarmonicAmplitudes<Real> demodulate(const Trajectory<Real>& traj, const LoopParams<Real>& loop, Real t_a, Real t_b)
{
    using std::abs;
    using std::floor;
    if (!(abs(loop.delta) > Real(1e-12)))
        throw Error(ErrorKind::DeltaZero, "harmonics are indistinguishable at delta = 0; use the steady solver");
    if (traj.times.size() < 2)
        throw Error(ErrorKind::WindowTooShort, "trajectory has fewer than two samples");

    const Real period = Real(2) * std::numbers::pi_v<Real> / abs(loop.delta);
    const Real tol = Real(1e-9) * std::max(Real(1), abs(t_b));
    const Real last = std::min(t_b, traj.times.back() + tol);
    const int periods = static_cast<int>(floor((last - t_a) / period + Real(1e-9)));
    if (t_a < traj.times.front() - tol || periods < kMinDemodulationPeriods)
        throw Error(ErrorKind::WindowTooShort, "window holds " + std::to_string(periods) + " whole periods of 2pi/|delta|; need " +
                                                   std::to_string(kMinDemodulationPeriods));
    const Real t_stop = t_a + Real(periods) * period;

    std::vector<Complex<Real>> x;
    x.reserve(traj.states.size());
    for (const auto& s : traj.states)
        x.push_back(s(kRho41));

    // Sample nodes: t_a, every stored time strictly inside, t_stop.
    std::vector<Real> nodes{t_a};
    const auto first = std::upper_bound(traj.times.begin(), traj.times.end(), t_a + tol);
    for (auto it = first; it != traj.times.end() && *it < t_stop - tol; ++it)
        nodes.push_back(*it);
    nodes.push_back(t_stop);

    const auto weighted = [&](Real t) {
        const Complex<Real> v = detail::sample_at(traj.times, x, t);
        const Complex<Real> e = std::polar(Real(1), loop.delta * t);
        return std::array<Complex<Real>, 3>{v, v * e, v * std::conj(e)};
    };

    std::array<Complex<Real>, 3> acc{};
    auto prev = weighted(nodes.front());
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const auto cur = weighted(nodes[k]);
        const Real h = nodes[k] - nodes[k - 1];
        for (int q = 0; q < 3; ++q)
            acc[q] += (h / 2) * (prev[q] + cur[q]);
        prev = cur;
    }
    const Real span = t_stop - t_a;
    return {acc[0] / span, acc[1] / span, acc[2] / span, periods, t_a, t_stop};
}

/// Slowest relaxation rate of the probe-free dynamics, -max Re(eig(m0)).
template <typename Real> Real slowest_rate(const LiouvillianParts<Real>& parts)
{
    Eigen::ComplexEigenSolver<RMatrix<Real>> es(parts.m0, false);
    return -es.eigenvalues().real().maxCoeff();
}

template <typename Real> struct DemodulationSetup {
    Real settle_time = Real(kDefaultSettleTime);
    int periods = 20;
    Real step = Real(kDefaultStep);
};

/// Integrates from |1> on a grid commensurate with 2pi/|delta| and demodulates
/// a window that starts after the transient has died out.
template <typename Real>
HarmonicAmplitudes<Real> demodulated_harmonics(const LiouvillianParts<Real>& parts, const LoopParams<Real>& loop,
                                               const DemodulationSetup<Real>& setup = {})
{
    using std::abs;
    using std::ceil;
    if (!(abs(loop.delta) > Real(1e-12)))
        throw Error(ErrorKind::DeltaZero, "harmonics are indistinguishable at delta = 0; use the steady solver");
    const Real period = Real(2) * std::numbers::pi_v<Real> / abs(loop.delta);
    const Real step_target = std::min(setup.step, max_step(parts, loop));
    const Real steps_per_period = ceil(period / step_target - Real(1e-9));
    const Real dt = period / steps_per_period;

    const Real rate = slowest_rate(parts);
    Real settle = setup.settle_time;
    if (rate > 0)
        settle = std::max(settle, Real(30) / rate);
    const Real t_a = ceil(settle / period - Real(1e-9)) * period;
    const Real t_end = t_a + Real(setup.periods) * period;

    const Trajectory<Real> traj = integrate(parts, loop, ground_state<Real>(), t_end, dt);
    return demodulate(traj, loop, t_a, t_end);
}

} // namespace dlambda
