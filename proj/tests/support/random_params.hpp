#pragma once

#include <complex>
#include <random>

#include "dlambda/model.hpp"

namespace testing_support {

using cd = std::complex<double>;

inline cd random_rabi(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> mag(lo, hi), phase(-3.14159265358979, 3.14159265358979);
    return std::polar(mag(rng), phase(rng));
}

/// A generic physical configuration: complex couplings, arbitrary detunings and rates.
inline dlambda::SystemParamsD random_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> det(-4.0, 4.0), rate(0.1, 1.0), phase(0.0, 6.283185307179586);
    dlambda::SystemParamsD p;
    p.g31 = random_rabi(rng, 0.2, 2.0);
    p.g32 = random_rabi(rng, 0.2, 2.0);
    p.g42 = random_rabi(rng, 0.2, 2.0);
    p.g41 = random_rabi(rng, 0.001, 0.05);
    p.d31 = det(rng);
    p.d32 = det(rng);
    p.d42 = det(rng);
    p.d41 = det(rng);
    p.gamma13 = rate(rng);
    p.gamma14 = rate(rng);
    p.gamma23 = rate(rng);
    p.gamma24 = rate(rng);
    p.gamma12_deph = 0.1 * rate(rng);
    p.phi0 = phase(rng);
    p.kr = phase(rng);
    return p;
}

/// Same, with the probe detuning chosen so that the multiphoton detuning vanishes.
inline dlambda::SystemParamsD random_resonant_params(std::mt19937_64& rng)
{
    auto p = random_params(rng);
    p.d41 = p.d31 + p.d42 - p.d32;
    return p;
}

/// Random coherence vector whose 4x4 view is Hermitian with unit trace (not
/// necessarily positive).
inline dlambda::RVectorD random_hermitian_r(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 0.3);
    dlambda::DensityMatrixD a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            a(i, j) = cd(n(rng), n(rng));
    dlambda::DensityMatrixD h = (a + a.adjoint()) / 2.0;
    h += (1.0 - h.trace().real()) / 4.0 * dlambda::DensityMatrixD::Identity();
    for (int i = 0; i < 4; ++i)
        h(i, i) = h(i, i).real();
    return dlambda::from_density_matrix(h);
}

/// The symmetric preset used for the closed-form comparisons.
inline dlambda::SystemParamsD symmetric_preset(double g41, double phi0)
{
    dlambda::SystemParamsD p;
    p.g31 = p.g32 = p.g42 = 0.6;
    p.g41 = g41;
    p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
    p.phi0 = phi0;
    return p;
}

} // namespace testing_support
