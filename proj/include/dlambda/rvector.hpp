#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace dlambda {

inline constexpr int kLevels = 4;
inline constexpr int kDim = 15;

template <typename Real> using Complex = std::complex<Real>;

/// Coherence vector (rho11, rho12, rho13, rho14, rho21, ..., rho43); rho44 is
/// implied by unit trace.
template <typename Real> using RVector = Eigen::Matrix<Complex<Real>, kDim, 1>;
template <typename Real> using RMatrix = Eigen::Matrix<Complex<Real>, kDim, kDim>;
template <typename Real> using DensityMatrix = Eigen::Matrix<Complex<Real>, kLevels, kLevels>;

using RVectorD = RVector<double>;
using RMatrixD = RMatrix<double>;
using DensityMatrixD = DensityMatrix<double>;

// Levels are 1-based, positions 0-based. (4,4) has no slot.
constexpr int index_of(int i, int j) { return (i - 1) * kLevels + (j - 1); }

inline constexpr int kRho11 = index_of(1, 1);
inline constexpr int kRho22 = index_of(2, 2);
inline constexpr int kRho33 = index_of(3, 3);
inline constexpr int kRho14 = index_of(1, 4);
inline constexpr int kRho41 = index_of(4, 1); // the 13th component

constexpr std::pair<int, int> levels_of(int index) { return {index / kLevels + 1, index % kLevels + 1}; }

template <typename Real> DensityMatrix<Real> to_density_matrix(const RVector<Real>& r)
{
    DensityMatrix<Real> rho;
    for (int k = 0; k < kDim; ++k) {
        const auto [i, j] = levels_of(k);
        rho(i - 1, j - 1) = r(k);
    }
    rho(3, 3) = Complex<Real>(1) - r(kRho11) - r(kRho22) - r(kRho33);
    return rho;
}

template <typename Real> RVector<Real> from_density_matrix(const DensityMatrix<Real>& rho)
{
    RVector<Real> r;
    for (int k = 0; k < kDim; ++k) {
        const auto [i, j] = levels_of(k);
        r(k) = rho(i - 1, j - 1);
    }
    return r;
}

/// All population in |1>.
template <typename Real> RVector<Real> ground_state()
{
    RVector<Real> r = RVector<Real>::Zero();
    r(kRho11) = Real(1);
    return r;
}

/// max |rho_ji - conj(rho_ij)| over the reconstructed 4x4 matrix, including
/// the imaginary parts of the populations.
template <typename Real> Real hermiticity_deviation(const RVector<Real>& r)
{
    const DensityMatrix<Real> rho = to_density_matrix(r);
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real> struct PhysicalCheck {
    Real hermiticity = 0;
    Real trace_error = 0;
    Real population_excess = 0; // distance of the worst population outside [0,1]
    Real coherence_excess = 0;  // worst |rho_ij|^2 - rho_ii rho_jj, clipped at 0
    Real min_eigenvalue = 0;    // only filled when requested

    Real worst() const
    {
        using std::max;
        return max({hermiticity, trace_error, population_excess, coherence_excess});
    }
};

template <typename Real> PhysicalCheck<Real> check_physical(const RVector<Real>& r, bool with_spectrum = false)
{
    using std::abs;
    using std::max;
    using std::norm;
    const DensityMatrix<Real> rho = to_density_matrix(r);
    PhysicalCheck<Real> c;
    c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = abs(rho.trace() - Complex<Real>(1));
    for (int i = 0; i < kLevels; ++i) {
        const Real p = rho(i, i).real();
        c.population_excess = max({c.population_excess, -p, p - Real(1)});
        for (int j = i + 1; j < kLevels; ++j) {
            const Real excess = norm(rho(i, j)) - rho(i, i).real() * rho(j, j).real();
            c.coherence_excess = max(c.coherence_excess, excess);
        }
    }
    if (with_spectrum) {
        const DensityMatrix<Real> herm = (rho + rho.adjoint()) / Real(2);
        Eigen::SelfAdjointEigenSolver<DensityMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
        c.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    return c;
}

} // namespace dlambda
