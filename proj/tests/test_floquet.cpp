#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"

#include "dlambda/floquet.hpp"
#include "dlambda/steady.hpp"
#include "support/random_params.hpp"

using namespace dlambda;
using testing_support::cd;
using testing_support::symmetric_preset;

namespace {

constexpr double pi = std::numbers::pi;

struct Solved {
    LiouvillianParts<double> parts;
    LoopParams<double> loop;
    FloquetSolution<double> sol;
};

Solved solve(const SystemParamsD& p)
{
    Solved s{build_liouvillian(p), loop_params(p), {}};
    s.sol = solve_floquet(s.parts, s.loop);
    return s;
}

ResponseComponents<double> components(const SystemParamsD& p, double t = 0.0)
{
    const auto s = solve(p);
    return assemble_components(s.sol, s.parts, s.loop, t);
}

SystemParamsD fig6a(double d41)
{
    SystemParamsD p;
    p.g31 = 1.8;
    p.g32 = 0.2;
    p.g42 = 0.5;
    p.g41 = 0.01;
    p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
    p.d41 = d41;
    return p;
}

} // namespace

TEST_CASE("loop-scatter amplitude does not depend on the multiphoton detuning")
{
    const cd reference = solve(fig6a(0.0)).sol.r0(kRho41);
    for (double delta : {1.0, 5.0, 20.0}) {
        const auto s = solve(fig6a(delta));
        CHECK(s.loop.delta == delta);
        CHECK(std::abs(s.sol.r0(kRho41) - reference) <= 1e-12);
    }
}

TEST_CASE("harmonic equations are satisfied")
{
    std::mt19937_64 rng(4);
    for (int n = 0; n < 20; ++n) {
        const auto p = testing_support::random_params(rng);
        const auto s = solve(p);
        const RMatrixD id = RMatrixD::Identity();
        const cd shift(0, s.loop.delta);
        CHECK((s.parts.m0 * s.sol.r0 - s.parts.s0).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(((s.parts.m0 + shift * id) * s.sol.r1 - (s.parts.s1 - s.parts.m1 * s.sol.r0)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK(((s.parts.m0 - shift * id) * s.sol.rm1 - (s.parts.sm1 - s.parts.mm1 * s.sol.r0)).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("at resonance the assembled components reproduce the steady state to first order in g41")
{
    // Oracle: solve_steady. The difference is the O(g41^2) truncation.
    std::mt19937_64 rng(31);
    for (int n = 0; n < 10; ++n) {
        auto p = testing_support::random_resonant_params(rng);
        double diffs[2];
        int k = 0;
        const cd dir = p.g41 / std::abs(p.g41);
        for (double g41 : {1e-2, 1e-3}) {
            p.g41 = g41 * dir;
            const auto s = solve(p);
            const auto c = assemble_components(s.sol, s.parts, s.loop, 0.0);
            const auto st = solve_steady(s.parts, s.loop);
            const cd hat = probe_frame(st.rho41(), s.loop, 0.0);
            diffs[k++] = std::abs(c.total() - hat);

            // Whole vector, not just component 13.
            const RVectorD full = s.sol.at(s.parts, s.loop, 0.0);
            CHECK((full - st.r).cwiseAbs().maxCoeff() <= std::max(1e-8, 50.0 * g41 * g41));
        }
        CHECK(diffs[1] <= std::max(1e-8, 2.0 * diffs[0] * 1e-2));
    }
}

TEST_CASE("symmetric preset: components match the closed-form terms one by one")
{
    for (double phi0 : {0.0, 0.9, pi}) {
        const auto p = symmetric_preset(0.01, phi0);
        const auto c = components(p, 3.7); // time-independent at delta = 0, kr = 0
        const auto a = analytic_rho41(p);
        CHECK(std::abs(c.loop_scatter - a.terms[0]) <= 1e-13);
        CHECK(std::abs(c.direct - a.terms[1]) <= 1e-13);
        CHECK(std::abs(c.counter - a.terms[2]) <= 1e-13);
    }
}

TEST_CASE("direct component is independent of phi0 and kr")
{
    auto p = fig6a(1.5);
    const cd base = components(p).direct;
    for (double phi0 : {pi / 2, pi, 2.3}) {
        p.phi0 = phi0;
        CHECK(std::abs(components(p).direct - base) <= 1e-12);
    }
    p.kr = 0.8;
    CHECK(std::abs(components(p).direct - base) <= 1e-12);
}

TEST_CASE("counter component depends on twice the loop phase")
{
    auto p = symmetric_preset(0.01, 0.0);
    p.d31 = p.d41 = 0.3; // Raman-detuned, still resonant
    const cd at0 = components(p).counter;
    p.phi0 = pi;
    const cd at_pi = components(p).counter;
    p.phi0 = pi / 2;
    const cd at_half = components(p).counter;
    CHECK(std::abs(at0 - at_pi) <= 1e-12);
    CHECK(std::abs(at0 - at_half) > 1e-6);
}

TEST_CASE("phase laws at delta = 0 and kr = 0 are constant")
{
    const auto p = symmetric_preset(0.01, 0.7);
    const auto c0 = components(p, 0.0);
    const auto c1 = components(p, 123.4);
    CHECK(std::abs(c0.loop_phase.at(5.0) - std::polar(1.0, 0.7)) < 1e-15);
    CHECK(std::abs(c0.counter_phase.at(5.0) - std::polar(1.0, 1.4)) < 1e-15);
    CHECK(std::abs(c0.loop_scatter - c1.loop_scatter) < 1e-15);
    CHECK(std::abs(c0.counter - c1.counter) < 1e-15);
    CHECK(c0.loop_phase.frequency() == 0.0);
}

TEST_CASE("phase laws oscillate at delta and 2 delta off resonance")
{
    auto p = fig6a(0.75);
    p.phi0 = 0.3;
    p.kr = 0.1;
    const auto c = components(p, 2.0);
    CHECK(c.loop_phase.frequency() == doctest::Approx(0.75));
    CHECK(c.counter_phase.frequency() == doctest::Approx(1.5));
    CHECK(std::abs(c.loop_phase.at(2.0) - std::polar(1.0, 0.75 * 2.0 - 0.1 + 0.3)) < 1e-15);
    CHECK(std::abs(c.loop_scatter - c.loop_amplitude * c.loop_phase.at(2.0)) < 1e-16);
    CHECK(std::abs(c.counter - c.counter_amplitude * c.counter_phase.at(2.0)) < 1e-16);
}

TEST_CASE("probe strength scales the first harmonics linearly")
{
    auto p = fig6a(-1.2);
    const auto a = solve(p);
    const auto ca = assemble_components(a.sol, a.parts, a.loop, 0.0);
    p.g41 *= 3.0;
    const auto b = solve(p);
    const auto cb = assemble_components(b.sol, b.parts, b.loop, 0.0);
    CHECK(std::memcmp(a.sol.r1.data(), b.sol.r1.data(), sizeof(cd) * kDim) == 0);
    CHECK(std::memcmp(a.sol.rm1.data(), b.sol.rm1.data(), sizeof(cd) * kDim) == 0);
    CHECK(std::abs(cb.direct - 3.0 * ca.direct) < 1e-15);
    CHECK(std::abs(cb.counter - 3.0 * ca.counter) < 1e-15);
    CHECK(cb.loop_scatter == ca.loop_scatter);
}

TEST_CASE("first harmonics pair up under Hermitian conjugation")
{
    std::mt19937_64 rng(12);
    double worst = 0, worst_r0 = 0, worst_full = 0;
    for (int n = 0; n < 100; ++n) {
        const auto p = testing_support::random_params(rng);
        const auto s = solve(p);
        worst = std::max(worst, std::abs(s.sol.rm1(kRho14) - std::conj(s.sol.r1(kRho41))));
        for (int k = 0; k < kDim; ++k) {
            const auto [i, j] = levels_of(k);
            if (i == j)
                continue;
            const int kt = index_of(j, i);
            worst = std::max(worst, std::abs(s.sol.rm1(kt) - std::conj(s.sol.r1(k))));
            worst_r0 = std::max(worst_r0, std::abs(s.sol.r0(kt) - std::conj(s.sol.r0(k))));
        }
        worst_full = std::max(worst_full, hermiticity_deviation(s.sol.at(s.parts, s.loop, 0.77 * n)));
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_r0 <= 1e-10);
    CHECK(worst_full <= 1e-9);
}

TEST_CASE("singular harmonic is named in the error")
{
    SystemParamsD p;
    p.gamma13 = p.gamma14 = p.gamma23 = p.gamma24 = 0.5;
    p.d41 = 1.0;
    try {
        solve(p);
        FAIL("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularSystem);
        CHECK(std::string(e.what()).find("harmonic 0") != std::string::npos);
    }
}

TEST_CASE("susceptibility conventions")
{
    const cd x(0.3, -0.1);
    CHECK(susceptibility(x, std::nullopt) == x);

    // Independent evaluation of 2 N d^2 / (eps0 hbar g41 gamma0) for sodium D1.
    const double gamma0 = 2 * pi * 9.76e6;
    const double expected = 2 * 1.3e18 * 2.1e-29 * 2.1e-29 / (8.8541878128e-12 * 1.054571817e-34 * 0.01 * gamma0);
    const auto sodium = MediumConstants::sodium_d1(0.01);
    CHECK(sodium.prefactor() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sodium.prefactor() == doctest::Approx(2.0024).epsilon(1e-4));

    auto dense = sodium;
    dense.number_density *= 2.0;
    CHECK(std::abs(susceptibility(x, dense) - 2.0 * susceptibility(x, sodium)) < 1e-12);

    auto dark = sodium;
    dark.probe_rabi = 0.0;
    CHECK_THROWS_WITH_AS(susceptibility(x, dark), doctest::Contains("ZeroProbeAmplitude"), Error);
}
