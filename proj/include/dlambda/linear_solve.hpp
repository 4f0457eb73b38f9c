#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "dlambda/error.hpp"
#include "dlambda/rvector.hpp"

namespace dlambda {

inline constexpr double kMaxConditionNumber = 1e12;

template <typename Real> struct LinearSolution {
    RVector<Real> x;
    Real condition_number;
};

/// Dense LU with partial pivoting; throws SingularSystem when the estimated
/// 1-norm condition number exceeds the limit.
template <typename Real>
LinearSolution<Real> solve_checked(const RMatrix<Real>& a, const RVector<Real>& b, const std::string& what)
{
    const Eigen::PartialPivLU<RMatrix<Real>> lu(a);
    const Real rcond = lu.rcond();
    const Real cond = rcond > 0 ? Real(1) / rcond : std::numeric_limits<Real>::infinity();
    if (!(cond <= Real(kMaxConditionNumber)))
        throw Error(ErrorKind::SingularSystem, what + " (condition number " + std::to_string(double(cond)) + ")");
    return {lu.solve(b), cond};
}

} // namespace dlambda
