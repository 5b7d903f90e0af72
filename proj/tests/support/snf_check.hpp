#pragma once

#include <string>

#include "sofic/invariants.hpp"
#include "support/reference.hpp"

namespace sofic::testing {

/// Empty when U*A*V = D, U and V are unimodular (determinant by minors), and
/// D is a nonnegative diagonal whose entries divide each other in order with
/// zeros last; otherwise the first violated condition.
inline std::string snf_violation(const IntMatrix& A, const SmithDecomposition& s)
{
    if (s.U * A * s.V != s.D)
        return "U*A*V != D";
    auto unimodular = [](const IntMatrix& M) {
        const BigInt d = reference::det_by_minors<BigInt>(M, M.rows());
        return d == 1 || d == -1;
    };
    if (!unimodular(s.U))
        return "U is not unimodular";
    if (!unimodular(s.V))
        return "V is not unimodular";
    const IntMatrix& D = s.D;
    for (std::size_t i = 0; i < D.rows(); ++i)
        for (std::size_t j = 0; j < D.cols(); ++j)
            if (i != j && D(i, j) != 0)
                return "D is not diagonal";
    const std::size_t r = std::min(D.rows(), D.cols());
    for (std::size_t i = 0; i < r; ++i) {
        if (D(i, i) < 0)
            return "negative diagonal entry";
        if (i + 1 < r) {
            if (D(i, i) == 0 && D(i + 1, i + 1) != 0)
                return "zero before a nonzero diagonal entry";
            if (D(i, i) != 0 && D(i + 1, i + 1) % D(i, i) != 0)
                return "divisibility chain broken";
        }
    }
    return {};
}

} // namespace sofic::testing
