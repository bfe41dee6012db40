#pragma once

#include <qvertex/vertex.hpp>

#include <vector>

namespace qvertex {

/// S(k) = -(A + ikB)^-1 (A - ikB). R(i) and T(i, j) use 1-based lines;
/// T(i, j) is the amplitude from line j into line i.
struct ScatteringMatrix {
    double k = 0.0;
    ComplexMatrix M;

    Eigen::Index n() const noexcept { return M.rows(); }
    Complex R(int i) const;
    Complex T(int i, int j) const;
    /// max |S^+ S - I|.
    double unitarity_defect() const;
};

/// Requires k > 0 and finite. An admissible vertex is assumed; a singular
/// A + ikB raises SingularityError.
ScatteringMatrix s_matrix(const BoundaryPair& p, double k);

/// The matrix formula at an arbitrary complex wave number, without the
/// k > 0 restriction. Used for analytic continuation (duality checks).
ComplexMatrix s_matrix_continued(const BoundaryPair& p, Complex k);

/// Column j of S(k) with the boundary values of the scattering solution:
/// psi = (S + I) e_j, psi' = ik (S - I) e_j.
struct ScatteringSolution {
    int j = 1;
    double k = 0.0;
    Complex reflection;
    ComplexVector column; // S(k) e_j, entry j is the reflection amplitude
    ComplexVector psi;
    ComplexVector dpsi;

    Complex transmission(int i) const;
    /// | |R_j|^2 + sum_i |T_ij|^2 - 1 |.
    double flux_defect() const;
};

ScatteringSolution scattering_solution(const BoundaryPair& p, int j, double k);

/// max |A psi + B psi'|.
double boundary_residual(const BoundaryPair& p, const ScatteringSolution& sol);

/// (A, B) -> (B, A). Its scattering matrix is -S(-1/k) of the original.
BoundaryPair dual_boundary(const BoundaryPair& p);

struct LimitOptions {
    double k_lo = 1e-6;
    double k_hi = 1e6;
    /// Refinement disagreement above this is reported as unstable.
    double tolerance = 1e-6;
};

/// S(0+) and S(infinity) estimated by Richardson extrapolation in k near
/// zero and in 1/k near infinity.
struct AsymptoticLimits {
    ComplexMatrix at_zero;
    ComplexMatrix at_infinity;
    double error_zero = 0.0;
    double error_infinity = 0.0;
    std::vector<std::string> warnings;
};

AsymptoticLimits asymptotic_limits(const BoundaryPair& p, const LimitOptions& opts = {});

} // namespace qvertex
