#pragma once

// Small dense complex-matrix toolkit used by the vertex calculus. All
// routines are free function templates over Eigen expressions, so callers
// can pass blocks, products or maps without materializing them first.

#include <qvertex/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <string>

namespace qvertex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kDefaultRankTol = 1e-9;

/// Relative pivot magnitude below which solve() reports singularity.
inline constexpr double kPivotTol = 1e-13;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what)
{
    if (!m.allFinite())
        throw ValidationError(std::string(what) + ": non-finite entry");
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
max_abs(const Eigen::MatrixBase<Derived>& m)
{
    if (m.size() == 0)
        return 0;
    return m.cwiseAbs().maxCoeff();
}

/// Singular-value summary behind a tolerant rank decision. The two margins
/// are relative to sigma_max and let callers spot borderline ranks.
struct RankInfo {
    Eigen::Index rank = 0;
    double sigma_max = 0.0;
    double smallest_kept = 0.0;   // sigma_{rank} / sigma_max, 0 when rank == 0
    double largest_dropped = 0.0; // sigma_{rank+1} / sigma_max, 0 when none dropped
    Eigen::VectorXd singular_values;

    /// True when a singular value sits within a decade of the threshold.
    bool ambiguous(double tol) const
    {
        return (rank > 0 && smallest_kept < 10.0 * tol) ||
               largest_dropped > tol / 10.0;
    }
};

/// Rank with singular values measured against an external scale, e.g. the
/// size of [A|B] when ranking A or B alone. Margins are relative to reference.
template <typename Derived>
RankInfo rank_info_against(const Eigen::MatrixBase<Derived>& m, double reference,
                           double tol = kDefaultRankTol)
{
    require_finite(m, "numerical_rank");
    if (!(tol > 0))
        throw ValidationError("numerical_rank: tolerance must be positive");

    RankInfo info;
    if (m.size() == 0)
        return info;

    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::JacobiSVD<Plain> svd(m.eval());
    info.singular_values = svd.singularValues().template cast<double>();
    info.sigma_max = info.singular_values(0);
    if (reference < 0)
        reference = info.sigma_max;
    if (reference == 0.0)
        return info;

    const auto& sv = info.singular_values;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * reference)
            ++info.rank;
    }
    if (info.rank > 0)
        info.smallest_kept = sv(info.rank - 1) / reference;
    if (info.rank < sv.size())
        info.largest_dropped = sv(info.rank) / reference;
    return info;
}

template <typename Derived>
RankInfo rank_info(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultRankTol)
{
    return rank_info_against(m, -1.0, tol);
}

template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultRankTol)
{
    return rank_info(m, tol).rank;
}

/// max |M_ij - conj(M_ji)|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m)
{
    if (m.rows() != m.cols())
        throw DimensionError("hermitian test needs a square matrix");
    if (m.size() == 0)
        return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol)
{
    return hermitian_defect(m) <= tol;
}

/// Solves M X = RHS by LU with partial pivoting. Throws SingularityError
/// (carrying the offending pivot) when a pivot falls below kPivotTol
/// relative to the largest entry of M.
template <typename DerivedM, typename DerivedR>
Eigen::Matrix<typename DerivedM::Scalar, Eigen::Dynamic, Eigen::Dynamic>
solve(const Eigen::MatrixBase<DerivedM>& m, const Eigen::MatrixBase<DerivedR>& rhs)
{
    using Plain = Eigen::Matrix<typename DerivedM::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.rows() != m.cols())
        throw DimensionError("solve: matrix is not square");
    if (rhs.rows() != m.rows())
        throw DimensionError("solve: right-hand side has wrong row count");
    require_finite(m, "solve");
    require_finite(rhs, "solve");
    if (m.rows() == 0)
        return Plain(0, rhs.cols());

    Eigen::PartialPivLU<Plain> lu(m.eval());
    const double scale = max_abs(m);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    Eigen::Index where = 0;
    const double pivot = diag.minCoeff(&where);
    if (scale == 0.0 || pivot <= kPivotTol * scale)
        throw SingularityError("solve: singular matrix (pivot " + std::to_string(pivot) +
                                   " at step " + std::to_string(where) + ")",
                               pivot);
    return lu.solve(rhs.eval());
}

} // namespace qvertex
