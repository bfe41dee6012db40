#include <qvertex/scattering.hpp>

#include <cmath>

namespace qvertex {

using Eigen::Index;

namespace {

void check_line(int i, Index n)
{
    if (i < 1 || i > n)
        throw IndexError("line index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

} // namespace

Complex ScatteringMatrix::R(int i) const
{
    check_line(i, n());
    return M(i - 1, i - 1);
}

Complex ScatteringMatrix::T(int i, int j) const
{
    check_line(i, n());
    check_line(j, n());
    if (i == j)
        throw IndexError("T(i, j) needs distinct lines; use R(i)");
    return M(i - 1, j - 1);
}

double ScatteringMatrix::unitarity_defect() const
{
    return max_abs(ComplexMatrix(M.adjoint() * M - ComplexMatrix::Identity(n(), n())));
}

ComplexMatrix s_matrix_continued(const BoundaryPair& p, Complex k)
{
    const Complex ik = Complex(0.0, 1.0) * k;
    return -solve(p.A() + ik * p.B(), p.A() - ik * p.B());
}

ScatteringMatrix s_matrix(const BoundaryPair& p, double k)
{
    if (!(k > 0.0) || !std::isfinite(k))
        throw ValidationError("s_matrix: wave number must be positive and finite");
    return ScatteringMatrix{k, s_matrix_continued(p, k)};
}

Complex ScatteringSolution::transmission(int i) const
{
    check_line(i, column.size());
    if (i == j)
        throw IndexError("transmission(i) needs i != j; use reflection");
    return column(i - 1);
}

double ScatteringSolution::flux_defect() const
{
    return std::abs(column.squaredNorm() - 1.0);
}

ScatteringSolution scattering_solution(const BoundaryPair& p, int j, double k)
{
    check_line(j, p.n());
    const auto sm = s_matrix(p, k);
    ScatteringSolution sol;
    sol.j = j;
    sol.k = k;
    sol.column = sm.M.col(j - 1);
    sol.reflection = sol.column(j - 1);
    const ComplexVector e = ComplexVector::Unit(p.n(), j - 1);
    sol.psi = sol.column + e;
    sol.dpsi = Complex(0.0, k) * (sol.column - e);
    return sol;
}

double boundary_residual(const BoundaryPair& p, const ScatteringSolution& sol)
{
    return max_abs(ComplexVector(p.A() * sol.psi + p.B() * sol.dpsi));
}

BoundaryPair dual_boundary(const BoundaryPair& p)
{
    BoundaryPair d(p.B(), p.A());
    require_admissible(d, kDefaultRankTol, "dual_boundary");
    return d;
}

namespace {

// f(h), f(h/2), f(h/4) -> two first-order Richardson values.
struct Refined {
    ComplexMatrix value;
    double error;
};

template <typename F>
Refined richardson(F&& f, double h)
{
    const ComplexMatrix f1 = f(h);
    const ComplexMatrix f2 = f(h / 2);
    const ComplexMatrix f4 = f(h / 4);
    const ComplexMatrix r1 = 2.0 * f2 - f1;
    const ComplexMatrix r2 = 2.0 * f4 - f2;
    return {r2, max_abs(ComplexMatrix(r2 - r1))};
}

} // namespace

AsymptoticLimits asymptotic_limits(const BoundaryPair& p, const LimitOptions& opts)
{
    if (!(opts.k_lo > 0.0) || !(opts.k_hi > opts.k_lo))
        throw ValidationError("asymptotic_limits: need 0 < k_lo < k_hi");

    AsymptoticLimits out;
    const auto low = richardson([&](double k) { return s_matrix(p, k).M; }, opts.k_lo);
    const auto high = richardson([&](double u) { return s_matrix(p, 1.0 / u).M; }, 1.0 / opts.k_hi);
    out.at_zero = low.value;
    out.at_infinity = high.value;
    out.error_zero = low.error;
    out.error_infinity = high.error;
    if (low.error > opts.tolerance)
        out.warnings.emplace_back("k -> 0 limit unstable (refinement change " +
                                  std::to_string(low.error) + ")");
    if (high.error > opts.tolerance)
        out.warnings.emplace_back("k -> infinity limit unstable (refinement change " +
                                  std::to_string(high.error) + ")");
    return out;
}

} // namespace qvertex
