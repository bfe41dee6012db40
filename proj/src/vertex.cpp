#include <qvertex/vertex.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qvertex {

using Eigen::Index;

BoundaryPair::BoundaryPair(ComplexMatrix a, ComplexMatrix b) : a_(std::move(a)), b_(std::move(b))
{
    if (a_.rows() != a_.cols() || b_.rows() != b_.cols())
        throw DimensionError("boundary matrices must be square");
    if (a_.rows() != b_.rows())
        throw DimensionError("boundary matrices A and B differ in size");
    if (a_.rows() < 1)
        throw DimensionError("a vertex needs at least one line");
    require_finite(a_, "boundary matrix A");
    require_finite(b_, "boundary matrix B");
}

AdmissibilityReport validate_admissible(const BoundaryPair& p, double tol)
{
    const Index n = p.n();
    AdmissibilityReport report;

    ComplexMatrix ab(n, 2 * n);
    ab << p.A(), p.B();
    report.rank_AB = numerical_rank(ab, tol);

    const ComplexMatrix prod = p.A() * p.B().adjoint();
    report.hermitian_defect = hermitian_defect(prod);
    report.hermitian_tol =
        tol * std::max(1.0, max_abs(p.A()) * max_abs(p.B()) * static_cast<double>(n));

    std::ostringstream why;
    if (report.rank_AB != n)
        why << "rank [A|B] = " << report.rank_AB << ", expected " << n;
    if (report.hermitian_defect > report.hermitian_tol) {
        if (why.tellp() > 0)
            why << "; ";
        why << "A B^+ not Hermitian (defect " << report.hermitian_defect << " > "
            << report.hermitian_tol << ")";
    }
    report.violation = why.str();
    report.ok = report.violation.empty();
    return report;
}

void require_admissible(const BoundaryPair& p, double tol, std::string_view who)
{
    const auto report = validate_admissible(p, tol);
    if (!report)
        throw AdmissibilityError(std::string(who) + ": inadmissible vertex: " + report.violation);
}

void check_line_order(const LineOrder& order, Index n)
{
    if (static_cast<Index>(order.size()) != n)
        throw ValidationError("line order has wrong length");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int l : order) {
        if (l < 1 || l > n || seen[static_cast<std::size_t>(l - 1)])
            throw ValidationError("line order is not a permutation of 1..n");
        seen[static_cast<std::size_t>(l - 1)] = true;
    }
}

namespace {

constexpr double kConditioningWarn = 1e-6;
constexpr double kSymmetrizeTol = 1e-9;

ComplexMatrix columns(const ComplexMatrix& m, const std::vector<Index>& cols)
{
    ComplexMatrix out(m.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.col(static_cast<Index>(c)) = m.col(cols[c]);
    return out;
}

// Number of singular values of block above tol * reference.
Index rank_against(const ComplexMatrix& block, double reference, double tol)
{
    if (block.size() == 0 || reference == 0.0)
        return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(block);
    const auto& sv = svd.singularValues();
    return (sv.array() > tol * reference).count();
}

double block_conditioning(const ComplexMatrix& block)
{
    if (block.cols() == 0)
        return 1.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(block);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) / sv(0);
}

// Lowest-index independent columns of m, r of them, ascending; then the rest.
std::vector<Index> canonical_order(const ComplexMatrix& m, Index r, double reference, double tol,
                                   std::vector<std::string>& warnings)
{
    const Index n = m.cols();
    std::vector<Index> chosen;
    for (Index j = 0; j < n && static_cast<Index>(chosen.size()) < r; ++j) {
        auto candidate = chosen;
        candidate.push_back(j);
        if (rank_against(columns(m, candidate), reference, tol) ==
            static_cast<Index>(candidate.size()))
            chosen = std::move(candidate);
    }
    if (static_cast<Index>(chosen.size()) < r) {
        // Tolerant rank is not additive near the threshold; fall back to
        // Householder column pivoting.
        warnings.emplace_back("lowest-index line selection failed; used column-pivoted QR");
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
        const auto& perm = qr.colsPermutation().indices();
        chosen.assign(perm.data(), perm.data() + r);
        std::sort(chosen.begin(), chosen.end());
    }
    std::vector<Index> order = chosen;
    for (Index j = 0; j < n; ++j) {
        if (std::find(chosen.begin(), chosen.end(), j) == chosen.end())
            order.push_back(j);
    }
    return order;
}

struct Reduction {
    ComplexMatrix S;
    ComplexMatrix T;
    LineOrder perm;
    std::vector<std::string> warnings;
};

// Row-reduces (pivot, other) so that pivot -> [[I, T], [0, 0]] and
// other -> -[[S, 0], [-T^+, I]] after reordering lines. The ST form uses
// (B, A), the reverse form (A, B).
Reduction reduce(const ComplexMatrix& pivot, const ComplexMatrix& other,
                 const ReductionOptions& opts)
{
    const Index n = pivot.rows();
    Reduction out;
    ComplexMatrix joined(n, 2 * n);
    joined << pivot, other;
    const double reference = rank_info(joined, opts.rank_tol).sigma_max;
    const Index r = rank_info_against(pivot, reference, opts.rank_tol).rank;

    std::vector<Index> order;
    if (opts.order) {
        check_line_order(*opts.order, n);
        for (int l : *opts.order)
            order.push_back(l - 1);
        const std::vector<Index> lead(order.begin(), order.begin() + r);
        if (rank_against(columns(pivot, lead), reference, opts.rank_tol) != r) {
            out.warnings.emplace_back("requested line order has a singular leading block; "
                                      "using canonical order");
            order.clear();
        }
    }
    if (order.empty())
        order = canonical_order(pivot, r, reference, opts.rank_tol, out.warnings);

    out.perm.reserve(order.size());
    for (Index j : order)
        out.perm.push_back(static_cast<int>(j + 1));

    const std::vector<Index> lead(order.begin(), order.begin() + r);
    if (r > 0 && block_conditioning(columns(pivot, lead)) < kConditioningWarn)
        out.warnings.emplace_back("ill-conditioned reduction: leading block nearly singular");

    ComplexMatrix w(n, 2 * n);
    w << columns(pivot, order), columns(other, order);

    // Gauss-Jordan on the leading r columns, partial pivoting over rows.
    for (Index p = 0; p < r; ++p) {
        Index best = p;
        w.col(p).tail(n - p).cwiseAbs().maxCoeff(&best);
        best += p;
        if (best != p)
            w.row(p).swap(w.row(best));
        const Complex piv = w(p, p);
        if (std::abs(piv) == 0.0)
            throw AdmissibilityError("ST reduction met a zero pivot");
        w.row(p) /= piv;
        for (Index i = 0; i < n; ++i) {
            if (i != p && w(i, p) != Complex{})
                w.row(i) -= w(i, p) * w.row(p);
        }
    }
    w.block(r, 0, n - r, n).setZero();

    out.T = w.block(0, r, r, n - r);
    const ComplexMatrix x = w.rightCols(n);
    const Index m = n - r;
    ComplexMatrix s;
    if (m > 0) {
        ComplexMatrix z;
        try {
            z = solve(x.bottomRightCorner(m, m), x.bottomLeftCorner(m, r));
        } catch (const SingularityError&) {
            throw AdmissibilityError("ST reduction: complementary block of the other matrix is singular");
        }
        s = -(x.topLeftCorner(r, r) - x.topRightCorner(r, m) * z);
        const double tdefect = r > 0 ? max_abs(ComplexMatrix(-z - out.T.adjoint())) : 0.0;
        if (tdefect > 1e-8 * std::max(1.0, max_abs(out.T)))
            out.warnings.emplace_back("coupling block inconsistent with T^+ (defect " +
                                      std::to_string(tdefect) + ")");
    } else {
        s = -x.topLeftCorner(r, r);
    }

    const double defect = hermitian_defect(s);
    if (defect > kSymmetrizeTol * std::max(1.0, max_abs(s)))
        throw ValidationError("ST reduction produced a non-Hermitian S (defect " +
                              std::to_string(defect) + ")");
    out.S = (s + s.adjoint()) / 2.0;
    return out;
}

void check_form_shape(Index n, const ComplexMatrix& s, const ComplexMatrix& t, const LineOrder& perm)
{
    const Index r = s.rows();
    if (s.cols() != r || r > n)
        throw DimensionError("normal form: S must be square with at most n rows");
    if (t.rows() != r || t.cols() != n - r) {
        // An empty T may carry either zero rows or zero columns.
        if (!(t.size() == 0 && (r == 0 || r == n)))
            throw DimensionError("normal form: T must be r x (n - r)");
    }
    check_line_order(perm, n);
    require_finite(s, "normal form S");
    require_finite(t, "normal form T");
    if (hermitian_defect(s) > kSymmetrizeTol * std::max(1.0, max_abs(s)))
        throw ValidationError("normal form: S is not Hermitian");
}

// [[I, T], [0, 0]] and -[[S, 0], [-T^+, I]], columns placed at perm.
std::pair<ComplexMatrix, ComplexMatrix> template_pair(Index n, const ComplexMatrix& s,
                                                      const ComplexMatrix& t0, const LineOrder& perm)
{
    const Index r = s.rows();
    const Index m = n - r;
    const ComplexMatrix t = t0.size() == 0 ? ComplexMatrix::Zero(r, m) : t0;
    ComplexMatrix id_part = ComplexMatrix::Zero(n, n);
    id_part.topLeftCorner(r, r).setIdentity();
    id_part.topRightCorner(r, m) = t;

    ComplexMatrix s_part = ComplexMatrix::Zero(n, n);
    s_part.topLeftCorner(r, r) = -s;
    s_part.bottomLeftCorner(m, r) = t.adjoint();
    s_part.bottomRightCorner(m, m) = -ComplexMatrix::Identity(m, m);

    ComplexMatrix id_lines(n, n), s_lines(n, n);
    for (Index p = 0; p < n; ++p) {
        id_lines.col(perm[static_cast<std::size_t>(p)] - 1) = id_part.col(p);
        s_lines.col(perm[static_cast<std::size_t>(p)] - 1) = s_part.col(p);
    }
    return {id_lines, s_lines};
}

} // namespace

STForm to_st_form(const BoundaryPair& p, const ReductionOptions& opts)
{
    require_admissible(p, opts.rank_tol, "to_st_form");
    auto red = reduce(p.B(), p.A(), opts);
    return STForm{p.n(), std::move(red.S), std::move(red.T), std::move(red.perm),
                  std::move(red.warnings)};
}

ReverseSTForm to_reverse_st_form(const BoundaryPair& p, const ReductionOptions& opts)
{
    require_admissible(p, opts.rank_tol, "to_reverse_st_form");
    auto red = reduce(p.A(), p.B(), opts);
    return ReverseSTForm{p.n(), std::move(red.S), std::move(red.T), std::move(red.perm),
                         std::move(red.warnings)};
}

BoundaryPair assemble_boundary(const STForm& f)
{
    check_form_shape(f.n, f.S, f.T, f.perm);
    auto [b, a] = template_pair(f.n, f.S, f.T, f.perm);
    return BoundaryPair(std::move(a), std::move(b));
}

BoundaryPair assemble_boundary(const ReverseSTForm& f)
{
    check_form_shape(f.n, f.S, f.T, f.perm);
    auto [a, b] = template_pair(f.n, f.S, f.T, f.perm);
    return BoundaryPair(std::move(a), std::move(b));
}

std::string_view to_string(CaseLabel label)
{
    switch (label) {
    case CaseLabel::DirichletDisjoint: return "dirichlet-disjoint";
    case CaseLabel::ScaleInvariant: return "ft-scale-invariant";
    case CaseLabel::DeltaFamily: return "delta-family";
    case CaseLabel::DeltaPrimeFamily: return "delta-prime-family";
    case CaseLabel::MixedRank22: return "mixed-rank22";
    case CaseLabel::GenericRank23: return "generic-rank23";
    case CaseLabel::GenericRank32: return "generic-rank32";
    case CaseLabel::NeumannDisjoint: return "neumann-disjoint";
    case CaseLabel::GenericFull: return "generic-full";
    case CaseLabel::PartialScaleInvariant: return "partial-scale-invariant";
    case CaseLabel::RankTripleOnly: return "rank-triple";
    }
    return "unknown";
}

namespace {

CaseLabel label_for(Index n, Index ra, Index rb, Index rs)
{
    if (n != 2 && n != 3)
        return CaseLabel::RankTripleOnly;
    if (rb == 0)
        return CaseLabel::DirichletDisjoint;
    if (rb == 1)
        return rs == 0 ? CaseLabel::ScaleInvariant : CaseLabel::DeltaFamily;
    if (rb == n) {
        if (ra == 0)
            return CaseLabel::NeumannDisjoint;
        if (ra == 1)
            return CaseLabel::DeltaPrimeFamily;
        if (ra == n)
            return CaseLabel::GenericFull;
        return CaseLabel::GenericRank32;
    }
    // n = 3, rank(B) = 2
    if (ra == 1)
        return CaseLabel::PartialScaleInvariant;
    if (ra == 2)
        return CaseLabel::MixedRank22;
    return CaseLabel::GenericRank23;
}

} // namespace

VertexClass classify(const BoundaryPair& p, double tol)
{
    const auto st = to_st_form(p, ReductionOptions{tol, std::nullopt});
    VertexClass vc;
    vc.n = p.n();
    vc.warnings = st.warnings;

    ComplexMatrix joined(p.n(), 2 * p.n());
    joined << p.A(), p.B();
    const double scale = rank_info(joined, tol).sigma_max;
    const auto ia = rank_info_against(p.A(), scale, tol);
    const auto ib = rank_info_against(p.B(), scale, tol);
    const auto is = rank_info_against(st.S, std::max(1.0, max_abs(st.S)), tol);
    vc.r_A = ia.rank;
    vc.r_B = ib.rank;
    vc.r_S = is.rank;

    if (ia.ambiguous(tol))
        vc.warnings.emplace_back("rank(A) ambiguous: singular-value gap within 10x tolerance");
    if (ib.ambiguous(tol))
        vc.warnings.emplace_back("rank(B) ambiguous: singular-value gap within 10x tolerance");
    if (is.ambiguous(tol))
        vc.warnings.emplace_back("rank(S) ambiguous: singular-value gap within 10x tolerance");
    if (!vc.rank_identity_holds())
        vc.warnings.emplace_back("rank identity r_A + r_B = n + r_S violated");

    vc.label = label_for(vc.n, vc.r_A, vc.r_B, vc.r_S);
    return vc;
}

BoundaryPair make_delta(Index n, double s, const ComplexVector& t)
{
    if (n < 1 || t.size() != n - 1)
        throw DimensionError("make_delta: need n - 1 coupling coefficients");
    if (!std::isfinite(s))
        throw ValidationError("make_delta: non-finite strength");
    LineOrder perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    STForm f{n, ComplexMatrix::Constant(1, 1, s), t.transpose(), perm, {}};
    return assemble_boundary(f);
}

BoundaryPair make_delta_prime(Index n, double s_bar, const ComplexVector& coeffs)
{
    if (n < 1 || coeffs.size() != n - 1)
        throw DimensionError("make_delta_prime: need n - 1 coefficients");
    if (!std::isfinite(s_bar))
        throw ValidationError("make_delta_prime: non-finite strength");
    if (s_bar == 0.0)
        throw ParameterError("make_delta_prime: s_bar = 0 degenerates to a Neumann-like coupling");
    LineOrder perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    ReverseSTForm f{n, ComplexMatrix::Constant(1, 1, s_bar), coeffs.transpose(), perm, {}};
    return assemble_boundary(f);
}

BoundaryPair make_scale_invariant(Index n, const ComplexVector& t)
{
    return make_delta(n, 0.0, t);
}

ComplexMatrix permutation_matrix(const LineOrder& new_label)
{
    const auto n = static_cast<Index>(new_label.size());
    check_line_order(new_label, n);
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Index old = 0; old < n; ++old)
        p(new_label[static_cast<std::size_t>(old)] - 1, old) = 1.0;
    return p;
}

BoundaryPair permute_lines(const BoundaryPair& p, const LineOrder& new_label)
{
    const ComplexMatrix pm = permutation_matrix(new_label);
    if (pm.rows() != p.n())
        throw DimensionError("permute_lines: relabeling has wrong length");
    return BoundaryPair(p.A() * pm.transpose(), p.B() * pm.transpose());
}

} // namespace qvertex
