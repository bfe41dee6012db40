#pragma once

// Vertex boundary conditions A psi + B psi' = 0 on an n-line star graph and
// their ST / reverse-ST normal forms.
//
// Line labels in this API are 1-based, matching the physics notation
// (T_12, R_3, ...). A LineOrder lists, for each slot of a normal-form
// template, the original line placed there.

#include <qvertex/matrix.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qvertex {

using LineOrder = std::vector<int>;

/// Boundary matrices of a vertex. Construction checks shape and finiteness
/// only; admissibility is checked by validate_admissible().
class BoundaryPair {
  public:
    BoundaryPair(ComplexMatrix a, ComplexMatrix b);

    const ComplexMatrix& A() const noexcept { return a_; }
    const ComplexMatrix& B() const noexcept { return b_; }
    Eigen::Index n() const noexcept { return a_.rows(); }

  private:
    ComplexMatrix a_;
    ComplexMatrix b_;
};

struct AdmissibilityReport {
    bool ok = false;
    Eigen::Index rank_AB = 0;      // rank of the n x 2n block [A | B]
    double hermitian_defect = 0.0; // max |(AB^+) - (AB^+)^+|
    double hermitian_tol = 0.0;
    std::string violation;         // empty when ok

    explicit operator bool() const noexcept { return ok; }
};

/// Self-adjointness: rank [A | B] = n and A B^+ Hermitian. The Hermitian
/// test is scaled by max(1, |A|max |B|max n).
AdmissibilityReport validate_admissible(const BoundaryPair& p, double tol = kDefaultRankTol);

/// Throws AdmissibilityError carrying the violation report.
void require_admissible(const BoundaryPair& p, double tol, std::string_view who);

/// A = -[[S, 0], [-T^+, I]], B = [[I, T], [0, 0]] after reordering lines by perm.
struct STForm {
    Eigen::Index n = 0;
    ComplexMatrix S; // r_B x r_B, Hermitian
    ComplexMatrix T; // r_B x (n - r_B)
    LineOrder perm;
    std::vector<std::string> warnings;

    Eigen::Index rank() const noexcept { return S.rows(); }
};

/// A = [[I, Tbar], [0, 0]], B = -[[Sbar, 0], [-Tbar^+, I]] after reordering.
struct ReverseSTForm {
    Eigen::Index n = 0;
    ComplexMatrix S;
    ComplexMatrix T;
    LineOrder perm;
    std::vector<std::string> warnings;

    Eigen::Index rank() const noexcept { return S.rows(); }
};

struct ReductionOptions {
    double rank_tol = kDefaultRankTol;
    /// Preferred line order. Used when its leading r lines carry an
    /// invertible block; otherwise the canonical order is used and a
    /// warning is attached.
    std::optional<LineOrder> order;
};

/// Canonical order: the lowest-index set of lines whose B columns are
/// independent, ascending, followed by the remaining lines ascending.
/// The result does not depend on left multiplication of (A, B).
STForm to_st_form(const BoundaryPair& p, const ReductionOptions& opts = {});

ReverseSTForm to_reverse_st_form(const BoundaryPair& p, const ReductionOptions& opts = {});

BoundaryPair assemble_boundary(const STForm& f);
BoundaryPair assemble_boundary(const ReverseSTForm& f);

enum class CaseLabel {
    DirichletDisjoint,
    ScaleInvariant,
    DeltaFamily,
    DeltaPrimeFamily,
    MixedRank22,
    GenericRank23,
    GenericRank32,
    NeumannDisjoint,
    GenericFull,
    PartialScaleInvariant,
    RankTripleOnly,
};

std::string_view to_string(CaseLabel label);

struct VertexClass {
    Eigen::Index n = 0;
    Eigen::Index r_A = 0;
    Eigen::Index r_B = 0;
    Eigen::Index r_S = 0;
    CaseLabel label = CaseLabel::RankTripleOnly;
    std::vector<std::string> warnings;

    bool rank_identity_holds() const noexcept { return r_A + r_B == n + r_S; }
};

/// Ranks of A, B and of the ST block S, plus the n = 2 / n = 3 case label.
/// Borderline singular values and a broken rank identity are reported as
/// warnings rather than errors.
VertexClass classify(const BoundaryPair& p, double tol = kDefaultRankTol);

/// delta coupling: ST form with r_B = 1, S = [s], T = t^T (length n - 1).
BoundaryPair make_delta(Eigen::Index n, double s, const ComplexVector& t);

/// delta-prime coupling: reverse ST form with Sbar = [s_bar], Tbar = coeffs^T.
BoundaryPair make_delta_prime(Eigen::Index n, double s_bar, const ComplexVector& coeffs);

/// Fulop-Tsutsui scale-invariant coupling: make_delta with s = 0.
BoundaryPair make_scale_invariant(Eigen::Index n, const ComplexVector& t);

/// Matrix P with P e_old = e_new for new_label[old - 1] = new.
ComplexMatrix permutation_matrix(const LineOrder& new_label);

/// Renames line l to new_label[l - 1]. The scattering matrix transforms
/// as S -> P S P^T.
BoundaryPair permute_lines(const BoundaryPair& p, const LineOrder& new_label);

/// Throws ValidationError unless order is a permutation of 1..n.
void check_line_order(const LineOrder& order, Eigen::Index n);

} // namespace qvertex
