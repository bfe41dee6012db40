#pragma once

// Test-side oracles. Nothing here calls into the library's reduction or
// scattering code, so agreement with it is meaningful.

#include <qvertex/cases.hpp>
#include <qvertex/vertex.hpp>

#include <string>

#include <random>
#include <vector>

namespace qvt {

using qvertex::BoundaryPair;
using qvertex::Complex;
using qvertex::ComplexMatrix;
using qvertex::ComplexVector;
using qvertex::LineOrder;
using Eigen::Index;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
Complex random_complex(Rng& rng, double scale = 1.0);
ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0);
ComplexMatrix random_hermitian(Rng& rng, Index n, double scale = 1.0);
/// Well conditioned: identity-dominated plus a random perturbation, then scrambled.
ComplexMatrix random_invertible(Rng& rng, Index n);
/// Product of n x r and r x n random factors.
ComplexMatrix random_rank(Rng& rng, Index n, Index r);
LineOrder random_order(Rng& rng, Index n);

/// U = Q diag(exp(i phase)) Q^+ with A = U - I, B = i (U + I). S(1) = U.
/// Phases exactly 0 / pi give Neumann / Dirichlet channels.
struct UnitaryVertex {
    ComplexMatrix Q;
    std::vector<double> phases;
    ComplexMatrix A;
    ComplexMatrix B;

    BoundaryPair pair() const { return BoundaryPair(A, B); }
    /// Exact S(k) from the eigenphases; valid for complex k too.
    ComplexMatrix s(Complex k) const;
};

UnitaryVertex random_unitary_vertex(Rng& rng, Index n, int dirichlet = 0, int neumann = 0);

/// ST template built directly: A = -[[S, 0], [-T^+, I]], B = [[I, T], [0, 0]],
/// template column p placed at line perm[p].
BoundaryPair st_template(const ComplexMatrix& S, const ComplexMatrix& T, const LineOrder& perm);
BoundaryPair reverse_st_template(const ComplexMatrix& Sbar, const ComplexMatrix& Tbar,
                                 const LineOrder& perm);

/// Same vertex, left-multiplied by a random invertible matrix.
BoundaryPair scramble(Rng& rng, const BoundaryPair& p);

/// Mixture of unitary-phase vertices and scrambled ST templates of every rank.
BoundaryPair random_admissible(Rng& rng, Index n);

/// -(A + ikB)^-1 (A - ikB) by full-pivot LU.
ComplexMatrix oracle_s(const ComplexMatrix& A, const ComplexMatrix& B, Complex k);

/// One random member of a formula-bearing case family together with the
/// template blocks (S, T) written out independently of the library.
struct CaseDraw {
    qvertex::CaseParameters params;
    ComplexMatrix S;
    ComplexMatrix T;

    BoundaryPair oracle_pair() const;
};

/// delta_line, delta_prime_line, generic_line, delta_y, mixed_rank_one,
/// mixed_general, delta_prime_y, half_generic_y, generic_y.
const std::vector<std::string>& case_families();
CaseDraw draw_case(Rng& rng, const std::string& family);

std::vector<double> log_points(double lo, double hi, int count);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Fresh path inside a per-process scratch directory; the file does not exist.
std::string scratch_path(const std::string& name);

std::string data_path(const std::string& name);

} // namespace qvt
