#pragma once

// Closed-form transmission amplitudes for the n = 2 and n = 3 cases. These
// are an independent route to S(k); the matrix formula in scattering.hpp is
// the reference they are checked against.

#include <qvertex/cases.hpp>
#include <qvertex/scattering.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qvertex {

/// T_{to, from} with 1-based lines.
struct Transmission {
    int to = 0;
    int from = 0;
    Complex value;
};

/// Intermediate scalars of the formula that was used; unset fields do not
/// belong to it. signed_minors(i, j) = -adj(S)_ij is the minor term of the
/// general 3 x 3 formula.
struct AmplitudeCoefficients {
    std::optional<Complex> D0, D1;
    std::optional<Complex> E0, E1, E2;
    std::optional<Complex> F0, F1;
    std::optional<Complex> trace, det, principal_minor_sum;
    std::optional<ComplexMatrix> signed_minors;
};

struct ClosedFormAmplitudes {
    double k = 0.0;
    std::string formula;       // e.g. "delta_y", "mixed_rank_one", "generic_3x3"
    LineOrder relabel;         // template slot p is original line relabel[p]
    VertexClass vertex_class;
    std::vector<Transmission> transmissions;
    AmplitudeCoefficients coefficients;
    /// Diagonal of S(k) from the matrix formula; only for k > 0.
    std::optional<ComplexVector> reflections;

    bool has(int i, int j) const;
    /// Throws IndexError when the formula does not give T_ij.
    Complex T(int i, int j) const;
};

/// k >= 0; k = 0 returns the finite limit of each rational amplitude.
ClosedFormAmplitudes closed_form_amplitudes(const CaseParameters& params, double k);

/// Recovers the case from the ST form of p (any line order) and maps the
/// amplitudes back to p's labels. Throws UnsupportedCaseError for n >= 4
/// and for the Dirichlet case.
ClosedFormAmplitudes closed_form_amplitudes(const BoundaryPair& p, double k);

/// Template parameters read off an ST form with r_B >= 1 and n in {2, 3}.
CaseParameters case_from_st_form(const STForm& f);

} // namespace qvertex
