#pragma once

// Named parameter sets for the displayed n = 2 and n = 3 vertex templates.
// Each struct builds its template exactly via make_case().

#include <qvertex/vertex.hpp>

#include <variant>

namespace qvertex {
namespace cases {

/// n = 2, rank(B) = 1: phi'_1 + t phi'_2 = s phi_1, phi_2 = t^* phi_1.
/// s = 0 is the scale-invariant coupling.
struct DeltaLine {
    double s = 0.0;
    Complex t{1.0, 0.0};
};

/// n = 2, rank(B) = 2, rank(A) = 1: psi' = s [[1, c], [c^*, |c|^2]] psi.
struct DeltaPrimeLine {
    double s = 1.0;
    Complex c{1.0, 0.0};
};

/// n = 2, rank(B) = 2: psi' = S psi with a full Hermitian S.
struct GenericLine {
    double s11 = 0.0;
    Complex s12{};
    double s22 = 0.0;
};

/// n = 3, rank(B) = 1.
struct DeltaY {
    double s = 0.0;
    Complex t2{1.0, 0.0};
    Complex t3{1.0, 0.0};
};

/// n = 3, rank(B) = 2 with S = [[s11, s12], [s12^*, s22]] and T = (t1, t2)^T.
struct MixedY {
    double s11 = 0.0;
    Complex s12{};
    double s22 = 0.0;
    Complex t1{};
    Complex t2{};
    /// When set, make_case() rejects S unless s11 s22 = |s12|^2.
    bool rank_one = false;

    /// S = s [[1, c], [c^*, |c|^2]].
    static MixedY from_rank_one(double s, Complex c, Complex t1, Complex t2);
};

/// n = 3, rank(B) = 3, rank(A) = 1: S = s u u^+ with u = (1, c^*, d^*).
struct DeltaPrimeY {
    double s = 1.0;
    Complex c{1.0, 0.0};
    Complex d{1.0, 0.0};
};

/// n = 3, rank(B) = 3, rank(A) = 2: leading block [[s, q], [q^*, r]] and a
/// third row (c^*, d^*) times the first two. f, when given, must equal
/// |c|^2 s + c^* d q + d^* c q^* + |d|^2 r.
struct HalfGenericY {
    double s = 1.0;
    Complex q{};
    double r = 1.0;
    Complex c{};
    Complex d{};
    std::optional<Complex> f;
};

/// n = 3, rank(B) = 3: psi' = S psi with a full Hermitian S.
struct GenericY {
    double s11 = 0.0;
    Complex s12{};
    Complex s13{};
    double s22 = 0.0;
    Complex s23{};
    double s33 = 0.0;
};

} // namespace cases

using CaseParameters =
    std::variant<cases::DeltaLine, cases::DeltaPrimeLine, cases::GenericLine, cases::DeltaY,
                 cases::MixedY, cases::DeltaPrimeY, cases::HalfGenericY, cases::GenericY>;

/// Stable identifier used in JSON ("delta_line", "mixed_y", ...).
std::string_view case_name(const CaseParameters& params);

Eigen::Index case_lines(const CaseParameters& params);

/// The template's ST form (identity line order).
STForm case_st_form(const CaseParameters& params);

BoundaryPair make_case(const CaseParameters& params);

} // namespace qvertex
