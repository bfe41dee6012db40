#pragma once

// Per-pair spectral character of a vertex and synthesis of Y-junction
// branching filters from the delta / delta-prime families.

#include <qvertex/cases.hpp>
#include <qvertex/scattering.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qvertex {

enum class CouplingKind {
    DeltaLike,      // high-pass: T(0) blocked
    DeltaPrimeLike, // low-pass: T(infinity) blocked
    ScaleInvariant, // all-pass, k-independent
    Mixed,          // band-shaped
    Disconnected,
};

std::string_view to_string(CouplingKind kind);
/// Short symbol used in patterns: "δ", "δ′", "FT", "mixed", "0".
std::string_view symbol(CouplingKind kind);

inline constexpr double kDefaultEpsilon = 1e-3;
/// Pairs whose transmission never exceeds this are disconnected.
inline constexpr double kDisconnectedTol = 1e-9;

struct PairCoupling {
    int i = 0;
    int j = 0;
    CouplingKind kind = CouplingKind::Disconnected;
    double t0 = 0.0;        // max(|T_ij(0)|, |T_ji(0)|)
    double tinf = 0.0;      // same at k -> infinity
    double peak = 0.0;      // largest magnitude over limits and grid
    double variation = 0.0; // (max - min) / peak over the grid
    double epsilon = 0.0;
};

/// Decision rule on the limit magnitudes. epsilon is relative to the peak:
/// exactly one blocked end gives delta / delta-prime, both blocked is
/// mixed, neither blocked is scale-invariant when flat and otherwise
/// follows the dominant end.
CouplingKind decide_kind(double t0, double tinf, double peak, double variation, double epsilon);

struct CouplingReport {
    std::vector<PairCoupling> pairs;
    std::vector<std::string> warnings;

    const PairCoupling& pair(int i, int j) const;
    /// Kinds joined by "–", deltas first, e.g. "δ–δ–δ′".
    std::string pattern() const;
};

/// Pairs in order (1,2), (2,3), (3,1) for n = 3; (1,2) for n = 2;
/// lexicographic otherwise.
std::vector<std::array<int, 2>> coupling_pairs(Eigen::Index n);

CouplingReport pair_coupling_class(const BoundaryPair& p, double epsilon = kDefaultEpsilon);

enum class PassBand { High, Low };

/// Requested band for pairs (1,2), (2,3), (3,1).
struct FilterSpec {
    std::array<PassBand, 3> bands{PassBand::High, PassBand::High, PassBand::High};
    std::array<std::optional<double>, 3> targets{};
};

struct FilterDesign {
    BoundaryPair vertex;
    std::string recipe;
    CaseParameters base;   // family member before relabeling
    LineOrder relabel;     // base line l becomes relabel[l - 1]
    double epsilon = kDefaultEpsilon;
    CouplingReport achieved;

    bool matches(const FilterSpec& spec) const;
};

/// all high -> delta vertex, all low -> delta-prime vertex, one low ->
/// delta-delta-delta' member of the rank-2/2 family, one high ->
/// delta'-delta'-delta member; the odd pair is moved into place by
/// relabeling lines.
FilterDesign design_branching_filter(const FilterSpec& spec);

} // namespace qvertex
