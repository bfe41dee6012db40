#include <qvertex/filter.hpp>
#include <qvertex/presets.hpp>

#include <algorithm>
#include <cmath>

namespace qvertex {

using Eigen::Index;

std::string_view to_string(CouplingKind kind)
{
    switch (kind) {
    case CouplingKind::DeltaLike: return "delta_like";
    case CouplingKind::DeltaPrimeLike: return "delta_prime_like";
    case CouplingKind::ScaleInvariant: return "scale_invariant";
    case CouplingKind::Mixed: return "mixed";
    case CouplingKind::Disconnected: return "disconnected";
    }
    return "unknown";
}

std::string_view symbol(CouplingKind kind)
{
    switch (kind) {
    case CouplingKind::DeltaLike: return "δ";
    case CouplingKind::DeltaPrimeLike: return "δ′";
    case CouplingKind::ScaleInvariant: return "FT";
    case CouplingKind::Mixed: return "mixed";
    case CouplingKind::Disconnected: return "0";
    }
    return "?";
}

CouplingKind decide_kind(double t0, double tinf, double peak, double variation, double epsilon)
{
    if (!(epsilon > 0.0))
        throw ValidationError("pair classification: epsilon must be positive");
    if (peak <= kDisconnectedTol)
        return CouplingKind::Disconnected;
    const bool low_blocked = t0 <= epsilon * peak;
    const bool high_blocked = tinf <= epsilon * peak;
    if (low_blocked && !high_blocked)
        return CouplingKind::DeltaLike;
    if (high_blocked && !low_blocked)
        return CouplingKind::DeltaPrimeLike;
    if (low_blocked && high_blocked)
        return CouplingKind::Mixed;
    if (variation <= epsilon)
        return CouplingKind::ScaleInvariant;
    if (std::abs(t0 - tinf) <= epsilon * peak)
        return CouplingKind::Mixed;
    return t0 > tinf ? CouplingKind::DeltaPrimeLike : CouplingKind::DeltaLike;
}

const PairCoupling& CouplingReport::pair(int i, int j) const
{
    for (const auto& p : pairs)
        if ((p.i == i && p.j == j) || (p.i == j && p.j == i))
            return p;
    throw IndexError("no pair (" + std::to_string(i) + "," + std::to_string(j) + ") in report");
}

std::string CouplingReport::pattern() const
{
    std::vector<CouplingKind> kinds;
    for (const auto& p : pairs)
        kinds.push_back(p.kind);
    std::stable_sort(kinds.begin(), kinds.end(),
                     [](CouplingKind a, CouplingKind b) { return static_cast<int>(a) < static_cast<int>(b); });
    std::string out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i)
            out += "–";
        out += symbol(kinds[i]);
    }
    return out;
}

std::vector<std::array<int, 2>> coupling_pairs(Index n)
{
    if (n == 3)
        return {{1, 2}, {2, 3}, {3, 1}};
    std::vector<std::array<int, 2>> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            out.push_back({i, j});
    return out;
}

CouplingReport pair_coupling_class(const BoundaryPair& p, double epsilon)
{
    require_admissible(p, kDefaultRankTol, "pair_coupling_class");
    CouplingReport report;
    const auto limits = asymptotic_limits(p);
    report.warnings = limits.warnings;

    constexpr int kGrid = 20;
    std::vector<ComplexMatrix> grid;
    grid.reserve(kGrid);
    for (int g = 0; g < kGrid; ++g) {
        const double k = std::pow(10.0, -3.0 + 6.0 * g / (kGrid - 1));
        grid.push_back(s_matrix(p, k).M);
    }

    auto both = [](const ComplexMatrix& m, int i, int j) {
        return std::max(std::abs(m(i - 1, j - 1)), std::abs(m(j - 1, i - 1)));
    };

    for (const auto& [i, j] : coupling_pairs(p.n())) {
        PairCoupling pc;
        pc.i = i;
        pc.j = j;
        pc.epsilon = epsilon;
        pc.t0 = both(limits.at_zero, i, j);
        pc.tinf = both(limits.at_infinity, i, j);
        double lo = INFINITY, hi = 0.0;
        for (const auto& m : grid) {
            const double v = both(m, i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        pc.peak = std::max({pc.t0, pc.tinf, hi});
        pc.variation = pc.peak > 0.0 ? (hi - lo) / pc.peak : 0.0;
        pc.kind = decide_kind(pc.t0, pc.tinf, pc.peak, pc.variation, epsilon);
        report.pairs.push_back(pc);
    }
    return report;
}

bool FilterDesign::matches(const FilterSpec& spec) const
{
    const auto pairs = coupling_pairs(3);
    for (std::size_t a = 0; a < 3; ++a) {
        const auto want = spec.bands[a] == PassBand::High ? CouplingKind::DeltaLike
                                                         : CouplingKind::DeltaPrimeLike;
        if (achieved.pair(pairs[a][0], pairs[a][1]).kind != want)
            return false;
    }
    return true;
}

namespace {

// Relabeling sending base lines (u, v) to target pair (a, b), w to the rest.
LineOrder send_pair(int u, int v, int a, int b)
{
    const int w = 6 - u - v;
    const int c = 6 - a - b;
    LineOrder order(3);
    order[static_cast<std::size_t>(u - 1)] = a;
    order[static_cast<std::size_t>(v - 1)] = b;
    order[static_cast<std::size_t>(w - 1)] = c;
    return order;
}

} // namespace

FilterDesign design_branching_filter(const FilterSpec& spec)
{
    const auto pairs = coupling_pairs(3);
    int highs = 0;
    std::size_t odd_high = 0, odd_low = 0;
    for (std::size_t a = 0; a < 3; ++a) {
        if (spec.bands[a] == PassBand::High) {
            ++highs;
            odd_high = a;
        } else {
            odd_low = a;
        }
    }

    std::string recipe;
    CaseParameters base = preset("fig2").params;
    LineOrder relabel{1, 2, 3};
    double eps = kDefaultEpsilon;
    switch (highs) {
    case 3:
        recipe = "all-delta";
        break;
    case 0:
        recipe = "all-delta-prime";
        base = cases::DeltaPrimeY{1.0, 1.0, 1.0};
        break;
    case 2:
        // base low-pass pair is (1,2)
        recipe = "delta-delta-delta'";
        base = preset("fig4").params;
        relabel = send_pair(1, 2, pairs[odd_low][0], pairs[odd_low][1]);
        break;
    default:
        // base high-pass pair is (3,1); loose epsilon since T31(0) is only small
        recipe = "delta'-delta'-delta";
        base = preset("fig5").params;
        relabel = send_pair(3, 1, pairs[odd_high][0], pairs[odd_high][1]);
        eps = 0.2;
        break;
    }

    auto vertex = permute_lines(make_case(base), relabel);
    auto achieved = pair_coupling_class(vertex, eps);
    return FilterDesign{std::move(vertex), recipe, base, relabel, eps, std::move(achieved)};
}

} // namespace qvertex
