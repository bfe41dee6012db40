#include <qvertex/closed_form.hpp>

#include <array>
#include <cmath>
#include <numeric>

namespace qvertex {

using Eigen::Index;

namespace {

constexpr Complex I1{0.0, 1.0};
constexpr double kZeroCoeff = 1e-12;
constexpr double kRankPivot = 1e-6;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Rational amplitude num(k) / den(k), coefficients lowest power first.
struct Rational {
    std::vector<Complex> num;
    std::vector<Complex> den;

    Complex operator()(double k) const
    {
        if (k > 0.0) {
            Complex n{}, d{}, kp{1.0};
            for (std::size_t i = 0; i < std::max(num.size(), den.size()); ++i) {
                if (i < num.size())
                    n += num[i] * kp;
                if (i < den.size())
                    d += den[i] * kp;
                kp *= k;
            }
            return n / d;
        }
        // k = 0: ratio of the lowest non-vanishing denominator order.
        double scale = 0.0;
        for (const auto& c : den)
            scale = std::max(scale, std::abs(c));
        for (std::size_t m = 0; m < den.size(); ++m) {
            if (std::abs(den[m]) > kZeroCoeff * scale)
                return m < num.size() ? num[m] / den[m] : Complex{};
        }
        throw UnsupportedCaseError("closed form: vanishing denominator");
    }
};

LineOrder identity_order(Index n)
{
    LineOrder p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    return p;
}

// Amplitudes in template labels plus the template -> original map.
struct Evaluated {
    std::string formula;
    LineOrder relabel;
    std::vector<std::pair<std::array<int, 2>, Rational>> amplitudes;
    AmplitudeCoefficients coeffs;
};

using cases::DeltaLine;
using cases::DeltaPrimeLine;
using cases::DeltaPrimeY;
using cases::DeltaY;
using cases::GenericLine;
using cases::GenericY;
using cases::HalfGenericY;
using cases::MixedY;

Evaluated eval_delta_line(const DeltaLine& p)
{
    const Complex t = p.t;
    return {"delta_line", identity_order(2),
            {{{1, 2}, Rational{{0.0, 2.0 * t}, {I1 * p.s, 1.0 + std::norm(t)}}}},
            {}};
}

Evaluated eval_delta_prime_line(const DeltaPrimeLine& p)
{
    const double sbar = 1.0 / p.s;
    const Complex tbar = p.c;
    return {"delta_prime_line", identity_order(2),
            {{{1, 2}, Rational{{-2.0 * tbar}, {1.0 + std::norm(tbar), -I1 * sbar}}}},
            {}};
}

Evaluated eval_generic_line(const GenericLine& p)
{
    const double scale = std::max({std::abs(p.s11), std::abs(p.s22), std::abs(p.s12)});
    const double det = p.s11 * p.s22 - std::norm(p.s12);
    if (std::abs(det) <= kZeroCoeff * std::max(1.0, scale * scale) &&
        std::abs(p.s11) > kRankPivot * scale)
        return eval_delta_prime_line(DeltaPrimeLine{p.s11, p.s12 / p.s11});

    const double tr = p.s11 + p.s22;
    Evaluated e{"generic_line", identity_order(2),
                {{{1, 2}, Rational{{0.0, 2.0 * p.s12, 0.0}, {-I1 * det, -tr, I1}}}},
                {}};
    e.coeffs.trace = tr;
    e.coeffs.det = det;
    return e;
}

Evaluated eval_delta_y(const DeltaY& p)
{
    const Complex t2 = p.t2, t3 = p.t3;
    const Complex d1 = 1.0 + std::norm(t2) + std::norm(t3);
    const std::vector<Complex> den{I1 * p.s, d1};
    return {"delta_y", identity_order(3),
            {{{3, 1}, Rational{{0.0, 2.0 * std::conj(t3)}, den}},
             {{1, 2}, Rational{{0.0, 2.0 * t2}, den}},
             {{2, 3}, Rational{{0.0, 2.0 * std::conj(t2) * t3}, den}}},
            {}};
}

Evaluated eval_mixed_rank_one(double s, Complex c, Complex t1, Complex t2)
{
    const Complex cs = std::conj(c), t1s = std::conj(t1), t2s = std::conj(t2);
    const Complex tbar3s = c * t1s - t2s; // conj of tbar_3
    const Complex d0 = 1.0 + std::norm(c) + tbar3s * std::conj(tbar3s);
    const Complex d1 = 1.0 + std::norm(t1) + std::norm(t2);
    const std::vector<Complex> den{I1 * s * d0, d1};
    Evaluated e{"mixed_rank_one", identity_order(3),
                {{{3, 1}, Rational{{2.0 * I1 * cs * s * tbar3s, 2.0 * t1s}, den}},
                 {{1, 2}, Rational{{-2.0 * I1 * c * s, -2.0 * t2s * t1}, den}},
                 {{2, 3}, Rational{{-2.0 * I1 * s * (cs * t1 - t2), 2.0 * t2}, den}}},
                {}};
    e.coeffs.D0 = d0;
    e.coeffs.D1 = d1;
    return e;
}

Evaluated eval_mixed(const MixedY& p)
{
    const double scale = std::max({std::abs(p.s11), std::abs(p.s22), std::abs(p.s12)});
    const double det = p.s11 * p.s22 - std::norm(p.s12);
    const bool rank_one = scale > 0.0 && std::abs(det) <= kZeroCoeff * scale * scale;
    if (rank_one && std::abs(p.s11) > kRankPivot * scale)
        return eval_mixed_rank_one(p.s11, p.s12 / p.s11, p.t1, p.t2);

    const Complex t1 = p.t1, t2 = p.t2, t1s = std::conj(t1), t2s = std::conj(t2);
    const Complex s12 = p.s12, s12s = std::conj(s12);
    const Complex e0 = -det;
    const Complex e1 = (p.s11 + p.s22) + p.s22 * t1s * t1 - s12 * t1s * t2 - s12s * t2s * t1 +
                       p.s11 * t2s * t2;
    const Complex e2 = 1.0 + std::norm(t1) + std::norm(t2);
    const std::vector<Complex> den{e0, I1 * e1, e2};
    Evaluated e{"mixed_general", identity_order(3),
                {{{3, 1}, Rational{{0.0, 2.0 * I1 * (p.s22 * t1s - s12s * t2s), 2.0 * t1s}, den}},
                 {{1, 2}, Rational{{0.0, -2.0 * I1 * s12, -2.0 * t2s * t1}, den}},
                 {{2, 3}, Rational{{0.0, -2.0 * I1 * (s12s * t1 - p.s11 * t2), 2.0 * t2}, den}}},
                {}};
    e.coeffs.E0 = e0;
    e.coeffs.E1 = e1;
    e.coeffs.E2 = e2;
    e.coeffs.trace = p.s11 + p.s22;
    e.coeffs.det = det;
    return e;
}

// The printed n = 3, rank(B) = 3 formulas carry an overall sign opposite to
// the matrix formula; the negated forms are used here.
Evaluated eval_delta_prime_y(const DeltaPrimeY& p)
{
    const Complex c = p.c, d = p.d;
    const std::vector<Complex> den{p.s * (1.0 + std::norm(c) + std::norm(d)), -I1};
    return {"delta_prime_y", identity_order(3),
            {{{3, 1}, Rational{{-2.0 * std::conj(d) * p.s}, den}},
             {{1, 2}, Rational{{-2.0 * c * p.s}, den}},
             {{2, 3}, Rational{{-2.0 * std::conj(c) * d * p.s}, den}}},
            {}};
}

Evaluated eval_half_generic(const HalfGenericY& p)
{
    const Complex c = p.c, d = p.d, q = p.q;
    const Complex cs = std::conj(c), ds = std::conj(d), qs = std::conj(q);
    const double g = p.s * p.r - std::norm(q);
    const Complex f0 = -g * (1.0 + std::norm(c) + std::norm(d));
    const Complex f1 = p.s + p.r + cs * c * p.s + cs * d * q + ds * c * qs + ds * d * p.r;
    const std::vector<Complex> den{f0, I1 * f1, 1.0};
    Evaluated e{"half_generic_y", identity_order(3),
                {{{3, 1}, Rational{{2.0 * cs * g, -2.0 * I1 * (cs * p.s + ds * qs)}, den}},
                 {{1, 2}, Rational{{-2.0 * c * ds * g, -2.0 * I1 * q}, den}},
                 {{2, 3}, Rational{{2.0 * d * g, -2.0 * I1 * (c * qs + d * p.r)}, den}}},
                {}};
    e.coeffs.F0 = f0;
    e.coeffs.F1 = f1;
    return e;
}

Evaluated eval_generic_full(const ComplexMatrix& s)
{
    // Cofactors by cyclic indexing, which absorbs the (-1)^(i+j) sign for 3 x 3.
    ComplexMatrix cof(3, 3);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            const Index r0 = (i + 1) % 3, r1 = (i + 2) % 3;
            const Index c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            cof(i, j) = s(r0, c0) * s(r1, c1) - s(r0, c1) * s(r1, c0);
        }
    }
    const ComplexMatrix adjugate = cof.transpose();
    const ComplexMatrix minors = -adjugate;
    const Complex tr = s.trace();
    const Complex det = s.determinant();
    const Complex msum = cof(0, 0) + cof(1, 1) + cof(2, 2);
    const std::vector<Complex> den{-I1 * det, -msum, I1 * tr, 1.0};

    Evaluated e{"generic_3x3", identity_order(3), {}, {}};
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j)
                continue;
            e.amplitudes.push_back(
                {{i, j}, Rational{{0.0, 2.0 * minors(i - 1, j - 1), -2.0 * I1 * s(i - 1, j - 1)}, den}});
        }
    }
    e.coeffs.trace = tr;
    e.coeffs.det = det;
    e.coeffs.principal_minor_sum = msum;
    e.coeffs.signed_minors = minors;
    return e;
}

ComplexMatrix reorder(const ComplexMatrix& s, const std::array<Index, 3>& sigma)
{
    ComplexMatrix out(3, 3);
    for (Index a = 0; a < 3; ++a)
        for (Index b = 0; b < 3; ++b)
            out(a, b) = s(sigma[static_cast<std::size_t>(a)], sigma[static_cast<std::size_t>(b)]);
    return out;
}

LineOrder to_order(const std::array<Index, 3>& sigma)
{
    return {static_cast<int>(sigma[0] + 1), static_cast<int>(sigma[1] + 1),
            static_cast<int>(sigma[2] + 1)};
}

Evaluated eval_generic_y(const GenericY& p)
{
    const ComplexMatrix s = case_st_form(p).S;
    const Index rank = numerical_rank(s, kDefaultRankTol);
    const double scale = max_abs(s);

    if (rank == 0) {
        Evaluated e{"neumann", identity_order(3), {}, {}};
        for (auto pr : {std::array<int, 2>{3, 1}, {1, 2}, {2, 3}})
            e.amplitudes.push_back({pr, Rational{{0.0}, {1.0}}});
        return e;
    }
    if (rank == 3)
        return eval_generic_full(s);

    if (rank == 1) {
        // Lead with the first line carrying a non-negligible diagonal entry.
        Index a = 0;
        while (std::abs(s(a, a)) <= kRankPivot * scale)
            ++a;
        std::array<Index, 3> sigma{a, a == 0 ? 1 : 0, a == 2 ? 1 : 2};
        const ComplexMatrix sp = reorder(s, sigma);
        const double lead = sp(0, 0).real();
        auto e = eval_delta_prime_y(DeltaPrimeY{lead, sp(0, 1) / lead, sp(0, 2) / lead});
        e.relabel = to_order(sigma);
        return e;
    }

    // rank 2: a pair of lines with an invertible principal 2 x 2 block.
    const std::array<std::array<Index, 3>, 3> choices{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    std::array<Index, 3> sigma = choices[0];
    double best = -1.0;
    for (const auto& ch : choices) {
        const ComplexMatrix sp = reorder(s, ch);
        const double g = std::abs(sp.topLeftCorner(2, 2).determinant());
        if (ch == choices[0] && g > kRankPivot * scale * scale) {
            sigma = ch;
            break;
        }
        if (g > best) {
            best = g;
            sigma = ch;
        }
    }
    const ComplexMatrix sp = reorder(s, sigma);
    ComplexMatrix lead(2, 2);
    lead << sp(0, 0), std::conj(sp(0, 1)), sp(0, 1), sp(1, 1);
    ComplexVector row(2);
    row << sp(2, 0), sp(2, 1);
    const ComplexMatrix coef = solve(lead, row); // (c^*, d^*)
    auto e = eval_half_generic(HalfGenericY{sp(0, 0).real(), sp(0, 1), sp(1, 1).real(),
                                            std::conj(coef(0, 0)), std::conj(coef(1, 0)),
                                            std::nullopt});
    e.relabel = to_order(sigma);
    return e;
}

Evaluated evaluate(const CaseParameters& params)
{
    // Reject parameter sets that violate their template first.
    (void)case_st_form(params);
    return std::visit(overloaded{
                          [](const DeltaLine& p) { return eval_delta_line(p); },
                          [](const DeltaPrimeLine& p) { return eval_delta_prime_line(p); },
                          [](const GenericLine& p) { return eval_generic_line(p); },
                          [](const DeltaY& p) { return eval_delta_y(p); },
                          [](const MixedY& p) { return eval_mixed(p); },
                          [](const DeltaPrimeY& p) { return eval_delta_prime_y(p); },
                          [](const HalfGenericY& p) { return eval_half_generic(p); },
                          [](const GenericY& p) { return eval_generic_y(p); },
                      },
                      params);
}

ClosedFormAmplitudes materialize(const Evaluated& e, const LineOrder& outer, double k,
                                 const BoundaryPair& vertex)
{
    if (!(k >= 0.0) || !std::isfinite(k))
        throw ValidationError("closed_form_amplitudes: wave number must be finite and >= 0");
    ClosedFormAmplitudes out;
    out.k = k;
    out.formula = e.formula;
    out.coefficients = e.coeffs;
    // template slot -> case line (e.relabel) -> vertex line (outer)
    out.relabel.resize(e.relabel.size());
    for (std::size_t p = 0; p < e.relabel.size(); ++p)
        out.relabel[p] = outer[static_cast<std::size_t>(e.relabel[p] - 1)];
    for (const auto& [pair, amp] : e.amplitudes) {
        out.transmissions.push_back(Transmission{out.relabel[static_cast<std::size_t>(pair[0] - 1)],
                                                 out.relabel[static_cast<std::size_t>(pair[1] - 1)],
                                                 amp(k)});
    }
    out.vertex_class = classify(vertex);
    if (k > 0.0)
        out.reflections = ComplexVector(s_matrix(vertex, k).M.diagonal());
    return out;
}

} // namespace

bool ClosedFormAmplitudes::has(int i, int j) const
{
    for (const auto& t : transmissions)
        if (t.to == i && t.from == j)
            return true;
    return false;
}

Complex ClosedFormAmplitudes::T(int i, int j) const
{
    for (const auto& t : transmissions)
        if (t.to == i && t.from == j)
            return t.value;
    throw IndexError("closed form " + formula + " gives no T_" + std::to_string(i) +
                     std::to_string(j));
}

ClosedFormAmplitudes closed_form_amplitudes(const CaseParameters& params, double k)
{
    const auto e = evaluate(params);
    return materialize(e, identity_order(case_lines(params)), k, make_case(params));
}

CaseParameters case_from_st_form(const STForm& f)
{
    const Index r = f.rank();
    const auto& s = f.S;
    if (f.n == 2 && r == 1)
        return cases::DeltaLine{s(0, 0).real(), f.T(0, 0)};
    if (f.n == 2 && r == 2)
        return cases::GenericLine{s(0, 0).real(), s(0, 1), s(1, 1).real()};
    if (f.n == 3 && r == 1)
        return cases::DeltaY{s(0, 0).real(), f.T(0, 0), f.T(0, 1)};
    if (f.n == 3 && r == 2)
        return cases::MixedY{s(0, 0).real(), s(0, 1), s(1, 1).real(), f.T(0, 0), f.T(1, 0), false};
    if (f.n == 3 && r == 3)
        return cases::GenericY{s(0, 0).real(), s(0, 1), s(0, 2), s(1, 1).real(), s(1, 2), s(2, 2).real()};
    throw UnsupportedCaseError("no closed form for n = " + std::to_string(f.n) +
                               ", rank(B) = " + std::to_string(r));
}

ClosedFormAmplitudes closed_form_amplitudes(const BoundaryPair& p, double k)
{
    if (p.n() != 2 && p.n() != 3)
        throw UnsupportedCaseError("closed forms exist only for n = 2 and n = 3");
    const auto st = to_st_form(p);
    const auto params = case_from_st_form(st);
    return materialize(evaluate(params), st.perm, k, p);
}

} // namespace qvertex
