#include <qvertex/cases.hpp>

#include <cmath>
#include <numeric>

namespace qvertex {

using Eigen::Index;

namespace cases {

MixedY MixedY::from_rank_one(double s, Complex c, Complex t1, Complex t2)
{
    MixedY m;
    m.s11 = s;
    m.s12 = c * s;
    m.s22 = std::norm(c) * s;
    m.t1 = t1;
    m.t2 = t2;
    m.rank_one = true;
    return m;
}

} // namespace cases

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

LineOrder identity_order(Index n)
{
    LineOrder perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    return perm;
}

ComplexMatrix hermitian2(double a, Complex b, double d)
{
    ComplexMatrix s(2, 2);
    s << a, b, std::conj(b), d;
    return s;
}

STForm full_rank_form(ComplexMatrix s)
{
    const Index n = s.rows();
    return STForm{n, std::move(s), ComplexMatrix(n, 0), identity_order(n), {}};
}

void require_finite_params(std::initializer_list<Complex> values, const char* who)
{
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError(std::string(who) + ": non-finite parameter");
    }
}

} // namespace

std::string_view case_name(const CaseParameters& params)
{
    return std::visit(overloaded{
                          [](const cases::DeltaLine&) { return std::string_view("delta_line"); },
                          [](const cases::DeltaPrimeLine&) { return std::string_view("delta_prime_line"); },
                          [](const cases::GenericLine&) { return std::string_view("generic_line"); },
                          [](const cases::DeltaY&) { return std::string_view("delta_y"); },
                          [](const cases::MixedY&) { return std::string_view("mixed_y"); },
                          [](const cases::DeltaPrimeY&) { return std::string_view("delta_prime_y"); },
                          [](const cases::HalfGenericY&) { return std::string_view("half_generic_y"); },
                          [](const cases::GenericY&) { return std::string_view("generic_y"); },
                      },
                      params);
}

Index case_lines(const CaseParameters& params)
{
    return params.index() < 3 ? 2 : 3;
}

STForm case_st_form(const CaseParameters& params)
{
    return std::visit(
        overloaded{
            [](const cases::DeltaLine& p) {
                require_finite_params({p.s, p.t}, "delta_line");
                return STForm{2, ComplexMatrix::Constant(1, 1, p.s), ComplexMatrix::Constant(1, 1, p.t),
                              identity_order(2), {}};
            },
            [](const cases::DeltaPrimeLine& p) {
                require_finite_params({p.s, p.c}, "delta_prime_line");
                if (p.s == 0.0)
                    throw ParameterError("delta_prime_line: s must be non-zero");
                return full_rank_form(hermitian2(p.s, p.c * p.s, std::norm(p.c) * p.s));
            },
            [](const cases::GenericLine& p) {
                require_finite_params({p.s11, p.s12, p.s22}, "generic_line");
                return full_rank_form(hermitian2(p.s11, p.s12, p.s22));
            },
            [](const cases::DeltaY& p) {
                require_finite_params({p.s, p.t2, p.t3}, "delta_y");
                ComplexMatrix t(1, 2);
                t << p.t2, p.t3;
                return STForm{3, ComplexMatrix::Constant(1, 1, p.s), t, identity_order(3), {}};
            },
            [](const cases::MixedY& p) {
                require_finite_params({p.s11, p.s12, p.s22, p.t1, p.t2}, "mixed_y");
                const double det = p.s11 * p.s22 - std::norm(p.s12);
                const double scale = std::max({1.0, std::abs(p.s11 * p.s22), std::norm(p.s12)});
                if (p.rank_one && (std::abs(det) > 1e-12 * scale || (p.s11 == 0.0 && p.s22 == 0.0)))
                    throw ParameterError("mixed_y: rank-one S requested but s11 s22 != |s12|^2");
                ComplexMatrix t(2, 1);
                t << p.t1, p.t2;
                return STForm{3, hermitian2(p.s11, p.s12, p.s22), t, identity_order(3), {}};
            },
            [](const cases::DeltaPrimeY& p) {
                require_finite_params({p.s, p.c, p.d}, "delta_prime_y");
                if (p.s == 0.0)
                    throw ParameterError("delta_prime_y: s must be non-zero");
                ComplexVector u(3);
                u << 1.0, std::conj(p.c), std::conj(p.d);
                return full_rank_form(p.s * u * u.adjoint());
            },
            [](const cases::HalfGenericY& p) {
                require_finite_params({p.s, p.q, p.r, p.c, p.d}, "half_generic_y");
                const Complex cs = std::conj(p.c);
                const Complex ds = std::conj(p.d);
                const Complex qs = std::conj(p.q);
                const Complex f = cs * p.c * p.s + cs * p.d * p.q + ds * p.c * qs + ds * p.d * p.r;
                if (p.f && std::abs(*p.f - f) > 1e-12 * std::max(1.0, std::abs(f)))
                    throw ParameterError("half_generic_y: f inconsistent with s, q, r, c, d");
                if (std::abs(p.s * p.r - std::norm(p.q)) <=
                    1e-12 * std::max(std::abs(p.s * p.r), std::norm(p.q)))
                    throw ParameterError("half_generic_y: leading block [[s, q], [q^*, r]] is singular");
                ComplexMatrix s(3, 3);
                s << p.s, p.q, p.c * p.s + p.d * p.q,
                    qs, p.r, p.c * qs + p.d * p.r,
                    cs * p.s + ds * qs, cs * p.q + ds * p.r, f;
                return full_rank_form(s);
            },
            [](const cases::GenericY& p) {
                require_finite_params({p.s11, p.s12, p.s13, p.s22, p.s23, p.s33}, "generic_y");
                ComplexMatrix s(3, 3);
                s << p.s11, p.s12, p.s13,
                    std::conj(p.s12), p.s22, p.s23,
                    std::conj(p.s13), std::conj(p.s23), p.s33;
                return full_rank_form(s);
            },
        },
        params);
}

BoundaryPair make_case(const CaseParameters& params)
{
    return assemble_boundary(case_st_form(params));
}

} // namespace qvertex
