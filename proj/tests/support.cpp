#include "support.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unistd.h>

namespace qvt {

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Complex random_complex(Rng& rng, double scale)
{
    std::normal_distribution<double> g(0.0, scale);
    return {g(rng), g(rng)};
}

ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols, double scale)
{
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = random_complex(rng, scale);
    return m;
}

ComplexMatrix random_hermitian(Rng& rng, Index n, double scale)
{
    const ComplexMatrix m = random_matrix(rng, n, n, scale);
    return (m + m.adjoint()) / 2.0;
}

ComplexMatrix random_invertible(Rng& rng, Index n)
{
    ComplexMatrix m = ComplexMatrix::Identity(n, n) * 2.0 + random_matrix(rng, n, n, 0.3);
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(random_matrix(rng, n, n)).householderQ();
    return q * m;
}

ComplexMatrix random_rank(Rng& rng, Index n, Index r)
{
    return random_matrix(rng, n, r) * random_matrix(rng, r, n);
}

LineOrder random_order(Rng& rng, Index n)
{
    LineOrder p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

ComplexMatrix UnitaryVertex::s(Complex k) const
{
    const Complex i1{0.0, 1.0};
    ComplexVector d(static_cast<Index>(phases.size()));
    for (std::size_t a = 0; a < phases.size(); ++a) {
        const Complex l = std::exp(i1 * phases[a]);
        // A + ikB = (1 - k) U - (1 + k) I and A - ikB = (1 + k) U - (1 - k) I on an eigenvector
        d(static_cast<Index>(a)) = -((1.0 + k) * l - (1.0 - k)) / ((1.0 - k) * l - (1.0 + k));
    }
    return Q * d.asDiagonal() * Q.adjoint();
}

UnitaryVertex random_unitary_vertex(Rng& rng, Index n, int dirichlet, int neumann)
{
    const double pi = std::acos(-1.0);
    UnitaryVertex v;
    v.Q = Eigen::HouseholderQR<ComplexMatrix>(random_matrix(rng, n, n)).householderQ();
    for (Index a = 0; a < n; ++a) {
        if (a < dirichlet)
            v.phases.push_back(pi);
        else if (a < dirichlet + neumann)
            v.phases.push_back(0.0);
        else
            v.phases.push_back(uniform(rng, 0.1, 2.0 * pi - 0.1));
    }
    const Complex i1{0.0, 1.0};
    ComplexVector d(n);
    for (Index a = 0; a < n; ++a)
        d(a) = std::exp(i1 * v.phases[static_cast<std::size_t>(a)]);
    const ComplexMatrix U = v.Q * d.asDiagonal() * v.Q.adjoint();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    v.A = U - I;
    v.B = i1 * (U + I);
    return v;
}

namespace {

BoundaryPair place(const ComplexMatrix& At, const ComplexMatrix& Bt, const LineOrder& perm)
{
    const Index n = At.rows();
    ComplexMatrix A(n, n), B(n, n);
    for (Index p = 0; p < n; ++p) {
        const Index line = perm[static_cast<std::size_t>(p)] - 1;
        A.col(line) = At.col(p);
        B.col(line) = Bt.col(p);
    }
    return BoundaryPair(A, B);
}

void blocks(const ComplexMatrix& S, const ComplexMatrix& T, ComplexMatrix& top, ComplexMatrix& bottom)
{
    const Index r = S.rows();
    const Index n = r + T.cols();
    ComplexMatrix X = ComplexMatrix::Zero(n, n);
    X.topLeftCorner(r, r) = S;
    X.bottomLeftCorner(n - r, r) = -T.adjoint();
    X.bottomRightCorner(n - r, n - r).setIdentity();
    top = -X;
    bottom = ComplexMatrix::Zero(n, n);
    bottom.topLeftCorner(r, r).setIdentity();
    bottom.topRightCorner(r, n - r) = T;
}

} // namespace

BoundaryPair st_template(const ComplexMatrix& S, const ComplexMatrix& T, const LineOrder& perm)
{
    ComplexMatrix A, B;
    blocks(S, T, A, B);
    return place(A, B, perm);
}

BoundaryPair reverse_st_template(const ComplexMatrix& Sbar, const ComplexMatrix& Tbar,
                                 const LineOrder& perm)
{
    ComplexMatrix A, B;
    blocks(Sbar, Tbar, B, A);
    return place(A, B, perm);
}

BoundaryPair scramble(Rng& rng, const BoundaryPair& p)
{
    const ComplexMatrix C = random_invertible(rng, p.n());
    return BoundaryPair(C * p.A(), C * p.B());
}

BoundaryPair random_admissible(Rng& rng, Index n)
{
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    if (kind == 0)
        return random_unitary_vertex(rng, n).pair();
    if (kind == 1) {
        const int dir = std::uniform_int_distribution<int>(0, static_cast<int>(n))(rng);
        const int neu = std::uniform_int_distribution<int>(0, static_cast<int>(n) - dir)(rng);
        return random_unitary_vertex(rng, n, dir, neu).pair();
    }
    const Index r = std::uniform_int_distribution<Index>(0, n)(rng);
    ComplexMatrix S;
    if (kind == 2) {
        S = random_hermitian(rng, r, 2.0);
    } else {
        // rank-one S
        const ComplexMatrix u = random_matrix(rng, r, 1);
        S = uniform(rng, -2.0, 2.0) * u * u.adjoint();
    }
    const ComplexMatrix T = random_matrix(rng, r, n - r);
    return scramble(rng, st_template(S, T, random_order(rng, n)));
}

ComplexMatrix oracle_s(const ComplexMatrix& A, const ComplexMatrix& B, Complex k)
{
    const Complex i1{0.0, 1.0};
    const ComplexMatrix plus = A + i1 * k * B;
    const ComplexMatrix minus = A - i1 * k * B;
    return -plus.fullPivLu().solve(minus);
}

BoundaryPair CaseDraw::oracle_pair() const
{
    LineOrder id(static_cast<std::size_t>(S.rows() + T.cols()));
    std::iota(id.begin(), id.end(), 1);
    return st_template(S, T, id);
}

const std::vector<std::string>& case_families()
{
    static const std::vector<std::string> all{"delta_line",     "delta_prime_line", "generic_line",
                                              "delta_y",        "mixed_rank_one",   "mixed_general",
                                              "delta_prime_y",  "half_generic_y",   "generic_y"};
    return all;
}

CaseDraw draw_case(Rng& rng, const std::string& family)
{
    namespace cs = qvertex::cases;
    auto real = [&] {
        double v = 0.0;
        while (std::abs(v) < 0.2)
            v = uniform(rng, -3.0, 3.0);
        return v;
    };
    auto cplx = [&] { return random_complex(rng, 0.8); };
    auto cj = [](Complex z) { return std::conj(z); };

    CaseDraw d;
    if (family == "delta_line") {
        const cs::DeltaLine p{real(), cplx()};
        d.params = p;
        d.S = ComplexMatrix::Constant(1, 1, p.s);
        d.T = ComplexMatrix::Constant(1, 1, p.t);
    } else if (family == "delta_prime_line") {
        const cs::DeltaPrimeLine p{real(), cplx()};
        d.params = p;
        d.S.resize(2, 2);
        d.S << p.s, p.s * p.c, p.s * cj(p.c), p.s * std::norm(p.c);
        d.T = ComplexMatrix(2, 0);
    } else if (family == "generic_line") {
        const cs::GenericLine p{real(), cplx(), real()};
        d.params = p;
        d.S.resize(2, 2);
        d.S << p.s11, p.s12, cj(p.s12), p.s22;
        d.T = ComplexMatrix(2, 0);
    } else if (family == "delta_y") {
        const cs::DeltaY p{real(), cplx(), cplx()};
        d.params = p;
        d.S = ComplexMatrix::Constant(1, 1, p.s);
        d.T.resize(1, 2);
        d.T << p.t2, p.t3;
    } else if (family == "mixed_rank_one" || family == "mixed_general") {
        cs::MixedY p;
        if (family == "mixed_rank_one") {
            p = cs::MixedY::from_rank_one(real(), cplx(), cplx(), cplx());
        } else {
            p = cs::MixedY{real(), cplx(), real(), cplx(), cplx(), false};
        }
        d.params = p;
        d.S.resize(2, 2);
        d.S << p.s11, p.s12, cj(p.s12), p.s22;
        d.T.resize(2, 1);
        d.T << p.t1, p.t2;
    } else if (family == "delta_prime_y") {
        const cs::DeltaPrimeY p{real(), cplx(), cplx()};
        d.params = p;
        ComplexVector u(3);
        u << 1.0, cj(p.c), cj(p.d);
        d.S = p.s * u * u.adjoint();
        d.T = ComplexMatrix(3, 0);
    } else if (family == "half_generic_y") {
        cs::HalfGenericY p;
        do {
            p = cs::HalfGenericY{real(), cplx(), real(), cplx(), cplx(), std::nullopt};
        } while (std::abs(p.s * p.r - std::norm(p.q)) < 0.2);
        d.params = p;
        const Complex x = p.c * p.s + p.d * p.q;
        const Complex y = p.c * cj(p.q) + p.d * p.r;
        const Complex f = cj(p.c) * x + cj(p.d) * y;
        d.S.resize(3, 3);
        d.S << p.s, p.q, x, cj(p.q), p.r, y, cj(x), cj(y), f;
        d.T = ComplexMatrix(3, 0);
    } else if (family == "generic_y") {
        const cs::GenericY p{real(), cplx(), cplx(), real(), cplx(), real()};
        d.params = p;
        d.S.resize(3, 3);
        d.S << p.s11, p.s12, p.s13, cj(p.s12), p.s22, p.s23, cj(p.s13), cj(p.s23), p.s33;
        d.T = ComplexMatrix(3, 0);
    } else {
        throw std::invalid_argument("unknown family " + family);
    }
    return d;
}

std::vector<double> log_points(double lo, double hi, int count)
{
    std::vector<double> k;
    const double step = std::pow(hi / lo, 1.0 / (count - 1));
    double v = lo;
    for (int i = 0; i < count; ++i, v *= step)
        k.push_back(v);
    return k;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return INFINITY;
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

std::string scratch_path(const std::string& name)
{
    namespace fs = std::filesystem;
    static std::atomic<int> counter{0};
    const fs::path dir = fs::temp_directory_path() / ("qvertex-tests-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path p = dir / (std::to_string(counter++) + "-" + name);
    fs::remove(p);
    return p.string();
}

std::string data_path(const std::string& name)
{
#ifdef QVERTEX_TEST_DATA
    return std::string(QVERTEX_TEST_DATA) + "/" + name;
#else
    return "tests/data/" + name;
#endif
}

} // namespace qvt
