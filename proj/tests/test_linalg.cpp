#include <doctest.h>

#include "mos/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace mos::linalg;

namespace {

std::mt19937 rng_for(std::uint32_t seed) { return std::mt19937(seed); }

RealMatrix random_real(std::size_t m, std::size_t n, std::uint32_t seed) {
    auto gen = rng_for(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    RealMatrix a(m, n);
    for (double& x : a.entries()) x = dist(gen);
    return a;
}

Matrix random_complex(std::size_t m, std::size_t n, std::uint32_t seed) {
    auto gen = rng_for(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(m, n);
    for (cplx& x : a.entries()) x = cplx(dist(gen), dist(gen));
    return a;
}

template <Scalar T>
double reconstruction_error(const Mat<T>& a, const SvdResult<T>& r) {
    const std::size_t m = a.rows(), n = a.cols(), k = r.s.size();
    Mat<T> us(m, n); // U * Sigma with the rectangular diagonal
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) us(i, j) = r.u(i, j) * r.s[j];
    const Mat<T> recon = matmul(us, adjoint(r.v));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += abs_sq(a.entries()[i] - recon.entries()[i]);
        den += abs_sq(a.entries()[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

template <Scalar T>
double orthonormality_error(const Mat<T>& q) {
    const Mat<T> g = matmul(adjoint(q), q);
    double err = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            err += abs_sq(g(i, j) - (i == j ? T{1} : T{0}));
    return std::sqrt(err);
}

// Eigenvalues of a Hermitian 3x3 from its characteristic polynomial
// det(G - lambda I) = -(l^3 + a l^2 + b l + c), roots via the closed-form
// trigonometric solution (all roots real for Hermitian input).
std::array<double, 3> hermitian3_eigs_charpoly(const Matrix& g) {
    const double a = -(g(0, 0).real() + g(1, 1).real() + g(2, 2).real());
    const auto minor2 = [&](std::size_t i, std::size_t j) {
        return (g(i, i) * g(j, j) - g(i, j) * g(j, i)).real();
    };
    const double b = minor2(0, 1) + minor2(0, 2) + minor2(1, 2);
    const cplx det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
                     g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
                     g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
    const double c = -det.real();

    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    std::array<double, 3> roots{};
    if (p >= -1e-30) {
        roots.fill(std::cbrt(-q) - a / 3.0);
    } else {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * r);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - a / 3.0;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

} // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("svd of identity and diagonal matrices") {
    auto id = Matrix::identity(3);
    auto r = svd(id);
    REQUIRE(r.s.size() == 3);
    for (double s : r.s) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    RealMatrix d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    auto rd = svd(d);
    CHECK(rd.s[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rd.s[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rd.s[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reconstruction_error(d, rd) < 1e-12);
}

TEST_CASE("rank-1 outer product against the characteristic-polynomial oracle") {
    // ||u|| = 2, ||v|| = 3
    const std::array<cplx, 3> u = {cplx(1.0, 0.0), cplx(0.0, 1.0),
                                   std::polar(std::sqrt(2.0), std::numbers::pi / 4.0)};
    const std::array<cplx, 3> v = {cplx(2.0, 0.0), cplx(0.0, 2.0), cplx(1.0, 0.0)};
    Matrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = u[i] * std::conj(v[j]);

    const auto r = svd(a);
    CHECK(r.s[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(r.s[1] < 1e-12 * 6.0);
    CHECK(r.s[2] < 1e-12 * 6.0);
    CHECK(orthonormality_error(r.u) < 1e-10);
    CHECK(orthonormality_error(r.v) < 1e-10);

    const auto eigs = hermitian3_eigs_charpoly(matmul(adjoint(a), a));
    CHECK(std::sqrt(std::max(0.0, eigs[0])) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(std::abs(eigs[1]) < 1e-8);
    CHECK(std::abs(eigs[2]) < 1e-8);
}

TEST_CASE("oracle agrees with svd on random 3x3 matrices") {
    for (std::uint32_t seed : {11u, 12u, 13u, 14u}) {
        const Matrix a = random_complex(3, 3, seed);
        const auto r = svd(a);
        const auto eigs = hermitian3_eigs_charpoly(matmul(adjoint(a), a));
        for (int i = 0; i < 3; ++i)
            CHECK(std::sqrt(std::max(0.0, eigs[i])) ==
                  doctest::Approx(r.s[i]).epsilon(1e-7).scale(r.s[0]));
    }
}

TEST_CASE("svd reconstructs random complex matrices to 1e-10") {
    const std::array<std::pair<std::size_t, std::size_t>, 8> shapes = {
        {{1, 1}, {3, 5}, {5, 3}, {8, 8}, {17, 9}, {33, 64}, {64, 64}, {64, 33}}};
    std::uint32_t seed = 100;
    for (const auto& [m, n] : shapes) {
        const Matrix a = random_complex(m, n, seed++);
        const auto r = svd(a);
        CHECK(reconstruction_error(a, r) < 1e-10);
        CHECK(orthonormality_error(r.u) < 1e-10);
        CHECK(orthonormality_error(r.v) < 1e-10);
        CHECK(r.u.rows() == m);
        CHECK(r.u.cols() == m);
        CHECK(r.v.rows() == n);
        CHECK(r.v.cols() == n);
        for (std::size_t i = 0; i + 1 < r.s.size(); ++i) CHECK(r.s[i] >= r.s[i + 1]);
        if (!r.s.empty()) CHECK(r.s.back() >= 0.0);
    }
}

TEST_CASE("singular values match for A, A^H and Pi*A") {
    const Matrix a = random_complex(6, 9, 77);
    const auto sa = svd(a).s;
    const auto sah = svd(adjoint(a)).s;
    const auto spa = svd(matmul(exchange_matrix<cplx>(6), a)).s;
    REQUIRE(sa.size() == sah.size());
    REQUIRE(sa.size() == spa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i] == doctest::Approx(sah[i]).epsilon(1e-10).scale(sa[0]));
        CHECK(sa[i] == doctest::Approx(spa[i]).epsilon(1e-10).scale(sa[0]));
    }
}

TEST_CASE("svd signals pathological input instead of looping") {
    Matrix a(3, 3);
    a(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)svd(a), std::runtime_error);
}

TEST_CASE("values-only path agrees with the Jacobi decomposition") {
    std::uint32_t seed = 500;
    for (const auto& [m, n] : std::array<std::pair<std::size_t, std::size_t>, 7>{
             {{1, 1}, {4, 4}, {9, 3}, {3, 9}, {20, 7}, {7, 20}, {31, 31}}}) {
        const RealMatrix a = random_real(m, n, seed++);
        const auto full = svd(a).s;
        const auto fast = singular_values(a);
        REQUIRE(full.size() == fast.size());
        const double scale = full.empty() ? 1.0 : std::max(full[0], 1.0);
        for (std::size_t i = 0; i < full.size(); ++i)
            CHECK(fast[i] == doctest::Approx(full[i]).epsilon(1e-11).scale(scale));
    }
}

TEST_CASE("values-only path handles rank deficiency and zeros") {
    RealMatrix z(5, 4);
    const auto sz = singular_values(z);
    for (double s : sz) CHECK(s == 0.0);

    // rank-2: sum of two outer products
    RealMatrix a(6, 5);
    auto gen = rng_for(321);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<double, 6> u1{}, u2{};
    std::array<double, 5> v1{}, v2{};
    for (auto* arr : {&u1, &u2})
        for (double& x : *arr) x = dist(gen);
    for (auto* arr : {&v1, &v2})
        for (double& x : *arr) x = dist(gen);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 5; ++j) a(i, j) = u1[i] * v1[j] + u2[i] * v2[j];
    const auto s = singular_values(a);
    CHECK(s[0] > 0.0);
    for (std::size_t i = 2; i < s.size(); ++i) CHECK(s[i] < 1e-12 * s[0]);
}

TEST_CASE("exchange matrix") {
    const auto p1 = exchange_matrix<double>(1);
    CHECK(p1(0, 0) == 1.0);
    const auto p2 = exchange_matrix<double>(2);
    CHECK(p2(0, 0) == 0.0);
    CHECK(p2(0, 1) == 1.0);
    CHECK(p2(1, 0) == 1.0);
    CHECK(p2(1, 1) == 0.0);
    const auto p3 = exchange_matrix<double>(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(p3(i, j) == (j == 2 - i ? 1.0 : 0.0));
    CHECK_THROWS_AS(exchange_matrix<double>(0), std::invalid_argument);
}

TEST_CASE("left-Pi-real matrices: explicit small cases") {
    const Matrix q1 = left_pi_real_matrix(1);
    CHECK(q1(0, 0) == cplx(1.0, 0.0));

    const Matrix q2 = left_pi_real_matrix(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(q2(0, 0) == cplx(r, 0.0));
    CHECK(q2(0, 1) == cplx(0.0, r));
    CHECK(q2(1, 0) == cplx(r, 0.0));
    CHECK(q2(1, 1) == cplx(0.0, -r));
}

TEST_CASE("left-Pi-real matrices are unitary and Pi-real for p in 1..16") {
    for (std::size_t p = 1; p <= 16; ++p) {
        const Matrix q = left_pi_real_matrix(p);
        CHECK(orthonormality_error(q) < 1e-12);
        // Pi * conj(Q) == Q
        Matrix qc(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) qc(i, j) = std::conj(q(i, j));
        const Matrix pi_qc = matmul(exchange_matrix<cplx>(p), qc);
        double err = 0.0;
        for (std::size_t i = 0; i < p * p; ++i)
            err += abs_sq(pi_qc.entries()[i] - q.entries()[i]);
        CHECK(std::sqrt(err) < 1e-12);
    }
}

TEST_CASE("least-squares line fit") {
    {
        const std::array<double, 2> xs{0.0, 1.0}, ys{0.0, 1.0};
        const auto fit = fit_line_least_squares(xs, ys);
        CHECK(fit.slope == doctest::Approx(1.0));
        CHECK(fit.intercept == doctest::Approx(0.0));
    }
    {
        const std::array<double, 3> xs{0.0, 1.0, 2.0}, ys{5.0, 5.0, 5.0};
        const auto fit = fit_line_least_squares(xs, ys);
        CHECK(fit.slope == doctest::Approx(0.0));
        CHECK(fit.intercept == doctest::Approx(5.0));
    }
    {
        // normal equations by hand: slope 1/2, intercept 1/6
        const std::array<double, 3> xs{0.0, 1.0, 2.0}, ys{0.0, 1.0, 1.0};
        const auto fit = fit_line_least_squares(xs, ys);
        CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
    const std::array<double, 3> bad_x{2.0, 2.0, 2.0}, ys{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_line_least_squares(bad_x, ys), std::invalid_argument);
    const std::array<double, 1> one_x{0.0}, one_y{0.0};
    CHECK_THROWS_AS(fit_line_least_squares(one_x, one_y), std::invalid_argument);
}

TEST_SUITE_END();
