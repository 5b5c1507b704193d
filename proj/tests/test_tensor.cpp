#include <doctest.h>

#include "mos/tensor.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace mos;
using linalg::cplx;
using linalg::Mat;

namespace {

Tensor<double> random_tensor(std::vector<std::size_t> shape, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Tensor<double> t(std::move(shape));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = dist(gen);
    return t;
}

Mat<double> random_mat(std::size_t m, std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat<double> a(m, n);
    for (double& x : a.entries()) x = dist(gen);
    return a;
}

// Independent column-index rule: digits (i_{d+1}, ..., i_{D-1}, i_0, ...,
// i_{d-1}) read as a mixed-radix number, first digit most significant.
std::size_t oracle_column(const std::vector<std::size_t>& idx,
                          const std::vector<std::size_t>& shape, std::size_t d) {
    std::size_t col = 0;
    for (std::size_t a = d + 1; a < shape.size(); ++a) col = col * shape[a] + idx[a];
    for (std::size_t a = 0; a < d; ++a) col = col * shape[a] + idx[a];
    return col;
}

double tensor_rel_diff(const Tensor<double>& a, const Tensor<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

} // namespace

TEST_SUITE_BEGIN("tensor");

TEST_CASE("unfolding a matrix gives itself (mode 0) and its transpose (mode 1)") {
    Tensor<double> t({2, 3});
    for (std::size_t i = 0; i < 6; ++i) t[i] = static_cast<double>(i + 1);
    const auto m0 = unfold(t, 0);
    REQUIRE(m0.rows() == 2);
    REQUIRE(m0.cols() == 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m0(i, j) == t[i * 3 + j]);
    const auto m1 = unfold(t, 1);
    REQUIRE(m1.rows() == 3);
    REQUIRE(m1.cols() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m1(j, i) == m0(i, j));
}

TEST_CASE("unfoldings of the 2x2x2 tensor with entries 1..8") {
    Tensor<double> t({2, 2, 2});
    for (std::size_t i = 0; i < 8; ++i) t[i] = static_cast<double>(i + 1);

    // frozen expected matrices, worked out by hand from the cyclic rule
    const double e0[2][4] = {{1, 2, 3, 4}, {5, 6, 7, 8}};
    const double e1[2][4] = {{1, 5, 2, 6}, {3, 7, 4, 8}};
    const double e2[2][4] = {{1, 3, 5, 7}, {2, 4, 6, 8}};
    const auto m0 = unfold(t, 0), m1 = unfold(t, 1), m2 = unfold(t, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(m0(r, c) == e0[r][c]);
            CHECK(m1(r, c) == e1[r][c]);
            CHECK(m2(r, c) == e2[r][c]);
        }

    // cell-by-cell against the index-arithmetic rule
    for (std::size_t d = 0; d < 3; ++d) {
        const auto m = unfold(t, d);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 2; ++k) {
                    const std::vector<std::size_t> idx{i, j, k};
                    CHECK(m(idx[d], oracle_column(idx, t.shape(), d)) == t(i, j, k));
                }
    }
    CHECK_THROWS_AS((void)unfold(t, 3), std::invalid_argument);
}

TEST_CASE("fold inverts unfold exactly") {
    Tensor<double> t({2, 2, 2});
    for (std::size_t i = 0; i < 8; ++i) t[i] = static_cast<double>(i + 1);
    for (std::size_t d = 0; d < 3; ++d) CHECK(fold(unfold(t, d), d, t.shape()) == t);

    const Tensor<double> r = random_tensor({3, 4, 5}, 42);
    for (std::size_t d = 0; d < 3; ++d) CHECK(fold(unfold(r, d), d, r.shape()) == r);

    Mat<double> scalar(1, 1);
    scalar(0, 0) = 7.0;
    const Tensor<double> s = fold(scalar, 0, {1});
    CHECK(s.order() == 1);
    CHECK(s[0] == 7.0);

    CHECK_THROWS_AS((void)fold(scalar, 0, {2}), std::invalid_argument);
}

TEST_CASE("mode product basics and composition") {
    const Tensor<double> t = random_tensor({3, 4, 5}, 7);
    for (std::size_t d = 0; d < 3; ++d)
        CHECK(tensor_rel_diff(t, mode_product(t, Mat<double>::identity(t.dim(d)), d)) == 0.0);

    const Mat<double> u = random_mat(6, 4, 8);
    const Mat<double> v = random_mat(2, 6, 9);
    const Tensor<double> lhs = mode_product(mode_product(t, u, 1), v, 1);
    const Tensor<double> rhs = mode_product(t, matmul(v, u), 1);
    CHECK(tensor_rel_diff(lhs, rhs) < 1e-13);

    // 1-way tensor: the ordinary matrix-vector product
    Tensor<double> vec({3});
    vec[0] = 1.0;
    vec[1] = 2.0;
    vec[2] = 3.0;
    const Mat<double> a = random_mat(2, 3, 10);
    const Tensor<double> out = mode_product(vec, a, 0);
    REQUIRE(out.shape() == std::vector<std::size_t>{2});
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(out[i] == doctest::Approx(a(i, 0) * 1.0 + a(i, 1) * 2.0 + a(i, 2) * 3.0));

    CHECK_THROWS_AS((void)mode_product(t, v, 1), std::invalid_argument);
}

TEST_CASE("mode products over distinct modes commute") {
    const Tensor<double> t = random_tensor({3, 4, 5}, 20);
    const Mat<double> u = random_mat(2, 3, 21);
    const Mat<double> w = random_mat(6, 5, 22);
    const Tensor<double> a = mode_product(mode_product(t, u, 0), w, 2);
    const Tensor<double> b = mode_product(mode_product(t, w, 2), u, 0);
    CHECK(tensor_rel_diff(a, b) < 1e-12);
}

TEST_CASE("concatenation and slicing") {
    Tensor<double> a({2, 2}), b({2, 2});
    for (std::size_t i = 0; i < 4; ++i) {
        a[i] = static_cast<double>(i);
        b[i] = static_cast<double>(10 + i);
    }
    const Tensor<double> c = concat(a, b, 1);
    REQUIRE(c.shape() == std::vector<std::size_t>{2, 4});
    CHECK(slice(c, 1, 0, 2) == a);
    CHECK(slice(c, 1, 2, 2) == b);

    const Tensor<double> big_a = random_tensor({8, 51, 50}, 30);
    const Tensor<double> big_b = random_tensor({8, 51, 50}, 31);
    const Tensor<double> big = concat(big_a, big_b, 2);
    CHECK(big.shape() == std::vector<std::size_t>{8, 51, 100});
    CHECK(slice(big, 2, 0, 50) == big_a);
    CHECK(slice(big, 2, 50, 50) == big_b);

    Tensor<double> wrong({3, 2});
    CHECK_THROWS_AS((void)concat(a, wrong, 1), std::invalid_argument);
}

TEST_CASE("hosvd of a rank-1 tensor") {
    const std::array<double, 4> a{1.0, -2.0, 0.5, 3.0};
    const std::array<double, 3> b{2.0, 1.0, -1.0};
    const std::array<double, 5> c{0.3, -0.7, 1.1, 0.9, -0.2};
    Tensor<double> t({4, 3, 5});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 5; ++k) t(i, j, k) = a[i] * b[j] * c[k];
    auto norm = [](const auto& arr) {
        double s = 0.0;
        for (double x : arr) s += x * x;
        return std::sqrt(s);
    };
    const double expected = norm(a) * norm(b) * norm(c);

    const auto h = hosvd(t);
    for (std::size_t d = 0; d < 3; ++d) {
        CHECK(h.mode_singular_values[d][0] == doctest::Approx(expected).epsilon(1e-12));
        for (std::size_t i = 1; i < h.mode_singular_values[d].size(); ++i)
            CHECK(h.mode_singular_values[d][i] < 1e-10 * expected);
    }
}

TEST_CASE("hosvd of zeros") {
    const Tensor<double> t({2, 3, 4});
    const auto h = hosvd(t);
    for (const auto& sv : h.mode_singular_values)
        for (double s : sv) CHECK(s == 0.0);
}

TEST_CASE("hosvd conserves energy and reconstructs") {
    const Tensor<double> t = random_tensor({4, 5, 6}, 55);
    const double norm2 = frobenius_norm(t) * frobenius_norm(t);
    const auto h = hosvd(t);
    for (std::size_t d = 0; d < 3; ++d) {
        double sum = 0.0;
        for (double s : h.mode_singular_values[d]) sum += s * s;
        CHECK(sum == doctest::Approx(norm2).epsilon(1e-12));
    }
    Tensor<double> recon = h.core;
    for (std::size_t d = 0; d < 3; ++d) recon = mode_product(recon, h.factors[d], d);
    CHECK(tensor_rel_diff(t, recon) < 1e-10);

    // every unfolding carries the full energy
    for (std::size_t d = 0; d < 3; ++d) {
        const double u = linalg::frobenius_norm(unfold(t, d));
        CHECK(u * u == doctest::Approx(norm2).epsilon(1e-12));
    }
}

TEST_CASE("complex hosvd reconstructs") {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Tensor<cplx> t({3, 4, 5});
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = cplx(dist(gen), dist(gen));
    const auto h = hosvd(t);
    Tensor<cplx> recon = h.core;
    for (std::size_t d = 0; d < 3; ++d) recon = mode_product(recon, h.factors[d], d);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.numel(); ++i) {
        num += linalg::abs_sq(t[i] - recon[i]);
        den += linalg::abs_sq(t[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_SUITE_END();
