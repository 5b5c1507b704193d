#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mos::linalg {

using cplx = std::complex<double>;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, cplx>;

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const cplx& x) { return x.real() * x.real() + x.imag() * x.imag(); }
inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }

/// Dense row-major matrix over double or std::complex<double>.
template <Scalar T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T{}) {}
    Mat(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw std::invalid_argument("Mat: entry count does not match rows*cols");
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<T> entries() { return a_; }
    std::span<const T> entries() const { return a_; }

    bool operator==(const Mat&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using Matrix = Mat<cplx>;
using RealMatrix = Mat<double>;

template <Scalar T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
    Mat<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

/// Conjugate transpose (plain transpose for real matrices).
template <Scalar T>
Mat<T> adjoint(const Mat<T>& a) {
    Mat<T> r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = conj_of(a(i, j));
    return r;
}

template <Scalar T>
double frobenius_norm(const Mat<T>& a) {
    double acc = 0.0;
    for (const T& x : a.entries()) acc += abs_sq(x);
    return std::sqrt(acc);
}

inline Matrix to_complex(const RealMatrix& a) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.entries()[i] = a.entries()[i];
    return r;
}

/// p x p matrix with ones on the anti-diagonal.
template <Scalar T>
Mat<T> exchange_matrix(std::size_t p) {
    if (p < 1) throw std::invalid_argument("exchange_matrix: p must be >= 1");
    Mat<T> m(p, p);
    for (std::size_t i = 0; i < p; ++i) m(i, p - 1 - i) = T{1};
    return m;
}

/// Full decomposition a = u * diag(s) * v^H with square unitary u (m x m)
/// and v (n x n); s holds the min(m, n) singular values, descending.
template <Scalar T>
struct SvdResult {
    Mat<T> u;
    std::vector<double> s;
    Mat<T> v;
};

/// Full SVD via one-sided Jacobi rotations on the tall orientation.
/// Throws std::runtime_error if the sweep cap is exhausted.
template <Scalar T>
SvdResult<T> svd(const Mat<T>& a);

/// Singular values only (descending), via Golub-Kahan bidiagonalization
/// followed by implicit-shift QR on the bidiagonal. Much cheaper than
/// svd() when vectors are not needed.
std::vector<double> singular_values(const RealMatrix& a);

/// Unitary Q_p with Pi_p * conj(Q_p) = Q_p, mapping centro-Hermitian data
/// to real data. Built blockwise from identity and exchange matrices.
Matrix left_pi_real_matrix(std::size_t p);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (xs, ys). Throws std::invalid_argument on
/// fewer than two points or constant xs.
LineFit fit_line_least_squares(std::span<const double> xs, std::span<const double> ys);

} // namespace mos::linalg
