#include "mos/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mos::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 64;
constexpr double kJacobiTol = 1e-14;

// One-sided Jacobi on tall w (rows >= cols): rotates column pairs until all
// are mutually orthogonal, accumulating the rotations into v (starts as I).
template <Scalar T>
void jacobi_orthogonalize(Mat<T>& w, Mat<T>& v) {
    const std::size_t m = w.rows(), n = w.cols();
    double fro2 = 0.0;
    for (const T& x : w.entries()) fro2 += abs_sq(x);
    if (fro2 == 0.0) return;
    // Columns at roundoff level relative to ||w|| cannot affect the
    // reconstruction; rotating them only chases noise.
    const double negligible2 = fro2 * 1e-30;
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                T apq{};
                for (std::size_t k = 0; k < m; ++k) {
                    app += abs_sq(w(k, p));
                    aqq += abs_sq(w(k, q));
                    apq += conj_of(w(k, p)) * w(k, q);
                }
                if (app <= negligible2 || aqq <= negligible2) continue;
                const double off = std::abs(apq);
                if (off == 0.0 || off <= kJacobiTol * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * off);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const T s = (apq / off) * (c * t);
                for (std::size_t k = 0; k < m; ++k) {
                    const T wp = w(k, p), wq = w(k, q);
                    w(k, p) = c * wp - conj_of(s) * wq;
                    w(k, q) = s * wp + c * wq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const T vp = v(k, p), vq = v(k, q);
                    v(k, p) = c * vp - conj_of(s) * vq;
                    v(k, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) return;
    }
    throw std::runtime_error("svd: Jacobi sweeps exhausted; input is numerically pathological");
}

// Fills columns [filled, m) of u with unit vectors orthonormal to the columns
// already present, drawn from the canonical basis (deterministic).
template <Scalar T>
void complete_orthonormal_basis(Mat<T>& u, std::size_t filled) {
    const std::size_t m = u.rows();
    std::vector<T> x(m);
    for (std::size_t cand = 0; cand < m && filled < m; ++cand) {
        std::fill(x.begin(), x.end(), T{});
        x[cand] = T{1};
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < filled; ++j) {
                T dot{};
                for (std::size_t k = 0; k < m; ++k) dot += conj_of(u(k, j)) * x[k];
                for (std::size_t k = 0; k < m; ++k) x[k] -= dot * u(k, j);
            }
        }
        double nrm = 0.0;
        for (const T& xv : x) nrm += abs_sq(xv);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-6) continue;
        for (std::size_t k = 0; k < m; ++k) u(k, filled) = x[k] / nrm;
        ++filled;
    }
    if (filled < m) throw std::runtime_error("svd: failed to complete orthonormal basis");
}

template <Scalar T>
SvdResult<T> svd_tall(const Mat<T>& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Mat<T> w = a;
    Mat<T> v = Mat<T>::identity(n);
    jacobi_orthogonalize(w, v);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += abs_sq(w(k, j));
        norms[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SvdResult<T> r{Mat<T>(m, m), std::vector<double>(n), Mat<T>(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        r.s[j] = norms[order[j]];
        for (std::size_t k = 0; k < n; ++k) r.v(k, j) = v(k, order[j]);
    }
    // Columns whose norm is at roundoff level carry no usable direction;
    // they are replaced by an orthonormal completion below.
    const double drop =
        n == 0 ? 0.0
               : r.s[0] * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
    std::size_t rank = 0;
    while (rank < n && r.s[rank] > drop) ++rank;
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t k = 0; k < m; ++k) r.u(k, j) = w(k, order[j]) / r.s[j];
    complete_orthonormal_basis(r.u, rank);
    return r;
}

double pythag(double a, double b) {
    const double absa = std::abs(a), absb = std::abs(b);
    if (absa > absb) {
        const double t = absb / absa;
        return absa * std::sqrt(1.0 + t * t);
    }
    if (absb == 0.0) return 0.0;
    const double t = absa / absb;
    return absb * std::sqrt(1.0 + t * t);
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder bidiagonalization of the tall row-major m x n buffer (m >= n),
// in place. Diagonal ends up in d, superdiagonal in e (e[i] above d[i],
// e[0] = 0). Column scaling as in Golub-Reinsch for underflow safety.
void bidiagonalize(std::vector<double>& a, std::size_t m, std::size_t n, std::vector<double>& d,
                   std::vector<double>& e) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    std::vector<double> rv(n, 0.0);
    double g = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i + 1;
        e[i] = scale * g;
        g = scale = 0.0;
        for (std::size_t k = i; k < m; ++k) scale += std::abs(at(k, i));
        if (scale != 0.0) {
            double s = 0.0;
            for (std::size_t k = i; k < m; ++k) {
                at(k, i) /= scale;
                s += at(k, i) * at(k, i);
            }
            const double f = at(i, i);
            g = -sign_of(std::sqrt(s), f);
            const double h = f * g - s;
            at(i, i) = f - g;
            for (std::size_t j = l; j < n; ++j) {
                double sum = 0.0;
                for (std::size_t k = i; k < m; ++k) sum += at(k, i) * at(k, j);
                const double fac = sum / h;
                for (std::size_t k = i; k < m; ++k) at(k, j) += fac * at(k, i);
            }
            for (std::size_t k = i; k < m; ++k) at(k, i) *= scale;
        }
        d[i] = scale * g;
        g = scale = 0.0;
        if (i + 1 < n) {
            for (std::size_t k = l; k < n; ++k) scale += std::abs(at(i, k));
            if (scale != 0.0) {
                double s = 0.0;
                for (std::size_t k = l; k < n; ++k) {
                    at(i, k) /= scale;
                    s += at(i, k) * at(i, k);
                }
                const double f = at(i, l);
                g = -sign_of(std::sqrt(s), f);
                const double h = f * g - s;
                at(i, l) = f - g;
                for (std::size_t k = l; k < n; ++k) rv[k] = at(i, k) / h;
                for (std::size_t j = l; j < m; ++j) {
                    double sum = 0.0;
                    for (std::size_t k = l; k < n; ++k) sum += at(j, k) * at(i, k);
                    for (std::size_t k = l; k < n; ++k) at(j, k) += sum * rv[k];
                }
                for (std::size_t k = l; k < n; ++k) at(i, k) *= scale;
            }
        }
    }
}

// Implicit-shift QR on the bidiagonal (Golub-Reinsch), no vector updates.
std::vector<double> bidiagonal_singular_values(std::vector<double> d, std::vector<double> e) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
    double anorm = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    const double tol = std::numeric_limits<double>::epsilon() * anorm;

    for (std::ptrdiff_t k = n - 1; k >= 0; --k) {
        for (int its = 0;; ++its) {
            if (its == 90)
                throw std::runtime_error("singular_values: QR iteration did not converge");
            bool split_at_diag = true;
            std::ptrdiff_t l;
            for (l = k; l >= 0; --l) {
                if (l == 0 || std::abs(e[l]) <= tol) {
                    split_at_diag = false;
                    break;
                }
                if (std::abs(d[l - 1]) <= tol) break;
            }
            if (split_at_diag) {
                // d[l-1] is negligible: rotate e[l..] away against the diagonal.
                double c = 0.0, s = 1.0;
                for (std::ptrdiff_t i = l; i <= k; ++i) {
                    const double f = s * e[i];
                    e[i] = c * e[i];
                    if (std::abs(f) <= tol) break;
                    const double g = d[i];
                    const double h = pythag(f, g);
                    d[i] = h;
                    c = g / h;
                    s = -f / h;
                }
            }
            if (l == k) {
                if (d[k] < 0.0) d[k] = -d[k];
                break;
            }
            const double z0 = d[k];
            const double x0 = d[l];
            const double y0 = d[k - 1];
            double g = e[k - 1];
            double h = e[k];
            double f = ((y0 - z0) * (y0 + z0) + (g - h) * (g + h)) / (2.0 * h * y0);
            g = pythag(f, 1.0);
            f = ((x0 - z0) * (x0 + z0) + h * ((y0 / (f + sign_of(g, f))) - h)) / x0;
            double c = 1.0, s = 1.0;
            double x = x0;
            for (std::ptrdiff_t j = l; j <= k - 1; ++j) {
                const std::ptrdiff_t i = j + 1;
                g = e[i];
                double y = d[i];
                h = s * g;
                g = c * g;
                double z = pythag(f, h);
                e[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                z = pythag(f, h);
                d[j] = z;
                if (z != 0.0) {
                    c = f / z;
                    s = h / z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            e[l] = 0.0;
            e[k] = f;
            d[k] = x;
        }
    }
    for (double& v : d) v = std::abs(v);
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

} // namespace

template <Scalar T>
SvdResult<T> svd(const Mat<T>& a) {
    if (a.rows() == 0 || a.cols() == 0)
        return {Mat<T>::identity(a.rows()), {}, Mat<T>::identity(a.cols())};
    if (a.rows() >= a.cols()) return svd_tall(a);
    SvdResult<T> t = svd_tall(adjoint(a));
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
}

template SvdResult<double> svd(const Mat<double>&);
template SvdResult<cplx> svd(const Mat<cplx>&);

std::vector<double> singular_values(const RealMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return {};
    const bool tall = a.rows() >= a.cols();
    const std::size_t m = tall ? a.rows() : a.cols();
    const std::size_t n = tall ? a.cols() : a.rows();
    std::vector<double> buf(m * n);
    if (tall) {
        std::copy(a.entries().begin(), a.entries().end(), buf.begin());
    } else {
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) buf[j * n + i] = a(i, j);
    }
    std::vector<double> d(n, 0.0), e(n, 0.0);
    bidiagonalize(buf, m, n, d, e);
    return bidiagonal_singular_values(std::move(d), std::move(e));
}

Matrix left_pi_real_matrix(std::size_t p) {
    if (p < 1) throw std::invalid_argument("left_pi_real_matrix: p must be >= 1");
    Matrix q(p, p);
    const std::size_t n = p / 2;
    const double r = 1.0 / std::sqrt(2.0);
    const cplx jr{0.0, r};
    const std::size_t off = p - n; // n for even p, n + 1 for odd p
    for (std::size_t i = 0; i < n; ++i) {
        q(i, i) = r;
        q(i, off + i) = jr;
        q(off + i, n - 1 - i) = r;
        q(off + i, off + n - 1 - i) = -jr;
    }
    if (p % 2 == 1) q(n, n) = 1.0;
    return q;
}

LineFit fit_line_least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_line_least_squares: xs and ys differ in length");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("fit_line_least_squares: need at least two points");
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    if (*mn == *mx) throw std::invalid_argument("fit_line_least_squares: xs are all equal");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (ys[i] - mean_y);
    }
    const double slope = sxy / sxx;
    return {slope, mean_y - slope * mean_x};
}

} // namespace mos::linalg
