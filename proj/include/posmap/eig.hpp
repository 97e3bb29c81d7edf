#pragma once

// Hermitian eigensolver (cyclic complex Jacobi) plus the PSD test and
// spectral pseudo-inverse built on it. Self-contained on purpose: the
// matrices here are tiny (<= 64) and a dependency-free solver keeps the
// numeric stack fully deterministic.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posmap/complex_matrix.hpp"

namespace posmap {

struct EigResult {
    std::vector<double> values; // descending
    Matrix vectors;             // column k pairs with values[k]
};

namespace detail {

inline double off_diagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j)
                s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Phase gauge: first component of magnitude > 1e-8 is made real nonnegative.
inline void fix_phase(Vector& v) {
    for (const auto& c : v) {
        const double m = std::abs(c);
        if (m > 1e-8) {
            const Complex ph = std::conj(c) / m;
            for (auto& w : v)
                w *= ph;
            return;
        }
    }
}

inline bool lex_less(const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real())
            return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag())
            return a[i].imag() < b[i].imag();
    }
    return false;
}

} // namespace detail

// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
// 1e-13 * ||M||_F. Eigenvalues are sorted descending; exact ties are broken
// by the first differing eigenvector component (lexicographic on re, im)
// so downstream Kraus extraction is reproducible.
inline EigResult eig_hermitian(const Matrix& m, double herm_tol = tolerance::hermitian) {
    if (!m.square())
        throw DimensionMismatch("eig_hermitian: matrix is " + m.shape_str());
    if (!m.is_hermitian(herm_tol))
        throw NotHermitian("eig_hermitian: matrix is not Hermitian within " +
                           std::to_string(herm_tol));
    const std::size_t n = m.rows();

    Matrix a = 0.5 * (m + m.adjoint()); // symmetrize roundoff
    Matrix v = Matrix::identity(n);
    const double target = 1e-13 * a.frobenius_norm();

    for (int sweep = 0; sweep < 64; ++sweep) {
        if (detail::off_diagonal_mass(a) <= target)
            break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double babs = std::abs(apq);
                if (babs == 0.0)
                    continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // rotation zeroing a(p,q); classical stable tangent choice
                const double tau = (aqq - app) / (2.0 * babs);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = (apq / babs) * (t * c);
                const Complex sc = std::conj(s);

                for (std::size_t i = 0; i < n; ++i) { // columns p, q
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - sc * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) { // rows p, q
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = sc * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) { // accumulate V <- V J
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sc * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }

    std::vector<double> vals(n);
    std::vector<Vector> cols(n, Vector(n));
    for (std::size_t k = 0; k < n; ++k) {
        vals[k] = a(k, k).real();
        for (std::size_t i = 0; i < n; ++i)
            cols[k][i] = v(i, k);
        detail::fix_phase(cols[k]);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (vals[x] != vals[y])
            return vals[x] > vals[y];
        return detail::lex_less(cols[x], cols[y]);
    });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = vals[order[k]];
        for (std::size_t i = 0; i < n; ++i)
            r.vectors(i, k) = cols[order[k]][i];
    }
    return r;
}

struct PsdResult {
    bool psd = false;
    double min_eig = 0.0;
    double max_eig = 0.0;
    Vector min_vec; // certificate for the smallest eigenvalue
};

// PSD within tolerance: lambda_min >= -tol * max(1, lambda_max).
inline PsdResult is_psd(const Matrix& m, double tol = tolerance::psd) {
    const EigResult e = eig_hermitian(m);
    PsdResult r;
    r.max_eig = e.values.front();
    r.min_eig = e.values.back();
    r.min_vec.resize(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        r.min_vec[i] = e.vectors(i, m.cols() - 1);
    r.psd = r.min_eig >= -tol * std::max(1.0, r.max_eig);
    return r;
}

// Spectral (Moore-Penrose) inverse of a Hermitian PSD matrix; eigenvalues
// at or below tol * lambda_max are treated as zero.
inline Matrix pseudo_inverse(const Matrix& m, double tol = tolerance::psd) {
    const EigResult e = eig_hermitian(m);
    const double lmax = e.values.empty() ? 0.0 : e.values.front();
    const std::size_t n = m.rows();
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = e.values[k];
        if (lam <= tol * lmax || lam <= 0.0)
            continue;
        const double inv = 1.0 / lam;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += inv * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return r;
}

// Pseudo-inverse of a general (rectangular) matrix via M+ = (M*M)+ M*.
inline Matrix pseudo_inverse_general(const Matrix& m, double tol = tolerance::psd) {
    const Matrix mm = m.adjoint() * m;
    return pseudo_inverse(mm, tol) * m.adjoint();
}

// Hermitian PSD square root (negative roundoff eigenvalues clamped to 0).
inline Matrix sqrt_psd(const Matrix& m) {
    const EigResult e = eig_hermitian(m);
    const std::size_t n = m.rows();
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(0.0, e.values[k]);
        const double s = std::sqrt(lam);
        if (s == 0.0)
            continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return r;
}

} // namespace posmap
