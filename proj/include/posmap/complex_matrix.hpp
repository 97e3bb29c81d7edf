#pragma once

// Dense complex matrices and vectors at "desk" scale (dims <= 64).
// Storage is row-major; all index pairs over tensor products follow the
// convention (first factor slow, second factor fast).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "posmap/errors.hpp"

namespace posmap {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

namespace tolerance {
inline constexpr double hermitian = 1e-10;
inline constexpr double eig = 1e-9;
inline constexpr double psd = 1e-9;
} // namespace tolerance

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {}

    Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw ShapeMismatch("matrix literal has ragged rows");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::vector<double>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    // e_{ij}: single 1 at (i, j).
    static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
        Matrix m(n, n);
        m(i, j) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return a_; }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(Complex s) {
        for (auto& v : a_)
            v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator-(Matrix a) { return a *= Complex{-1.0, 0.0}; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matmul: " + a.shape_str() + " * " + b.shape_str());
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{0.0, 0.0})
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r(i, j) += aik * b(k, j);
            }
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix conj() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k)
            r.a_[k] = std::conj(a_[k]);
        return r;
    }

    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        if (!square())
            throw DimensionMismatch("trace of non-square matrix " + shape_str());
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_)
            s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_)
            m = std::max(m, std::abs(v));
        return m;
    }

    // max |M[i][j] - conj(M[j][i])| <= tol  (absolute, desk-scale entries)
    bool is_hermitian(double tol = tolerance::hermitian) const {
        if (!square())
            return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
                    return false;
        return true;
    }

    bool approx_equal(const Matrix& o, double tol) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            return false;
        double m = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k)
            m = std::max(m, std::abs(a_[k] - o.a_[k]));
        return m <= tol;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_)
            throw DimensionMismatch("block out of range");
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
            throw DimensionMismatch("set_block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    void require_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(std::string(op) + ": " + shape_str() + " vs " + o.shape_str());
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

// (A (x) B)[(i*rB + k), (j*cB + l)] = A[i][j] * B[k][l]; first factor slow.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0})
                continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

enum class Factor { First, Second };

// Transpose one tensor factor of an operator on C^{d1} (x) C^{d2}.
// First:  out[(i,k),(j,l)] = M[(j,k),(i,l)]; Second: out[(i,k),(j,l)] = M[(i,l),(j,k)].
inline Matrix partial_transpose(const Matrix& m, std::size_t d1, std::size_t d2,
                                Factor which = Factor::First) {
    if (!m.square() || m.rows() != d1 * d2)
        throw DimensionMismatch("partial_transpose: matrix is " + m.shape_str() +
                                ", expected " + std::to_string(d1 * d2) + " square");
    Matrix r(d1 * d2, d1 * d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t k = 0; k < d2; ++k)
            for (std::size_t j = 0; j < d1; ++j)
                for (std::size_t l = 0; l < d2; ++l) {
                    if (which == Factor::First)
                        r(i * d2 + k, j * d2 + l) = m(j * d2 + k, i * d2 + l);
                    else
                        r(i * d2 + k, j * d2 + l) = m(i * d2 + l, j * d2 + k);
                }
    return r;
}

// ---- vector helpers ----

inline Complex vdot(const Vector& x, const Vector& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("vdot: length mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::conj(x[i]) * y[i]; // conjugate-linear in the first slot
    return s;
}

inline double vnorm(const Vector& x) {
    double s = 0.0;
    for (const auto& v : x)
        s += std::norm(v);
    return std::sqrt(s);
}

inline Vector normalized(Vector x) {
    const double n = vnorm(x);
    if (n == 0.0)
        throw DegenerateParameter("cannot normalize the zero vector");
    for (auto& v : x)
        v /= n;
    return x;
}

inline Vector matvec(const Matrix& m, const Vector& x) {
    if (m.cols() != x.size())
        throw DimensionMismatch("matvec: " + m.shape_str() + " * vec(" +
                                std::to_string(x.size()) + ")");
    Vector y(m.rows(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            y[i] += m(i, j) * x[j];
    return y;
}

// |x><y|: out[i][j] = x[i] * conj(y[j])
inline Matrix outer(const Vector& x, const Vector& y) {
    Matrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            m(i, j) = x[i] * std::conj(y[j]);
    return m;
}

inline Matrix projector(const Vector& x) { return outer(x, x); }

inline Vector tensor(const Vector& x, const Vector& y) {
    Vector t(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < y.size(); ++k)
            t[i * y.size() + k] = x[i] * y[k];
    return t;
}

inline Vector basis_vector(std::size_t d, std::size_t i) {
    Vector e(d, Complex{0.0, 0.0});
    e[i] = 1.0;
    return e;
}

// <x, M x> for Hermitian M; imaginary part is roundoff and discarded.
inline double quadratic_form(const Matrix& m, const Vector& x) {
    return std::real(vdot(x, matvec(m, x)));
}

} // namespace posmap
