#pragma once

// Choi-matrix correspondence for linear maps T: M_{d_in} -> M_{d_out}.
//
// Conventions used throughout:
//   * the Choi matrix H lives on C^{d_in} (x) C^{d_out}, index (i, k) with
//     the input factor slow: row i*d_out + k;
//   * block (i, j) of H equals T(e_ij), i.e. H[(i,k),(j,l)] = T(e_ij)[k][l];
//   * MapSpec stores the images T(e_ij) at position i*d_in + j;
//   * Kraus operators act as T(a) = sum_k W_k a W_k* with W_k of shape
//     d_out x d_in; vec(W) stacks W[k][i] at position i*d_out + k so that
//     H = sum_k vec(W_k) vec(W_k)*.

#include <string>
#include <vector>

#include "posmap/complex_matrix.hpp"
#include "posmap/eig.hpp"

namespace posmap {

struct MapRep {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    Matrix choi;
};

struct MapSpec {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::vector<Matrix> images; // images[i*dim_in + j] = T(e_ij)
};

struct KrausSet {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::vector<Matrix> ops; // each d_out x d_in
};

inline void validate_map(const MapRep& t, double herm_tol = tolerance::hermitian) {
    if (t.dim_in == 0 || t.dim_out == 0)
        throw DimensionMismatch("map has zero dimension");
    const std::size_t n = t.dim_in * t.dim_out;
    if (!t.choi.square() || t.choi.rows() != n)
        throw DimensionMismatch("Choi matrix is " + t.choi.shape_str() + ", expected " +
                                std::to_string(n) + " square");
    if (!t.choi.is_hermitian(herm_tol))
        throw NotHermitian("Choi matrix is not Hermitian (map does not preserve adjoints)");
}

inline void validate_spec(const MapSpec& s, double herm_tol = tolerance::hermitian) {
    if (s.dim_in == 0 || s.dim_out == 0)
        throw MalformedSpec("map spec has zero dimension");
    if (s.images.size() != s.dim_in * s.dim_in)
        throw MalformedSpec("map spec needs " + std::to_string(s.dim_in * s.dim_in) +
                            " images, got " + std::to_string(s.images.size()));
    for (const auto& img : s.images)
        if (img.rows() != s.dim_out || img.cols() != s.dim_out)
            throw MalformedSpec("image has shape " + img.shape_str() + ", expected " +
                                std::to_string(s.dim_out) + " square");
    // adjoint preservation: T(e_ij)* = T(e_ji)
    for (std::size_t i = 0; i < s.dim_in; ++i)
        for (std::size_t j = 0; j < s.dim_in; ++j) {
            const Matrix d = s.images[i * s.dim_in + j].adjoint() - s.images[j * s.dim_in + i];
            if (d.max_abs() > herm_tol)
                throw MalformedSpec("images are not adjoint-consistent: T(e_" +
                                    std::to_string(i) + std::to_string(j) +
                                    ")* != T(e_" + std::to_string(j) + std::to_string(i) + ")");
        }
}

inline MapRep choi_of_map(const MapSpec& s) {
    validate_spec(s);
    MapRep t;
    t.dim_in = s.dim_in;
    t.dim_out = s.dim_out;
    t.choi = Matrix(s.dim_in * s.dim_out, s.dim_in * s.dim_out);
    for (std::size_t i = 0; i < s.dim_in; ++i)
        for (std::size_t j = 0; j < s.dim_in; ++j)
            t.choi.set_block(i * s.dim_out, j * s.dim_out, s.images[i * s.dim_in + j]);
    return t;
}

inline Matrix choi_block(const MapRep& t, std::size_t i, std::size_t j) {
    return t.choi.block(i * t.dim_out, j * t.dim_out, t.dim_out, t.dim_out);
}

inline MapSpec spec_of_map(const MapRep& t) {
    MapSpec s;
    s.dim_in = t.dim_in;
    s.dim_out = t.dim_out;
    s.images.reserve(t.dim_in * t.dim_in);
    for (std::size_t i = 0; i < t.dim_in; ++i)
        for (std::size_t j = 0; j < t.dim_in; ++j)
            s.images.push_back(choi_block(t, i, j));
    return s;
}

// T(a) = sum_ij a[i][j] T(e_ij), read directly off the Choi blocks.
inline Matrix apply_map(const MapRep& t, const Matrix& a) {
    if (!a.square() || a.rows() != t.dim_in)
        throw DimensionMismatch("apply_map: argument is " + a.shape_str() + ", expected " +
                                std::to_string(t.dim_in) + " square");
    Matrix out(t.dim_out, t.dim_out);
    for (std::size_t i = 0; i < t.dim_in; ++i)
        for (std::size_t j = 0; j < t.dim_in; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0})
                continue;
            for (std::size_t k = 0; k < t.dim_out; ++k)
                for (std::size_t l = 0; l < t.dim_out; ++l)
                    out(k, l) += aij * t.choi(i * t.dim_out + k, j * t.dim_out + l);
        }
    return out;
}

// Kraus extraction: eigenvectors of the Choi matrix with eigenvalue above
// tol * lambda_max, un-vec'd to d_out x d_in. The op count equals the
// numerical rank. Throws if the Choi matrix has a genuinely negative
// eigenvalue (the map is not completely positive).
inline KrausSet kraus_from_choi(const MapRep& t, double tol = tolerance::psd) {
    validate_map(t);
    const EigResult e = eig_hermitian(t.choi);
    const double lmax = e.values.front();
    const double lmin = e.values.back();
    if (lmin < -tol * std::max(1.0, lmax))
        throw NotCompletelyPositive("Choi matrix has eigenvalue " + std::to_string(lmin));
    KrausSet ks;
    ks.dim_in = t.dim_in;
    ks.dim_out = t.dim_out;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        const double lam = e.values[k];
        if (lam <= tol * std::max(0.0, lmax))
            continue;
        const double s = std::sqrt(lam);
        Matrix w(t.dim_out, t.dim_in);
        for (std::size_t i = 0; i < t.dim_in; ++i)
            for (std::size_t o = 0; o < t.dim_out; ++o)
                w(o, i) = s * e.vectors(i * t.dim_out + o, k);
        ks.ops.push_back(std::move(w));
    }
    return ks;
}

inline MapRep map_from_kraus(const KrausSet& ks) {
    if (ks.ops.empty() && (ks.dim_in == 0 || ks.dim_out == 0))
        throw ShapeMismatch("empty Kraus set without dimensions");
    std::size_t din = ks.dim_in, dout = ks.dim_out;
    if (!ks.ops.empty()) {
        if (din == 0)
            din = ks.ops.front().cols();
        if (dout == 0)
            dout = ks.ops.front().rows();
    }
    MapRep t;
    t.dim_in = din;
    t.dim_out = dout;
    t.choi = Matrix(din * dout, din * dout);
    for (const auto& w : ks.ops) {
        if (w.rows() != dout || w.cols() != din)
            throw ShapeMismatch("Kraus operator is " + w.shape_str() + ", expected " +
                                std::to_string(dout) + "x" + std::to_string(din));
        Vector v(din * dout);
        for (std::size_t i = 0; i < din; ++i)
            for (std::size_t o = 0; o < dout; ++o)
                v[i * dout + o] = w(o, i);
        t.choi += outer(v, v);
    }
    return t;
}

// Trace dual S with Tr(S(b) a) = Tr(b T(a)); as a Choi rearrangement:
// H_S[(k,j),(l,i)] = H_T[(i,l),(j,k)].
inline MapRep dual_map(const MapRep& t) {
    validate_map(t);
    MapRep s;
    s.dim_in = t.dim_out;
    s.dim_out = t.dim_in;
    s.choi = Matrix(s.dim_in * s.dim_out, s.dim_in * s.dim_out);
    for (std::size_t k = 0; k < t.dim_out; ++k)
        for (std::size_t l = 0; l < t.dim_out; ++l)
            for (std::size_t i = 0; i < t.dim_in; ++i)
                for (std::size_t j = 0; j < t.dim_in; ++j)
                    s.choi(k * t.dim_in + j, l * t.dim_in + i) =
                        t.choi(i * t.dim_out + l, j * t.dim_out + k);
    return s;
}

inline bool is_unital(const MapRep& t, double tol = 1e-9) {
    return apply_map(t, Matrix::identity(t.dim_in))
        .approx_equal(Matrix::identity(t.dim_out), tol);
}

// ---- stock maps ----

inline MapRep identity_map(std::size_t d) {
    MapSpec s;
    s.dim_in = s.dim_out = d;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            s.images.push_back(Matrix::unit(d, i, j));
    return choi_of_map(s);
}

inline MapRep transpose_map(std::size_t d) {
    MapSpec s;
    s.dim_in = s.dim_out = d;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            s.images.push_back(Matrix::unit(d, j, i));
    return choi_of_map(s);
}

// a |-> Tr(a) I/d
inline MapRep depolarizing_map(std::size_t d) {
    MapSpec s;
    s.dim_in = s.dim_out = d;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Matrix img(d, d);
            if (i == j)
                img = (1.0 / static_cast<double>(d)) * Matrix::identity(d);
            s.images.push_back(img);
        }
    return choi_of_map(s);
}

} // namespace posmap
