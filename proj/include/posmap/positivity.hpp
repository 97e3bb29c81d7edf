#pragma once

// Positivity classification. Complete positivity and co-complete positivity
// are exact eigenvalue checks on the Choi matrix and its partial transpose.
// Block positivity (= positivity of the map) is probed with a deterministic
// multistart see-saw over product vectors: for fixed x the form
// <x (x) y, H x (x) y> is a Hermitian quadratic in y and vice versa, so the
// update alternates lowest eigenvectors of the two contracted matrices.
// A negative value found is an exact disproof (the certificate is
// re-evaluated from scratch); a non-violation is heuristic, reported as
// "no violation found", never as a proof.

#include <cstdint>
#include <optional>
#include <utility>

#include "posmap/choi.hpp"
#include "posmap/complex_matrix.hpp"
#include "posmap/eig.hpp"
#include "posmap/rng.hpp"

namespace posmap {

enum class Verdict {
    NotPositive,
    CPOnly,
    CoCPOnly,
    CPAndCoCP,
    PositiveUndetermined,
};

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::NotPositive: return "NotPositive";
    case Verdict::CPOnly: return "CPOnly";
    case Verdict::CoCPOnly: return "CoCPOnly";
    case Verdict::CPAndCoCP: return "CPAndCoCP";
    case Verdict::PositiveUndetermined: return "PositiveUndetermined";
    }
    return "?";
}

struct SeesawConfig {
    std::size_t starts = 64;    // random starts on top of the structured ones
    std::size_t max_iters = 200;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

struct ProductMin {
    double value = 0.0;
    Vector x; // first factor, unit, phase-gauged
    Vector y; // second factor
};

namespace detail {

// A(x)[k][l] = sum_ij conj(x_i) x_j H[(i,k),(j,l)]; then <y, A(x) y> equals
// <x (x) y, H x (x) y>. This is also the "form matrix" of H at x.
inline Matrix contract_first(const Matrix& h, std::size_t d1, std::size_t d2, const Vector& x) {
    Matrix a(d2, d2);
    for (std::size_t i = 0; i < d1; ++i) {
        const Complex xi = std::conj(x[i]);
        if (xi == Complex{0.0, 0.0})
            continue;
        for (std::size_t j = 0; j < d1; ++j) {
            const Complex w = xi * x[j];
            if (w == Complex{0.0, 0.0})
                continue;
            for (std::size_t k = 0; k < d2; ++k)
                for (std::size_t l = 0; l < d2; ++l)
                    a(k, l) += w * h(i * d2 + k, j * d2 + l);
        }
    }
    return a;
}

inline Matrix contract_second(const Matrix& h, std::size_t d1, std::size_t d2, const Vector& y) {
    Matrix b(d1, d1);
    for (std::size_t k = 0; k < d2; ++k) {
        const Complex yk = std::conj(y[k]);
        for (std::size_t l = 0; l < d2; ++l) {
            const Complex w = yk * y[l];
            if (w == Complex{0.0, 0.0})
                continue;
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d1; ++j)
                    b(i, j) += w * h(i * d2 + k, j * d2 + l);
        }
    }
    return b;
}

inline Vector lowest_eigvec(const Matrix& m) {
    const EigResult e = eig_hermitian(m);
    Vector v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        v[i] = e.vectors(i, m.cols() - 1);
    return v;
}

inline double product_value(const Matrix& h, const Vector& x, const Vector& y) {
    return quadratic_form(h, tensor(x, y));
}

// Structured starts: d1*d2 basis pairs (e_i, e_k) and d1*d2 Fourier pairs
// (u_m, w_n) with u_m[j] = exp(2 pi i j m / d1)/sqrt(d1).
inline std::vector<std::pair<Vector, Vector>> structured_starts(std::size_t d1, std::size_t d2) {
    std::vector<std::pair<Vector, Vector>> s;
    s.reserve(2 * d1 * d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t k = 0; k < d2; ++k)
            s.emplace_back(basis_vector(d1, i), basis_vector(d2, k));
    auto fourier = [](std::size_t d, std::size_t m) {
        Vector v(d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j) {
            const double ang = 2.0 * M_PI * static_cast<double>(j * m) / static_cast<double>(d);
            v[j] = norm * Complex{std::cos(ang), std::sin(ang)};
        }
        return v;
    };
    for (std::size_t m = 0; m < d1; ++m)
        for (std::size_t n = 0; n < d2; ++n)
            s.emplace_back(fourier(d1, m), fourier(d2, n));
    return s;
}

} // namespace detail

inline ProductMin min_product_expectation(const Matrix& h, std::size_t d1, std::size_t d2,
                                          const SeesawConfig& cfg = {}) {
    if (!h.square() || h.rows() != d1 * d2)
        throw DimensionMismatch("min_product_expectation: matrix is " + h.shape_str());
    if (!h.is_hermitian())
        throw NotHermitian("min_product_expectation: matrix is not Hermitian");

    auto starts = detail::structured_starts(d1, d2);
    for (std::size_t r = 0; r < cfg.starts; ++r) {
        SplitMix64 rng(derive_seed(cfg.seed, r));
        starts.emplace_back(random_unit_vector(rng, d1), random_unit_vector(rng, d2));
    }

    ProductMin best;
    bool have_best = false;
    for (auto& [x0, y0] : starts) {
        Vector x = x0, y = y0;
        double value = detail::product_value(h, x, y);
        for (std::size_t it = 0; it < cfg.max_iters; ++it) {
            x = detail::lowest_eigvec(detail::contract_second(h, d1, d2, y));
            const Matrix a = detail::contract_first(h, d1, d2, x);
            const EigResult e = eig_hermitian(a);
            const double nv = e.values.back();
            for (std::size_t k = 0; k < d2; ++k)
                y[k] = e.vectors(k, d2 - 1);
            if (value - nv < cfg.tol) {
                value = std::min(value, nv);
                break;
            }
            value = nv;
        }
        if (!have_best || value < best.value) {
            best.value = value;
            best.x = x;
            best.y = y;
            have_best = true;
        }
    }
    detail::fix_phase(best.x);
    detail::fix_phase(best.y);
    best.value = detail::product_value(h, best.x, best.y); // exact re-evaluation
    return best;
}

struct BlockPositivity {
    bool violated = false;
    double min_value = 0.0; // smallest product expectation found
    Vector x, y;            // certificate when violated
};

inline BlockPositivity is_block_positive(const MapRep& t, const SeesawConfig& cfg = {}) {
    validate_map(t);
    const ProductMin pm = min_product_expectation(t.choi, t.dim_in, t.dim_out, cfg);
    BlockPositivity r;
    r.min_value = pm.value;
    if (pm.value < -cfg.tol) { // independent certificate re-check
        const double check = quadratic_form(t.choi, tensor(pm.x, pm.y));
        if (check < -cfg.tol) {
            r.violated = true;
            r.x = pm.x;
            r.y = pm.y;
            r.min_value = check;
        }
    }
    return r;
}

inline std::pair<bool, double> is_completely_positive(const MapRep& t,
                                                      double tol = tolerance::psd) {
    validate_map(t);
    const PsdResult p = is_psd(t.choi, tol);
    return {p.psd, p.min_eig};
}

inline std::pair<bool, double> is_co_completely_positive(const MapRep& t,
                                                         double tol = tolerance::psd) {
    validate_map(t);
    const Matrix pt = partial_transpose(t.choi, t.dim_in, t.dim_out, Factor::First);
    const PsdResult p = is_psd(pt, tol);
    return {p.psd, p.min_eig};
}

// Generalized-Schur PSD test for a Hermitian 2x2 block matrix
// [[A11, A12], [A12*, A22]]: A11, A22 PSD, ran(A12*) inside ran(A22), and
// A11 - A12 A22+ A12* PSD.
inline bool ando_choi_psd_2block(const Matrix& a11, const Matrix& a12, const Matrix& a22,
                                 double tol = tolerance::psd) {
    if (!a11.square() || !a22.square() || a11.rows() != a22.rows() ||
        a12.rows() != a11.rows() || a12.cols() != a22.rows())
        throw DimensionMismatch("ando_choi_psd_2block: inconsistent block shapes");
    if (!a11.is_hermitian() || !a22.is_hermitian())
        throw NotHermitian("ando_choi_psd_2block: diagonal block is not Hermitian");
    if (!is_psd(a11, tol).psd || !is_psd(a22, tol).psd)
        return false;
    const Matrix a22p = pseudo_inverse(a22, tol);
    // range condition: (I - A22 A22+) A12* = 0
    const Matrix resid = a12.adjoint() - a22 * (a22p * a12.adjoint());
    const double scale = std::max(1.0, a12.frobenius_norm());
    if (resid.max_abs() > tol * scale)
        return false;
    const Matrix schur = a11 - a12 * (a22p * a12.adjoint());
    return is_psd(0.5 * (schur + schur.adjoint()), tol).psd;
}

struct Classification {
    Verdict verdict = Verdict::PositiveUndetermined;
    double cp_min_eig = 0.0;
    double cocp_min_eig = 0.0;
    double block_min = 0.0;                           // smallest product expectation found
    std::optional<std::pair<Vector, Vector>> witness; // (x, y) when NotPositive
    // Set when no violation was found and the dimension pair is one where
    // positive maps are known to be decomposable (2x2, 2x3, 3x2).
    bool decomposable = false;
};

inline Classification classify(const MapRep& t, const SeesawConfig& cfg = {}) {
    validate_map(t);
    Classification c;
    c.cp_min_eig = is_psd(t.choi, cfg.tol).min_eig;
    c.cocp_min_eig =
        is_psd(partial_transpose(t.choi, t.dim_in, t.dim_out, Factor::First), cfg.tol).min_eig;
    const bool cp = c.cp_min_eig >= -cfg.tol;
    const bool cocp = c.cocp_min_eig >= -cfg.tol;

    const BlockPositivity bp = is_block_positive(t, cfg);
    c.block_min = bp.min_value;
    if (bp.violated) {
        c.verdict = Verdict::NotPositive;
        c.witness = std::make_pair(bp.x, bp.y);
        return c;
    }
    if (cp && cocp)
        c.verdict = Verdict::CPAndCoCP;
    else if (cp)
        c.verdict = Verdict::CPOnly;
    else if (cocp)
        c.verdict = Verdict::CoCPOnly;
    else
        c.verdict = Verdict::PositiveUndetermined;

    const auto din = t.dim_in, dout = t.dim_out;
    c.decomposable = (din == 2 && dout == 2) || (din == 2 && dout == 3) ||
                     (din == 3 && dout == 2);
    return c;
}

} // namespace posmap
