#pragma once

// Structure theory for positive maps on M_2: the boundary face family with
// parameters (lambda, y, z, t), extremal maps in normal form, the split of
// a face member into a completely positive and a completely copositive
// part, the scalar inequality governing the CP-patterned split, the unique
// extremal two-part decomposition on the slice |y| + |z| = sqrt(lambda),
// the trace conditions equivalent to exact local decomposability, and the
// GNS-style construction realizing T(a) eta = W pi(a) [I].
//
// All 4x4 patterns below are written in the product basis {xi_i (x) eta_k}
// (input factor slow). For the standard bases this is the Choi basis.

#include <array>
#include <cmath>
#include <string>

#include "posmap/choi.hpp"
#include "posmap/complex_matrix.hpp"
#include "posmap/eig.hpp"
#include "posmap/positivity.hpp"
#include "posmap/faces.hpp"

namespace posmap {

using Basis2 = std::array<Vector, 2>;

inline Basis2 standard_basis_2() {
    return {basis_vector(2, 0), basis_vector(2, 1)};
}

namespace detail {

inline void require_orthonormal(const Basis2& b, const char* name) {
    if (b[0].size() != 2 || b[1].size() != 2)
        throw MalformedSpec(std::string(name) + " basis vectors must be in C^2");
    if (std::abs(vdot(b[0], b[0]) - 1.0) > 1e-10 || std::abs(vdot(b[1], b[1]) - 1.0) > 1e-10 ||
        std::abs(vdot(b[0], b[1])) > 1e-10)
        throw MalformedSpec(std::string(name) + " basis is not orthonormal");
}

// Rewrite a matrix given in the product basis {xi_i (x) eta_k} as a Choi
// matrix over the standard bases: H = (conj(U_xi) (x) U_eta) Ht (...)*,
// where the U columns are the basis vectors.
inline Matrix choi_from_product_basis(const Matrix& ht, const Basis2& xi, const Basis2& eta) {
    Matrix uxi(2, 2), ueta(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            uxi(i, k) = xi[k][i];
            ueta(i, k) = eta[k][i];
        }
    const Matrix k = kron(uxi.conj(), ueta);
    return k * ht * k.adjoint();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Face-map family
// ---------------------------------------------------------------------------

// Unital maps in the maximal face named by (xi_1, eta_1):
//   T(|xi_1><xi_1|) = lambda |eta_2><eta_2|
//   T(|xi_1><xi_2|) = y |eta_1><eta_2| + conj(z) |eta_2><eta_1| + t |eta_2><eta_2|
//   T(|xi_2><xi_2|) = |eta_1><eta_1| + (1 - lambda) |eta_2><eta_2|
struct FaceMapParams {
    Basis2 xi_basis = standard_basis_2();
    Basis2 eta_basis = standard_basis_2();
    double lambda = 0.0;
    Complex y{0.0, 0.0};
    Complex z{0.0, 0.0};
    Complex t{0.0, 0.0};
};

// The 4x4 matrix of the family in the product basis:
//   [ 0     0     0    y      ]
//   [ 0     l     z~   t      ]
//   [ 0     z     1    0      ]
//   [ y~    t~    0    1 - l  ]
inline Matrix face_map_pattern(const FaceMapParams& p) {
    const Complex l{p.lambda, 0.0};
    return Matrix{{0.0, 0.0, 0.0, p.y},
                  {0.0, l, std::conj(p.z), p.t},
                  {0.0, p.z, 1.0, 0.0},
                  {std::conj(p.y), std::conj(p.t), 0.0, 1.0 - l}};
}

// Assembles the map without any admissibility gate (useful for inspecting
// inadmissible parameter points).
inline MapRep face_map_choi(const FaceMapParams& p) {
    detail::require_orthonormal(p.xi_basis, "xi");
    detail::require_orthonormal(p.eta_basis, "eta");
    if (p.lambda < -1e-12 || p.lambda > 1.0 + 1e-12)
        throw ConstraintViolated("face map needs lambda in [0, 1], got " +
                                 std::to_string(p.lambda));
    MapRep t;
    t.dim_in = t.dim_out = 2;
    t.choi = detail::choi_from_product_basis(face_map_pattern(p), p.xi_basis, p.eta_basis);
    validate_map(t);
    return t;
}

// Assembles the map and rejects parameters for which the see-saw exhibits a
// product vector with negative expectation (the family is only positive on
// part of its parameter range).
inline MapRep face_map_2d(const FaceMapParams& p, const SeesawConfig& cfg = {}) {
    MapRep t = face_map_choi(p);
    const BlockPositivity bp = is_block_positive(t, cfg);
    if (bp.violated)
        throw BlockPositivityViolated("face map parameters are inadmissible: product "
                                      "expectation " + std::to_string(bp.min_value));
    return t;
}

// ---------------------------------------------------------------------------
// Extremal maps in normal form
// ---------------------------------------------------------------------------

// a |-> [[a11, alpha a12 + beta a21], [conj(alpha) a21 + conj(beta) a12,
//         gamma a11 + eps a12 + conj(eps) a21 + delta a22]]
// Extremality constraints: for gamma != 0,
//   |eps|^2 = 2 gamma (delta - |alpha|^2 - |beta|^2)  and
//   |alpha| + |beta| = sqrt(delta);
// for gamma = 0, |alpha| = 1 or |beta| = 1.
struct StormerParams {
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
    double gamma = 0.0;
    double delta = 0.0;
    Complex epsilon{0.0, 0.0};
};

inline MapRep stormer_extremal(const StormerParams& p) {
    constexpr double ctol = 1e-10;
    if (p.gamma < 0.0 || p.delta < 0.0)
        throw ExtremalityConstraintViolated("gamma and delta must be nonnegative");
    const double aa = std::abs(p.alpha), bb = std::abs(p.beta);
    if (p.gamma != 0.0) {
        const double lhs = std::norm(p.epsilon);
        const double rhs = 2.0 * p.gamma * (p.delta - aa * aa - bb * bb);
        if (std::abs(lhs - rhs) > ctol)
            throw ExtremalityConstraintViolated(
                "|eps|^2 = 2 gamma (delta - |alpha|^2 - |beta|^2) fails by " +
                std::to_string(lhs - rhs));
        if (std::abs(aa + bb - std::sqrt(p.delta)) > ctol)
            throw ExtremalityConstraintViolated("|alpha| + |beta| = sqrt(delta) fails");
        // with both off-diagonal couplings present, positivity of the
        // assembled map additionally pins the phase of epsilon:
        //   2 arg(eps) = arg(alpha) - arg(beta) + pi  (mod 2 pi)
        if (aa > ctol && bb > ctol) {
            const Complex balance =
                p.epsilon * p.epsilon * std::conj(p.alpha) * p.beta;
            if (std::abs(balance + std::abs(balance)) > ctol)
                throw ExtremalityConstraintViolated(
                    "phase relation 2 arg(eps) = arg(alpha) - arg(beta) + pi fails");
        }
    } else {
        if (std::abs(aa - 1.0) > ctol && std::abs(bb - 1.0) > ctol)
            throw ExtremalityConstraintViolated("gamma = 0 requires |alpha| = 1 or |beta| = 1");
    }
    MapSpec s;
    s.dim_in = s.dim_out = 2;
    s.images = {
        Matrix{{1.0, 0.0}, {0.0, p.gamma}},                        // T(e11)
        Matrix{{0.0, p.alpha}, {std::conj(p.beta), p.epsilon}},    // T(e12)
        Matrix{{0.0, p.beta}, {std::conj(p.alpha), std::conj(p.epsilon)}}, // T(e21)
        Matrix{{0.0, 0.0}, {0.0, p.delta}},                        // T(e22)
    };
    return choi_of_map(s);
}

// ---------------------------------------------------------------------------
// Split forms and the scalar inequality
// ---------------------------------------------------------------------------

enum class SplitFormKind {
    CoCpForm, // corner entry y only; positive semidefinite after partial transpose
    CpForm,   // inner entry z only; positive semidefinite as it stands
};

struct SplitFormParams {
    double lambda = 0.0;
    double q = 0.0;
    Complex corner{0.0, 0.0}; // y for CoCpForm, z for CpForm
    Complex t{0.0, 0.0};
};

inline Matrix assemble_split_form(SplitFormKind kind, const SplitFormParams& p) {
    const Complex l{p.lambda, 0.0};
    const Complex qq{p.q, 0.0};
    const Complex half_minus_l{0.5 - p.lambda, 0.0};
    if (kind == SplitFormKind::CoCpForm)
        return Matrix{{0.0, 0.0, 0.0, p.corner},
                      {0.0, l, 0.0, p.t},
                      {0.0, 0.0, qq, 0.0},
                      {std::conj(p.corner), std::conj(p.t), 0.0, half_minus_l}};
    return Matrix{{0.0, 0.0, 0.0, 0.0},
                  {0.0, l, std::conj(p.corner), p.t},
                  {0.0, p.corner, qq, 0.0},
                  {0.0, std::conj(p.t), 0.0, half_minus_l}};
}

// lambda >= |z|^2 / q + |t|^2 / (1/2 - lambda), with generalized-inverse
// semantics: a vanishing denominator forces the matching numerator to
// vanish, otherwise the bound is unsatisfiable.
inline bool split_inequality_ac(const SplitFormParams& p) {
    constexpr double eps = 1e-12;
    double bound = 0.0;
    const std::pair<double, double> terms[2] = {{p.q, std::abs(p.corner)},
                                                {0.5 - p.lambda, std::abs(p.t)}};
    for (const auto& [den, num] : terms) {
        if (den > eps)
            bound += num * num / den;
        else if (den < -eps || num > eps)
            return false;
    }
    return p.lambda >= bound;
}

// Verifies H matches the requested zero pattern, then the kind-specific
// positivity statement: the CpForm must satisfy the scalar inequality and
// be PSD outright; the CoCpForm must turn into a CpForm pattern under
// partial transposition and be PSD there.
inline bool split_form_check(const MapRep& h, SplitFormKind kind, const SplitFormParams& p,
                             double tol = 1e-9) {
    validate_map(h);
    if (h.dim_in != 2 || h.dim_out != 2)
        throw PatternMismatch("split forms are 4x4 (2 -> 2 maps)");
    if (!h.choi.approx_equal(assemble_split_form(kind, p), tol))
        throw PatternMismatch("matrix does not match the requested split pattern");
    if (kind == SplitFormKind::CpForm)
        return split_inequality_ac(p) && is_psd(h.choi, tol).psd;
    // partial transpose carries (lambda, q, y, t) to the inner pattern with
    // z = y and t -> conj(t)
    const Matrix pt = partial_transpose(h.choi, 2, 2, Factor::First);
    const SplitFormParams mapped{p.lambda, p.q, p.corner, std::conj(p.t)};
    if (!pt.approx_equal(assemble_split_form(SplitFormKind::CpForm, mapped), tol))
        throw PatternMismatch("partial transpose left the expected pattern");
    return is_psd(pt, tol).psd;
}

// ---------------------------------------------------------------------------
// Extremal decomposition on the slice |y| + |z| = sqrt(lambda)
// ---------------------------------------------------------------------------

struct ExtremalDecomposition {
    MapRep t1; // completely copositive part (PSD after partial transpose)
    MapRep t2; // completely positive part (PSD)
    Complex c{0.0, 0.0};
    struct Part {
        double lambda = 0.0;
        double a = 0.0;
        Complex t{0.0, 0.0};
        double b = 0.0;
    } part1, part2;
    // verification data
    double sum_residual = 0.0;  // || H_1 + H_2 - H ||_max
    double t2_min_eig = 0.0;    // lambda_min(H_2)
    double pt1_min_eig = 0.0;   // lambda_min(PT(H_1))
    double param_residual = 0.0;

    bool valid(double tol = 1e-9) const {
        return sum_residual <= tol && param_residual <= tol && t2_min_eig >= -tol &&
               pt1_min_eig >= -tol;
    }
};

// On the extremal slice the two parts are forced:
//   part 1: a1 = |y| / sqrt(l), l1 = |y| sqrt(l), t1 = t/2, b1 = |z| (1-l) / sqrt(l)
//   part 2: a2 = |z| / sqrt(l), l2 = |z| sqrt(l), t2 = t/2, b2 = |y| (1-l) / sqrt(l)
// and the coupling entry c solves conj(y1) l^{-1/4} t1 = y1 l^{1/4} conj(c)
// with y1 the principal square root of y. Requires lambda, y, z nonzero and
// |y| + |z| = sqrt(lambda) within 1e-10.
//
// Both parts certify (part 2 PSD, part 1 PSD after partial transpose) exactly
// when the parameters are admissible:
//   |t|^2 <= 4 |y| |z| (1 - lambda)   and   2 arg(t) = arg(y) - arg(z) + pi.
// The split is rank-forced, so for inadmissible parameters no other split
// exists either; such inputs are reported through valid() going false rather
// than by throwing.
inline ExtremalDecomposition decompose_extremal(const FaceMapParams& p) {
    constexpr double slice_tol = 1e-10;
    detail::require_orthonormal(p.xi_basis, "xi");
    detail::require_orthonormal(p.eta_basis, "eta");
    if (p.lambda <= 0.0)
        throw DegenerateParameter("decomposition needs lambda > 0");
    const double ay = std::abs(p.y), az = std::abs(p.z);
    if (ay == 0.0 || az == 0.0)
        throw DegenerateParameter("decomposition needs y != 0 and z != 0");
    const double sq = std::sqrt(p.lambda);
    if (std::abs(ay + az - sq) > slice_tol)
        throw ConstraintViolated("parameters are off the slice |y| + |z| = sqrt(lambda): " +
                                 std::to_string(ay + az) + " vs " + std::to_string(sq));

    ExtremalDecomposition d;
    d.part1 = {ay * sq, ay / sq, 0.5 * p.t, az / sq * (1.0 - p.lambda)};
    d.part2 = {az * sq, az / sq, 0.5 * p.t, ay / sq * (1.0 - p.lambda)};
    const Complex y1 = std::sqrt(p.y); // principal branch
    d.c = (y1 / std::conj(y1)) * std::conj(d.part1.t) / sq;

    const Complex l1{d.part1.lambda, 0.0}, a1{d.part1.a, 0.0}, b1{d.part1.b, 0.0};
    const Complex l2{d.part2.lambda, 0.0}, a2{d.part2.a, 0.0}, b2{d.part2.b, 0.0};
    const Matrix h1{{0.0, 0.0, 0.0, p.y},
                    {0.0, l1, 0.0, d.part1.t},
                    {0.0, 0.0, a1, d.c},
                    {std::conj(p.y), std::conj(d.part1.t), std::conj(d.c), b1}};
    const Matrix h2{{0.0, 0.0, 0.0, 0.0},
                    {0.0, l2, std::conj(p.z), d.part2.t},
                    {0.0, p.z, a2, -d.c},
                    {0.0, std::conj(d.part2.t), -std::conj(d.c), b2}};

    d.t1.dim_in = d.t1.dim_out = 2;
    d.t1.choi = detail::choi_from_product_basis(h1, p.xi_basis, p.eta_basis);
    d.t2.dim_in = d.t2.dim_out = 2;
    d.t2.choi = detail::choi_from_product_basis(h2, p.xi_basis, p.eta_basis);

    const Matrix whole = detail::choi_from_product_basis(face_map_pattern(p), p.xi_basis,
                                                         p.eta_basis);
    d.sum_residual = (d.t1.choi + d.t2.choi - whole).max_abs();
    d.t2_min_eig = is_psd(d.t2.choi).min_eig;
    d.pt1_min_eig = is_psd(partial_transpose(d.t1.choi, 2, 2, Factor::First)).min_eig;
    d.param_residual = std::max({std::abs(d.part1.lambda + d.part2.lambda - p.lambda),
                                 std::abs(d.part1.a + d.part2.a - 1.0),
                                 std::abs(d.part1.t + d.part2.t - p.t),
                                 std::abs(d.part1.b + d.part2.b - (1.0 - p.lambda))});
    return d;
}

// ---------------------------------------------------------------------------
// Exact local decomposability: trace conditions and the GNS construction
// ---------------------------------------------------------------------------

// The four conditions equivalent to T(a) = W pi(a) W* for a unital map in
// the face of (xi_1, eta_1):
//   Tr T(f_12) = 0, Tr T(f_21) = 0, Tr T(f_22) = 1, and
//   Tr T(f_11) = 2 (|<eta_2, T(f_12) eta_1>|^2 + |<eta_2, T(f_21) eta_1>|^2),
// where f_ij = |xi_i><xi_j|.
inline bool check_trace_conditions(const MapRep& t, const Basis2& xi, const Basis2& eta,
                                        double tol = 1e-9) {
    detail::require_orthonormal(xi, "xi");
    detail::require_orthonormal(eta, "eta");
    if (!in_maximal_face_P(t, FaceSpecP{xi[0], eta[0]}, tol))
        throw NotInFace("map is not in the maximal face of (xi_1, eta_1)");
    const Matrix t11 = apply_map(t, outer(xi[0], xi[0]));
    const Matrix t12 = apply_map(t, outer(xi[0], xi[1]));
    const Matrix t21 = apply_map(t, outer(xi[1], xi[0]));
    const Matrix t22 = apply_map(t, outer(xi[1], xi[1]));
    if (std::abs(t12.trace()) > tol || std::abs(t21.trace()) > tol)
        return false;
    if (std::abs(t22.trace() - 1.0) > tol)
        return false;
    const double m12 = std::abs(vdot(eta[1], matvec(t12, eta[0])));
    const double m21 = std::abs(vdot(eta[1], matvec(t21, eta[0])));
    return std::abs(t11.trace().real() - 2.0 * (m12 * m12 + m21 * m21)) <= tol &&
           std::abs(t11.trace().imag()) <= tol;
}

struct LocalDecomposition {
    Matrix w;                     // d_out x (dim_left + dim_right)
    std::array<Matrix, 4> pi;     // pi(f_p), block diag (left-mult (+) right-mult)
    Vector identity_class;        // [I] in the orthonormalized coordinates
    std::size_t dim_left = 0;
    std::size_t dim_right = 0;
    Basis2 xi_basis;
    double defining_residual = 0.0;      // || W pi(f_p)[I] - T(f_p) eta_1 ||
    double eta_residual = 0.0;           // || (W pi(f_p) W*) eta_1 - T(f_p) eta_1 ||
    double full_residual = 0.0;          // max_p || W pi(f_p) W* - T(f_p) ||_F
    double jordan_residual = 0.0;        // unitality + (anti)multiplicativity check

    // pi extended linearly: a given in standard coordinates.
    Matrix pi_of(const Matrix& a) const {
        Matrix r(dim_left + dim_right, dim_left + dim_right);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                const Complex coeff = vdot(xi_basis[i], matvec(a, xi_basis[j]));
                if (coeff != Complex{0.0, 0.0})
                    r += coeff * pi[i * 2 + j];
            }
        return r;
    }
};

// GNS-style local decomposition at eta_1 for a face member. The state
// phi(a) = <eta_1, T(a) eta_1> quotients M_2 by its left and right null
// ideals; the representation acts by left multiplication on the first
// summand and right multiplication on the second. Each summand carries
// half the state's weight, so the class of the identity is a unit vector,
// and W is the minimum-norm solution of W pi(a) [I] = T(a) eta_1 (extended
// by zero off the cyclic subspace).
inline LocalDecomposition build_local_decomposition(const MapRep& t, const Basis2& xi,
                                                    const Basis2& eta, double tol = 1e-9) {
    detail::require_orthonormal(xi, "xi");
    detail::require_orthonormal(eta, "eta");
    if (t.dim_in != 2 || t.dim_out != 2)
        throw DimensionMismatch("local decomposition is implemented for 2 -> 2 maps");
    if (!in_maximal_face_P(t, FaceSpecP{xi[0], eta[0]}, tol))
        throw NotInFace("map is not in the maximal face of (xi_1, eta_1)");

    std::array<Matrix, 4> f;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            f[i * 2 + j] = outer(xi[i], xi[j]);
    auto phi = [&](const Matrix& a) { return vdot(eta[0], matvec(apply_map(t, a), eta[0])); };

    // Gram matrices of the quotient inner products (each weighted 1/2).
    Matrix gl(4, 4), gr(4, 4);
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q) {
            gl(p, q) = 0.5 * phi(f[p].adjoint() * f[q]);
            gr(p, q) = 0.5 * phi(f[q] * f[p].adjoint());
        }

    // Orthonormal coordinates from the Gram eigenbases; null directions
    // (relative threshold 1e-10) are dropped.
    auto coordinates = [](const Matrix& g) {
        const EigResult e = eig_hermitian(0.5 * (g + g.adjoint()));
        const double lmax = std::max(e.values.front(), 0.0);
        std::size_t r = 0;
        while (r < 4 && e.values[r] > 1e-10 * std::max(lmax, 1e-300))
            ++r;
        Matrix c(r, 4); // c(alpha) = Lambda^{1/2} V* alpha on kept rows
        for (std::size_t k = 0; k < r; ++k) {
            const double s = std::sqrt(e.values[k]);
            for (std::size_t p = 0; p < 4; ++p)
                c(k, p) = s * std::conj(e.vectors(p, k));
        }
        return c;
    };
    const Matrix cl = coordinates(gl);
    const Matrix cr = coordinates(gr);
    if (cl.rows() != 2 || cr.rows() != 2)
        throw DegenerateGNS("quotient dimensions are (" + std::to_string(cl.rows()) + ", " +
                            std::to_string(cr.rows()) + "), expected (2, 2)");

    LocalDecomposition d;
    d.dim_left = cl.rows();
    d.dim_right = cr.rows();
    d.xi_basis = xi;
    const std::size_t kdim = d.dim_left + d.dim_right;

    // Left/right multiplication in coordinates: f_q f_p = delta(q.j, p.i)
    // f_(q.i, p.j), so the product columns are copies of basis columns.
    const Matrix clp = pseudo_inverse_general(cl);
    const Matrix crp = pseudo_inverse_general(cr);
    std::array<Matrix, 4> pl, pr;
    for (std::size_t qi = 0; qi < 2; ++qi)
        for (std::size_t qj = 0; qj < 2; ++qj) {
            const std::size_t q = qi * 2 + qj;
            Matrix lcols(d.dim_left, 4), rcols(d.dim_right, 4);
            for (std::size_t pi_ = 0; pi_ < 2; ++pi_)
                for (std::size_t pj = 0; pj < 2; ++pj) {
                    const std::size_t p = pi_ * 2 + pj;
                    if (qj == pi_) // f_q f_p = f_(qi, pj)
                        for (std::size_t k = 0; k < d.dim_left; ++k)
                            lcols(k, p) = cl(k, qi * 2 + pj);
                    if (pj == qi) // f_p f_q = f_(pi, qj)
                        for (std::size_t k = 0; k < d.dim_right; ++k)
                            rcols(k, p) = cr(k, pi_ * 2 + qj);
                }
            pl[q] = lcols * clp;
            pr[q] = rcols * crp;
            Matrix full(kdim, kdim);
            full.set_block(0, 0, pl[q]);
            full.set_block(d.dim_left, d.dim_left, pr[q]);
            d.pi[q] = full;
        }

    d.identity_class.assign(kdim, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < d.dim_left; ++k)
        d.identity_class[k] = cl(k, 0) + cl(k, 3);
    for (std::size_t k = 0; k < d.dim_right; ++k)
        d.identity_class[d.dim_left + k] = cr(k, 0) + cr(k, 3);

    // Defining equation W M = N with M[:,p] = pi(f_p)[I], N[:,p] = T(f_p) eta_1.
    Matrix m(kdim, 4), n(2, 4);
    for (std::size_t p = 0; p < 4; ++p) {
        const Vector col = matvec(d.pi[p], d.identity_class);
        for (std::size_t k = 0; k < kdim; ++k)
            m(k, p) = col[k];
        const Vector img = matvec(apply_map(t, f[p]), eta[0]);
        for (std::size_t k = 0; k < 2; ++k)
            n(k, p) = img[k];
    }
    d.w = n * pseudo_inverse_general(m);
    d.defining_residual = (d.w * m - n).max_abs();

    // Residuals of the pointwise and the full reproduction.
    for (std::size_t p = 0; p < 4; ++p) {
        const Matrix rec = d.w * d.pi[p] * d.w.adjoint();
        const Matrix target = apply_map(t, f[p]);
        d.full_residual = std::max(d.full_residual, (rec - target).frobenius_norm());
        Vector diff = matvec(rec, eta[0]);
        const Vector want = matvec(target, eta[0]);
        for (std::size_t k = 0; k < 2; ++k)
            diff[k] -= want[k];
        d.eta_residual = std::max(d.eta_residual, vnorm(diff));
    }

    // Jordan structure: pi(I) = 1, left block multiplicative, right block
    // antimultiplicative.
    double jr = (pl[0] + pl[3] - Matrix::identity(d.dim_left)).max_abs();
    jr = std::max(jr, (pr[0] + pr[3] - Matrix::identity(d.dim_right)).max_abs());
    for (std::size_t q = 0; q < 4; ++q)
        for (std::size_t p = 0; p < 4; ++p) {
            const std::size_t qi = q / 2, qj = q % 2, pi_ = p / 2, pj = p % 2;
            Matrix lexp(d.dim_left, d.dim_left), rexp(d.dim_right, d.dim_right);
            if (qj == pi_)
                lexp = pl[qi * 2 + pj];
            if (pj == qi)
                rexp = pr[pi_ * 2 + qj];
            jr = std::max(jr, (pl[q] * pl[p] - lexp).max_abs());
            jr = std::max(jr, (pr[q] * pr[p] - rexp).max_abs());
        }
    d.jordan_residual = jr;
    return d;
}

// ---------------------------------------------------------------------------
// 2 -> 3 face members: block pattern and split verification
// ---------------------------------------------------------------------------

// For a unital map M_2 -> M_3 in the face of (xi_1, eta_1) the 6x6 matrix
// has blocks A11 = [[0,0,0],[0,a,c],[0,c~,b]], A22 = I - A11, and the
// off-diagonal block vanishes at its (0,0) entry.
inline bool verify_2x3_block_structure(const MapRep& t, double tol = 1e-9) {
    validate_map(t);
    if (t.dim_in != 2 || t.dim_out != 3)
        throw PatternMismatch("expected a 2 -> 3 map");
    const Matrix a11 = choi_block(t, 0, 0);
    const Matrix a12 = choi_block(t, 0, 1);
    const Matrix a22 = choi_block(t, 1, 1);
    const double s = std::max(1.0, t.choi.max_abs());
    auto ok = [&](Complex vv, Complex want) { return std::abs(vv - want) <= tol * s; };
    for (std::size_t k = 0; k < 3; ++k)
        if (!ok(a11(0, k), 0.0) || !ok(a11(k, 0), 0.0))
            return false;
    if (!ok(a12(0, 0), 0.0))
        return false;
    if (!ok(a22(0, 0), 1.0) || !ok(a22(0, 1), 0.0) || !ok(a22(0, 2), 0.0))
        return false;
    if (!(a11 + a22).approx_equal(Matrix::identity(3), tol * s))
        return false;
    const double a = a11(1, 1).real(), b = a11(2, 2).real();
    if (a < -tol || a > 1.0 + tol || b < -tol || b > 1.0 + tol)
        return false;
    return std::norm(a11(1, 2)) <= a * b + tol;
}

struct BlockPair {
    Matrix a11, a12, a22;
};

inline Matrix assemble_2block(const BlockPair& b) {
    const std::size_t n = b.a11.rows();
    Matrix m(2 * n, 2 * n);
    m.set_block(0, 0, b.a11);
    m.set_block(0, n, b.a12);
    m.set_block(n, 0, b.a12.adjoint());
    m.set_block(n, n, b.a22);
    return m;
}

// Verifies a claimed split H = H_I + H_II into a CP candidate (I) and a
// co-CP candidate (II): block sums, PSD diagonals, the Cauchy-Schwarz
// bound |<x, A12 y>| <= ||A11^{1/2} x|| ||A22^{1/2} y|| on 500 sampled
// pairs (for II with the adjoint off-block), and the sharpened PSD tests
// of the assembled candidates (II after partial transposition). Throws
// SplitInvalid naming the first failed condition.
inline bool verify_2x3_split(const MapRep& t, const BlockPair& ai, const BlockPair& aii,
                             double tol = 1e-9) {
    validate_map(t);
    if (t.dim_in != 2 || t.dim_out != 3)
        throw PatternMismatch("expected a 2 -> 3 map");
    const double s = std::max(1.0, t.choi.max_abs());
    const Matrix d11 = ai.a11 + aii.a11 - choi_block(t, 0, 0);
    const Matrix d12 = ai.a12 + aii.a12 - choi_block(t, 0, 1);
    const Matrix d22 = ai.a22 + aii.a22 - choi_block(t, 1, 1);
    if (std::max({d11.max_abs(), d12.max_abs(), d22.max_abs()}) > tol * s)
        throw SplitInvalid("sum: blocks of the two parts do not add up to the map");

    for (const Matrix* blk : {&ai.a11, &ai.a22, &aii.a11, &aii.a22})
        if (!is_psd(0.5 * (*blk + blk->adjoint()), tol).psd)
            throw SplitInvalid("diagonal-psd: a diagonal block is not PSD");

    SplitMix64 rng(0xC5u);
    const Matrix sq_i11 = sqrt_psd(0.5 * (ai.a11 + ai.a11.adjoint()));
    const Matrix sq_i22 = sqrt_psd(0.5 * (ai.a22 + ai.a22.adjoint()));
    const Matrix sq_ii11 = sqrt_psd(0.5 * (aii.a11 + aii.a11.adjoint()));
    const Matrix sq_ii22 = sqrt_psd(0.5 * (aii.a22 + aii.a22.adjoint()));
    const Matrix aii12adj = aii.a12.adjoint();
    for (int k = 0; k < 500; ++k) {
        const Vector x = random_unit_vector(rng, 3);
        const Vector y = random_unit_vector(rng, 3);
        const double lhs_i = std::abs(vdot(x, matvec(ai.a12, y)));
        if (lhs_i > vnorm(matvec(sq_i11, x)) * vnorm(matvec(sq_i22, y)) + tol * s)
            throw SplitInvalid("cauchy-schwarz-I: sampled pair violates the bound");
        const double lhs_ii = std::abs(vdot(x, matvec(aii12adj, y)));
        if (lhs_ii > vnorm(matvec(sq_ii11, x)) * vnorm(matvec(sq_ii22, y)) + tol * s)
            throw SplitInvalid("cauchy-schwarz-II: sampled pair violates the bound");
    }

    if (!is_psd(assemble_2block(ai), tol).psd)
        throw SplitInvalid("assembled-psd-I: CP candidate is not PSD");
    if (!is_psd(partial_transpose(assemble_2block(aii), 2, 3, Factor::First), tol).psd)
        throw SplitInvalid("assembled-pt-psd-II: co-CP candidate is not PSD after "
                           "partial transpose");
    return true;
}

// ---------------------------------------------------------------------------
// Jordan-morphism compressions
// ---------------------------------------------------------------------------

// T(a) = W* (u* a u (+) v* a^T v) W for unitaries u, v on C^d and an
// isometry W: C^d -> C^{2d}. The Schroedinger picture sends a pure state
// to a mixture of two pure states with weights ||z W f||^2 and its
// complement (z the central projection onto the first block).
inline MapRep map_from_jordan_blocks(const Matrix& u, const Matrix& v, const Matrix& w) {
    const std::size_t d = u.rows();
    if (!u.square() || !v.square() || v.rows() != d)
        throw ShapeMismatch("u and v must be unitaries of the same size");
    if (w.rows() != 2 * d || w.cols() != d)
        throw ShapeMismatch("w must be a 2d x d isometry");
    if (!(u.adjoint() * u).approx_equal(Matrix::identity(d), 1e-8) ||
        !(v.adjoint() * v).approx_equal(Matrix::identity(d), 1e-8) ||
        !(w.adjoint() * w).approx_equal(Matrix::identity(d), 1e-8))
        throw ShapeMismatch("u, v must be unitary and w an isometry");
    MapSpec s;
    s.dim_in = s.dim_out = d;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const Matrix e = Matrix::unit(d, i, j);
            Matrix tau(2 * d, 2 * d);
            tau.set_block(0, 0, u.adjoint() * e * u);
            tau.set_block(d, d, v.adjoint() * e.transpose() * v);
            s.images.push_back(w.adjoint() * tau * w);
        }
    return choi_of_map(s);
}

} // namespace posmap
