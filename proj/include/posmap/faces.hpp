#pragma once

// Maximal faces of the positive-map cone and of its CP subcone.
//
// A pair (xi, eta) of vectors names the face {T : T(|xi><xi|) eta = 0} of
// the positive cone. A single operator V names the face of the CP cone
// whose members have every Kraus operator trace-orthogonal to V. For CP
// maps the two pictures are linked by V = |eta><xi| (in the convention
// T(a) = sum W a W*): if every Kraus operator is orthogonal to |eta><xi|
// then T(|xi><xi|) eta = sum_k (W_k xi) <eta, W_k xi>^bar = 0.

#include "posmap/choi.hpp"
#include "posmap/complex_matrix.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"

namespace posmap {

struct FaceSpecP {
    Vector xi;  // unit vector in C^{d_in}
    Vector eta; // nonzero vector in C^{d_out}
};

struct FaceSpecCP {
    Matrix v; // d_out x d_in
};

// T(|xi><xi|) eta = 0 within tol, scale-free in both the image and eta.
inline bool in_maximal_face_P(const MapRep& t, const FaceSpecP& f, double tol = 1e-9) {
    if (f.xi.size() != t.dim_in || f.eta.size() != t.dim_out)
        throw DimensionMismatch("face spec does not match map dimensions");
    const Matrix img = apply_map(t, projector(normalized(f.xi)));
    const double resid = vnorm(matvec(img, f.eta));
    const double scale = img.frobenius_norm() * vnorm(f.eta);
    return resid <= tol * std::max(scale, 1e-300);
}

// All Kraus operators trace-orthogonal to V: |Tr(W_k* V)| <= tol scale.
// Gauge-independent: a unitary remix of a Kraus set preserves its span.
inline bool in_maximal_face_CP(const KrausSet& ks, const FaceSpecCP& f, double tol = 1e-9) {
    if (f.v.rows() != ks.dim_out || f.v.cols() != ks.dim_in)
        throw DimensionMismatch("face operator is " + f.v.shape_str() + ", expected " +
                                std::to_string(ks.dim_out) + "x" + std::to_string(ks.dim_in));
    const double vn = f.v.frobenius_norm();
    for (const auto& w : ks.ops) {
        const Complex ip = (w.adjoint() * f.v).trace();
        if (std::abs(ip) > tol * std::max(w.frobenius_norm() * vn, 1e-300))
            return false;
    }
    return true;
}

inline bool in_maximal_face_CP(const MapRep& t, const FaceSpecCP& f, double tol = 1e-9) {
    return in_maximal_face_CP(kraus_from_choi(t, tol), f, tol);
}

// CP-face membership at V = |eta><xi| implies P-face membership at
// (xi, eta); checks both and reports whether the implication held.
struct FaceInclusion {
    bool cp_member = false;
    bool p_member = false;
    bool implication_holds = false; // !cp_member || p_member
};

inline FaceInclusion check_face_inclusion(const MapRep& cp_map, const Vector& xi,
                                          const Vector& eta, double tol = 1e-9) {
    FaceInclusion r;
    r.cp_member = in_maximal_face_CP(cp_map, FaceSpecCP{outer(eta, xi)}, tol);
    r.p_member = in_maximal_face_P(cp_map, FaceSpecP{xi, eta}, tol);
    r.implication_holds = !r.cp_member || r.p_member;
    return r;
}

struct InteriorResult {
    bool interior = false;
    double min_ratio = 0.0; // smallest sigma_min(T(p_xi)) / ||T(p_xi)||_F found
    Vector certificate;     // xi at the minimum
};

namespace detail {

inline double singularity_ratio(const MapRep& t, const Vector& xi) {
    const Matrix img = apply_map(t, projector(xi));
    const double scale = img.frobenius_norm();
    if (scale <= 1e-300)
        return 0.0; // zero image: certainly singular
    const EigResult e = eig_hermitian(img.adjoint() * img);
    const double smin = std::sqrt(std::max(0.0, e.values.back()));
    return smin / scale;
}

// Derivative-free compass descent on the unit sphere (coordinates split into
// real and imaginary parts), deterministic.
inline void compass_refine(const MapRep& t, Vector& xi, double& best) {
    const std::size_t d = xi.size();
    double step = 0.3;
    for (int round = 0; round < 60 && step > 1e-6; ++round) {
        bool improved = false;
        for (std::size_t m = 0; m < 2 * d; ++m) {
            for (double sgn : {+1.0, -1.0}) {
                Vector cand = xi;
                if (m < d)
                    cand[m] += sgn * step;
                else
                    cand[m - d] += Complex{0.0, sgn * step};
                cand = normalized(std::move(cand));
                const double v = singularity_ratio(t, cand);
                if (v < best) {
                    best = v;
                    xi = cand;
                    improved = true;
                }
            }
        }
        if (!improved)
            step *= 0.5;
    }
}

} // namespace detail

// Interior test for the positive cone in the unital square case: T is
// interior iff T(|xi><xi|) is nonsingular for every unit xi. Minimizes the
// scale-free smallest singular value over deterministic sphere samples plus
// the see-saw's structured starts, then refines the best candidates.
inline InteriorResult is_interior_P(const MapRep& t, std::size_t samples = 200,
                                    const SeesawConfig& cfg = {}) {
    if (t.dim_in != t.dim_out)
        throw DimensionMismatch("is_interior_P needs a square map");
    const std::size_t d = t.dim_in;

    std::vector<Vector> candidates;
    for (const auto& [x, y] : detail::structured_starts(d, d))
        candidates.push_back(x);
    SplitMix64 rng(cfg.seed);
    for (std::size_t s = 0; s < samples; ++s)
        candidates.push_back(random_unit_vector(rng, d));

    InteriorResult r;
    r.min_ratio = 2.0;
    std::vector<std::pair<double, Vector>> scored;
    scored.reserve(candidates.size());
    for (auto& xi : candidates)
        scored.emplace_back(detail::singularity_ratio(t, xi), std::move(xi));
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const std::size_t refine = std::min<std::size_t>(3, scored.size());
    for (std::size_t k = 0; k < refine; ++k) {
        double v = scored[k].first;
        Vector xi = scored[k].second;
        detail::compass_refine(t, xi, v);
        if (v < r.min_ratio) {
            r.min_ratio = v;
            r.certificate = xi;
        }
    }
    r.interior = r.min_ratio > cfg.tol;
    return r;
}

} // namespace posmap
