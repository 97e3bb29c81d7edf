#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "posmap/choi.hpp"
#include "posmap/faces.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"

using namespace posmap;

TEST_CASE("transpose lies in the face named by (p_e1, e2)") {
    const MapRep tr = transpose_map(2);
    const Vector e1 = basis_vector(2, 0), e2 = basis_vector(2, 1);
    // T(p_e1) = e11, which kills e2
    CHECK(in_maximal_face_P(tr, FaceSpecP{e1, e2}));
    CHECK_FALSE(in_maximal_face_P(tr, FaceSpecP{e1, e1}));
    // the identity map kills eta from p_xi exactly when xi and eta are
    // orthogonal, so it shares this face with the transpose
    CHECK(in_maximal_face_P(identity_map(2), FaceSpecP{e1, e2}));
    CHECK_FALSE(in_maximal_face_P(identity_map(2), FaceSpecP{e1, e1}));
    // an interior map is in no maximal face at all
    CHECK_FALSE(in_maximal_face_P(depolarizing_map(2), FaceSpecP{e1, e2}));
    CHECK_FALSE(in_maximal_face_P(depolarizing_map(2), FaceSpecP{e1, e1}));
}

TEST_CASE("kraus-side face membership is gauge invariant") {
    SplitMix64 rng(37);
    const Vector xi = random_unit_vector(rng, 2);
    const Vector eta = random_unit_vector(rng, 2);
    const Matrix v = outer(eta, xi);
    // build Kraus operators orthogonal to v in the trace pairing
    std::vector<Matrix> basis;
    for (int k = 0; k < 6; ++k) {
        Matrix g = random_matrix(rng, 2, 2);
        const Complex proj = (v.adjoint() * g).trace() / (v.adjoint() * v).trace();
        g -= proj * v;
        basis.push_back(g);
    }
    KrausSet ks{2, 2, {basis[0], basis[1], basis[2]}};
    CHECK(in_maximal_face_CP(ks, FaceSpecCP{v}));
    // mixing the operators by a unitary leaves the map, and membership, alone
    const Matrix u = random_unitary(rng, 3);
    KrausSet mixed{2, 2, {}};
    for (std::size_t r = 0; r < 3; ++r) {
        Matrix w(2, 2);
        for (std::size_t c = 0; c < 3; ++c)
            w += u(r, c) * ks.ops[c];
        mixed.ops.push_back(w);
    }
    CHECK(map_from_kraus(mixed).choi.approx_equal(map_from_kraus(ks).choi, 1e-10));
    CHECK(in_maximal_face_CP(mixed, FaceSpecCP{v}));
    // and through the matrix overload (fresh factorization)
    CHECK(in_maximal_face_CP(map_from_kraus(ks), FaceSpecCP{v}));
    // a generic op set is not in the face
    KrausSet generic{2, 2, {random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)}};
    CHECK_FALSE(in_maximal_face_CP(generic, FaceSpecCP{v}));
}

TEST_CASE("membership in the smaller cone's face forces the larger one") {
    SplitMix64 rng(43);
    int members = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vector xi = random_unit_vector(rng, 2);
        const Vector eta = random_unit_vector(rng, 2);
        const Matrix v = outer(eta, xi);
        KrausSet ks{2, 2, {}};
        for (int k = 0; k < 2; ++k) {
            Matrix g = random_matrix(rng, 2, 2);
            const Complex proj = (v.adjoint() * g).trace() / (v.adjoint() * v).trace();
            ks.ops.push_back(g - proj * v);
        }
        const FaceInclusion f = check_face_inclusion(map_from_kraus(ks), xi, eta);
        if (f.cp_member) {
            ++members;
            CHECK(f.p_member);
            CHECK(f.implication_holds);
        }
    }
    CHECK(members == 100); // construction guarantees CP-face membership
}

TEST_CASE("interior test separates strictly positive maps from boundary ones") {
    const InteriorResult dep = is_interior_P(depolarizing_map(2), 60);
    CHECK(dep.interior);
    CHECK(dep.min_ratio > 0.1); // images are I/2 for every projector

    const InteriorResult id = is_interior_P(identity_map(2), 60);
    CHECK_FALSE(id.interior);
    CHECK(id.min_ratio <= 1e-6);
    // the certificate really produces a singular image
    const Matrix img = apply_map(identity_map(2), projector(id.certificate));
    CHECK(is_psd(img * img.adjoint()).min_eig < 1e-8);

    const InteriorResult tr = is_interior_P(transpose_map(2), 60);
    CHECK_FALSE(tr.interior);
}
