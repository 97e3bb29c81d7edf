#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "posmap/choi.hpp"
#include "posmap/eig.hpp"
#include "posmap/faces.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"
#include "posmap/stormer2d.hpp"

using namespace posmap;

namespace {

FaceMapParams params(double lambda, Complex y, Complex z, Complex t) {
    FaceMapParams p;
    p.lambda = lambda;
    p.y = y;
    p.z = z;
    p.t = t;
    return p;
}

Basis2 rotated_basis(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {Vector{Complex{c, 0.0}, Complex{s, 0.0}},
            Vector{Complex{-s, 0.0}, Complex{c, 0.0}}};
}

} // namespace

TEST_CASE("face family matrix has the documented layout") {
    const Complex y{0.1, 0.2}, z{0.3, -0.1}, t{0.05, 0.15};
    const Matrix m = face_map_pattern(params(0.6, y, z, t));
    CHECK(m(0, 3) == y);
    CHECK(m(1, 1) == Complex{0.6, 0.0});
    CHECK(m(1, 2) == std::conj(z));
    CHECK(m(1, 3) == t);
    CHECK(m(2, 2) == Complex{1.0, 0.0});
    CHECK(m(3, 3) == Complex{0.4, 0.0});
    CHECK(m(0, 0) == Complex{0.0, 0.0});
    CHECK(m.is_hermitian(1e-15));
}

TEST_CASE("assembled face maps are unital members of the named face") {
    const MapRep t = face_map_choi(params(0.5, Complex{0.3, 0.1}, Complex{0.2, 0.0},
                                          Complex{0.05, 0.0}));
    CHECK(is_unital(t));
    CHECK(in_maximal_face_P(t, FaceSpecP{basis_vector(2, 0), basis_vector(2, 0)}));

    // general bases: images carry the same coefficients against the bases
    FaceMapParams p = params(0.5, Complex{0.3, 0.1}, Complex{0.2, 0.0}, Complex{0.0, 0.0});
    p.xi_basis = rotated_basis(0.7);
    p.eta_basis = rotated_basis(-0.3);
    const MapRep tg = face_map_choi(p);
    CHECK(is_unital(tg));
    CHECK(in_maximal_face_P(tg, FaceSpecP{p.xi_basis[0], p.eta_basis[0]}));
    const Matrix img11 = apply_map(tg, outer(p.xi_basis[0], p.xi_basis[0]));
    Matrix want = projector(p.eta_basis[1]);
    want *= Complex{p.lambda, 0.0};
    CHECK(img11.approx_equal(want, 1e-12));
    const Matrix img12 = apply_map(tg, outer(p.xi_basis[0], p.xi_basis[1]));
    const Matrix want12 = p.y * outer(p.eta_basis[0], p.eta_basis[1]) +
                          std::conj(p.z) * outer(p.eta_basis[1], p.eta_basis[0]);
    CHECK(img12.approx_equal(want12, 1e-12));
}

TEST_CASE("face map validation and the admissibility gate") {
    CHECK_THROWS_AS(face_map_choi(params(1.5, {}, {}, {})), ConstraintViolated);
    FaceMapParams bad;
    bad.xi_basis[0] = Vector{Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    CHECK_THROWS_AS(face_map_choi(bad), MalformedSpec);

    // lambda = 0 with a unit corner is the classic inadmissible point
    CHECK_THROWS_AS(face_map_2d(params(0.0, Complex{1.0, 0.0}, {}, {})),
                    BlockPositivityViolated);
    // ... though its matrix can still be assembled for inspection
    CHECK_NOTHROW(face_map_choi(params(0.0, Complex{1.0, 0.0}, {}, {})));
    // a comfortable interior point passes the gate
    CHECK_NOTHROW(face_map_2d(params(0.25, Complex{0.25, 0.0}, Complex{0.25, 0.0}, {})));
}

TEST_CASE("extremal normal forms reproduce the named maps") {
    StormerParams ident;
    ident.alpha = Complex{1.0, 0.0};
    ident.delta = 1.0;
    CHECK(stormer_extremal(ident).choi.approx_equal(identity_map(2).choi, 1e-12));

    StormerParams trans;
    trans.beta = Complex{1.0, 0.0};
    trans.delta = 1.0;
    CHECK(stormer_extremal(trans).choi.approx_equal(transpose_map(2).choi, 1e-12));

    // a genuinely two-sided example: with real alpha, beta the coupling
    // phase relation 2 arg(eps) = arg(alpha) - arg(beta) + pi makes eps
    // purely imaginary; then det T(p_u) = (r - sqrt(2) sin(theta))^2 / 2 >= 0
    StormerParams s;
    s.alpha = Complex{0.5, 0.0};
    s.beta = Complex{0.5, 0.0};
    s.gamma = 0.5;
    s.delta = 1.0;
    s.epsilon = Complex{0.0, 1.0 / std::sqrt(2.0)};
    const MapRep t = stormer_extremal(s);
    CHECK(in_maximal_face_P(t, FaceSpecP{basis_vector(2, 1), basis_vector(2, 0)}));
    const Classification cls = classify(t);
    CHECK(cls.verdict != Verdict::NotPositive);
    // two-sided means neither CP nor co-CP on its own
    CHECK(cls.cp_min_eig < -0.1);
    CHECK(cls.cocp_min_eig < -0.1);

    SECTION("constraint violations are rejected") {
        StormerParams bad = s;
        bad.epsilon = Complex{0.9, 0.0};
        CHECK_THROWS_AS(stormer_extremal(bad), ExtremalityConstraintViolated);
        bad = s;
        bad.epsilon = Complex{1.0 / std::sqrt(2.0), 0.0}; // right size, wrong phase
        CHECK_THROWS_AS(stormer_extremal(bad), ExtremalityConstraintViolated);
        bad = s;
        bad.delta = 0.9;
        CHECK_THROWS_AS(stormer_extremal(bad), ExtremalityConstraintViolated);
        StormerParams g0;
        g0.alpha = Complex{0.5, 0.0};
        g0.delta = 1.0;
        CHECK_THROWS_AS(stormer_extremal(g0), ExtremalityConstraintViolated);
        g0.gamma = -0.1;
        CHECK_THROWS_AS(stormer_extremal(g0), ExtremalityConstraintViolated);
    }
}

TEST_CASE("split forms: patterns, inequality, and the positivity link") {
    SplitFormParams p;
    p.lambda = 0.125;
    p.q = 0.5;
    p.corner = Complex{0.25, 0.0};
    p.t = Complex{0.0, 0.0};

    const Matrix cp = assemble_split_form(SplitFormKind::CpForm, p);
    CHECK(cp(1, 2) == std::conj(p.corner));
    CHECK(cp(0, 3) == Complex{0.0, 0.0});
    CHECK(cp(3, 3) == Complex{0.375, 0.0});
    const Matrix cocp = assemble_split_form(SplitFormKind::CoCpForm, p);
    CHECK(cocp(0, 3) == p.corner);
    CHECK(cocp(1, 2) == Complex{0.0, 0.0});

    // the worked boundary point: inequality holds with equality, matrix PSD
    CHECK(split_inequality_ac(p));
    MapRep m{2, 2, cp};
    CHECK(split_form_check(m, SplitFormKind::CpForm, p));
    MapRep mc{2, 2, cocp};
    CHECK(split_form_check(mc, SplitFormKind::CoCpForm, p));

    SECTION("failing inequality matches failing PSD") {
        SplitFormParams bad = p;
        bad.lambda = 0.05; // needs at least |corner|^2/q = 0.125
        CHECK_FALSE(split_inequality_ac(bad));
        MapRep mb{2, 2, assemble_split_form(SplitFormKind::CpForm, bad)};
        CHECK_FALSE(is_psd(mb.choi).psd);
        CHECK_FALSE(split_form_check(mb, SplitFormKind::CpForm, bad));
    }
    SECTION("generalized-inverse semantics at vanishing denominators") {
        SplitFormParams z;
        z.lambda = 0.25;
        z.q = 0.0;
        z.corner = Complex{0.0, 0.0};
        z.t = Complex{0.0, 0.0};
        CHECK(split_inequality_ac(z)); // 0/0 treated as 0
        z.corner = Complex{0.1, 0.0};
        CHECK_FALSE(split_inequality_ac(z)); // nonzero over zero is unbounded
        z.corner = Complex{0.0, 0.0};
        z.lambda = 0.5;
        z.t = Complex{0.1, 0.0};
        CHECK_FALSE(split_inequality_ac(z)); // 1/2 - lambda = 0 with t != 0
    }
    SECTION("pattern mismatches are structural errors") {
        MapRep wrong{2, 2, Matrix::identity(4)};
        CHECK_THROWS_AS(split_form_check(wrong, SplitFormKind::CpForm, p), PatternMismatch);
    }
}

TEST_CASE("worked decomposition comes out exactly") {
    const ExtremalDecomposition d =
        decompose_extremal(params(0.25, Complex{0.25, 0.0}, Complex{0.25, 0.0}, {}));
    CHECK(d.part1.lambda == 0.125);
    CHECK(d.part2.lambda == 0.125);
    CHECK(d.part1.a == 0.5);
    CHECK(d.part2.a == 0.5);
    CHECK(d.part1.b == 0.375);
    CHECK(d.part2.b == 0.375);
    CHECK(d.c == Complex{0.0, 0.0});
    CHECK(d.sum_residual <= 1e-12);
    CHECK(std::abs(d.t2_min_eig) <= 1e-10);
    CHECK(std::abs(d.pt1_min_eig) <= 1e-10);
    CHECK(d.param_residual == 0.0);
    CHECK(d.valid());

    // mirrored parts: partial transposition carries part 1 onto part 2
    const Matrix pt1 = partial_transpose(d.t1.choi, 2, 2, Factor::First);
    CHECK(pt1.approx_equal(d.t2.choi, 1e-12));
}

TEST_CASE("decomposition guards reject degenerate and off-slice input") {
    CHECK_THROWS_AS(decompose_extremal(params(0.0, Complex{0.1, 0.0}, Complex{0.1, 0.0}, {})),
                    DegenerateParameter);
    CHECK_THROWS_AS(decompose_extremal(params(1.0, Complex{1.0, 0.0}, {}, {})),
                    DegenerateParameter);
    CHECK_THROWS_AS(
        decompose_extremal(params(0.25, Complex{0.125, 0.0}, Complex{0.125, 0.0}, {})),
        ConstraintViolated);
}

TEST_CASE("decomposition handles complex phases and nonzero t") {
    SplitMix64 rng(57);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = 0.05 + 0.9 * rng.next_double();
        const double sq = std::sqrt(lambda);
        const double ay = sq * (0.1 + 0.8 * rng.next_double());
        const double az = sq - ay;
        const double phy = 6.28318530717958648 * rng.next_double();
        const double phz = 6.28318530717958648 * rng.next_double();
        // both split parts stay PSD only when the coupling phase obeys
        // 2 arg(t) = arg(y) - arg(z) + pi (mod 2 pi)
        const double pht =
            0.5 * (phy - phz + 3.14159265358979324) + (trial % 2) * 3.14159265358979324;
        const double tmax = 2.0 * std::sqrt(ay * az * (1.0 - lambda));
        const double at = tmax * rng.next_double();
        const FaceMapParams p =
            params(lambda, Complex{ay * std::cos(phy), ay * std::sin(phy)},
                   Complex{az * std::cos(phz), az * std::sin(phz)},
                   Complex{at * std::cos(pht), at * std::sin(pht)});
        const ExtremalDecomposition d = decompose_extremal(p);
        INFO("trial " << trial << " lambda " << lambda);
        CHECK(d.valid(1e-8));
        CHECK(d.part1.lambda + d.part2.lambda == Catch::Approx(lambda).margin(1e-12));
    }

    SECTION("an off-relation phase is reported as invalid, not mis-certified") {
        const double r = 0.25;
        const ExtremalDecomposition d = decompose_extremal(
            params(0.25, Complex{r, 0.0}, Complex{r, 0.0}, Complex{0.2, 0.0}));
        CHECK_FALSE(d.valid(1e-8)); // real t with real y, z breaks a part's PSD
        CHECK(d.sum_residual <= 1e-12);
        CHECK(d.param_residual <= 1e-12);
    }
}

TEST_CASE("trace conditions detect the exact-decomposition branch") {
    const double r = 0.5; // |y| = |z| = 1/2 gives |y|^2 + |z|^2 = 1/2
    const FaceMapParams good = params(1.0, Complex{r, 0.0}, Complex{0.0, r}, {});
    CHECK(check_trace_conditions(face_map_choi(good), good.xi_basis, good.eta_basis));

    const FaceMapParams t_off = params(1.0, Complex{r, 0.0}, Complex{0.0, r},
                                       Complex{0.05, 0.0});
    CHECK_FALSE(
        check_trace_conditions(face_map_choi(t_off), t_off.xi_basis, t_off.eta_basis));

    const FaceMapParams tr_off = params(0.9, Complex{r, 0.0}, Complex{0.0, r}, {});
    CHECK_FALSE(
        check_trace_conditions(face_map_choi(tr_off), tr_off.xi_basis, tr_off.eta_basis));

    const FaceMapParams ab_off = params(1.0, Complex{0.4, 0.0}, Complex{0.4, 0.0}, {});
    CHECK_FALSE(
        check_trace_conditions(face_map_choi(ab_off), ab_off.xi_basis, ab_off.eta_basis));

    CHECK_THROWS_AS(check_trace_conditions(identity_map(2), standard_basis_2(),
                                                standard_basis_2()),
                    NotInFace);
}

TEST_CASE("local decomposition reproduces the map exactly on the good branch") {
    const Basis2 std2 = standard_basis_2();
    const FaceMapParams good = params(1.0, Complex{0.5, 0.0}, Complex{0.5, 0.0}, {});
    const LocalDecomposition d = build_local_decomposition(face_map_choi(good), std2, std2);
    CHECK(d.dim_left == 2);
    CHECK(d.dim_right == 2);
    CHECK(d.defining_residual <= 1e-9);
    CHECK(d.eta_residual <= 1e-9);
    CHECK(d.full_residual <= 1e-9);
    CHECK(d.jordan_residual <= 1e-9);
    // the identity class is a unit vector: each summand carries half the state
    CHECK(vnorm(d.identity_class) == Catch::Approx(1.0).margin(1e-10));
    // pi extends linearly and respects the identity
    CHECK(d.pi_of(Matrix::identity(2)).approx_equal(Matrix::identity(4), 1e-9));

    SECTION("a perturbed parameter keeps the vector identity but not the map") {
        const FaceMapParams off = params(1.0, Complex{0.5, 0.0}, Complex{0.5, 0.0},
                                         Complex{0.05, 0.0});
        const LocalDecomposition b = build_local_decomposition(face_map_choi(off), std2, std2);
        CHECK(b.defining_residual <= 1e-9);
        CHECK(b.eta_residual <= 1e-9);
        CHECK(b.full_residual > 1e-3);
    }
    SECTION("degenerate state dimensions are reported") {
        MapRep zero{2, 2, Matrix(4, 4)};
        CHECK_THROWS_AS(build_local_decomposition(zero, std2, std2), DegenerateGNS);
    }
    SECTION("maps outside the face are rejected") {
        CHECK_THROWS_AS(build_local_decomposition(identity_map(2), std2, std2), NotInFace);
    }
}

TEST_CASE("2 -> 3 face members expose the forced block pattern") {
    // T(a) = W a W* + V a^T V* with first Kraus rows zero: unital by design
    const double t = 0.5;
    const Matrix w{{0.0, 1.0}, {std::sqrt(t), 0.0}, {0.0, 0.0}};
    const Matrix v{{0.0, 0.0}, {std::sqrt(1.0 - t), 0.0}, {0.0, 1.0}};
    MapSpec s;
    s.dim_in = 2;
    s.dim_out = 3;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            s.images.push_back(w * Matrix::unit(2, i, j) * w.adjoint() +
                               v * Matrix::unit(2, j, i) * v.adjoint());
    const MapRep tm = choi_of_map(s);
    CHECK(is_unital(tm));
    CHECK(in_maximal_face_P(tm, FaceSpecP{basis_vector(2, 0), basis_vector(3, 0)}));
    CHECK(verify_2x3_block_structure(tm));

    SECTION("the two-part split passes all split checks") {
        BlockPair ai, aii;
        ai.a11 = Matrix(3, 3);
        ai.a11(1, 1) = Complex{t, 0.0};
        ai.a12 = Matrix(3, 3);
        ai.a12(1, 0) = Complex{std::sqrt(t), 0.0};
        ai.a22 = Matrix::unit(3, 0, 0);
        aii.a11 = Matrix(3, 3);
        aii.a11(1, 1) = Complex{1.0 - t, 0.0};
        aii.a12 = Matrix(3, 3);
        aii.a12(2, 1) = Complex{std::sqrt(1.0 - t), 0.0};
        aii.a22 = Matrix::unit(3, 2, 2);
        CHECK(verify_2x3_split(tm, ai, aii));

        // swapping the claimed roles breaks the plain PSD test
        CHECK_THROWS_AS(verify_2x3_split(tm, aii, ai), SplitInvalid);
        // and a wrong sum is caught first
        BlockPair broken = ai;
        broken.a22 = Matrix(3, 3);
        CHECK_THROWS_AS(verify_2x3_split(tm, broken, aii), SplitInvalid);
    }
    SECTION("wrong dimensions are a pattern error") {
        CHECK_THROWS_AS(verify_2x3_block_structure(identity_map(2)), PatternMismatch);
    }
    SECTION("a violated corner entry fails the structure test") {
        MapRep bad = tm;
        bad.choi(0, 3) = Complex{0.2, 0.0};
        bad.choi(3, 0) = Complex{0.2, 0.0};
        CHECK_FALSE(verify_2x3_block_structure(bad));
    }
}

TEST_CASE("jordan-block compressions build unital maps with rank-2 dual images") {
    SplitMix64 rng(61);
    const std::size_t d = 3;
    const Matrix u = random_unitary(rng, d);
    const Matrix v = random_unitary(rng, d);
    const Matrix w = random_isometry(rng, 2 * d, d);
    const MapRep t = map_from_jordan_blocks(u, v, w);
    CHECK(is_unital(t));
    const MapRep td = dual_map(t);
    for (int trial = 0; trial < 5; ++trial) {
        const Vector f = random_unit_vector(rng, d);
        const Matrix img = apply_map(td, projector(f));
        const EigResult e = eig_hermitian(0.5 * (img + img.adjoint()));
        CHECK(e.values[0] + e.values[1] == Catch::Approx(1.0).margin(1e-9));
        CHECK(std::abs(e.values[2]) <= 1e-9);
    }
    CHECK_THROWS_AS(map_from_jordan_blocks(u, v, random_matrix(rng, 2 * d, d)),
                    ShapeMismatch);
}
