#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "posmap/choi.hpp"
#include "posmap/eig.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"

using namespace posmap;

namespace {

// A map that is linear and Hermitian-preserving but takes some projectors
// to matrices with a negative eigenvalue: a(i,i) keeps only the shifted
// diagonal. Useful as a guaranteed see-saw target.
MapRep shifted_diagonal_minus(std::size_t d) {
    MapSpec s;
    s.dim_in = s.dim_out = d;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Matrix img(d, d);
            if (i == j)
                img((i + 1) % d, (i + 1) % d) = Complex{1.0, 0.0};
            img(i, j) -= Complex{1.0, 0.0};
            s.images.push_back(img);
        }
    return choi_of_map(s);
}

} // namespace

TEST_CASE("product contractions match the full quadratic form") {
    SplitMix64 rng(17);
    const Matrix h = random_hermitian(rng, 6);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector x = random_unit_vector(rng, 2);
        const Vector y = random_unit_vector(rng, 3);
        const double direct = quadratic_form(h, tensor(x, y));
        CHECK(detail::product_value(h, x, y) == Catch::Approx(direct).margin(1e-12));
        // contracting one factor leaves the quadratic form in the other
        const Matrix ax = detail::contract_first(h, 2, 3, x);
        CHECK(quadratic_form(ax, y) == Catch::Approx(direct).margin(1e-12));
        const Matrix by = detail::contract_second(h, 2, 3, y);
        CHECK(quadratic_form(by, x) == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("structured starts cover both basis and fourier pairs") {
    const auto starts = detail::structured_starts(2, 3);
    CHECK(starts.size() == 12); // 6 basis pairs + 6 fourier pairs
    for (const auto& [x, y] : starts) {
        CHECK(vnorm(x) == Catch::Approx(1.0));
        CHECK(vnorm(y) == Catch::Approx(1.0));
    }
}

TEST_CASE("see-saw certifies violations exactly and deterministically") {
    SECTION("minus identity") {
        MapRep t;
        t.dim_in = t.dim_out = 2;
        t.choi = Matrix::identity(4);
        t.choi *= Complex{-1.0, 0.0};
        const ProductMin r = min_product_expectation(t.choi, 2, 2);
        CHECK(r.value == Catch::Approx(-1.0).margin(1e-9));
        // certificate re-evaluates to the reported value
        CHECK(detail::product_value(t.choi, r.x, r.y) == Catch::Approx(r.value).margin(1e-12));
    }
    SECTION("swap matrix floor is zero") {
        const ProductMin r = min_product_expectation(transpose_map(2).choi, 2, 2);
        CHECK(r.value >= -1e-12);
        CHECK(r.value <= 1e-6);
    }
    SECTION("shifted-diagonal trap found from structured starts") {
        const MapRep bad = shifted_diagonal_minus(3);
        const ProductMin r = min_product_expectation(bad.choi, 3, 3);
        CHECK(r.value <= -1.0 / 3.0 + 1e-9);
        const BlockPositivity bp = is_block_positive(bad);
        CHECK(bp.violated);
        CHECK(bp.min_value <= -1.0 / 3.0 + 1e-9);
    }
    SECTION("same configuration, same answer") {
        SplitMix64 rng(19);
        const Matrix h = random_hermitian(rng, 9);
        SeesawConfig cfg;
        cfg.starts = 16;
        cfg.seed = 4242;
        const ProductMin a = min_product_expectation(h, 3, 3, cfg);
        const ProductMin b = min_product_expectation(h, 3, 3, cfg);
        CHECK(a.value == b.value);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a.x[i] == b.x[i]);
            CHECK(a.y[i] == b.y[i]);
        }
    }
}

TEST_CASE("classification lattice on the named maps") {
    const Classification id = classify(identity_map(2));
    CHECK(id.verdict == Verdict::CPOnly);
    CHECK(id.cp_min_eig >= -1e-12);
    CHECK(id.cocp_min_eig == Catch::Approx(-1.0).margin(1e-9));

    const Classification tr = classify(transpose_map(2));
    CHECK(tr.verdict == Verdict::CoCPOnly);
    CHECK(tr.cp_min_eig == Catch::Approx(-1.0).margin(1e-9));
    CHECK(tr.cocp_min_eig >= -1e-12);

    const Classification dep = classify(depolarizing_map(2));
    CHECK(dep.verdict == Verdict::CPAndCoCP);
    CHECK(dep.decomposable);

    MapRep neg;
    neg.dim_in = neg.dim_out = 2;
    neg.choi = Matrix::identity(4);
    neg.choi *= Complex{-1.0, 0.0};
    const Classification bad = classify(neg);
    CHECK(bad.verdict == Verdict::NotPositive);
    REQUIRE(bad.witness.has_value());
    // the witness pair really exhibits a negative expectation
    CHECK(detail::product_value(neg.choi, bad.witness->first, bad.witness->second) < -1e-10);
}

TEST_CASE("two-block test agrees with a direct eigensolve") {
    SplitMix64 rng(29);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        // random Hermitian 2x2-of-3x3 blocks, occasionally genuinely PSD
        Matrix m = random_hermitian(rng, 6);
        if (trial % 3 == 0) {
            const Matrix g = random_matrix(rng, 6, 6);
            m = g * g.adjoint();
        }
        const Matrix a11 = m.block(0, 0, 3, 3);
        const Matrix a12 = m.block(0, 3, 3, 3);
        const Matrix a22 = m.block(3, 3, 3, 3);
        const double lmin = is_psd(m).min_eig;
        if (std::abs(lmin) < 1e-8)
            continue; // skip the knife edge
        ++checked;
        CHECK(ando_choi_psd_2block(a11, a12, a22) == (lmin > 0.0));
    }
    CHECK(checked > 150);
}

TEST_CASE("classification flags small dimensions as decomposable") {
    CHECK(classify(identity_map(2)).decomposable);       // 2 -> 2
    CHECK(classify(depolarizing_map(3)).decomposable == false); // 3 -> 3 unknown a priori
}
