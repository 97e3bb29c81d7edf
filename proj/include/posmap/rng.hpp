#pragma once

// Deterministic random streams. Everything numeric in this library that
// samples (multistart optimizers, property tests, state generators) draws
// from this splitmix64 generator so results are reproducible across
// platforms; std::random distributions are implementation-defined and
// deliberately avoided.

#include <cmath>
#include <cstdint>

#include "posmap/complex_matrix.hpp"

namespace posmap {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (no cached spare; keeps the stream
    // position independent of call parity)
    double next_gaussian() {
        double u1 = next_double();
        while (u1 <= 0.0)
            u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Complex next_complex_gaussian() {
        const double re = next_gaussian();
        const double im = next_gaussian();
        return Complex{re, im};
    }

  private:
    std::uint64_t state_;
};

// Decorrelated sub-seed for (seed, index) pairs, e.g. one per multistart.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return s.next_u64();
}

inline Vector random_unit_vector(SplitMix64& rng, std::size_t dim) {
    Vector v(dim);
    for (auto& c : v)
        c = rng.next_complex_gaussian();
    return normalized(std::move(v));
}

inline Matrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rng.next_complex_gaussian();
    return m;
}

inline Matrix random_hermitian(SplitMix64& rng, std::size_t n) {
    const Matrix g = random_matrix(rng, n, n);
    Matrix h = g + g.adjoint();
    return 0.5 * h;
}

inline Matrix random_psd(SplitMix64& rng, std::size_t n, std::size_t rank) {
    Matrix m(n, n);
    for (std::size_t r = 0; r < rank; ++r) {
        Vector v(n);
        for (auto& c : v)
            c = rng.next_complex_gaussian();
        m += outer(v, v);
    }
    return m;
}

// Isometry with orthonormal columns (modified Gram-Schmidt on a Gaussian
// draw); rows >= cols required.
inline Matrix random_isometry(SplitMix64& rng, std::size_t rows, std::size_t cols) {
    if (rows < cols)
        throw DimensionMismatch("random_isometry: rows < cols");
    std::vector<Vector> q;
    q.reserve(cols);
    while (q.size() < cols) {
        Vector v(rows);
        for (auto& c : v)
            c = rng.next_complex_gaussian();
        for (const auto& u : q) {
            const Complex proj = vdot(u, v);
            for (std::size_t i = 0; i < rows; ++i)
                v[i] -= proj * u[i];
        }
        if (vnorm(v) < 1e-8)
            continue; // essentially dependent draw; try again
        q.push_back(normalized(std::move(v)));
    }
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = q[j][i];
    return m;
}

inline Matrix random_unitary(SplitMix64& rng, std::size_t n) {
    return random_isometry(rng, n, n);
}

} // namespace posmap
