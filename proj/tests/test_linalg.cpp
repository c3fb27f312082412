#include <doctest.h>

#include <cmath>

#include "surro/errors.hpp"
#include "surro/linalg.hpp"
#include "surro/rng.hpp"

using namespace surro;
using namespace surro::math;

TEST_CASE("cholesky: identity and hand-factored 2x2") {
    CHECK(cholesky(Matrix::identity(3)) == Matrix::identity(3));
    const Matrix l = cholesky(Matrix{{4.0, 2.0}, {2.0, 2.0}});
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(1.0));
    CHECK(l(0, 1) == 0.0);
}

TEST_CASE("cholesky: reports the failing pivot") {
    const Matrix bad{{1.0, 0.0, 0.0}, {0.0, -2.0, 0.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS_WITH_AS(cholesky(bad), doctest::Contains("pivot 1"), NumericError);
    // rank-deficient: second column is a multiple of the first
    const Matrix singular{{1.0, 2.0}, {2.0, 4.0}};
    CHECK_THROWS_AS(cholesky(singular), NumericError);
}

TEST_CASE("cholesky: round-trip of random lower factors") {
    RngStream rng(99, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 5);
        Matrix l(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) l(i, j) = rng.normal();
            l(i, i) = 0.3 + 2.0 * rng.uniform();
        }
        const Matrix a = l * l.transposed();
        const Matrix back = cholesky(a);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                CHECK(back(i, j) == doctest::Approx(l(i, j)).epsilon(1e-8));
    }
}

TEST_CASE("triangular solves and SPD inverse") {
    const Matrix a{{4.0, 1.0, 0.5}, {1.0, 3.0, 0.2}, {0.5, 0.2, 2.0}};
    const Matrix l = cholesky(a);
    const Vector b{1.0, -2.0, 0.5};
    const Vector x = cholesky_solve(l, b);
    const Vector ax = a * x;
    for (std::size_t i = 0; i < 3; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-12));

    const Matrix inv = spd_inverse(a);
    const Matrix prod = a * inv;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));

    CHECK(quad_form_inv(l, b) == doctest::Approx(dot(b, x)).epsilon(1e-12));
}
