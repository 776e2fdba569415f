#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ads/lie_core.hpp"
#include "ads/sampling.hpp"

using namespace ads;

namespace {
QuadricPoint qp(double a, double b, double c, double d) {
    return QuadricPoint({a, b, c, d});
}
}  // namespace

TEST_CASE("quadric/matrix correspondence on pinned points") {
    const Mat2 id = quadric_to_matrix(qp(1, 0, 0, 0));
    CHECK(id.max_abs_diff(Mat2::identity()) == 0.0);

    const Mat2 j = quadric_to_matrix(qp(0, 1, 0, 0));
    CHECK(j.max_abs_diff(Mat2{0, -1, 1, 0}) == 0.0);

    const double t = 0.7;
    const Mat2 a = quadric_to_matrix(qp(std::cosh(t), 0, 0, std::sinh(t)));
    CHECK(a.max_abs_diff(Mat2{std::exp(t), 0, 0, std::exp(-t)}) < 1e-15);

    CHECK_THROWS_AS(quadric_to_matrix(qp(2, 0, 0, 0)), PreconditionError);
}

TEST_CASE("matrix_to_quadric inverts quadric_to_matrix") {
    CHECK(matrix_to_quadric(Mat2::identity()).coords == qp(1, 0, 0, 0).coords);
    CHECK(matrix_to_quadric(Mat2{0, -1, 1, 0}).coords == qp(0, 1, 0, 0).coords);

    const double t = 1.3;
    const QuadricPoint back = matrix_to_quadric(Mat2{std::exp(t), 0, 0, std::exp(-t)});
    CHECK(back.coords[0] == doctest::Approx(std::cosh(t)).epsilon(1e-14));
    CHECK(back.coords[3] == doctest::Approx(std::sinh(t)).epsilon(1e-14));

    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const QuadricPoint x = rand_quadric(2, 5.0, rng);
        const QuadricPoint y = matrix_to_quadric(quadric_to_matrix(x));
        for (int c = 0; c < 4; ++c)
            CHECK(std::fabs(x.coords[c] - y.coords[c]) <= 1e-12);
    }
}

TEST_CASE("group action on the quadric") {
    Rng rng(5);
    const QuadricPoint x = rand_quadric(2, 3.0, rng);

    const QuadricPoint same = act(GroupElement::identity(), x);
    for (int c = 0; c < 4; ++c) CHECK(same.coords[c] == doctest::Approx(x.coords[c]));

    const double T = 1.8;
    const QuadricPoint moved = act({boost(T), Mat2::identity()}, qp(1, 0, 0, 0));
    CHECK(moved.coords[0] == doctest::Approx(std::cosh(T / 2)).epsilon(1e-14));
    CHECK(moved.coords[3] == doctest::Approx(std::sinh(T / 2)).epsilon(1e-14));
    CHECK(std::fabs(moved.coords[1]) < 1e-15);

    // (e, -e) is the antipodal map
    const GroupElement anti{Mat2::identity(), -Mat2::identity()};
    const QuadricPoint nx = act(anti, x);
    for (int c = 0; c < 4; ++c)
        CHECK(std::fabs(nx.coords[c] + x.coords[c]) <= 1e-12);
}

TEST_CASE("mu on pinned matrices") {
    CHECK(mu(Mat2::identity()) == 0.0);
    CHECK(mu(Mat2{std::exp(1.0), 0, 0, std::exp(-1.0)}) ==
          doctest::Approx(2.0).epsilon(1e-14));
    // eigenvalues of g^t g for [[1,1],[0,1]] are (3 +- sqrt 5)/2
    CHECK(mu(Mat2{1, 1, 0, 1}) == doctest::Approx(0.9624236501192069).epsilon(1e-13));
    // rotations stay at zero through the clamp
    CHECK(mu(rotation(0.3)) <= 1e-7);
    CHECK(mu(rotation(2.1)) <= 1e-7);
}

TEST_CASE("mu_pair and nu on pinned elements") {
    const CartanPair p0 = mu_pair(GroupElement::identity());
    CHECK(p0.mu1 == 0.0);
    CHECK(p0.mu2 == 0.0);

    const CartanPair p1 = mu_pair({boost(2.0), Mat2::identity()});
    CHECK(p1.mu1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p1.mu2 == 0.0);

    Rng rng(7);
    const Mat2 g = rand_small_mat(2.0, rng);
    const CartanPair pg = mu_pair({g, g});
    CHECK(pg.mu1 == pg.mu2);

    CHECK(nu_point(qp(1, 0, 0, 0)) == 0.0);
    CHECK(nu_point(qp(0, 1, 0, 0)) == 0.0);
    const double t = 0.9;
    CHECK(nu_point(qp(std::cosh(t), 0, 0, std::sinh(t))) ==
          doctest::Approx(2 * t).epsilon(1e-13));

    CHECK(nu_elem(GroupElement::identity()) == 0.0);
    CHECK(nu_elem({Mat2{std::exp(t), 0, 0, std::exp(-t)}, Mat2::identity()}) ==
          doctest::Approx(2 * t).epsilon(1e-13));
    CHECK(nu_elem({g, g}) <= 1e-7);
}

TEST_CASE("Q preservation over 1e4 random actions") {
    Rng rng(23);
    for (int i = 0; i < 10000; ++i) {
        const GroupElement g = rand_small_element(4.0, rng);
        const QuadricPoint x = rand_quadric(2, 4.0, rng);
        const QuadricPoint y = act(g, x);
        CHECK(std::fabs(y.q() - 1.0) <= 1e-9);
    }
}

TEST_CASE("two polar formulas agree") {
    Rng rng(29);
    for (int i = 0; i < 10000; ++i) {
        const QuadricPoint x = rand_quadric(2, 6.0, rng);
        CHECK(std::fabs(nu_point(x) - mu(quadric_to_matrix(x))) <= 1e-10);
    }
}

TEST_CASE("Cartan projection inequalities") {
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const Mat2 g = rand_small_mat(3.0, rng), h = rand_small_mat(3.0, rng);
        const double mg = mu(g), mh = mu(h), mgh = mu(g * h);
        CHECK(mgh <= mg + mh + 1e-10);             // subadditivity
        CHECK(std::fabs(mgh - mg) <= mh + 1e-10);  // sharpened triangle
        CHECK(std::fabs(mgh - mh) <= mg + 1e-10);
    }
}

TEST_CASE("polar sandwich and drift bound") {
    Rng rng(37);
    for (int i = 0; i < 10000; ++i) {
        const GroupElement g = rand_small_element(3.0, rng);
        const CartanPair p = mu_pair(g);
        const double nu = nu_elem(g);
        CHECK(std::fabs(p.mu1 - p.mu2) <= nu + 1e-10);
        CHECK(nu <= p.mu1 + p.mu2 + 1e-10);

        const QuadricPoint x = rand_quadric(2, 3.0, rng);
        CHECK(std::fabs(nu_point(act(g, x)) - nu_point(x)) <= p.mu1 + p.mu2 + 1e-9);
    }
}

TEST_CASE("bi-rotation invariance of mu") {
    Rng rng(41);
    for (int i = 0; i < 10000; ++i) {
        const Mat2 g = rand_small_mat(4.0, rng);
        const Mat2 r1 = rotation(rng.uniform(0, 2 * M_PI));
        const Mat2 r2 = rotation(rng.uniform(0, 2 * M_PI));
        CHECK(std::fabs(mu(r1 * g * r2) - mu(g)) <= 1e-10);
    }
}

TEST_CASE("renormalization keeps long product chains unit-determinant") {
    Rng rng(43);
    Mat2 prod = Mat2::identity();
    for (int i = 1; i <= 10000; ++i) {
        prod = prod * rand_small_mat(0.05, rng);
        if (i % 64 == 0) prod.renormalize();
    }
    CHECK(std::fabs(prod.det() - 1.0) <= 1e-9);
}

TEST_CASE("a-geometry helpers") {
    const CartanPair p{3.0, 4.0};
    CHECK(mu_norm_a(p) == doctest::Approx(5.0));
    CHECK(mu_dist_diag_a(p) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK_THROWS_AS(arcosh1p(-1e-3), PreconditionError);
    CHECK(arcosh1p(-1e-13) == 0.0);
}
