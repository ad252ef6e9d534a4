#include <doctest.h>

#include <cmath>
#include <random>

#include "opfact/covering.hpp"
#include "opfact/errors.hpp"
#include "opfact/factorize.hpp"
#include "opfact/infinilayers.hpp"
#include "opfact/linalg.hpp"
#include "test_helpers.hpp"

using namespace opfact;
using opfact::testing::lipschitz_set;
using opfact::testing::random_vector;
using opfact::testing::unit_interval;

namespace {

SampledFunction constant(const GridPtr& g, double c) { return SampledFunction(g, std::vector<double>(g->size(), c)); }
SampledFunction identity_fn(const GridPtr& g) {
    return sample(g, [](std::span<const double> t) { return t[0]; });
}

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Matrix m(r, c);
    for (double& x : m.data()) x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    return m;
}

Cover single_center(double x) {
    Cover c;
    c.radius = 0.5;
    c.centers = {{x}};
    c.center_indices = {0};
    return c;
}

}  // namespace

TEST_CASE("quad_integral") {
    const auto g = make_grid(unit_interval(), 3);
    CHECK(quad_integral(constant(g, 1.0), constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quad_integral(identity_fn(g), constant(g, 1.0)) == 0.5);

    const double exact = 1.0 - std::cos(1.0);
    double prev = 0.0;
    for (std::size_t n : {11u, 21u, 41u, 81u}) {
        const auto gn = make_grid(unit_interval(), n);
        const auto s = sample(gn, [](std::span<const double> t) { return std::sin(t[0]); });
        const double err = std::abs(quad_integral(s, constant(gn, 1.0)) - exact);
        if (prev > 0.0) {
            CHECK(prev / err >= 3.5);
            CHECK(prev / err <= 4.5);
        }
        prev = err;
    }
    CHECK_THROWS_AS(quad_integral(constant(g, 1.0), constant(make_grid(unit_interval(), 4), 1.0)), ShapeError);
}

TEST_CASE("apply_functional") {
    const auto g = make_grid(unit_interval(), 21);
    CHECK(apply_functional(FunctionalLayer{{constant(g, 0.0)}, {3.0}}, identity_fn(g)) == std::vector<double>{3.0});
    CHECK(apply_functional(FunctionalLayer{{constant(g, 1.0)}, {0.0}}, constant(g, 1.0))[0] ==
          doctest::Approx(1.0).epsilon(1e-14));

    const LipschitzClass cls{unit_interval(), 1.0, 1.0};
    const auto fs = lipschitz_set(cls, g, 10, 1);
    const FunctionalLayer layer{{fs[0], fs[1], fs[2]}, {0.0, 0.0, 0.0}};
    for (std::size_t i = 3; i + 1 < fs.size(); ++i) {
        const auto a = apply_functional(layer, fs[i]), b = apply_functional(layer, fs[i + 1]);
        const auto ab = apply_functional(layer, linear_combination(2.0, fs[i], -0.5, fs[i + 1]));
        for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(ab[k] - (2.0 * a[k] - 0.5 * b[k])) <= 1e-14);
    }
    CHECK_THROWS_AS(apply_functional(layer, constant(make_grid(unit_interval(), 5), 1.0)), ShapeError);
}

TEST_CASE("apply_basis") {
    const auto g = make_grid(unit_interval(), 11);
    const auto bias = sample(g, [](std::span<const double> t) { return t[0] * t[0]; });
    const BasisLayer layer{{identity_fn(g), constant(g, 1.0)}, bias};
    CHECK(sup_distance(apply_basis(layer, std::vector<double>{0.0, 0.0}), bias) == 0.0);

    const BasisLayer lin{{identity_fn(g)}, constant(g, 0.0)};
    const auto two_t = apply_basis(lin, std::vector<double>{2.0});
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(two_t[i] == 2.0 * g->node(i)[0]);

    const std::vector<double> y1{0.3, -1.0}, y2{1.5, 0.25}, y12{1.8, -0.75};
    const auto zero = apply_basis(layer, std::vector<double>{0.0, 0.0});
    const auto a = apply_basis(layer, y1), b = apply_basis(layer, y2), ab = apply_basis(layer, y12);
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(ab[i] - (a[i] + b[i] - zero[i])) <= 1e-14);
    CHECK_THROWS_AS(apply_basis(layer, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("apply_operator_layer") {
    const auto g = make_grid(unit_interval(), 11);
    const auto out = make_grid(unit_interval(), 5);
    const auto bias = sample(out, [](std::span<const double> t) { return 1.0 - t[0]; });
    CHECK(sup_distance(apply_operator_layer(OperatorLayer{g, Matrix(5, 11), bias}, identity_fn(g)), bias) == 0.0);

    const auto ones = apply_operator_layer(OperatorLayer{g, Matrix(5, 11, 1.0), bias}, constant(g, 1.0));
    for (std::size_t i = 0; i < out->size(); ++i) CHECK(ones[i] == doctest::Approx(1.0 + bias[i]).epsilon(1e-14));

    CHECK_THROWS_AS(apply_operator_layer(OperatorLayer{g, Matrix(5, 10), bias}, identity_fn(g)), ShapeError);
    CHECK_THROWS_AS(apply_operator_layer(OperatorLayer{g, Matrix(4, 11), bias}, identity_fn(g)), ShapeError);
}

TEST_CASE("operator layer with a nearest-center kernel reproduces the reconstruction error") {
    const SampleFactorization sf(unit_interval(), 0.05, Interp::nearest, 101);
    const auto& grid = sf.grid();
    const std::size_t nodes = grid->size();
    const std::size_t centers = sf.order();
    // Centers sit at nodes (2k+1)m; the nearest one to node j is found on integers, ties to the lower k.
    const std::size_t m = (nodes - 1) / (2 * centers);
    REQUIRE((nodes - 1) == 2 * centers * m);
    const auto q = grid->quad_weights();
    Matrix kernel(nodes, nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        std::size_t best = 0;
        long best_d = -1;
        for (std::size_t k = 0; k < centers; ++k) {
            const long d = std::labs(static_cast<long>(j) - static_cast<long>((2 * k + 1) * m));
            if (best_d < 0 || d < best_d) best = k, best_d = d;
        }
        const std::size_t u = (2 * best + 1) * m;
        kernel(j, u) = 1.0 / q[u];
    }
    const OperatorLayer layer{grid, kernel, constant(grid, 0.0)};

    const auto fs = lipschitz_set(LipschitzClass{unit_interval(), 1.0, 1.0}, grid, 20, 2);
    double worst = 0.0;
    for (const auto& f : fs) worst = std::max(worst, sup_distance(apply_operator_layer(layer, f), f));
    CHECK(std::abs(worst - check_reconstruction(sf, fs)) <= 1e-12);
}

TEST_CASE("mollified_functional_weights") {
    const auto g = make_grid(unit_interval(), 2001);

    SUBCASE("averaging a constant") {
        const Cover cover = cover_box(unit_interval(), 0.1);
        const Matrix eye = Matrix::identity(cover.size());
        const auto out = apply_functional(mollified_functional_weights(eye, cover, 0.01, g), constant(g, 2.5));
        for (double v : out) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
    }

    SUBCASE("symmetric ball average of t") {
        const auto layer = mollified_functional_weights(Matrix(1, 1, 1.0), single_center(0.5), 0.05, g);
        CHECK(std::abs(apply_functional(layer, identity_fn(g))[0] - 0.5) <= 1e-3);
    }

    SUBCASE("discrepancy to W*delta shrinks with r") {
        const double gamma = 0.1;
        const SampleFactorization sf(unit_interval(), gamma, Interp::multilinear, 11);
        std::mt19937_64 rng(5);
        const Matrix w = random_matrix(4, sf.order(), rng);
        double wnorm = 0.0;  // max row l1 norm
        for (std::size_t j = 0; j < w.rows(); ++j) {
            double s = 0.0;
            for (double x : w.row(j)) s += std::abs(x);
            wnorm = std::max(wnorm, s);
        }
        const auto fs = lipschitz_set(LipschitzClass{unit_interval(), 1.0, 1.0}, g, 20, 6);
        double prev = INFINITY;
        for (double ratio : {0.2, 0.1, 0.02, 0.01}) {
            const double r = ratio * gamma;
            const auto layer = mollified_functional_weights(w, sf.cover(), r, g);
            double worst = 0.0;
            for (const auto& f : fs) {
                const auto direct = matvec(w, sf.delta(f));
                const auto molly = apply_functional(layer, f);
                for (std::size_t j = 0; j < direct.size(); ++j) worst = std::max(worst, std::abs(direct[j] - molly[j]));
            }
            // A ball average of a 1-Lipschitz function stays within r of the center value.
            CHECK(worst <= wnorm * r * (1.0 + 1e-9));
            CHECK(worst < prev);
            prev = worst;
        }
    }

    SUBCASE("rejected radii") {
        const Cover cover = cover_box(unit_interval(), 0.1);
        const Matrix eye = Matrix::identity(cover.size());
        CHECK_THROWS(mollified_functional_weights(eye, cover, 0.15, g));             // overlap
        CHECK_THROWS_AS(mollified_functional_weights(Matrix(1, 1, 1.0), single_center(0.02), 0.05, g), DomainError);
        CHECK_THROWS(mollified_functional_weights(eye, cover, 1e-6, make_grid(unit_interval(), 2000)));  // no node inside
        CHECK_THROWS_AS(mollified_functional_weights(Matrix(2, 3), cover, 0.01, g), ShapeError);
    }
}

TEST_CASE("basis_from_interpolation") {
    const SampleFactorization sf(unit_interval(), 0.05, Interp::multilinear, 101);
    const std::size_t m = sf.order();
    std::mt19937_64 rng(7);

    const auto eye = basis_from_interpolation(sf, Matrix::identity(m), std::vector<double>(m, 0.0));
    std::vector<double> e1(m, 0.0);
    e1[0] = 1.0;
    std::vector<double> y1(m, 0.0);
    y1[0] = 1.0;
    CHECK(sup_distance(apply_basis(eye, y1), sf.delta_star(e1)) == 0.0);
    CHECK(max_abs(apply_basis(eye, std::vector<double>(m, 0.0)).values()) == 0.0);

    for (int t = 0; t < 10; ++t) {
        const Matrix v = random_matrix(m, 6, rng);
        const auto b = random_vector(m, rng);
        const auto y = random_vector(6, rng);
        const auto layer = basis_from_interpolation(sf, v, b);
        CHECK(sup_distance(apply_basis(layer, y), sf.delta_star(matvec(v, y, b))) <= 1e-12);
    }
    CHECK_THROWS_AS(basis_from_interpolation(sf, Matrix(m + 1, 2), std::vector<double>(m + 1, 0.0)), ShapeError);
}

TEST_CASE("assemble") {
    const double gamma = 0.1;
    const SampleFactorization sfx(unit_interval(), gamma, Interp::multilinear, 11);
    const SampleFactorization sfy(unit_interval(), 0.05, Interp::multilinear, 101);
    const auto input_grid = make_grid(unit_interval(), 2001);
    const auto fs = lipschitz_set(LipschitzClass{unit_interval(), 1.0, 1.0}, input_grid, 10, 8);
    const auto net = net_new(sfx.order(), 8, sfy.order(), Activation::tanh, 11);

    auto pipeline = [&](const SampledFunction& f) { return sfy.delta_star(forward(net, sfx.delta(f))); };

    SUBCASE("thm2 approaches the finite pipeline as r shrinks") {
        double prev = INFINITY;
        for (double ratio : {0.2, 0.1, 0.02}) {
            const auto onet = assemble(Architecture::thm2, net, sfx, sfy, ratio * gamma, input_grid);
            CHECK(onet.width() == 8);
            double gap = 0.0;
            for (const auto& f : fs) gap = std::max(gap, sup_distance(net_apply(onet, f), pipeline(f)));
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 0.05);
    }

    SUBCASE("thm1 agrees with thm2") {
        const auto t1 = assemble(Architecture::thm1, net, sfx, sfy, 0.02 * gamma, input_grid);
        const auto t2 = assemble(Architecture::thm2, net, sfx, sfy, 0.02 * gamma, input_grid);
        CHECK(t1.width() == 8);
        for (const auto& f : fs) CHECK(sup_distance(net_apply(t1, f), net_apply(t2, f)) <= 1e-10);
    }

    SUBCASE("thm3 is exact on vectors") {
        const auto finite = net_new(3, 5, sfy.order(), Activation::tanh, 12);
        const auto onet = assemble(Architecture::thm3, finite, sfx, sfy, 0.01, input_grid);
        std::mt19937_64 rng(9);
        for (int t = 0; t < 10; ++t) {
            const auto x = random_vector(3, rng);
            CHECK(sup_distance(net_apply(onet, x), sfy.delta_star(forward(finite, x))) <= 1e-12);
        }
        CHECK_THROWS(net_apply(onet, fs[0]));
    }

    SUBCASE("thm3 with one neuron") {
        auto one = net_new(2, 1, sfy.order(), Activation::tanh, 13);
        one.b1 = {0.0};
        one.b2.assign(sfy.order(), 0.0);
        const auto onet = assemble(Architecture::thm3, one, sfx, sfy, 0.01, input_grid);
        const std::vector<double> x{0.4, -0.9};
        const double a = std::tanh(one.w1(0, 0) * x[0] + one.w1(0, 1) * x[1]);
        const auto w = sfy.delta_star(one.w2.column(0));
        const auto out = net_apply(onet, x);
        for (std::size_t i = 0; i < out.values().size(); ++i) CHECK(std::abs(out[i] - a * w[i]) <= 1e-14);
    }

    SUBCASE("zero inner weights give a constant output") {
        auto flat = net;
        flat.w1 = Matrix(flat.w1.rows(), flat.w1.cols());
        const auto onet = assemble(Architecture::thm2, flat, sfx, sfy, 0.01, input_grid);
        const auto ref = net_apply(onet, fs[0]);
        for (std::size_t i = 1; i < fs.size(); ++i) CHECK(sup_distance(net_apply(onet, fs[i]), ref) == 0.0);
    }

    CHECK_THROWS_AS(assemble(Architecture::thm2, net_new(3, 2, sfy.order(), Activation::tanh, 1), sfx, sfy, 0.01,
                             input_grid),
                    ShapeError);
    CHECK_THROWS_AS(assemble(Architecture::thm3, net_new(3, 2, 4, Activation::tanh, 1), sfx, sfy, 0.01, input_grid),
                    ShapeError);
}

TEST_CASE("architecture names") {
    for (auto a : {Architecture::thm1, Architecture::thm2, Architecture::thm3})
        CHECK(architecture_from_string(to_string(a)) == a);
    CHECK_THROWS_AS(architecture_from_string("thm4"), ConfigError);
}
