#include "iga/quadrature.hpp"

#include "iga/case_geometry.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using iga::KnotVector;
using iga::TensorSpace;
using iga::Vec3;

TEST_CASE("gauss_legendre basics") {
    const auto r1 = iga::gauss_legendre(1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const auto r2 = iga::gauss_legendre(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS(iga::gauss_legendre(0));
    CHECK_THROWS(iga::gauss_legendre(31));
}

TEST_CASE("gauss_legendre matches the Newton-on-Legendre oracle") {
    for (int n : {2, 3, 5, 8, 13, 21, 30}) {
        const auto rule = iga::gauss_legendre(n);
        std::vector<double> nodes, weights;
        oracles::newton_legendre(n, nodes, weights);
        for (int i = 0; i < n; ++i) {
            CHECK(rule.nodes[i] == doctest::Approx(nodes[i]).epsilon(1e-13).scale(1.0));
            CHECK(rule.weights[i] == doctest::Approx(weights[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("degree exactness up to 2n-1 and odd-monomial symmetry") {
    for (int n = 1; n <= 10; ++n) {
        const auto rule = iga::gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double integral = 0.0;
            for (int i = 0; i < n; ++i) integral += rule.weights[i] * std::pow(rule.nodes[i], deg);
            const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
            CHECK(integral == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
        // Odd powers cancel exactly by the symmetrized construction.
        double odd = 0.0;
        for (int i = 0; i < n; ++i) odd += rule.weights[i] * std::pow(rule.nodes[i], 2 * n - 1);
        CHECK(std::abs(odd) < 1e-15);
    }
}

TEST_CASE("element rules: counting, weights, tiling") {
    TensorSpace line({KnotVector::uniform(0, 3, 3, 1)});
    const auto rules = iga::element_rules(line, 2);
    REQUIRE(rules.size() == 3);
    for (const auto& rule : rules) {
        CHECK(rule.nodes.size() == 2);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(rule.element.volume(1)).epsilon(1e-14));
    }

    // Repeated knots produce no element.
    TensorSpace gap({KnotVector({0, 0, 0, 1, 1, 2, 2, 2}, 2)});
    CHECK(iga::element_rules(gap, 3).size() == 2);

    // Node count per element is points^dim.
    TensorSpace square({KnotVector::uniform(0, 1, 2, 1), KnotVector::uniform(0, 1, 2, 1)});
    for (const auto& rule : iga::element_rules(square, 3)) CHECK(rule.nodes.size() == 9);
}

TEST_CASE("element-wise integration of random polynomials is exact") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    TensorSpace space({KnotVector::uniform(0, 2, 3, 2), KnotVector::uniform(-1, 1.5, 2, 2)});
    const int pts = 3;  // exact through degree 5 per direction

    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> c((2 * pts) * (2 * pts));
        for (double& v : c) v = coef(rng);
        const auto poly = [&](double x, double y) {
            double sum = 0.0;
            for (int i = 0; i < 2 * pts - 1; ++i)
                for (int j = 0; j < 2 * pts - 1; ++j)
                    sum += c[i * 2 * pts + j] * std::pow(x, i) * std::pow(y, j);
            return sum;
        };

        double integral = 0.0;
        for (const auto& rule : iga::element_rules(space, pts))
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                integral += rule.weights[q] * poly(rule.nodes[q][0], rule.nodes[q][1]);

        double exact = 0.0;
        for (int i = 0; i < 2 * pts - 1; ++i)
            for (int j = 0; j < 2 * pts - 1; ++j)
                exact += c[i * 2 * pts + j] *
                         oracles::monomial_box_integral({i, j}, {0.0, -1.0}, {2.0, 1.5});
        CHECK(integral == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("integrate_physical: areas and a refined-rule cross-check") {
    const iga::Patch unit = iga::rectangle_patch(0, 1, 0, 1, 1, 2, 2);
    const auto rules = iga::element_rules(unit.space(), 2);
    CHECK(iga::integrate_physical(unit, rules, iga::constant_field(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));

    const iga::Patch quad = iga::rectangle_patch(0, 2, 0, 1, 1, 2, 2);
    CHECK(iga::integrate_physical(quad, iga::element_rules(quad.space(), 2),
                                  iga::constant_field(1.0)) == doctest::Approx(2.0));

    // Distorted patch, smooth integrand: compare against a 4x-refined rule.
    const iga::Patch bent = iga::rectangle_patch(0, 2, 0, 1, 2, 5, 4, 0.15);
    const auto f = [](const Vec3& x) { return std::exp(0.3 * x[0]) * std::cos(x[1]); };
    const double coarse = iga::integrate_physical(bent, iga::element_rules(bent.space(), 4), f);
    const double fine = iga::integrate_physical(bent, iga::element_rules(bent.space(), 16), f);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-10));
}
