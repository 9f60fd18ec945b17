#include "iga/tensor_space.hpp"

#include <doctest.h>

using iga::KnotVector;
using iga::TensorSpace;
using iga::Vec3;

TEST_CASE("flat index runs first direction fastest") {
    TensorSpace space({KnotVector::uniform(0, 1, 2, 1), KnotVector::uniform(0, 1, 3, 2)});
    CHECK(space.count(0) == 3);
    CHECK(space.count(1) == 5);
    CHECK(space.total_count() == 15);
    CHECK(space.flatten({0, 0, 0}) == 0);
    CHECK(space.flatten({1, 0, 0}) == 1);
    CHECK(space.flatten({0, 1, 0}) == 3);
    for (int flat = 0; flat < space.total_count(); ++flat)
        CHECK(space.flatten(space.unflatten(flat)) == flat);
}

TEST_CASE("support of a bivariate function is the tensor knot box") {
    const KnotVector kx({0, 0, 0, 1, 2, 3, 3, 3}, 2);
    const KnotVector ky({0, 0, 1, 2, 2}, 1);
    TensorSpace space({kx, ky});
    const int flat = space.flatten({1, 2, 0});
    const auto [lo, hi] = space.support(flat);
    CHECK(lo[0] == 0.0);
    CHECK(hi[0] == 2.0);  // [xi_1, xi_4]
    CHECK(lo[1] == 1.0);
    CHECK(hi[1] == 2.0);  // [y_2, y_4]
}

TEST_CASE("tensor basis values multiply out and sum to one") {
    TensorSpace space({KnotVector::uniform(0, 2, 4, 2), KnotVector::uniform(-1, 1, 3, 3)});
    Vec3 xi(0.37, 0.12, 0.0);
    const auto tables = space.eval_directions(xi, 1);
    double sum = 0.0;
    Vec3 grad_sum = Vec3::Zero();
    for (int loc = 0; loc < space.local_count(); ++loc) {
        sum += space.local_value(tables, loc);
        grad_sum += space.local_gradient(tables, loc);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(grad_sum.norm() < 1e-10);
}

TEST_CASE("element boxes tile the parametric domain") {
    const KnotVector kx({0, 0, 0, 1, 1, 2, 4, 4, 4}, 2);  // double knot skips one span
    const KnotVector ky = KnotVector::uniform(0, 3, 3, 1);
    TensorSpace space({kx, ky});
    const auto boxes = space.element_boxes();
    CHECK(boxes.size() == 3 * 3);
    double volume = 0.0;
    for (const auto& box : boxes) volume += box.volume(2);
    CHECK(volume == doctest::Approx(4.0 * 3.0).epsilon(1e-14));
}

TEST_CASE("a 0-direction space is the single-constant point space") {
    TensorSpace point(std::vector<KnotVector>{});
    CHECK(point.dim() == 0);
    CHECK(point.total_count() == 1);
    CHECK(point.element_boxes().size() == 1);
    const auto tables = point.eval_directions(Vec3::Zero(), 0);
    CHECK(point.local_value(tables, 0) == 1.0);
    CHECK(point.global_index(tables, 0) == 0);
}
