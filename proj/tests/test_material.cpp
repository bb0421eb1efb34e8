#include <doctest.h>

#include "plateforge/errors.hpp"
#include "plateforge/material.hpp"
#include "plateforge/verify.hpp"

using namespace plateforge;

TEST_CASE("plate constitutive matrices") {
    const PlateMaterial2D m = plate_constitutive_2d(1e4, 0.3, 0.2);
    const double D = 1e4 * 0.008 / (12 * (1 - 0.09));
    CHECK(m.D == doctest::Approx(D));
    CHECK(m.c_b(0, 0) == doctest::Approx(D));
    CHECK(m.c_b(0, 1) == doctest::Approx(0.3 * D));
    CHECK(m.c_b(2, 2) == doctest::Approx(0.35 * D));
    const double G = 1e4 / 2.6;
    CHECK(m.c_s(0, 0) == doctest::Approx(5.0 / 6.0 * G * 0.2));
    CHECK(m.c_s(0, 1) == 0.0);
    CHECK(m.c_m(0, 0) == doctest::Approx(1e4 * 0.2 / 0.91));
}

TEST_CASE("3D elasticity") {
    const Elasticity3D e = elasticity_3d(210.0, 0.3);
    CHECK(e.mu == doctest::Approx(210.0 / 2.6));
    CHECK(e.lambda == doctest::Approx(210.0 * 0.3 / (1.3 * 0.4)));
    CHECK(e.cc(0, 0) == doctest::Approx(e.lambda + 2 * e.mu));
    CHECK(e.cc(3, 3) == doctest::Approx(e.mu));
    CHECK((e.cc - e.cc.transpose()).norm() == 0.0);
}

TEST_CASE("thickness integration") {
    const auto lin = integrate_thickness_blocks(elasticity_3d(100.0, 0.25), 0.1, ThicknessMode::Linear);
    const auto con = integrate_thickness_blocks(elasticity_3d(100.0, 0.25), 0.1, ThicknessMode::Constant);
    CHECK(lin.d22.rows() == 2);
    CHECK(con.d22.rows() == 1);
    CHECK((lin.d11 - con.d11).norm() == 0.0);
    // Membrane-bending coupling vanishes for a symmetric section.
    CHECK(lin.d11.block<3, 3>(0, 3).norm() < 1e-14);

    SUBCASE("nu = 0 has no thickness coupling") {
        const auto z = integrate_thickness_blocks(elasticity_3d(100.0, 0.0), 0.1, ThicknessMode::Linear);
        CHECK(z.d12.topRows<6>().norm() < 1e-14);
    }
    CHECK(thickness_a1(0.0).block<3, 3>(0, 3).norm() == 0.0);
    CHECK(thickness_a1(0.5)(0, 3) == doctest::Approx(0.5));
}

TEST_CASE("material validation") {
    MaterialModel m;
    m.nu = 0.5;
    CHECK_THROWS_AS(m.validate(), ArgumentError);
    m.nu = 0.3;
    m.t = -1.0;
    CHECK_THROWS_AS(m.validate(), ArgumentError);
    m.t = 0.1;
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("plane-stress condensation equals the plate law") {
    const PropertyResult r = plane_stress_equivalence(30, 5);
    INFO(r.detail);
    CHECK(r.pass);
}
