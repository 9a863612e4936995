#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "rum/flex.hpp"

using namespace rum;
using rumtest::Rng;

namespace {
const std::complex<double> kEta = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

ComplexVector cvec(std::initializer_list<std::complex<double>> vals) {
    ComplexVector v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (const auto& x : vals) v(i++) = x;
    return v;
}
}  // namespace

TEST_SUITE("flex") {

TEST_CASE("joint spectral chi-vectors evaluate to constants") {
    auto fw = rumtest::c3h_generic_framework();
    Window w = make_window(fw.rep.group, 0);
    // lambda_1 = (-1, 1), eigenvector (0,0,1), character chi_{1,0}
    ChiSymmetricVector z{Character{{}, {1, 0}}, cvec({0, 0, 1})};
    WindowedField f = evaluate_chi_vector(fw, z, w);
    for (const auto& v : f.values) CHECK((v - cvec({0, 0, 1})).norm() < 1e-12);
}

TEST_CASE("trivial twist gives a constant field") {
    GainFramework fw;
    fw.rep = trivial_representation(GroupSpec{1, {}}, 2);
    fw.dim_x = 2;
    fw.dim_y = 1;
    fw.vertices = {"v"};
    ChiSymmetricVector z{trivial_character(fw.rep.group), cvec({1.0, 2.0})};
    WindowedField f = evaluate_chi_vector(fw, z, make_window(fw.rep.group, 3));
    for (const auto& v : f.values) CHECK((v - cvec({1.0, 2.0})).norm() < 1e-14);
}

TEST_CASE("the alternating strip flex") {
    auto fw = rumtest::frieze_framework(2.0, false);
    ChiSymmetricVector z{Character{{std::numbers::pi}, {0}}, cvec({0.0, 1.0})};
    Window w = make_window(fw.rep.group, 3);
    WindowedField f = evaluate_chi_vector(fw, z, w);
    for (std::size_t i = 0; i < w.elements.size(); ++i) {
        const auto& gamma = w.elements[i];
        double expected = std::pow(-1.0, static_cast<double>(gamma.free[0] + gamma.torsion[0]));
        CHECK(std::abs(f.values[i](0)) < 1e-12);
        CHECK(std::abs(f.values[i](1) - expected) < 1e-12);
    }
}

TEST_CASE("translations are annihilated when the linear parts are trivial") {
    GainFramework fw;
    fw.rep = trivial_representation(GroupSpec{1, {}}, 2);
    fw.dim_x = 2;
    fw.dim_y = 1;
    fw.vertices = {"a", "b"};
    ComplexMatrix phi(1, 2);
    phi << 0.3, -1.7;
    fw.edges.push_back({"e1", 0, 1, GroupElement{{1}, {}}, phi});
    fw.edges.push_back({"e2", 1, 0, GroupElement{{2}, {}}, 2.0 * phi});

    Window w = make_window(fw.rep.group, 4);
    WindowedField f{w, {}};
    ComplexVector c = cvec({0.7, -0.2, 0.7, -0.2});  // same block at both vertices
    f.values.assign(w.size(), c);
    WindowedField out = apply_gain_operator(fw, f);
    CHECK(out.window.radius == 2);
    for (const auto& v : out.values) CHECK(v.norm() < 1e-13);
}

TEST_CASE("the operator on a chi-vector reproduces the orbit matrix") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        auto fw = rumtest::random_framework(rng);
        Character chi = rumtest::random_character(rng, fw.rep.group);
        ComplexVector a = rumtest::random_complex_matrix(rng, fw.num_vertices() * fw.dim_x, 1);
        ChiSymmetricVector z{chi, a};
        const int radius = 3 + static_cast<int>(gain_margin(fw));
        WindowedField f = evaluate_chi_vector(fw, z, make_window(fw.rep.group, radius));
        WindowedField out = apply_gain_operator(fw, f);
        OrbitMatrix om = orbit_matrix(fw, chi);
        for (std::size_t i = 0; i < out.window.elements.size(); ++i) {
            const auto& gamma = out.window.elements[i];
            ComplexVector expected =
                evaluate_character(fw.rep.group, chi, gamma) * (om.matrix * a);
            CHECK((out.values[i] - expected).norm() <= 1e-10);
        }
    }
}

TEST_CASE("operator intertwines the twisted shift with the plain shift") {
    Rng rng(67);
    for (int trial = 0; trial < 15; ++trial) {
        auto fw = rumtest::random_framework(rng);
        const auto& spec = fw.rep.group;
        const int margin = static_cast<int>(gain_margin(fw));
        const int radius = 4 + 2 * margin;
        Window w = make_window(spec, radius);
        WindowedField f{w, {}};
        for (std::size_t i = 0; i < w.size(); ++i)
            f.values.push_back(
                rumtest::random_complex_matrix(rng, fw.num_vertices() * fw.dim_x, 1));
        GroupElement shift = rumtest::random_element(rng, spec, 1);

        // C (T pi(shift) T^{-1} f) vs pi(shift) (C f), on the common window
        WindowedField twisted_shift =
            twist(fw.rep, shift_field(untwist(fw.rep, f), shift, radius - 1));
        WindowedField lhs = apply_gain_operator(fw, twisted_shift);
        WindowedField rhs_full = apply_gain_operator(fw, f);
        WindowedField rhs = shift_field(rhs_full, shift, lhs.window.radius);
        for (std::size_t i = 0; i < lhs.window.elements.size(); ++i)
            CHECK((lhs.values[i] - rhs.at(lhs.window.elements[i])).norm() < 1e-10);
    }
}

TEST_CASE("verify_flex on translations and kernel vectors") {
    auto fw = rumtest::c3h_euclidean_framework();
    Window w = make_window(fw.rep.group, 0);

    for (const auto& z : translation_space(fw)) {
        auto check = verify_flex(fw, evaluate_chi_vector(fw, z, w), default_flex_tol(fw));
        CHECK(check.pass);
        CHECK(check.residual <= 1e-12);
    }

    Character chi{{}, {0, 0}};
    ChiSymmetricVector rot{chi, cvec({1.0, -std::sqrt(3.0), 0.0})};
    CHECK(verify_flex(fw, evaluate_chi_vector(fw, rot, w), default_flex_tol(fw)).pass);

    // non-kernel amplitude: residual equals ||O(chi) a||
    ChiSymmetricVector bad{chi, cvec({1.0, 0.0, 0.0})};
    auto check = verify_flex(fw, evaluate_chi_vector(fw, bad, w), default_flex_tol(fw));
    CHECK_FALSE(check.pass);
    OrbitMatrix om = orbit_matrix(fw, chi);
    CHECK(check.residual ==
          doctest::Approx((om.matrix * bad.amplitude).norm()).epsilon(1e-10));
}

TEST_CASE("window too small for the operator") {
    auto fw = rumtest::frieze_framework(2.0, true);  // margin 2
    WindowedField f{make_window(fw.rep.group, 1), {}};
    f.values.assign(f.window.size(), ComplexVector::Zero(2));
    CHECK_THROWS_AS(apply_gain_operator(fw, f), UsageError);
}

TEST_CASE("chi flex bases of the worked examples") {
    auto euclid = rumtest::c3h_euclidean_framework();
    auto basis11 = chi_flex_basis(euclid, Character{{}, {1, 1}});
    REQUIRE(basis11.size() == 1);
    ComplexVector u11 = cvec({std::complex<double>(0, 1), 1.0, -2.0 * std::conj(kEta)});
    CHECK(std::abs(basis11[0].amplitude.dot(u11)) /
              (basis11[0].amplitude.norm() * u11.norm()) >=
          1.0 - 1e-8);

    auto cyl = rumtest::c3h_cylindrical_framework();
    auto basis10 = chi_flex_basis(cyl, Character{{}, {1, 0}});
    REQUIRE(basis10.size() == 2);
    // span{(1,-sqrt3,0),(0,0,1)}: check both candidates lie in the computed span
    ComplexMatrix span(3, 2);
    span.col(0) = basis10[0].amplitude;
    span.col(1) = basis10[1].amplitude;
    for (const ComplexVector& target :
         {cvec({1.0, -std::sqrt(3.0), 0.0}), cvec({0.0, 0.0, 1.0})}) {
        ComplexVector coeffs = span.colPivHouseholderQr().solve(target);
        CHECK((span * coeffs - target).norm() < 1e-8);
    }

    // outside the spectrum
    auto strip = rumtest::frieze_framework(2.0, false);
    CHECK(chi_flex_basis(strip, Character{{1.1}, {0}}).empty());
}

TEST_CASE("translation space of the worked examples") {
    auto fw = rumtest::c3h_generic_framework();
    auto basis = translation_space(fw);
    REQUIRE(basis.size() == 3);
    ComplexMatrix amps(3, 3);
    for (int i = 0; i < 3; ++i) amps.col(i) = basis[i].amplitude;
    Eigen::JacobiSVD<ComplexMatrix> svd(amps);
    CHECK(svd.singularValues()(2) > 1e-8);
    Window w = make_window(fw.rep.group, 0);
    for (const auto& z : basis) {
        WindowedField f = evaluate_chi_vector(fw, z, w);
        CHECK(is_translation(f, fw.dim_x));
        CHECK(verify_flex(fw, f, default_flex_tol(fw)).pass);
    }

    auto strip = rumtest::frieze_framework(2.0, false);
    auto strip_basis = translation_space(strip);
    REQUIRE(strip_basis.size() == 2);

    GainFramework plain;
    plain.rep = trivial_representation(GroupSpec{1, {}}, 3);
    plain.dim_x = 3;
    plain.dim_y = 1;
    plain.vertices = {"v"};
    auto std_basis = translation_space(plain);
    REQUIRE(std_basis.size() == 3);
    ComplexMatrix m(3, 3);
    for (int i = 0; i < 3; ++i) m.col(i) = std_basis[i].amplitude;
    CHECK(std::abs(std::abs(m.determinant()) - 1.0) < 1e-10);
}

TEST_CASE("real and imaginary parts of a flex are flexes") {
    auto fw = rumtest::c3h_euclidean_framework();
    Window w = make_window(fw.rep.group, 0);
    ChiSymmetricVector z{Character{{}, {1, 1}},
                         cvec({std::complex<double>(0, 1), 1.0, -2.0 * std::conj(kEta)})};
    WindowedField f = evaluate_chi_vector(fw, z, w);
    auto [re, im] = real_imag_parts(fw, f);
    CHECK(verify_flex(fw, re, default_flex_tol(fw)).pass);
    CHECK(verify_flex(fw, im, default_flex_tol(fw)).pass);

    // real part of z_{(0,0)} is (0, 1, Re(-2 conj(eta))) = (0, 1, 1)
    const auto& v = re.at(GroupElement{{}, {0, 0}});
    CHECK((v - cvec({0.0, 1.0, 1.0})).norm() < 1e-12);

    // purely real input has zero imaginary part
    ChiSymmetricVector rot{Character{{}, {0, 0}}, cvec({1.0, -std::sqrt(3.0), 0.0})};
    auto [re2, im2] = real_imag_parts(fw, evaluate_chi_vector(fw, rot, w));
    for (const auto& val : im2.values) CHECK(val.norm() < 1e-14);
}

TEST_CASE("real part of the irrational-rotation flex follows the cosine pattern") {
    const double theta = 1.0;
    auto fw = rumtest::cinfh_euclidean_framework(theta);
    ChiSymmetricVector z{Character{{theta}, {1}},
                         cvec({std::complex<double>(0, 1), 1.0,
                               2.0 * std::polar(1.0, std::numbers::pi / 3.0)})};
    // z must be a flex: amplitude in the kernel
    OrbitMatrix om = orbit_matrix(fw, z.chi);
    REQUIRE((om.matrix * z.amplitude).norm() < 1e-9);
    Window w = make_window(fw.rep.group, 3);
    auto [re, im] = real_imag_parts(fw, evaluate_chi_vector(fw, z, w));
    for (const auto& gamma : w.elements) {
        const auto& v = re.at(gamma);
        const double l = gamma.torsion[0], m = static_cast<double>(gamma.free[0]);
        CHECK(std::abs(v(0)) < 1e-10);
        CHECK(std::abs(v(1) - std::pow(-1.0, l)) < 1e-10);
        CHECK(std::abs(v(2) - 2.0 * std::cos(std::numbers::pi / 3.0 + m * theta)) < 1e-10);
    }
}

TEST_CASE("real_imag_parts rejects complex constraint data") {
    auto fw = rumtest::c3h_generic_framework();
    fw.edges[0].phi(0, 0) = std::complex<double>(0.0, 1.0);
    WindowedField f{make_window(fw.rep.group, 0), {}};
    f.values.assign(f.window.size(), ComplexVector::Zero(3));
    CHECK_THROWS_AS(real_imag_parts(fw, f), UsageError);
}

TEST_CASE("is_translation distinguishes constant from alternating fields") {
    auto fw = rumtest::frieze_framework(2.0, false);
    Window w = make_window(fw.rep.group, 3);
    WindowedField constant{w, {}};
    constant.values.assign(w.size(), cvec({0.4, -0.1}));
    CHECK(is_translation(constant, 2));

    ChiSymmetricVector alt{Character{{std::numbers::pi}, {0}}, cvec({0.0, 1.0})};
    CHECK_FALSE(is_translation(evaluate_chi_vector(fw, alt, w), 2));

    for (const auto& z : translation_space(fw))
        CHECK(is_translation(evaluate_chi_vector(fw, z, w), 2));
}

TEST_CASE("chi-vectors with distinct characters are linearly independent") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        auto fw = rumtest::random_framework(rng);
        const auto& spec = fw.rep.group;
        const int n = fw.num_vertices() * fw.dim_x;
        std::uniform_int_distribution<int> count_dist(2, 4);
        int count = count_dist(rng);
        if (spec.is_finite())  // finite dual groups may have fewer characters
            count = std::min<int>(count, static_cast<int>(spec.torsion_size()));
        std::vector<Character> chis;
        while (static_cast<int>(chis.size()) < count) {
            Character chi = rumtest::random_character(rng, spec);
            bool dup = false;
            for (const auto& c : chis)
                if (characters_equal(spec, c, chi, 1e-3)) dup = true;
            if (!dup) chis.push_back(chi);
        }
        Window w = make_window(spec, 3);
        ComplexMatrix stacked(static_cast<Eigen::Index>(w.size()) * n, count);
        for (int k = 0; k < count; ++k) {
            ComplexVector a = rumtest::random_complex_matrix(rng, n, 1);
            WindowedField f = evaluate_chi_vector(fw, ChiSymmetricVector{chis[k], a}, w);
            for (std::size_t i = 0; i < f.values.size(); ++i)
                stacked.block(static_cast<Eigen::Index>(i) * n, k, n, 1) = f.values[i];
        }
        Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
        CHECK(svd.singularValues()(count - 1) > 1e-8);
    }
}

}  // TEST_SUITE
