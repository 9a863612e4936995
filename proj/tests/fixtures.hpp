#pragma once

// Programmatic builders for the frameworks used across the test suites, plus
// seeded random generators for the property tests.

#include <cmath>
#include <numbers>
#include <random>

#include "rum/ap.hpp"
#include "rum/flex.hpp"
#include "rum/gain.hpp"
#include "rum/geometry.hpp"

namespace rumtest {

using namespace rum;

inline ComplexMatrix real_matrix3(std::initializer_list<double> entries) {
    ComplexMatrix m(3, 3);
    auto it = entries.begin();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = *it++;
    return m;
}

inline ComplexMatrix row_vector(std::initializer_list<std::complex<double>> entries) {
    ComplexMatrix m(1, static_cast<Eigen::Index>(entries.size()));
    Eigen::Index c = 0;
    for (const auto& v : entries) m(0, c++) = v;
    return m;
}

// --- C3h: Z2 x Z3 acting on C^3 by a horizontal reflection and a clockwise
// rotation of order three ---

inline Representation c3h_representation() {
    const double s = std::sqrt(3.0) / 2.0;
    Representation rep;
    rep.group = GroupSpec{0, {2, 3}};
    rep.dim = 3;
    rep.generators.push_back({real_matrix3({1, 0, 0, 0, 1, 0, 0, 0, -1}),
                              ComplexVector::Zero(3)});
    rep.generators.push_back({real_matrix3({-0.5, s, 0, -s, -0.5, 0, 0, 0, 1}),
                              ComplexVector::Zero(3)});
    return rep;
}

inline GainFramework c3h_framework(const ComplexMatrix& phi1, const ComplexMatrix& phi2) {
    GainFramework fw;
    fw.rep = c3h_representation();
    fw.dim_x = 3;
    fw.dim_y = 1;
    fw.vertices = {"v"};
    fw.edges.push_back({"e1", 0, 0, GroupElement{{}, {0, 1}}, phi1});
    fw.edges.push_back({"e2", 0, 0, GroupElement{{}, {1, 1}}, phi2});
    return fw;
}

inline GainFramework c3h_generic_framework() {
    return c3h_framework(row_vector({0.37, -1.21, 0.64}), row_vector({1.13, 0.29, -0.83}));
}

inline RealVector c3h_seed() {
    RealVector p(3);
    p << -std::sqrt(3.0), -1.0, 1.0;
    return p;
}

inline GainFramework c3h_euclidean_framework() {
    const double s3 = std::sqrt(3.0);
    return c3h_framework(row_vector({-s3, -3.0, 0.0}), row_vector({-s3, -3.0, 2.0}));
}

inline GainFramework c3h_cylindrical_framework() {
    const double s3 = std::sqrt(3.0);
    return c3h_framework(row_vector({-s3, -3.0, 0.0}), row_vector({0.0, 0.0, 2.0}));
}

// --- C_inf_h: Z x Z2 acting on C^3 by a rotation of angle theta and the
// horizontal reflection; free generator first ---

inline Representation cinfh_representation(double theta) {
    Representation rep;
    rep.group = GroupSpec{1, {2}};
    rep.dim = 3;
    rep.generators.push_back({real_matrix3({std::cos(theta), std::sin(theta), 0,
                                            -std::sin(theta), std::cos(theta), 0, 0, 0, 1}),
                              ComplexVector::Zero(3)});
    rep.generators.push_back({real_matrix3({1, 0, 0, 0, 1, 0, 0, 0, -1}),
                              ComplexVector::Zero(3)});
    return rep;
}

inline GainFramework cinfh_framework(double theta, const ComplexMatrix& phi1,
                                     const ComplexMatrix& phi2) {
    GainFramework fw;
    fw.rep = cinfh_representation(theta);
    fw.dim_x = 3;
    fw.dim_y = 1;
    fw.vertices = {"v"};
    fw.edges.push_back({"e1", 0, 0, GroupElement{{1}, {0}}, phi1});
    fw.edges.push_back({"e2", 0, 0, GroupElement{{1}, {1}}, phi2});
    return fw;
}

// Euclidean constraints from the placed orbit of (-sqrt3, -1, 1).
inline GainFramework cinfh_euclidean_framework(double theta) {
    const double s3 = std::sqrt(3.0);
    const double a = -s3 * (1 - std::cos(theta)) + std::sin(theta);
    const double b = -s3 * std::sin(theta) - (1 - std::cos(theta));
    return cinfh_framework(theta, row_vector({a, b, 0.0}), row_vector({a, b, 2.0}));
}

// --- frieze p11m: Z x Z2 acting on C^2 by a unit translation and the
// horizontal reflection ---

inline Representation frieze_representation() {
    Representation rep;
    rep.group = GroupSpec{1, {2}};
    rep.dim = 2;
    ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    ComplexVector t(2);
    t << 1.0, 0.0;
    rep.generators.push_back({id2, t});
    ComplexMatrix refl(2, 2);
    refl << 1, 0, 0, -1;
    rep.generators.push_back({refl, ComplexVector::Zero(2)});
    return rep;
}

// lq constraint rows of the zig-zag strip with joints at (m, +-1).
inline GainFramework frieze_framework(double q, bool braced) {
    GainFramework fw;
    fw.rep = frieze_representation();
    fw.dim_x = 2;
    fw.dim_y = 1;
    fw.vertices = {"v"};
    const double c2 = std::pow(1.0 + std::pow(2.0, q), (1.0 - q) / q);
    fw.edges.push_back({"e1", 0, 0, GroupElement{{1}, {0}}, row_vector({-1.0, 0.0})});
    fw.edges.push_back(
        {"e2", 0, 0, GroupElement{{1}, {1}},
         row_vector({-c2, -c2 * std::pow(2.0, q - 1.0)})});
    if (braced) {
        const double c3 = std::pow(2.0, 1.0 / q - 1.0);
        fw.edges.push_back({"e3", 0, 0, GroupElement{{2}, {1}}, row_vector({-c3, -c3})});
    }
    return fw;
}

inline RealVector frieze_seed() {
    RealVector p(2);
    p << 0.0, -1.0;
    return p;
}

// --- seeded random generators ---

using Rng = std::mt19937_64;

inline std::complex<double> random_unit_complex(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, dist(rng));
}

inline ComplexMatrix random_complex_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = std::complex<double>(dist(rng), dist(rng));
    return m;
}

inline ComplexMatrix random_unitary(Rng& rng, int dim) {
    return orthonormalize(random_complex_matrix(rng, dim, dim));
}

// Commuting unitaries sharing a random eigenbasis; torsion_order > 0 forces
// eigenvalues to be roots of unity of that order.
inline ComplexMatrix random_commuting_unitary(Rng& rng, const ComplexMatrix& basis,
                                              int torsion_order = 0) {
    const int dim = static_cast<int>(basis.rows());
    ComplexVector phases(dim);
    if (torsion_order > 0) {
        std::uniform_int_distribution<int> pick(0, torsion_order - 1);
        for (int i = 0; i < dim; ++i)
            phases(i) = std::polar(1.0, 2.0 * std::numbers::pi * pick(rng) / torsion_order);
    } else {
        for (int i = 0; i < dim; ++i) phases(i) = random_unit_complex(rng);
    }
    return basis * phases.asDiagonal() * basis.adjoint();
}

inline GroupElement random_element(Rng& rng, const GroupSpec& spec, long long max_free) {
    std::uniform_int_distribution<long long> free_dist(-max_free, max_free);
    GroupElement g = zero_element(spec);
    for (auto& v : g.free) v = free_dist(rng);
    for (int i = 0; i < spec.torsion_rank(); ++i) {
        std::uniform_int_distribution<int> tor(0, spec.torsion_orders[i] - 1);
        g.torsion[i] = tor(rng);
    }
    return g;
}

inline Character random_character(Rng& rng, const GroupSpec& spec) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Character chi = trivial_character(spec);
    for (auto& a : chi.angles) a = angle(rng);
    for (int i = 0; i < spec.torsion_rank(); ++i) {
        std::uniform_int_distribution<int> tor(0, spec.torsion_orders[i] - 1);
        chi.torsion_indices[i] = tor(rng);
    }
    return chi;
}

/// Random gain framework: |V0| <= 3, |E0| <= 5, dX <= 3, commuting
/// unitary-generated representation, gains with free coordinates in [-2, 2].
inline GainFramework random_framework(Rng& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    GroupSpec spec;
    spec.free_rank = coin(rng);
    const int torsion_count = spec.free_rank == 0 ? 1 + coin(rng) : coin(rng);
    std::uniform_int_distribution<int> order(2, 4);
    for (int i = 0; i < torsion_count; ++i) spec.torsion_orders.push_back(order(rng));

    std::uniform_int_distribution<int> dim_dist(1, 3);
    const int dx = dim_dist(rng);
    std::uniform_int_distribution<int> dy_dist(1, 2);
    const int dy = dy_dist(rng);

    Representation rep;
    rep.group = spec;
    rep.dim = dx;
    ComplexMatrix basis = random_unitary(rng, dx);
    for (int i = 0; i < spec.free_rank; ++i)
        rep.generators.push_back(
            {random_commuting_unitary(rng, basis), ComplexVector::Zero(dx)});
    for (int i = 0; i < spec.torsion_rank(); ++i)
        rep.generators.push_back(
            {random_commuting_unitary(rng, basis, spec.torsion_orders[i]),
             ComplexVector::Zero(dx)});

    GainFramework fw;
    fw.rep = rep;
    fw.dim_x = dx;
    fw.dim_y = dy;
    std::uniform_int_distribution<int> nv_dist(1, 3);
    const int nv = nv_dist(rng);
    for (int v = 0; v < nv; ++v) fw.vertices.push_back("v" + std::to_string(v));

    std::uniform_int_distribution<int> ne_dist(1, 5);
    std::uniform_int_distribution<int> vert(0, nv - 1);
    const int ne = ne_dist(rng);
    const GroupElement zero = zero_element(spec);
    // small groups can run out of admissible gains, so bound the attempts
    for (int attempt = 0; attempt < 200 && static_cast<int>(fw.edges.size()) < ne;
         ++attempt) {
        GainEdge edge;
        edge.id = "e" + std::to_string(fw.edges.size() + 1);
        edge.source = vert(rng);
        edge.range = vert(rng);
        edge.gain = random_element(rng, spec, 2);
        if (edge.source == edge.range && edge.gain == zero) continue;
        bool clash = false;
        for (const auto& other : fw.edges) {
            bool same = other.source == edge.source && other.range == edge.range &&
                        other.gain == edge.gain;
            bool rev = other.source == edge.range && other.range == edge.source &&
                       other.gain == negate(spec, edge.gain);
            if (same || rev) clash = true;
        }
        if (clash) continue;
        edge.phi = random_complex_matrix(rng, dy, dx);
        fw.edges.push_back(std::move(edge));
    }
    if (fw.edges.empty()) {
        GainEdge edge;
        edge.id = "e1";
        edge.source = 0;
        edge.range = 0;
        edge.gain = standard_generator(spec, 0);
        edge.phi = random_complex_matrix(rng, dy, dx);
        fw.edges.push_back(std::move(edge));
    }
    validate(fw);
    return fw;
}

// Sum of scaled chi-symmetric vectors evaluated over a window.
inline WindowedField combine_fields(const GainFramework& fw,
                                    const std::vector<std::pair<std::complex<double>,
                                                                ChiSymmetricVector>>& parts,
                                    const Window& window) {
    WindowedField acc{window, {}};
    acc.values.assign(window.size(),
                      ComplexVector::Zero(fw.num_vertices() * fw.dim_x));
    for (const auto& [coef, z] : parts) {
        WindowedField f = evaluate_chi_vector(fw, z, window);
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += coef * f.values[i];
    }
    return acc;
}

}  // namespace rumtest
