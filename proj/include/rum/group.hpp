#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rum/errors.hpp"

namespace rum {

/// A finitely generated discrete abelian group Z^r x Z_{n1} x ... x Z_{nk}.
struct GroupSpec {
    int free_rank = 0;                // r >= 0
    std::vector<int> torsion_orders;  // each n_i >= 2

    int torsion_rank() const { return static_cast<int>(torsion_orders.size()); }
    int num_generators() const { return free_rank + torsion_rank(); }
    bool is_finite() const { return free_rank == 0; }
    // Order of the torsion part, i.e. |Gamma| when the group is finite.
    long long torsion_size() const;

    bool operator==(const GroupSpec&) const = default;
};

// Throws StructuralError unless r + k >= 1 and every torsion order >= 2.
void validate(const GroupSpec& spec);

/// Element of the group: integer coordinates, torsion entries kept in [0, n_i).
struct GroupElement {
    std::vector<long long> free;  // length r
    std::vector<int> torsion;     // length k

    bool operator==(const GroupElement&) const = default;
};

GroupElement zero_element(const GroupSpec& spec);
GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
GroupElement negate(const GroupSpec& spec, const GroupElement& a);
// a with every coordinate scaled by k (torsion reduced mod n_i).
GroupElement scale(const GroupSpec& spec, const GroupElement& a, long long k);
// The i-th standard generator, free generators first.
GroupElement standard_generator(const GroupSpec& spec, int i);
void check_element(const GroupSpec& spec, const GroupElement& a);

// Max norm of the free part (0 for pure torsion elements).
long long free_inf_norm(const GroupElement& a);
// Lexicographic comparison on (free, torsion) coordinates.
bool element_less(const GroupElement& a, const GroupElement& b);
std::string to_string(const GroupElement& a);

/// A character of the dual group: one angle in [0, 2pi) per free factor and
/// one index in [0, n_i) per torsion factor.
struct Character {
    std::vector<double> angles;
    std::vector<int> torsion_indices;
};

Character trivial_character(const GroupSpec& spec);
void check_character(const GroupSpec& spec, const Character& chi);
std::complex<double> evaluate_character(const GroupSpec& spec, const Character& chi,
                                        const GroupElement& gamma);
Character conjugate(const GroupSpec& spec, const Character& chi);
Character multiply(const GroupSpec& spec, const Character& a, const Character& b);
// Angle-space distance: max over free factors of circular distance, infinity
// when torsion indices differ.
double character_distance(const GroupSpec& spec, const Character& a, const Character& b);
// Equality with angle tolerance (default 1e-9); torsion indices exact.
bool characters_equal(const GroupSpec& spec, const Character& a, const Character& b,
                      double angle_tol = 1e-9);
std::string to_string(const Character& chi);

// Reduce an angle to [0, 2pi).
double wrap_angle(double theta);

/// The finite box H_n = [-n, n]^r x (full torsion part), enumerated in
/// lexicographic order over (free, torsion) coordinates.
struct Window {
    GroupSpec spec;
    int radius = 0;
    std::vector<GroupElement> elements;

    std::size_t size() const { return elements.size(); }
    // Position of gamma in the enumeration; nullopt when outside the box.
    std::optional<std::size_t> index_of(const GroupElement& gamma) const;
    bool contains(const GroupElement& gamma) const { return index_of(gamma).has_value(); }
};

Window make_window(const GroupSpec& spec, int n);

// |gamma + H_n  intersect  H_n^c| / |H_n|, computed from exact counts.
double folner_defect(const GroupSpec& spec, const GroupElement& gamma, int n);

}  // namespace rum
