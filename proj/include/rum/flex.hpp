#pragma once

#include <utility>
#include <vector>

#include "rum/gain.hpp"

namespace rum {

/// Candidate flex z(chi, a): the field gamma -> (chi(gamma) dtau(gamma) a_v)_v
/// with amplitude blocks a_v stacked into a single vector of length |V0| dX.
struct ChiSymmetricVector {
    Character chi;
    ComplexVector amplitude;
};

/// Finite truncation of a bounded field on the group: one value per window
/// element, each of length |V0| dX (or |E0| dY for operator outputs).
struct WindowedField {
    Window window;
    std::vector<ComplexVector> values;

    const ComplexVector& at(const GroupElement& gamma) const;
};

WindowedField evaluate_chi_vector(const Representation& rep, const ChiSymmetricVector& z,
                                  const Window& window);
WindowedField evaluate_chi_vector(const GainFramework& fw, const ChiSymmetricVector& z,
                                  const Window& window);

// Pointwise twist f(gamma) -> blockwise dtau(gamma) f(gamma), and its inverse.
WindowedField twist(const Representation& rep, const WindowedField& f);
WindowedField untwist(const Representation& rep, const WindowedField& f);

// Shift (pi(gamma') f)(gamma) = f(gamma - gamma'), restricted to the largest
// centered window on which the right-hand side is defined.
WindowedField shift_field(const WindowedField& f, const GroupElement& gamma_shift,
                          int out_radius);

/// Gain framework operator on a finite window. Output value at gamma is the
/// stack over edges of phi_e dtau(-gamma) (f(gamma)_{s(e)} - f(gamma+m_e)_{r(e)}).
/// The output window shrinks by the framework's gain margin; throws UsageError
/// when the input window is smaller than the margin.
WindowedField apply_gain_operator(const GainFramework& fw, const WindowedField& f);

struct FlexCheck {
    double residual = 0.0;
    bool pass = false;
};

// Default tolerance 1e-9 * (1 + max_e ||phi_e||).
double default_flex_tol(const GainFramework& fw);
FlexCheck verify_flex(const GainFramework& fw, const WindowedField& f, double tol);

/// One chi-symmetric vector per kernel basis column of the orbit matrix;
/// empty when chi is outside the RUM spectrum.
std::vector<ChiSymmetricVector> chi_flex_basis(const GainFramework& fw, const Character& chi,
                                               double tol = 1e-9);

/// dX constant flexes built from a joint eigenbasis of the generator tuple;
/// their amplitude blocks are linearly independent and each evaluates to a
/// constant field.
std::vector<ChiSymmetricVector> translation_space(const GainFramework& fw);

/// Componentwise real and imaginary parts. Only valid when the framework's
/// constraint maps and generator images are real, in which case both parts of
/// a flex are again flexes; throws UsageError otherwise.
std::pair<WindowedField, WindowedField> real_imag_parts(const GainFramework& fw,
                                                        const WindowedField& f);

// True when all values and all vertex blocks within each value agree (with
// deviation measured against the mean block).
bool is_translation(const WindowedField& f, int block_dim, double tol = 1e-9);

}  // namespace rum
