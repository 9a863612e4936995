#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "rum/flex.hpp"
#include "rum/gain.hpp"

namespace rum {

/// Finite sum of character terms p(gamma) = sum_k a_k chi_k(gamma) with
/// pairwise distinct characters.
struct TrigPolynomial {
    std::vector<std::pair<Character, ComplexVector>> terms;
};

void validate(const GroupSpec& spec, const TrigPolynomial& p);
ComplexVector evaluate(const GroupSpec& spec, const TrigPolynomial& p,
                       const GroupElement& gamma);

/// A bounded vector-valued function on the group, given by an evaluation
/// rule. Table-backed functions are only evaluable up to max_radius; when the
/// function is exactly a trigonometric polynomial the terms are kept so
/// coefficient lookups stay exact.
struct SampledFunction {
    GroupSpec group;
    int dim = 0;
    std::function<ComplexVector(const GroupElement&)> eval;
    std::optional<int> max_radius;
    std::shared_ptr<const TrigPolynomial> poly;

    bool evaluable(int radius) const { return !max_radius || *max_radius >= radius; }
};

SampledFunction from_polynomial(const GroupSpec& spec, TrigPolynomial p);
SampledFunction from_field(const WindowedField& f);
// The twisted function gamma -> blockwise dtau(gamma) base(gamma).
SampledFunction twisted(const Representation& rep, SampledFunction base);
// Closed form of z(chi, a) as a sampled function of length |amplitude|.
SampledFunction from_chi_vector(const Representation& rep, const ChiSymmetricVector& z);

// Arithmetic mean over the window of the given radius.
ComplexVector truncated_mean(const SampledFunction& f, int n);

// Truncated Bohr-Fourier coefficient: mean of conj(chi(gamma)) h(gamma).
ComplexVector fourier_coefficient(const SampledFunction& h, const Character& chi, int n);

/// Averaging operator: output at omega is (1/|H_n|) sum_gamma chi(gamma)
/// f(omega - gamma), tabulated on the window of radius out_radius. Throws
/// UsageError when f cannot be evaluated on window(n + out_radius).
SampledFunction averaging_operator(const SampledFunction& f, const Character& chi, int n,
                                   int out_radius);

/// Fejer-weighted partial reconstruction sum_k c_k h^(chi_k) chi_k over the
/// candidate characters. Weights come from a product of one-dimensional Fejer
/// kernels on the free factors (degree = level) and the exact uniform kernel
/// on torsion factors, so c_k in [0, 1] and the output spectrum is contained
/// in the candidate set intersected with the spectrum of h.
TrigPolynomial fejer_approximation(const SampledFunction& h, int level,
                                   const std::vector<Character>& candidates);

/// Candidates whose truncated coefficient norm exceeds tol. tol <= 0 selects
/// 1e-6 times the sup norm of h over the window.
std::vector<Character> bohr_fourier_spectrum(const SampledFunction& h,
                                             const std::vector<Character>& candidates, int n,
                                             double tol = 0.0);

struct ApRigidityCertificate {
    bool ap_rigid = false;
    std::vector<SpectrumPoint> spectrum;
    std::vector<JointSpectralPoint> joint_points;
    std::optional<Character> witness_character;      // spectrum point beyond the joint points
    std::optional<ChiSymmetricVector> witness_flex;  // non-translational kernel vector
};

/// Almost-periodic rigidity test: the spectrum must coincide with the joint
/// spectral points and every orbit-matrix kernel vector at a joint spectral
/// character must evaluate to a translation.
ApRigidityCertificate check_ap_rigidity(const GainFramework& fw, const ScanOptions& opts = {},
                                        double tol = 1e-9);

}  // namespace rum
