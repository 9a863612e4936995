#include "rum/ap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void validate(const GroupSpec& spec, const TrigPolynomial& p) {
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        check_character(spec, p.terms[i].first);
        for (std::size_t j = i + 1; j < p.terms.size(); ++j)
            if (characters_equal(spec, p.terms[i].first, p.terms[j].first))
                throw StructuralError("trig polynomial: duplicate character");
    }
}

ComplexVector evaluate(const GroupSpec& spec, const TrigPolynomial& p,
                       const GroupElement& gamma) {
    if (p.terms.empty()) throw StructuralError("trig polynomial: no terms");
    ComplexVector v = ComplexVector::Zero(p.terms.front().second.size());
    for (const auto& [chi, a] : p.terms) v += evaluate_character(spec, chi, gamma) * a;
    return v;
}

SampledFunction from_polynomial(const GroupSpec& spec, TrigPolynomial p) {
    validate(spec, p);
    if (p.terms.empty()) throw StructuralError("sampled function: empty polynomial");
    auto shared = std::make_shared<const TrigPolynomial>(std::move(p));
    SampledFunction f;
    f.group = spec;
    f.dim = static_cast<int>(shared->terms.front().second.size());
    f.poly = shared;
    f.eval = [spec, shared](const GroupElement& gamma) {
        return evaluate(spec, *shared, gamma);
    };
    return f;
}

SampledFunction from_field(const WindowedField& field) {
    if (field.values.empty()) throw StructuralError("sampled function: empty field");
    SampledFunction f;
    f.group = field.window.spec;
    f.dim = static_cast<int>(field.values.front().size());
    f.max_radius = field.window.radius;
    auto copy = std::make_shared<const WindowedField>(field);
    f.eval = [copy](const GroupElement& gamma) { return copy->at(gamma); };
    return f;
}

SampledFunction twisted(const Representation& rep, SampledFunction base) {
    if (base.dim % rep.dim != 0)
        throw StructuralError("twisted: value length not a multiple of the block size");
    SampledFunction f = base;
    f.poly.reset();  // the twist is not a trigonometric polynomial in general
    f.eval = [rep, base](const GroupElement& gamma) {
        ComplexVector v = base.eval(gamma);
        ComplexMatrix d = dtau(rep, gamma);
        const int blocks = static_cast<int>(v.size()) / rep.dim;
        ComplexVector out(v.size());
        for (int b = 0; b < blocks; ++b)
            out.segment(b * rep.dim, rep.dim) = d * v.segment(b * rep.dim, rep.dim);
        return out;
    };
    return f;
}

SampledFunction from_chi_vector(const Representation& rep, const ChiSymmetricVector& z) {
    TrigPolynomial p;
    p.terms.push_back({z.chi, z.amplitude});
    return twisted(rep, from_polynomial(rep.group, std::move(p)));
}

ComplexVector truncated_mean(const SampledFunction& f, int n) {
    if (n < 0) throw StructuralError("truncated_mean: negative radius");
    if (!f.evaluable(n))
        throw UsageError("truncated_mean: function not evaluable on the requested window");
    Window w = make_window(f.group, n);
    ComplexVector acc = ComplexVector::Zero(f.dim);
    for (const auto& gamma : w.elements) acc += f.eval(gamma);
    return acc / static_cast<double>(w.size());
}

ComplexVector fourier_coefficient(const SampledFunction& h, const Character& chi, int n) {
    check_character(h.group, chi);
    if (!h.evaluable(n))
        throw UsageError("fourier_coefficient: function not evaluable on the requested window");
    Window w = make_window(h.group, n);
    ComplexVector acc = ComplexVector::Zero(h.dim);
    for (const auto& gamma : w.elements)
        acc += std::conj(evaluate_character(h.group, chi, gamma)) * h.eval(gamma);
    return acc / static_cast<double>(w.size());
}

SampledFunction averaging_operator(const SampledFunction& f, const Character& chi, int n,
                                   int out_radius) {
    check_character(f.group, chi);
    if (n < 0 || out_radius < 0) throw StructuralError("averaging_operator: negative radius");
    if (!f.evaluable(n + out_radius))
        throw UsageError("averaging_operator: function must be evaluable on window(" +
                         std::to_string(n + out_radius) + ")");
    Window inner = make_window(f.group, n);
    Window outer = make_window(f.group, out_radius);
    WindowedField table{outer, {}};
    table.values.reserve(outer.size());
    for (const auto& omega : outer.elements) {
        ComplexVector acc = ComplexVector::Zero(f.dim);
        for (const auto& gamma : inner.elements)
            acc += evaluate_character(f.group, chi, gamma) *
                   f.eval(add(f.group, omega, negate(f.group, gamma)));
        table.values.push_back(acc / static_cast<double>(inner.size()));
    }
    return from_field(table);
}

namespace {

double signed_angle(double theta) {
    double t = wrap_angle(theta);
    if (t > std::numbers::pi) t -= kTwoPi;
    return t;
}

// Approximate common divisor of a set of angles (euclidean reduction with a
// floor tolerance). Returns 0 when the set is empty.
double angle_gcd(const std::vector<double>& angles, double eps) {
    double g = 0.0;
    for (double a : angles) {
        double x = std::fabs(a);
        if (x <= eps) continue;
        if (g == 0.0) {
            g = x;
            continue;
        }
        double b = x;
        int guard = 0;
        while (b > eps && guard++ < 64) {
            double t = std::fmod(g, b);
            g = b;
            b = t;
        }
    }
    return g;
}

// Fejer weight of one candidate: product over free factors of
// (1 - |j| / (level + 1))_+ where j is the integer frequency of the angle
// with respect to the factor's base angle. Rationally unrelated angles fall
// back to an independent direction each (j = 1). Torsion factors use the
// exact uniform kernel (weight 1).
std::vector<double> fejer_weights(const GroupSpec& spec,
                                  const std::vector<Character>& candidates, int level) {
    std::vector<double> weights(candidates.size(), 1.0);
    for (int f = 0; f < spec.free_rank; ++f) {
        std::vector<double> angles(candidates.size());
        for (std::size_t k = 0; k < candidates.size(); ++k)
            angles[k] = signed_angle(candidates[k].angles[f]);
        double g = angle_gcd(angles, 1e-9);
        bool integer_mode = g > 1e-9;
        std::vector<long long> freq(candidates.size(), 0);
        if (integer_mode) {
            for (std::size_t k = 0; k < candidates.size(); ++k) {
                double ratio = angles[k] / g;
                long long j = std::llround(ratio);
                if (std::fabs(ratio - static_cast<double>(j)) > 1e-6 ||
                    std::llabs(j) > 1000000LL) {
                    integer_mode = false;
                    break;
                }
                freq[k] = j;
            }
        }
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            double j;
            if (integer_mode)
                j = static_cast<double>(std::llabs(freq[k]));
            else
                j = std::fabs(angles[k]) > 1e-12 ? 1.0 : 0.0;
            weights[k] *= std::max(0.0, 1.0 - j / (level + 1.0));
        }
    }
    return weights;
}

}  // namespace

TrigPolynomial fejer_approximation(const SampledFunction& h, int level,
                                   const std::vector<Character>& candidates) {
    if (level < 0) throw StructuralError("fejer_approximation: negative level");
    std::vector<Character> unique;
    for (const auto& chi : candidates) {
        check_character(h.group, chi);
        bool seen = false;
        for (const auto& u : unique)
            if (characters_equal(h.group, u, chi)) {
                seen = true;
                break;
            }
        if (!seen) unique.push_back(chi);
    }

    auto weights = fejer_weights(h.group, unique, level);
    TrigPolynomial out;
    double max_norm = 0.0;
    std::vector<ComplexVector> coefs(unique.size());
    for (std::size_t k = 0; k < unique.size(); ++k) {
        if (h.poly) {
            // Exact lookup for known polynomials.
            coefs[k] = ComplexVector::Zero(h.dim);
            for (const auto& [chi, a] : h.poly->terms)
                if (characters_equal(h.group, chi, unique[k])) {
                    coefs[k] = a;
                    break;
                }
        } else {
            int n_coef = std::max(200, 4 * level);
            if (h.max_radius) n_coef = std::min(n_coef, *h.max_radius);
            coefs[k] = fourier_coefficient(h, unique[k], n_coef);
        }
        max_norm = std::max(max_norm, coefs[k].norm());
    }
    for (std::size_t k = 0; k < unique.size(); ++k) {
        ComplexVector c = weights[k] * coefs[k];
        if (c.norm() <= 1e-12 * (1.0 + max_norm)) continue;  // not in the spectrum
        out.terms.push_back({unique[k], std::move(c)});
    }
    return out;
}

std::vector<Character> bohr_fourier_spectrum(const SampledFunction& h,
                                             const std::vector<Character>& candidates, int n,
                                             double tol) {
    if (tol <= 0.0) {
        double sup = 0.0;
        Window w = make_window(h.group, std::min(n, h.max_radius.value_or(n)));
        for (const auto& gamma : w.elements)
            sup = std::max(sup, h.eval(gamma).cwiseAbs().maxCoeff());
        tol = 1e-6 * sup;
    }
    std::vector<Character> out;
    for (const auto& chi : candidates) {
        bool seen = false;
        for (const auto& u : out)
            if (characters_equal(h.group, u, chi)) {
                seen = true;
                break;
            }
        if (seen) continue;
        if (fourier_coefficient(h, chi, n).norm() > tol) out.push_back(chi);
    }
    return out;
}

ApRigidityCertificate check_ap_rigidity(const GainFramework& fw, const ScanOptions& opts,
                                        double tol) {
    validate(fw);
    ApRigidityCertificate cert;
    cert.joint_points = joint_spectral_points(fw);
    if (fw.rep.group.is_finite())
        cert.spectrum = rum_spectrum_finite(fw, tol);
    else
        cert.spectrum = rum_spectrum_scan(fw, opts).points;

    cert.ap_rigid = true;
    for (const auto& p : cert.spectrum) {
        bool known = false;
        for (const auto& j : cert.joint_points)
            if (character_distance(fw.rep.group, p.chi, j.chi) <= opts.snap_tol) {
                known = true;
                break;
            }
        if (!known) {
            cert.ap_rigid = false;
            if (!cert.witness_character) cert.witness_character = p.chi;
        }
    }

    const int radius = static_cast<int>(std::max<long long>(1, gain_margin(fw)));
    Window w = make_window(fw.rep.group, radius);
    for (const auto& j : cert.joint_points) {
        for (const auto& z : chi_flex_basis(fw, j.chi, tol)) {
            WindowedField f = evaluate_chi_vector(fw, z, w);
            if (!is_translation(f, fw.dim_x, 1e-8)) {
                cert.ap_rigid = false;
                if (!cert.witness_flex) cert.witness_flex = z;
            }
        }
    }
    return cert;
}

}  // namespace rum
