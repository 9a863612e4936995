#include "rum/flex.hpp"

#include <cmath>

namespace rum {

const ComplexVector& WindowedField::at(const GroupElement& gamma) const {
    auto idx = window.index_of(gamma);
    if (!idx) throw UsageError("windowed field: element outside the window");
    return values[*idx];
}

WindowedField evaluate_chi_vector(const Representation& rep, const ChiSymmetricVector& z,
                                  const Window& window) {
    check_character(rep.group, z.chi);
    if (z.amplitude.size() % rep.dim != 0)
        throw StructuralError("chi-symmetric vector: amplitude length not a multiple of dX");
    const int blocks = static_cast<int>(z.amplitude.size()) / rep.dim;
    WindowedField f{window, {}};
    f.values.reserve(window.size());
    for (const auto& gamma : window.elements) {
        const std::complex<double> c = evaluate_character(rep.group, z.chi, gamma);
        const ComplexMatrix d = dtau(rep, gamma);
        ComplexVector v(z.amplitude.size());
        for (int b = 0; b < blocks; ++b)
            v.segment(b * rep.dim, rep.dim) =
                c * (d * z.amplitude.segment(b * rep.dim, rep.dim));
        f.values.push_back(std::move(v));
    }
    return f;
}

WindowedField evaluate_chi_vector(const GainFramework& fw, const ChiSymmetricVector& z,
                                  const Window& window) {
    if (z.amplitude.size() != fw.num_vertices() * fw.dim_x)
        throw StructuralError("chi-symmetric vector: amplitude length must be |V0| dX");
    return evaluate_chi_vector(fw.rep, z, window);
}

namespace {

WindowedField twist_impl(const Representation& rep, const WindowedField& f, bool inverse) {
    WindowedField out{f.window, {}};
    out.values.reserve(f.values.size());
    for (std::size_t i = 0; i < f.window.elements.size(); ++i) {
        const auto& gamma = f.window.elements[i];
        ComplexMatrix d = dtau(rep, inverse ? negate(rep.group, gamma) : gamma);
        const ComplexVector& v = f.values[i];
        if (v.size() % rep.dim != 0)
            throw StructuralError("twist: value length not a multiple of dX");
        const int blocks = static_cast<int>(v.size()) / rep.dim;
        ComplexVector w(v.size());
        for (int b = 0; b < blocks; ++b)
            w.segment(b * rep.dim, rep.dim) = d * v.segment(b * rep.dim, rep.dim);
        out.values.push_back(std::move(w));
    }
    return out;
}

}  // namespace

WindowedField twist(const Representation& rep, const WindowedField& f) {
    return twist_impl(rep, f, false);
}

WindowedField untwist(const Representation& rep, const WindowedField& f) {
    return twist_impl(rep, f, true);
}

WindowedField shift_field(const WindowedField& f, const GroupElement& gamma_shift,
                          int out_radius) {
    const auto& spec = f.window.spec;
    if (out_radius + free_inf_norm(gamma_shift) > f.window.radius)
        throw UsageError("shift_field: output window requires values outside the input window");
    WindowedField out{make_window(spec, out_radius), {}};
    out.values.reserve(out.window.size());
    for (const auto& gamma : out.window.elements)
        out.values.push_back(f.at(add(spec, gamma, negate(spec, gamma_shift))));
    return out;
}

WindowedField apply_gain_operator(const GainFramework& fw, const WindowedField& f) {
    const auto& spec = fw.rep.group;
    if (!(f.window.spec == spec))
        throw StructuralError("apply_gain_operator: field is over a different group");
    const long long margin = gain_margin(fw);
    if (f.window.radius < margin)
        throw UsageError("apply_gain_operator: window radius " +
                         std::to_string(f.window.radius) + " is smaller than the margin " +
                         std::to_string(margin) + " required by the edge gains");
    const int out_radius = static_cast<int>(f.window.radius - margin);
    const int dx = fw.dim_x, dy = fw.dim_y;

    WindowedField out{make_window(spec, out_radius), {}};
    out.values.reserve(out.window.size());
    for (const auto& gamma : out.window.elements) {
        const ComplexMatrix d_inv = dtau(fw.rep, negate(spec, gamma));
        const ComplexVector& here = f.at(gamma);
        ComplexVector row(fw.num_edges() * dy);
        for (int ei = 0; ei < fw.num_edges(); ++ei) {
            const GainEdge& e = fw.edges[ei];
            const ComplexVector& there = f.at(add(spec, gamma, e.gain));
            ComplexVector diff = here.segment(e.source * dx, dx) -
                                 there.segment(e.range * dx, dx);
            row.segment(ei * dy, dy) = e.phi * (d_inv * diff);
        }
        out.values.push_back(std::move(row));
    }
    return out;
}

double default_flex_tol(const GainFramework& fw) {
    double m = 0.0;
    for (const auto& e : fw.edges) m = std::max(m, e.phi.norm());
    return 1e-9 * (1.0 + m);
}

FlexCheck verify_flex(const GainFramework& fw, const WindowedField& f, double tol) {
    WindowedField residual_field = apply_gain_operator(fw, f);
    double residual = 0.0;
    for (const auto& v : residual_field.values) residual = std::max(residual, v.norm());
    return {residual, residual <= tol};
}

std::vector<ChiSymmetricVector> chi_flex_basis(const GainFramework& fw, const Character& chi,
                                               double tol) {
    auto report = rum_membership(fw, chi, tol);
    std::vector<ChiSymmetricVector> out;
    for (Eigen::Index c = 0; c < report.basis.cols(); ++c)
        out.push_back({chi, report.basis.col(c)});
    return out;
}

std::vector<ChiSymmetricVector> translation_space(const GainFramework& fw) {
    auto points = joint_spectral_points(fw.rep);
    std::vector<ChiSymmetricVector> out;
    for (const auto& p : points) {
        for (Eigen::Index c = 0; c < p.pair.eigenspace.cols(); ++c) {
            ComplexVector a = p.pair.eigenspace.col(c);
            ComplexVector stacked(fw.num_vertices() * fw.dim_x);
            for (int v = 0; v < fw.num_vertices(); ++v)
                stacked.segment(v * fw.dim_x, fw.dim_x) = a;
            out.push_back({p.chi, std::move(stacked)});
        }
    }
    return out;
}

std::pair<WindowedField, WindowedField> real_imag_parts(const GainFramework& fw,
                                                        const WindowedField& f) {
    if (!has_real_data(fw))
        throw UsageError(
            "real_imag_parts: framework has complex constraint data; the decomposition "
            "does not preserve flexes");
    WindowedField re{f.window, {}}, im{f.window, {}};
    re.values.reserve(f.values.size());
    im.values.reserve(f.values.size());
    for (const auto& v : f.values) {
        re.values.push_back(v.real().cast<std::complex<double>>());
        im.values.push_back(v.imag().cast<std::complex<double>>());
    }
    return {std::move(re), std::move(im)};
}

bool is_translation(const WindowedField& f, int block_dim, double tol) {
    if (f.values.empty()) return true;
    if (f.values.front().size() % block_dim != 0)
        throw StructuralError("is_translation: value length not a multiple of the block size");
    const int blocks = static_cast<int>(f.values.front().size()) / block_dim;
    ComplexVector mean = ComplexVector::Zero(block_dim);
    for (const auto& v : f.values)
        for (int b = 0; b < blocks; ++b) mean += v.segment(b * block_dim, block_dim);
    mean /= static_cast<double>(f.values.size() * blocks);
    for (const auto& v : f.values)
        for (int b = 0; b < blocks; ++b)
            if ((v.segment(b * block_dim, block_dim) - mean).cwiseAbs().maxCoeff() > tol)
                return false;
    return true;
}

}  // namespace rum
