#include "rum/gain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace rum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool character_less(const Character& a, const Character& b) {
    if (a.torsion_indices != b.torsion_indices) return a.torsion_indices < b.torsion_indices;
    return a.angles < b.angles;
}

void sort_points(std::vector<SpectrumPoint>& pts) {
    std::sort(pts.begin(), pts.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) {
                  return character_less(a.chi, b.chi);
              });
}
}  // namespace

AffineIsometry affine_identity(int dim) {
    return {ComplexMatrix::Identity(dim, dim), ComplexVector::Zero(dim)};
}

AffineIsometry compose(const AffineIsometry& a, const AffineIsometry& b) {
    return {a.linear * b.linear, a.linear * b.translation + a.translation};
}

AffineIsometry inverse(const AffineIsometry& a) {
    ComplexMatrix inv = a.linear.adjoint();  // unitary linear part
    return {inv, -(inv * a.translation)};
}

AffineIsometry affine_power(const AffineIsometry& a, long long k) {
    AffineIsometry base = k >= 0 ? a : inverse(a);
    long long n = k >= 0 ? k : -k;
    AffineIsometry acc = affine_identity(a.dim());
    for (long long i = 0; i < n; ++i) acc = compose(acc, base);
    return acc;
}

double affine_distance(const AffineIsometry& a, const AffineIsometry& b) {
    return std::max((a.linear - b.linear).norm(), (a.translation - b.translation).norm());
}

void validate(const Representation& rep) {
    validate(rep.group);
    if (static_cast<int>(rep.generators.size()) != rep.group.num_generators())
        throw StructuralError("representation: one generator image per standard generator");
    if (rep.dim < 1) throw StructuralError("representation: dimension must be >= 1");
    for (const auto& g : rep.generators) {
        if (g.linear.rows() != rep.dim || g.linear.cols() != rep.dim ||
            g.translation.size() != rep.dim)
            throw StructuralError("representation: generator image has wrong shape");
        check_finite(g.linear, "generator linear part");
        double dev = (g.linear.adjoint() * g.linear -
                      ComplexMatrix::Identity(rep.dim, rep.dim)).norm();
        if (dev > 1e-9)
            throw ContractError("representation: generator linear part is not unitary");
    }
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        for (std::size_t j = i + 1; j < rep.generators.size(); ++j) {
            double dev = affine_distance(compose(rep.generators[i], rep.generators[j]),
                                         compose(rep.generators[j], rep.generators[i]));
            if (dev > 1e-8)
                throw ContractError("representation: generator images do not commute");
        }
    for (int t = 0; t < rep.group.torsion_rank(); ++t) {
        const auto& g = rep.generators[rep.group.free_rank + t];
        AffineIsometry pw = affine_power(g, rep.group.torsion_orders[t]);
        if (affine_distance(pw, affine_identity(rep.dim)) > 1e-8)
            throw ContractError("representation: torsion generator image has wrong order");
    }
}

Representation trivial_representation(const GroupSpec& spec, int dim) {
    Representation rep{spec, {}, dim};
    for (int i = 0; i < spec.num_generators(); ++i)
        rep.generators.push_back(affine_identity(dim));
    return rep;
}

ComplexMatrix dtau(const Representation& rep, const GroupElement& gamma) {
    check_element(rep.group, gamma);
    ComplexMatrix acc = ComplexMatrix::Identity(rep.dim, rep.dim);
    for (int i = 0; i < rep.group.free_rank; ++i) {
        long long k = gamma.free[i];
        if (k == 0) continue;
        const ComplexMatrix& a = rep.generators[i].linear;
        ComplexMatrix base = k > 0 ? a : ComplexMatrix(a.adjoint());
        for (long long j = 0; j < std::llabs(k); ++j) acc = acc * base;
    }
    for (int i = 0; i < rep.group.torsion_rank(); ++i) {
        const ComplexMatrix& a = rep.generators[rep.group.free_rank + i].linear;
        for (int j = 0; j < gamma.torsion[i]; ++j) acc = acc * a;
    }
    return acc;
}

AffineIsometry tau(const Representation& rep, const GroupElement& gamma) {
    check_element(rep.group, gamma);
    AffineIsometry acc = affine_identity(rep.dim);
    for (int i = 0; i < rep.group.free_rank; ++i)
        acc = compose(acc, affine_power(rep.generators[i], gamma.free[i]));
    for (int i = 0; i < rep.group.torsion_rank(); ++i)
        acc = compose(acc, affine_power(rep.generators[rep.group.free_rank + i],
                                        gamma.torsion[i]));
    return acc;
}

bool has_real_data(const Representation& rep, double tol) {
    for (const auto& g : rep.generators)
        if (g.linear.imag().cwiseAbs().maxCoeff() > tol ||
            g.translation.imag().cwiseAbs().maxCoeff() > tol)
            return false;
    return true;
}

void validate(const GainFramework& fw) {
    validate(fw.rep);
    if (fw.vertices.empty()) throw StructuralError("gain framework: no vertices");
    if (fw.dim_x != fw.rep.dim)
        throw StructuralError("gain framework: dim_x must match the representation");
    if (fw.dim_y < 1) throw StructuralError("gain framework: dim_y must be >= 1");
    const GroupElement zero = zero_element(fw.rep.group);
    for (const auto& e : fw.edges) {
        if (e.source < 0 || e.source >= fw.num_vertices() || e.range < 0 ||
            e.range >= fw.num_vertices())
            throw StructuralError("gain framework: edge endpoint out of range");
        check_element(fw.rep.group, e.gain);
        if (e.source == e.range && e.gain == zero)
            throw StructuralError("gain framework: loop edge with zero gain");
        if (e.phi.rows() != fw.dim_y || e.phi.cols() != fw.dim_x)
            throw StructuralError("gain framework: phi shape mismatch on edge " + e.id);
        check_finite(e.phi, "edge constraint");
    }
    // The covering graph must be simple: no two edges may cover the same
    // undirected bar family.
    for (std::size_t i = 0; i < fw.edges.size(); ++i)
        for (std::size_t j = i + 1; j < fw.edges.size(); ++j) {
            const auto& a = fw.edges[i];
            const auto& b = fw.edges[j];
            bool same = a.source == b.source && a.range == b.range && a.gain == b.gain;
            bool reversed = a.source == b.range && a.range == b.source &&
                            b.gain == negate(fw.rep.group, a.gain);
            if (same || reversed)
                throw StructuralError("gain framework: edges " + a.id + " and " + b.id +
                                      " cover the same bar family");
        }
}

bool has_real_data(const GainFramework& fw, double tol) {
    if (!has_real_data(fw.rep, tol)) return false;
    for (const auto& e : fw.edges)
        if (e.phi.imag().cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

long long gain_margin(const GainFramework& fw) {
    long long m = 0;
    for (const auto& e : fw.edges) m = std::max(m, free_inf_norm(e.gain));
    return m;
}

OrbitMatrix orbit_matrix(const GainFramework& fw, const Character& chi) {
    check_character(fw.rep.group, chi);
    const int dx = fw.dim_x, dy = fw.dim_y;
    ComplexMatrix m = ComplexMatrix::Zero(fw.num_edges() * dy, fw.num_vertices() * dx);
    for (int ei = 0; ei < fw.num_edges(); ++ei) {
        const GainEdge& e = fw.edges[ei];
        const std::complex<double> w = evaluate_character(fw.rep.group, chi, e.gain);
        const ComplexMatrix d = dtau(fw.rep, e.gain);
        if (e.source == e.range) {
            m.block(ei * dy, e.source * dx, dy, dx) =
                e.phi * (ComplexMatrix::Identity(dx, dx) - w * d);
        } else {
            m.block(ei * dy, e.source * dx, dy, dx) = e.phi;
            m.block(ei * dy, e.range * dx, dy, dx) = -w * (e.phi * d);
        }
    }
    return {std::move(m), chi};
}

KernelReport rum_membership(const GainFramework& fw, const Character& chi, double tol) {
    if (tol <= 0) throw StructuralError("rum_membership: tol must be positive");
    const int n = fw.num_vertices() * fw.dim_x;
    if (fw.num_edges() == 0)
        return {true, ComplexMatrix::Identity(n, n)};  // no constraints at all
    ComplexMatrix basis = numeric_kernel(orbit_matrix(fw, chi).matrix, tol);
    return {basis.cols() > 0, std::move(basis)};
}

std::vector<SpectrumPoint> rum_spectrum_finite(const GainFramework& fw, double tol) {
    if (!fw.rep.group.is_finite())
        throw UsageError("rum_spectrum_finite: group has free factors; use rum_spectrum_scan");
    std::vector<SpectrumPoint> out;
    const auto& spec = fw.rep.group;
    std::vector<int> idx(spec.torsion_rank(), 0);
    while (true) {
        Character chi{{}, idx};
        auto rep = rum_membership(fw, chi, tol);
        if (rep.member) {
            double smin = fw.num_edges() == 0
                              ? 0.0
                              : smallest_singular_value(orbit_matrix(fw, chi).matrix);
            out.push_back({chi, static_cast<int>(rep.basis.cols()), smin});
        }
        int pos = spec.torsion_rank() - 1;
        for (; pos >= 0; --pos) {
            if (++idx[pos] < spec.torsion_orders[pos]) break;
            idx[pos] = 0;
        }
        if (pos < 0) break;
    }
    sort_points(out);
    return out;
}

namespace {

struct ScanContext {
    const GainFramework& fw;
    const ScanOptions& opts;

    double sigma_min(const Character& chi) const {
        if (fw.num_edges() == 0) return 0.0;
        return smallest_singular_value(orbit_matrix(fw, chi).matrix);
    }
    double threshold(const Character& chi) const {
        if (fw.num_edges() == 0) return opts.accept_tol;
        return opts.accept_tol *
               std::max(1.0, spectral_norm(orbit_matrix(fw, chi).matrix));
    }
};

// Golden-section minimization of f over [a, b] to the given precision.
double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double precision) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > precision) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void append_point(std::vector<SpectrumPoint>& pts, const GroupSpec& spec, SpectrumPoint p,
                  double dedupe_tol) {
    for (const auto& q : pts)
        if (characters_equal(spec, q.chi, p.chi, dedupe_tol)) return;
    pts.push_back(std::move(p));
}

// Scan one torsion combination of a rank-1 framework.
void scan_rank1(const ScanContext& ctx, const std::vector<int>& torsion,
                std::vector<SpectrumPoint>& points, std::vector<ScanTraceRow>& trace) {
    const auto& spec = ctx.fw.rep.group;
    const int n = ctx.opts.samples_per_circle;
    const double step = kTwoPi / n;
    std::vector<double> smin(n), thr(n);
    for (int g = 0; g < n; ++g) {
        Character chi{{g * step}, torsion};
        smin[g] = ctx.sigma_min(chi);
        thr[g] = ctx.threshold(chi);
        trace.push_back({{g * step}, torsion, smin[g]});
    }
    for (int g = 0; g < n; ++g) {
        const int prev = (g + n - 1) % n, next = (g + 1) % n;
        if (smin[g] > thr[g]) continue;
        if (smin[g] > smin[prev] || smin[g] > smin[next]) continue;
        Character chi{{g * step}, torsion};
        double smin_here = smin[g];
        if (smin[prev] <= thr[prev] && smin[next] <= thr[next]) {
            // Plateau of near-zeros: report at grid resolution, nothing to refine.
        } else {
            double center = g * step;
            double theta = golden_minimize(
                [&](double t) {
                    Character c{{wrap_angle(t)}, torsion};
                    return ctx.sigma_min(c);
                },
                center - step, center + step, ctx.opts.refine_precision);
            chi.angles[0] = wrap_angle(theta);
            smin_here = ctx.sigma_min(chi);
            if (smin_here > ctx.threshold(chi)) continue;
        }
        int kdim = ctx.fw.num_edges() == 0
                       ? ctx.fw.num_vertices() * ctx.fw.dim_x
                       : [&] {
                             auto m = orbit_matrix(ctx.fw, chi).matrix;
                             Eigen::JacobiSVD<ComplexMatrix> svd(m);
                             const auto& sv = svd.singularValues();
                             double cut = ctx.opts.accept_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
                             int below = static_cast<int>(m.cols()) - static_cast<int>(sv.size());
                             for (Eigen::Index i = 0; i < sv.size(); ++i)
                                 if (sv(i) <= cut) ++below;
                             return below;
                         }();
        append_point(points, spec, {chi, kdim, smin_here}, 1e-9);
    }
}

// Rank-2 scan: full grid, then alternating per-axis golden refinement.
void scan_rank2(const ScanContext& ctx, const std::vector<int>& torsion,
                std::vector<SpectrumPoint>& points, std::vector<ScanTraceRow>& trace) {
    const auto& spec = ctx.fw.rep.group;
    const int n = ctx.opts.samples_per_circle;
    const double step = kTwoPi / n;
    std::vector<std::vector<double>> smin(n, std::vector<double>(n));
    std::vector<std::vector<double>> thr(n, std::vector<double>(n));
    for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2) {
            Character chi{{g1 * step, g2 * step}, torsion};
            smin[g1][g2] = ctx.sigma_min(chi);
            thr[g1][g2] = ctx.threshold(chi);
            trace.push_back({{g1 * step, g2 * step}, torsion, smin[g1][g2]});
        }
    for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2) {
            if (smin[g1][g2] > thr[g1][g2]) continue;
            bool is_min = true, plateau = true;
            for (int d1 = -1; d1 <= 1 && is_min; ++d1)
                for (int d2 = -1; d2 <= 1; ++d2) {
                    if (d1 == 0 && d2 == 0) continue;
                    double v = smin[(g1 + d1 + n) % n][(g2 + d2 + n) % n];
                    if (smin[g1][g2] > v) {
                        is_min = false;
                        break;
                    }
                    if (v > thr[(g1 + d1 + n) % n][(g2 + d2 + n) % n]) plateau = false;
                }
            if (!is_min) continue;
            double t1 = g1 * step, t2 = g2 * step;
            if (!plateau) {
                for (int round = 0; round < 3; ++round) {
                    t1 = golden_minimize(
                        [&](double t) {
                            return ctx.sigma_min(Character{{wrap_angle(t), wrap_angle(t2)}, torsion});
                        },
                        t1 - step, t1 + step, ctx.opts.refine_precision);
                    t2 = golden_minimize(
                        [&](double t) {
                            return ctx.sigma_min(Character{{wrap_angle(t1), wrap_angle(t)}, torsion});
                        },
                        t2 - step, t2 + step, ctx.opts.refine_precision);
                }
            }
            Character chi{{wrap_angle(t1), wrap_angle(t2)}, torsion};
            double s = ctx.sigma_min(chi);
            if (s > ctx.threshold(chi)) continue;
            auto rep = rum_membership(ctx.fw, chi, ctx.opts.accept_tol);
            append_point(points, spec, {chi, static_cast<int>(rep.basis.cols()), s}, 1e-9);
        }
}

// Rank >= 3: sub-threshold grid points without refinement.
void scan_grid_only(const ScanContext& ctx, const std::vector<int>& torsion,
                    std::vector<SpectrumPoint>& points, std::vector<ScanTraceRow>& trace) {
    const auto& spec = ctx.fw.rep.group;
    const int r = spec.free_rank;
    const int n = ctx.opts.samples_per_circle;
    const double step = kTwoPi / n;
    std::vector<int> g(r, 0);
    while (true) {
        std::vector<double> angles(r);
        for (int i = 0; i < r; ++i) angles[i] = g[i] * step;
        Character chi{angles, torsion};
        double s = ctx.sigma_min(chi);
        trace.push_back({angles, torsion, s});
        if (s <= ctx.threshold(chi)) {
            auto rep = rum_membership(ctx.fw, chi, ctx.opts.accept_tol);
            append_point(points, spec, {chi, static_cast<int>(rep.basis.cols()), s}, 1e-9);
        }
        int pos = r - 1;
        for (; pos >= 0; --pos) {
            if (++g[pos] < n) break;
            g[pos] = 0;
        }
        if (pos < 0) break;
    }
}

}  // namespace

ScanResult rum_spectrum_scan(const GainFramework& fw, const ScanOptions& opts) {
    const auto& spec = fw.rep.group;
    if (spec.free_rank < 1)
        throw UsageError("rum_spectrum_scan: group is finite; use rum_spectrum_finite");
    if (opts.samples_per_circle < 16)
        throw StructuralError("rum_spectrum_scan: need at least 16 samples per circle");

    ScanContext ctx{fw, opts};
    ScanResult res;

    std::vector<int> torsion(spec.torsion_rank(), 0);
    while (true) {
        if (spec.free_rank == 1)
            scan_rank1(ctx, torsion, res.points, res.trace);
        else if (spec.free_rank == 2)
            scan_rank2(ctx, torsion, res.points, res.trace);
        else
            scan_grid_only(ctx, torsion, res.points, res.trace);
        int pos = spec.torsion_rank() - 1;
        for (; pos >= 0; --pos) {
            if (++torsion[pos] < spec.torsion_orders[pos]) break;
            torsion[pos] = 0;
        }
        if (pos < 0) break;
    }

    // Snap scan hits onto the analytically known joint spectral points, then
    // make sure every joint spectral point is present.
    auto js = joint_spectral_points(fw);
    for (auto& p : res.points)
        for (const auto& j : js)
            if (character_distance(spec, p.chi, j.chi) <= opts.snap_tol) {
                p.chi = j.chi;
                break;
            }
    std::vector<SpectrumPoint> merged;
    for (auto& p : res.points) append_point(merged, spec, std::move(p), 1e-9);
    for (const auto& j : js) {
        auto rep = rum_membership(fw, j.chi, std::max(opts.rank_tol, opts.accept_tol));
        append_point(merged, spec,
                     {j.chi, static_cast<int>(rep.basis.cols()), ctx.sigma_min(j.chi)}, 1e-9);
    }
    sort_points(merged);
    res.points = std::move(merged);
    return res;
}

Character character_from_joint_eigenvalue(const GroupSpec& spec, const ComplexVector& lambda,
                                          double torsion_tol) {
    if (lambda.size() != spec.num_generators())
        throw StructuralError("joint eigenvalue length does not match the generator count");
    Character chi = trivial_character(spec);
    for (int i = 0; i < spec.free_rank; ++i)
        chi.angles[i] = wrap_angle(std::arg(std::conj(lambda(i))));
    for (int t = 0; t < spec.torsion_rank(); ++t) {
        const int n = spec.torsion_orders[t];
        std::complex<double> v = std::conj(lambda(spec.free_rank + t));
        if (std::abs(std::pow(v, n) - std::complex<double>(1, 0)) > torsion_tol)
            throw ContractError(
                "joint eigenvalue on a torsion generator is not a root of unity of its order; "
                "the representation is not a homomorphism");
        double a = wrap_angle(std::arg(v));
        int j = static_cast<int>(std::llround(a * n / kTwoPi)) % n;
        chi.torsion_indices[t] = j;
    }
    return chi;
}

std::vector<JointSpectralPoint> joint_spectral_points(const Representation& rep,
                                                      double cluster_tol) {
    validate(rep);
    std::vector<ComplexMatrix> tuple;
    tuple.reserve(rep.generators.size());
    for (const auto& g : rep.generators) tuple.push_back(g.linear);
    auto pairs = joint_spectrum(tuple, cluster_tol);

    std::vector<JointSpectralPoint> out;
    for (auto& p : pairs) {
        Character chi = character_from_joint_eigenvalue(rep.group, p.lambda);
        bool merged = false;
        for (auto& q : out) {
            if (characters_equal(rep.group, q.chi, chi, 1e-8)) {
                ComplexMatrix joined(q.pair.eigenspace.rows(),
                                     q.pair.eigenspace.cols() + p.eigenspace.cols());
                joined << q.pair.eigenspace, p.eigenspace;
                q.pair.eigenspace = orthonormalize(joined);
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back({std::move(chi), std::move(p)});
    }
    std::sort(out.begin(), out.end(), [](const JointSpectralPoint& a, const JointSpectralPoint& b) {
        return character_less(a.chi, b.chi);
    });
    return out;
}

std::vector<JointSpectralPoint> joint_spectral_points(const GainFramework& fw,
                                                      double cluster_tol) {
    return joint_spectral_points(fw.rep, cluster_tol);
}

}  // namespace rum
