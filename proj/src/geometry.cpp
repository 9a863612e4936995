#include "rum/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace rum {

RealRowVector functional_euclidean(const RealVector& pv, const RealVector& pw) {
    if (pv.size() != pw.size())
        throw StructuralError("functional_euclidean: point dimensions differ");
    RealVector d = pv - pw;
    if (d.norm() == 0.0)
        throw DegenerateConstraintError("functional_euclidean: coincident points");
    return d.transpose();
}

RealRowVector functional_lq(const RealVector& d, double q) {
    if (q <= 1.0) throw StructuralError("functional_lq: q must be > 1");
    if (d.norm() == 0.0) throw DegenerateConstraintError("functional_lq: zero bar vector");
    double norm_q = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) norm_q += std::pow(std::fabs(d(i)), q);
    norm_q = std::pow(norm_q, 1.0 / q);
    RealRowVector row(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        double s = d(i) > 0 ? 1.0 : (d(i) < 0 ? -1.0 : 0.0);
        row(i) = std::pow(norm_q, 1.0 - q) * s * std::pow(std::fabs(d(i)), q - 1.0);
    }
    return row;
}

RealRowVector functional_cylindrical(const RealVector& d, int split, int block) {
    if (split <= 0 || split >= d.size())
        throw StructuralError("functional_cylindrical: split must cut the vector in two");
    const double head = d.head(split).norm();
    const double tail = d.tail(d.size() - split).norm();
    if (block < 0) block = head >= tail ? 0 : 1;
    if (block > 1) throw StructuralError("functional_cylindrical: block must be 0 or 1");
    RealRowVector row = RealRowVector::Zero(d.size());
    if (block == 0) {
        if (head == 0.0)
            throw DegenerateConstraintError("functional_cylindrical: zero active block");
        row.head(split) = d.head(split).transpose();
    } else {
        if (tail == 0.0)
            throw DegenerateConstraintError("functional_cylindrical: zero active block");
        row.tail(d.size() - split) = d.tail(d.size() - split).transpose();
    }
    return row;
}

RealRowVector functional_smooth_numeric(const std::function<double(const RealVector&)>& norm,
                                        const RealVector& d, double h) {
    if (d.norm() == 0.0)
        throw DegenerateConstraintError("functional_smooth_numeric: zero bar vector");
    if (h <= 0.0) h = 1e-5 * std::max(1.0, d.norm());
    // Smoothness is probed at a finer step so the curvature term f'' h of a
    // smooth norm stays below the 1e-6 agreement gate while genuine kinks
    // (one-sided slopes differing by O(1)) still trip it.
    const double h_check = 1e-7 * std::max(1.0, d.norm());
    RealRowVector row(d.size());
    const double f0 = norm(d);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        RealVector e = RealVector::Zero(d.size());
        e(i) = h_check;
        const double right = (norm(d + e) - f0) / h_check;
        const double left = (f0 - norm(d - e)) / h_check;
        if (std::fabs(right - left) > 1e-6 * std::max(1.0, std::fabs(right) + std::fabs(left)))
            throw DegenerateConstraintError(
                "functional_smooth_numeric: one-sided differences disagree; norm is not "
                "smooth at this point");
        e(i) = h;
        row(i) = (norm(d + e) - norm(d - e)) / (2.0 * h);
    }
    return row;
}

RealRowVector derive_constraint(const NormSpec& norm, const RealVector& pv,
                                const RealVector& pw, int cylindrical_block) {
    switch (norm.kind) {
        case NormKind::euclidean:
            return functional_euclidean(pv, pw);
        case NormKind::lq:
            if (pv.size() != pw.size())
                throw StructuralError("derive_constraint: point dimensions differ");
            return functional_lq(pv - pw, norm.q);
        case NormKind::cylindrical:
            return functional_cylindrical(pv - pw, norm.split, cylindrical_block);
        case NormKind::smooth_numeric:
            if (!norm.norm)
                throw StructuralError("derive_constraint: smooth_numeric without a callable");
            return functional_smooth_numeric(norm.norm, pv - pw);
    }
    throw StructuralError("derive_constraint: unknown norm kind");
}

namespace {

std::string covering_vertex_id(const std::string& base, const GroupElement& gamma,
                               const GroupElement& zero) {
    if (gamma == zero) return base;  // the base fiber keeps the bare name
    return base + "@" + to_string(gamma);
}

ComplexMatrix complexify(const RealRowVector& row) {
    ComplexMatrix m(1, row.size());
    for (Eigen::Index i = 0; i < row.size(); ++i) m(0, i) = std::complex<double>(row(i), 0.0);
    return m;
}

}  // namespace

CoveringFramework build_covering(const GainFramework& fw,
                                 const std::optional<Placement>& placement,
                                 const std::optional<NormSpec>& norm, const Window& window) {
    validate(fw);
    if (!(window.spec == fw.rep.group))
        throw StructuralError("build_covering: window is over a different group");
    if (placement)
        for (const auto& vid : fw.vertices)
            if (!placement->seeds.count(vid))
                throw StructuralError("build_covering: missing seed point for vertex " + vid);

    const auto& spec = fw.rep.group;
    const GroupElement zero = zero_element(spec);
    CoveringFramework cov{spec, window, {}, {}};

    // Vertex copies: (v, gamma) placed at tau(gamma) p_v.
    std::map<std::pair<int, std::size_t>, int> vertex_index;  // (orbit, window idx) -> index
    for (int vi = 0; vi < fw.num_vertices(); ++vi) {
        for (std::size_t wi = 0; wi < window.elements.size(); ++wi) {
            const auto& gamma = window.elements[wi];
            CoveringVertex cv;
            cv.id = covering_vertex_id(fw.vertices[vi], gamma, zero);
            cv.orbit = vi;
            cv.gamma = gamma;
            if (placement) {
                const RealVector& seed = placement->seeds.at(fw.vertices[vi]);
                AffineIsometry t = tau(fw.rep, gamma);
                ComplexVector seed_c = seed.cast<std::complex<double>>();
                cv.point = (t.linear * seed_c + t.translation).real();
            }
            vertex_index[{vi, wi}] = static_cast<int>(cov.vertices.size());
            cov.vertices.push_back(std::move(cv));
        }
    }

    for (int ei = 0; ei < fw.num_edges(); ++ei) {
        const GainEdge& e = fw.edges[ei];
        for (std::size_t wi = 0; wi < window.elements.size(); ++wi) {
            const auto& gamma = window.elements[wi];
            GroupElement far = add(spec, gamma, e.gain);
            auto far_idx = window.index_of(far);
            if (!far_idx) continue;  // bar leaves the window
            CoveringBar bar;
            bar.from = vertex_index.at({e.source, wi});
            bar.to = vertex_index.at({e.range, *far_idx});
            bar.source_edge = ei;
            bar.gamma = gamma;
            if (placement && norm) {
                const RealVector& p1 = cov.vertices[bar.from].point;
                const RealVector& p2 = cov.vertices[bar.to].point;
                if ((p1 - p2).norm() == 0.0)
                    throw DegenerateConstraintError(
                        "build_covering: coincident bar endpoints at " +
                        cov.vertices[bar.from].id + " -- " + cov.vertices[bar.to].id);
                bar.constraint = complexify(derive_constraint(*norm, p1, p2, e.norm_block));
            } else {
                // Symmetric family generated from the representative constraint.
                bar.constraint = e.phi * dtau(fw.rep, negate(spec, gamma));
            }
            cov.bars.push_back(std::move(bar));
        }
    }
    return cov;
}

CoveringDescription describe(const CoveringFramework& cov) {
    CoveringDescription desc;
    desc.group = cov.group;
    for (const auto& v : cov.vertices) desc.vertex_ids.push_back(v.id);
    for (const auto& b : cov.bars) desc.bars.push_back({b.from, b.to, b.constraint});

    const auto& spec = cov.group;
    const int ngen = spec.num_generators();
    desc.generator_images.assign(ngen, std::vector<int>(cov.vertices.size(), -1));

    std::map<std::pair<int, std::size_t>, int> lookup;
    for (std::size_t i = 0; i < cov.vertices.size(); ++i) {
        auto wi = cov.window.index_of(cov.vertices[i].gamma);
        lookup[{cov.vertices[i].orbit, *wi}] = static_cast<int>(i);
    }
    for (int g = 0; g < ngen; ++g) {
        GroupElement gen = standard_generator(spec, g);
        for (std::size_t i = 0; i < cov.vertices.size(); ++i) {
            GroupElement moved = add(spec, cov.vertices[i].gamma, gen);
            auto wi = cov.window.index_of(moved);
            if (!wi) continue;
            desc.generator_images[g][i] = lookup.at({cov.vertices[i].orbit, *wi});
        }
    }
    return desc;
}

namespace {

// m itself or -m, preferring a positive leading free coordinate, then the
// lexicographically smaller torsion tuple. Gains of loop orbits are only
// defined up to this sign.
GroupElement canonical_gain(const GroupSpec& spec, const GroupElement& m) {
    GroupElement neg = negate(spec, m);
    for (int i = 0; i < spec.free_rank; ++i) {
        if (m.free[i] > 0) return m;
        if (m.free[i] < 0) return neg;
    }
    return element_less(m, neg) ? m : neg;
}

struct OrbitData {
    std::vector<int> orbit_of;           // vertex -> orbit index
    std::vector<int> representative;     // orbit -> vertex
    std::vector<GroupElement> offset;    // vertex -> gamma with v = offset . rep
};

OrbitData compute_orbits(const CoveringDescription& desc) {
    const auto& spec = desc.group;
    const int n = static_cast<int>(desc.vertex_ids.size());
    const int ngen = static_cast<int>(desc.generator_images.size());

    // Inverse moves so orbits can be walked in both directions.
    std::vector<std::vector<int>> inverse(ngen, std::vector<int>(n, -1));
    for (int g = 0; g < ngen; ++g)
        for (int v = 0; v < n; ++v) {
            int w = desc.generator_images[g][v];
            if (w < 0) continue;
            if (w == v)
                throw ValidationError("quotient: the action fixes vertex " +
                                      desc.vertex_ids[v]);
            inverse[g][w] = v;
        }

    OrbitData data;
    data.orbit_of.assign(n, -1);
    data.offset.assign(n, zero_element(spec));

    std::vector<char> seen(n, 0);
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        // Collect the connected component, then restart the walk from its
        // lexicographically smallest id so representatives are deterministic.
        std::vector<int> component;
        std::deque<int> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            component.push_back(v);
            for (int g = 0; g < ngen; ++g) {
                for (int w : {desc.generator_images[g][v], inverse[g][v]})
                    if (w >= 0 && !seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
            }
        }
        int rep = *std::min_element(component.begin(), component.end(), [&](int a, int b) {
            return desc.vertex_ids[a] < desc.vertex_ids[b];
        });
        int orbit = static_cast<int>(data.representative.size());
        data.representative.push_back(rep);

        std::deque<int> walk{rep};
        std::vector<char> visited(n, 0);
        visited[rep] = 1;
        data.orbit_of[rep] = orbit;
        data.offset[rep] = zero_element(spec);
        auto visit = [&](int w, const GroupElement& moved) {
            if (w < 0) return;
            if (!visited[w]) {
                visited[w] = 1;
                data.orbit_of[w] = orbit;
                data.offset[w] = moved;
                walk.push_back(w);
            } else if (!(data.offset[w] == moved)) {
                // Two distinct group elements carry the representative onto
                // the same vertex: a nonzero element fixes it.
                throw ValidationError("quotient: inconsistent orbit data at vertex " +
                                      desc.vertex_ids[w] + "; the action is not free");
            }
        };
        while (!walk.empty()) {
            int v = walk.front();
            walk.pop_front();
            const GroupElement gamma = data.offset[v];
            for (int g = 0; g < ngen; ++g) {
                GroupElement gen = standard_generator(spec, g);
                visit(desc.generator_images[g][v], add(spec, gamma, gen));
                visit(inverse[g][v], add(spec, gamma, negate(spec, gen)));
            }
        }
    }
    return data;
}

}  // namespace

GainFramework quotient_gain_framework(const CoveringDescription& desc,
                                      const Representation& rep, double sym_tol) {
    validate(rep);
    if (!(desc.group == rep.group))
        throw StructuralError("quotient: representation is over a different group");
    if (desc.vertex_ids.empty()) throw ValidationError("quotient: no vertices");
    if (static_cast<int>(desc.generator_images.size()) != desc.group.num_generators())
        throw ValidationError("quotient: one image table per generator required");

    OrbitData orbits = compute_orbits(desc);
    const auto& spec = desc.group;

    GainFramework fw;
    fw.rep = rep;
    fw.dim_x = rep.dim;
    fw.dim_y = 0;
    for (int rep_v : orbits.representative) fw.vertices.push_back(desc.vertex_ids[rep_v]);

    struct EdgeKey {
        int u, v;
        GroupElement gain;
        bool operator<(const EdgeKey& o) const {
            if (u != o.u) return u < o.u;
            if (v != o.v) return v < o.v;
            return element_less(gain, o.gain);
        }
    };
    std::map<EdgeKey, ComplexMatrix> edge_orbits;

    for (const auto& bar : desc.bars) {
        int u = bar.u, v = bar.v;
        ComplexMatrix phi = bar.constraint;
        int ou = orbits.orbit_of[u], ov = orbits.orbit_of[v];
        GroupElement gu = orbits.offset[u], gv = orbits.offset[v];
        // Orient from the smaller representative id; within one orbit,
        // canonicalize the gain sign.
        bool swap = false;
        if (ou != ov)
            swap = fw.vertices[ou] > fw.vertices[ov];
        else {
            GroupElement m = add(spec, gv, negate(spec, gu));
            swap = !(canonical_gain(spec, m) == m);
        }
        if (swap) {
            std::swap(u, v);
            std::swap(ou, ov);
            std::swap(gu, gv);
            phi = -phi;
        }
        GroupElement gain = add(spec, gv, negate(spec, gu));
        if (ou == ov && gain == zero_element(spec))
            throw ValidationError("quotient: bar joins a vertex to itself under the action");
        // Representative constraint: translate the bar back over gamma_u.
        ComplexMatrix phi_rep = phi * dtau(rep, gu);
        EdgeKey key{ou, ov, gain};
        auto it = edge_orbits.find(key);
        if (it == edge_orbits.end()) {
            edge_orbits.emplace(key, std::move(phi_rep));
        } else if ((it->second - phi_rep).norm() >
                   sym_tol * std::max(1.0, it->second.norm())) {
            throw ValidationError(
                "quotient: constraints in one bar orbit are not related by the symmetry "
                "condition");
        }
        if (fw.dim_y == 0) fw.dim_y = static_cast<int>(bar.constraint.rows());
    }
    if (fw.dim_y == 0) fw.dim_y = 1;  // edgeless covering

    int counter = 0;
    for (auto& [key, phi] : edge_orbits) {
        GainEdge e;
        e.id = "e" + std::to_string(++counter);
        e.source = key.u;
        e.range = key.v;
        e.gain = key.gain;
        e.phi = std::move(phi);
        fw.edges.push_back(std::move(e));
    }
    validate(fw);
    return fw;
}

BarResidualReport cross_validate_flex(const CoveringFramework& cov, const WindowedField& f,
                                      int dim_x, double tol) {
    double worst = 0.0;
    for (const auto& bar : cov.bars) {
        const auto& vu = cov.vertices[bar.from];
        const auto& vw = cov.vertices[bar.to];
        ComplexVector delta = f.at(vu.gamma).segment(vu.orbit * dim_x, dim_x) -
                              f.at(vw.gamma).segment(vw.orbit * dim_x, dim_x);
        worst = std::max(worst, (bar.constraint * delta).norm());
    }
    return {worst, worst <= tol};
}

}  // namespace rum
