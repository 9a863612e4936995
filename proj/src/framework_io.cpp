#include "rum/framework_io.hpp"

#include <fstream>
#include <sstream>

namespace rum {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ValidationError(path + ": " + msg);
}

const json& expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

const json& expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

const json& field(const json& j, const char* key, const std::string& path) {
    expect_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

int expect_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

double expect_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::string expect_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::complex<double> complex_from_json(const json& j, const std::string& path) {
    expect_array(j, path);
    if (j.size() != 2) fail(path, "complex scalar must be a [re, im] pair");
    return {expect_number(j[0], path + "[0]"), expect_number(j[1], path + "[1]")};
}

ComplexVector cvector_from_json(const json& j, const std::string& path) {
    expect_array(j, path);
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

ComplexMatrix cmatrix_from_json(const json& j, const std::string& path) {
    expect_array(j, path);
    if (j.empty()) fail(path, "matrix must have at least one row");
    const std::size_t cols = expect_array(j[0], path + "[0]").size();
    ComplexMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        expect_array(j[r], rp);
        if (j[r].size() != cols) fail(rp, "ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

RealVector rvector_from_json(const json& j, const std::string& path) {
    expect_array(j, path);
    RealVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = expect_number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

}  // namespace

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

json matrix_to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

json real_vector_to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json group_to_json(const GroupSpec& spec) {
    return json{{"free_rank", spec.free_rank}, {"torsion", spec.torsion_orders}};
}

json element_to_json(const GroupElement& g) {
    return json{{"free", g.free}, {"torsion", g.torsion}};
}

json character_to_json(const Character& chi) {
    return json{{"angles", chi.angles}, {"torsion_indices", chi.torsion_indices}};
}

GroupSpec group_from_json(const json& j, const std::string& path) {
    expect_object(j, path);
    GroupSpec spec;
    spec.free_rank = expect_int(field(j, "free_rank", path), path + ".free_rank");
    const json& tor = field(j, "torsion", path);
    expect_array(tor, path + ".torsion");
    for (std::size_t i = 0; i < tor.size(); ++i)
        spec.torsion_orders.push_back(
            expect_int(tor[i], path + ".torsion[" + std::to_string(i) + "]"));
    try {
        validate(spec);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return spec;
}

GroupElement element_from_json(const GroupSpec& spec, const json& j, const std::string& path) {
    expect_object(j, path);
    GroupElement g;
    const json& fr = field(j, "free", path);
    expect_array(fr, path + ".free");
    for (std::size_t i = 0; i < fr.size(); ++i)
        g.free.push_back(expect_int(fr[i], path + ".free[" + std::to_string(i) + "]"));
    const json& tor = field(j, "torsion", path);
    expect_array(tor, path + ".torsion");
    for (std::size_t i = 0; i < tor.size(); ++i)
        g.torsion.push_back(expect_int(tor[i], path + ".torsion[" + std::to_string(i) + "]"));
    try {
        check_element(spec, g);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return g;
}

Character character_from_json(const GroupSpec& spec, const json& j, const std::string& path) {
    expect_object(j, path);
    Character chi;
    const json& ang = field(j, "angles", path);
    expect_array(ang, path + ".angles");
    for (std::size_t i = 0; i < ang.size(); ++i)
        chi.angles.push_back(
            wrap_angle(expect_number(ang[i], path + ".angles[" + std::to_string(i) + "]")));
    const json& tor = field(j, "torsion_indices", path);
    expect_array(tor, path + ".torsion_indices");
    for (std::size_t i = 0; i < tor.size(); ++i)
        chi.torsion_indices.push_back(
            expect_int(tor[i], path + ".torsion_indices[" + std::to_string(i) + "]"));
    try {
        check_character(spec, chi);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return chi;
}

FrameworkBundle parse_framework(const json& j) {
    expect_object(j, "$");
    FrameworkBundle bundle;
    GainFramework& fw = bundle.framework;

    GroupSpec spec = group_from_json(field(j, "group", "$"), "$.group");

    const json& jrep = field(j, "representation", "$");
    Representation rep;
    rep.group = spec;
    rep.dim = expect_int(field(jrep, "dimension", "$.representation"),
                         "$.representation.dimension");
    const json& gens = field(jrep, "generators", "$.representation");
    expect_array(gens, "$.representation.generators");
    if (static_cast<int>(gens.size()) != spec.num_generators())
        fail("$.representation.generators",
             "expected " + std::to_string(spec.num_generators()) +
                 " generator images (free factors first), got " + std::to_string(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string gp = "$.representation.generators[" + std::to_string(i) + "]";
        AffineIsometry iso;
        iso.linear = cmatrix_from_json(field(gens[i], "linear", gp), gp + ".linear");
        if (gens[i].contains("translation"))
            iso.translation = cvector_from_json(gens[i]["translation"], gp + ".translation");
        else
            iso.translation = ComplexVector::Zero(rep.dim);
        if (iso.linear.rows() != rep.dim || iso.linear.cols() != rep.dim)
            fail(gp + ".linear", "expected a " + std::to_string(rep.dim) + "x" +
                                     std::to_string(rep.dim) + " matrix");
        if (iso.translation.size() != rep.dim)
            fail(gp + ".translation", "expected length " + std::to_string(rep.dim));
        rep.generators.push_back(std::move(iso));
    }
    try {
        validate(rep);
    } catch (const Error& e) {
        fail("$.representation", e.what());
    }
    fw.rep = rep;
    fw.dim_x = rep.dim;

    const json& verts = field(j, "vertices", "$");
    expect_array(verts, "$.vertices");
    if (verts.empty()) fail("$.vertices", "at least one vertex required");
    for (std::size_t i = 0; i < verts.size(); ++i)
        fw.vertices.push_back(expect_string(verts[i], "$.vertices[" + std::to_string(i) + "]"));

    if (j.contains("placement")) {
        const json& jp = j["placement"];
        expect_object(jp, "$.placement");
        Placement p;
        for (auto it = jp.begin(); it != jp.end(); ++it)
            p.seeds[it.key()] = rvector_from_json(it.value(), "$.placement." + it.key());
        bundle.placement = std::move(p);
    }
    if (j.contains("norm")) {
        const json& jn = j["norm"];
        const std::string kind = expect_string(field(jn, "kind", "$.norm"), "$.norm.kind");
        NormSpec n;
        if (kind == "euclidean") {
            n.kind = NormKind::euclidean;
        } else if (kind == "lq") {
            n.kind = NormKind::lq;
            n.q = expect_number(field(jn, "q", "$.norm"), "$.norm.q");
            if (n.q <= 1.0) fail("$.norm.q", "lq norms require q > 1");
        } else if (kind == "cylindrical") {
            n.kind = NormKind::cylindrical;
            n.split = expect_int(field(jn, "split", "$.norm"), "$.norm.split");
        } else {
            fail("$.norm.kind", "unknown norm kind '" + kind +
                                    "' (expected euclidean, lq or cylindrical)");
        }
        bundle.norm = std::move(n);
    }

    auto vertex_index = [&](const std::string& name, const std::string& path) {
        for (int i = 0; i < fw.num_vertices(); ++i)
            if (fw.vertices[i] == name) return i;
        fail(path, "unknown vertex '" + name + "'");
    };

    const json& edges = field(j, "edges", "$");
    expect_array(edges, "$.edges");
    int dim_y = -1;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ep = "$.edges[" + std::to_string(i) + "]";
        const json& je = edges[i];
        GainEdge e;
        e.id = je.contains("id") ? expect_string(je["id"], ep + ".id")
                                 : "e" + std::to_string(i + 1);
        e.source = vertex_index(expect_string(field(je, "source", ep), ep + ".source"),
                                ep + ".source");
        e.range = vertex_index(expect_string(field(je, "range", ep), ep + ".range"),
                               ep + ".range");
        e.gain = element_from_json(spec, field(je, "gain", ep), ep + ".gain");

        const bool derive = je.contains("derive") && je["derive"].is_boolean() &&
                            je["derive"].get<bool>();
        if (derive) {
            if (!bundle.placement || !bundle.norm)
                fail(ep, "'derive: true' requires both a placement and a norm");
            if (!bundle.placement->seeds.count(fw.vertices[e.source]))
                fail(ep, "placement missing seed for source vertex");
            if (!bundle.placement->seeds.count(fw.vertices[e.range]))
                fail(ep, "placement missing seed for range vertex");
            const RealVector& ps = bundle.placement->seeds.at(fw.vertices[e.source]);
            const RealVector& pr = bundle.placement->seeds.at(fw.vertices[e.range]);
            AffineIsometry t = tau(rep, e.gain);
            RealVector pr_moved =
                (t.linear * pr.cast<std::complex<double>>() + t.translation).real();
            if (je.contains("block"))
                e.norm_block = expect_int(je["block"], ep + ".block");
            RealRowVector row;
            try {
                row = derive_constraint(*bundle.norm, ps, pr_moved, e.norm_block);
            } catch (const Error& err) {
                fail(ep, err.what());
            }
            ComplexMatrix phi(1, row.size());
            for (Eigen::Index c = 0; c < row.size(); ++c)
                phi(0, c) = std::complex<double>(row(c), 0.0);
            e.phi = std::move(phi);
        } else if (je.contains("phi")) {
            e.phi = cmatrix_from_json(je["phi"], ep + ".phi");
        } else {
            fail(ep, "edge needs either an explicit 'phi' matrix or 'derive: true'");
        }
        if (dim_y < 0) dim_y = static_cast<int>(e.phi.rows());
        if (e.phi.rows() != dim_y || e.phi.cols() != fw.dim_x)
            fail(ep + ".phi", "expected a " + std::to_string(dim_y) + "x" +
                                  std::to_string(fw.dim_x) + " matrix");
        fw.edges.push_back(std::move(e));
    }
    fw.dim_y = dim_y < 0 ? 1 : dim_y;

    try {
        validate(fw);
    } catch (const Error& e) {
        fail("$", e.what());
    }
    return bundle;
}

FrameworkBundle load_framework_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open framework file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("framework file is not valid JSON: " + std::string(e.what()));
    }
    return parse_framework(j);
}

json spectrum_to_json(const GroupSpec& spec, const std::vector<SpectrumPoint>& points) {
    json out = json::array();
    for (const auto& p : points)
        out.push_back(json{{"character", character_to_json(p.chi)},
                           {"kernel_dim", p.kernel_dim},
                           {"sigma_min", p.sigma_min}});
    return out;
}

json joint_points_to_json(const GroupSpec& spec,
                          const std::vector<JointSpectralPoint>& points) {
    json out = json::array();
    for (const auto& p : points) {
        json lambda = json::array();
        for (Eigen::Index i = 0; i < p.pair.lambda.size(); ++i)
            lambda.push_back(complex_to_json(p.pair.lambda(i)));
        out.push_back(json{{"character", character_to_json(p.chi)},
                           {"joint_eigenvalue", lambda},
                           {"eigenspace", matrix_to_json(p.pair.eigenspace)}});
    }
    return out;
}

std::string scan_trace_to_csv(const GroupSpec& spec, const std::vector<ScanTraceRow>& trace) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < spec.free_rank; ++i) os << "angle_" << i << ",";
    for (int i = 0; i < spec.torsion_rank(); ++i) os << "torsion_" << i << ",";
    os << "sigma_min\n";
    for (const auto& row : trace) {
        for (double a : row.angles) os << a << ",";
        for (int t : row.torsion) os << t << ",";
        os << row.sigma_min << "\n";
    }
    return os.str();
}

json flexes_to_json(const GainFramework& fw, const std::vector<ChiSymmetricVector>& flexes,
                    int window_radius, double tol) {
    Window w = make_window(fw.rep.group, window_radius);
    json out;
    out["group"] = group_to_json(fw.rep.group);
    out["tolerance"] = tol;
    json list = json::array();
    for (const auto& z : flexes) {
        WindowedField f = evaluate_chi_vector(fw, z, w);
        json samples = json::array();
        for (std::size_t i = 0; i < w.elements.size(); ++i)
            samples.push_back(json{{"gamma", element_to_json(w.elements[i])},
                                   {"value", vector_to_json(f.values[i])}});
        list.push_back(json{{"character", character_to_json(z.chi)},
                            {"amplitude", vector_to_json(z.amplitude)},
                            {"window_radius", window_radius},
                            {"samples", std::move(samples)}});
    }
    out["flexes"] = std::move(list);
    return out;
}

std::vector<ImportedFlex> flexes_from_json(const GainFramework& fw, const json& j) {
    expect_object(j, "$");
    GroupSpec spec = group_from_json(field(j, "group", "$"), "$.group");
    if (!(spec == fw.rep.group))
        throw ValidationError("$.group: flex file is over a different group");
    const json& list = field(j, "flexes", "$");
    expect_array(list, "$.flexes");
    std::vector<ImportedFlex> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string fp = "$.flexes[" + std::to_string(k) + "]";
        const json& jf = list[k];
        ImportedFlex imp;
        imp.chi = character_from_json(spec, field(jf, "character", fp), fp + ".character");
        imp.amplitude = cvector_from_json(field(jf, "amplitude", fp), fp + ".amplitude");
        int radius = expect_int(field(jf, "window_radius", fp), fp + ".window_radius");
        Window w = make_window(spec, radius);
        imp.field.window = w;
        imp.field.values.assign(w.size(), ComplexVector());
        const json& samples = field(jf, "samples", fp);
        expect_array(samples, fp + ".samples");
        if (samples.size() != w.size())
            fail(fp + ".samples", "expected " + std::to_string(w.size()) + " samples");
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const std::string sp = fp + ".samples[" + std::to_string(s) + "]";
            GroupElement gamma = element_from_json(spec, field(samples[s], "gamma", sp),
                                                   sp + ".gamma");
            auto idx = w.index_of(gamma);
            if (!idx) fail(sp + ".gamma", "sample outside the declared window");
            imp.field.values[*idx] =
                cvector_from_json(field(samples[s], "value", sp), sp + ".value");
        }
        for (const auto& v : imp.field.values)
            if (v.size() == 0) fail(fp + ".samples", "missing sample for some window element");
        out.push_back(std::move(imp));
    }
    return out;
}

json covering_to_json(const CoveringFramework& cov) {
    json verts = json::array();
    for (const auto& v : cov.vertices) {
        json jv{{"id", v.id}, {"gamma", element_to_json(v.gamma)}};
        if (v.point.size() > 0) jv["point"] = real_vector_to_json(v.point);
        verts.push_back(std::move(jv));
    }
    json bars = json::array();
    for (const auto& b : cov.bars)
        bars.push_back(json{{"from", cov.vertices[b.from].id}, {"to", cov.vertices[b.to].id}});
    return json{{"group", group_to_json(cov.group)},
                {"window_radius", cov.window.radius},
                {"vertices", std::move(verts)},
                {"bars", std::move(bars)}};
}

json certificate_to_json(const GainFramework& fw, const ApRigidityCertificate& cert) {
    json out;
    out["ap_rigid"] = cert.ap_rigid;
    out["spectrum"] = spectrum_to_json(fw.rep.group, cert.spectrum);
    out["joint_points"] = joint_points_to_json(fw.rep.group, cert.joint_points);
    if (cert.witness_character)
        out["witness_character"] = character_to_json(*cert.witness_character);
    else
        out["witness_character"] = nullptr;
    if (cert.witness_flex)
        out["witness_flex"] = json{{"character", character_to_json(cert.witness_flex->chi)},
                                   {"amplitude", vector_to_json(cert.witness_flex->amplitude)}};
    else
        out["witness_flex"] = nullptr;
    return out;
}

}  // namespace rum
