#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rum/framework_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;        // unreadable or invalid framework file
constexpr int kExitUnsupported = 3;  // operation not supported for this input
constexpr int kExitBadArgument = 4;  // bad character / flex / flag payload

void emit(const rum::json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw rum::UsageError("cannot write to " + out_path);
        out << doc.dump(2) << "\n";
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw rum::UsageError("cannot write to " + out_path);
        out << text;
    }
}

rum::FrameworkBundle load_or_exit(const std::string& path) {
    try {
        return rum::load_framework_file(path);
    } catch (const rum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::exit(kExitParse);
    }
}

rum::Character parse_character_arg(const rum::GroupSpec& spec, const std::string& text) {
    rum::json j;
    try {
        j = rum::json::parse(text);
    } catch (const rum::json::parse_error& e) {
        std::cerr << "error: --character is not valid JSON: " << e.what() << "\n";
        std::exit(kExitBadArgument);
    }
    try {
        return rum::character_from_json(spec, j, "--character");
    } catch (const rum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::exit(kExitBadArgument);
    }
}

int run_spectrum(const std::string& file, int samples, double tol, const std::string& out,
                 const std::string& trace_path, const std::string& format) {
    auto bundle = load_or_exit(file);
    const auto& fw = bundle.framework;
    const auto& spec = fw.rep.group;

    std::vector<rum::SpectrumPoint> points;
    std::vector<rum::ScanTraceRow> trace;
    std::string mode;
    if (spec.is_finite()) {
        mode = "exact";
        points = rum::rum_spectrum_finite(fw, tol);
        for (const auto& p : points) trace.push_back({{}, p.chi.torsion_indices, p.sigma_min});
    } else {
        if (spec.free_rank > 2) {
            std::cerr << "error: spectrum scan supports free rank <= 2, file has rank "
                      << spec.free_rank << "\n";
            return kExitUnsupported;
        }
        mode = "scan";
        rum::ScanOptions opts;
        opts.samples_per_circle = samples;
        opts.rank_tol = tol;
        auto res = rum::rum_spectrum_scan(fw, opts);
        points = std::move(res.points);
        trace = std::move(res.trace);
    }

    std::string csv = rum::scan_trace_to_csv(spec, trace);
    if (!trace_path.empty()) emit_text(csv, trace_path);
    if (format == "csv") {
        emit_text(csv, out);
    } else {
        rum::json doc{{"group", rum::group_to_json(spec)},
                      {"mode", mode},
                      {"spectrum", rum::spectrum_to_json(spec, points)}};
        emit(doc, out);
    }
    return kExitOk;
}

int run_joint_points(const std::string& file, const std::string& out) {
    auto bundle = load_or_exit(file);
    auto points = rum::joint_spectral_points(bundle.framework);
    rum::json doc{{"group", rum::group_to_json(bundle.framework.rep.group)},
                  {"joint_points", rum::joint_points_to_json(bundle.framework.rep.group, points)}};
    emit(doc, out);
    return kExitOk;
}

int run_flex(const std::string& file, const std::string& character, int window, double tol,
             const std::string& out) {
    auto bundle = load_or_exit(file);
    const auto& fw = bundle.framework;
    rum::Character chi = parse_character_arg(fw.rep.group, character);
    auto basis = rum::chi_flex_basis(fw, chi, tol);
    int radius = window >= 0
                     ? window
                     : static_cast<int>(rum::gain_margin(fw)) + 2;
    if (radius < rum::gain_margin(fw)) {
        std::cerr << "error: --window must be at least the gain margin "
                  << rum::gain_margin(fw) << "\n";
        return kExitBadArgument;
    }
    emit(rum::flexes_to_json(fw, basis, radius, rum::default_flex_tol(fw)), out);
    return kExitOk;
}

int run_verify(const std::string& file, const std::string& flex_path, double tol,
               const std::string& out) {
    auto bundle = load_or_exit(file);
    const auto& fw = bundle.framework;
    std::ifstream in(flex_path);
    if (!in) {
        std::cerr << "error: cannot open flex file " << flex_path << "\n";
        return kExitBadArgument;
    }
    rum::json j;
    try {
        in >> j;
    } catch (const rum::json::parse_error& e) {
        std::cerr << "error: flex file is not valid JSON: " << e.what() << "\n";
        return kExitBadArgument;
    }
    std::vector<rum::ImportedFlex> flexes;
    try {
        flexes = rum::flexes_from_json(fw, j);
    } catch (const rum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgument;
    }
    double use_tol = tol > 0 ? tol : rum::default_flex_tol(fw);
    if (j.contains("tolerance") && tol <= 0) use_tol = j["tolerance"].get<double>();

    rum::json results = rum::json::array();
    bool all_pass = true;
    try {
        for (const auto& f : flexes) {
            auto check = rum::verify_flex(fw, f.field, use_tol);
            all_pass = all_pass && check.pass;
            results.push_back(rum::json{{"character", rum::character_to_json(f.chi)},
                                        {"residual", check.residual},
                                        {"pass", check.pass}});
        }
    } catch (const rum::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgument;
    }
    emit(rum::json{{"tolerance", use_tol}, {"pass", all_pass}, {"flexes", results}}, out);
    return kExitOk;  // a failed verification is a result, not an error
}

int run_cover(const std::string& file, int window, const std::string& out) {
    auto bundle = load_or_exit(file);
    const auto& fw = bundle.framework;
    rum::Window w = rum::make_window(fw.rep.group, window);
    auto cov = rum::build_covering(fw, bundle.placement, bundle.norm, w);
    emit(rum::covering_to_json(cov), out);
    return kExitOk;
}

int run_ap_rigidity(const std::string& file, int samples, double tol, const std::string& out) {
    auto bundle = load_or_exit(file);
    const auto& fw = bundle.framework;
    if (fw.rep.group.free_rank > 2) {
        std::cerr << "error: ap-rigidity requires free rank <= 2\n";
        return kExitUnsupported;
    }
    rum::ScanOptions opts;
    opts.samples_per_circle = samples;
    opts.rank_tol = tol;
    auto cert = rum::check_ap_rigidity(fw, opts, tol);
    emit(rum::certificate_to_json(fw, cert), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RUM spectrum, joint spectral points and flexes of gain frameworks"};
    app.require_subcommand(1);

    std::string file, out, trace, format = "json", character, flex_path;
    int samples = 4096, window = -1;
    double tol = 1e-9, verify_tol = 0.0;

    auto* spectrum = app.add_subcommand("spectrum", "RUM spectrum of a framework file");
    spectrum->add_option("file", file)->required();
    spectrum->add_option("--samples", samples, "grid samples per circle factor");
    spectrum->add_option("--tol", tol, "rank tolerance");
    spectrum->add_option("--out", out, "write the primary output to a file");
    spectrum->add_option("--trace", trace, "write the scan trace CSV to a file");
    spectrum->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* joint = app.add_subcommand("joint-points", "joint spectral points of the symmetry");
    joint->add_option("file", file)->required();
    joint->add_option("--out", out);

    auto* flex = app.add_subcommand("flex", "chi-symmetric flex basis at a character");
    flex->add_option("file", file)->required();
    flex->add_option("--character", character, "character as JSON")->required();
    flex->add_option("--window", window, "export window radius");
    flex->add_option("--tol", tol, "rank tolerance");
    flex->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "re-verify an exported flex file");
    verify->add_option("file", file)->required();
    verify->add_option("--flex", flex_path, "flex JSON produced by the flex subcommand")
        ->required();
    verify->add_option("--tol", verify_tol, "override the stored tolerance");
    verify->add_option("--out", out);

    auto* cover = app.add_subcommand("cover", "covering framework over a window");
    cover->add_option("file", file)->required();
    cover->add_option("--window", window, "window radius")->required();
    cover->add_option("--out", out);

    auto* ap = app.add_subcommand("ap-rigidity", "almost-periodic rigidity certificate");
    ap->add_option("file", file)->required();
    ap->add_option("--samples", samples);
    ap->add_option("--tol", tol);
    ap->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return run_spectrum(file, samples, tol, out, trace, format);
        if (joint->parsed()) return run_joint_points(file, out);
        if (flex->parsed()) return run_flex(file, character, window, tol, out);
        if (verify->parsed()) return run_verify(file, flex_path, verify_tol, out);
        if (cover->parsed()) return run_cover(file, window, out);
        if (ap->parsed()) return run_ap_rigidity(file, samples, tol, out);
    } catch (const rum::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const rum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgument;
    }
    return kExitOk;
}
