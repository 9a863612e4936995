#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rum/ap.hpp"
#include "rum/geometry.hpp"

namespace rum {

using json = nlohmann::json;

/// A framework file: the gain framework plus the optional geometry it was
/// derived from.
struct FrameworkBundle {
    GainFramework framework;
    std::optional<Placement> placement;
    std::optional<NormSpec> norm;
};

// Parse and validate; throws ValidationError with a JSON-path location on
// schema errors.
FrameworkBundle parse_framework(const json& j);
FrameworkBundle load_framework_file(const std::string& path);

// Complex scalars as [re, im]; matrices and vectors as nested arrays of them.
json complex_to_json(const std::complex<double>& z);
json vector_to_json(const ComplexVector& v);
json matrix_to_json(const ComplexMatrix& m);
json real_vector_to_json(const RealVector& v);

json group_to_json(const GroupSpec& spec);
json element_to_json(const GroupElement& g);
json character_to_json(const Character& chi);

GroupSpec group_from_json(const json& j, const std::string& path = "$.group");
GroupElement element_from_json(const GroupSpec& spec, const json& j, const std::string& path);
Character character_from_json(const GroupSpec& spec, const json& j,
                              const std::string& path = "$.character");

json spectrum_to_json(const GroupSpec& spec, const std::vector<SpectrumPoint>& points);
json joint_points_to_json(const GroupSpec& spec,
                          const std::vector<JointSpectralPoint>& points);
std::string scan_trace_to_csv(const GroupSpec& spec, const std::vector<ScanTraceRow>& trace);

/// Flex export: characters, amplitudes and a windowed sample table, so the
/// file re-verifies without recomputing anything.
json flexes_to_json(const GainFramework& fw, const std::vector<ChiSymmetricVector>& flexes,
                    int window_radius, double tol);
struct ImportedFlex {
    Character chi;
    ComplexVector amplitude;
    WindowedField field;
};
std::vector<ImportedFlex> flexes_from_json(const GainFramework& fw, const json& j);

json covering_to_json(const CoveringFramework& cov);
json certificate_to_json(const GainFramework& fw, const ApRigidityCertificate& cert);

}  // namespace rum
