#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rum/group.hpp"
#include "rum/linalg.hpp"

namespace rum {

/// Affine isometry x -> A x + t with unitary linear part.
struct AffineIsometry {
    ComplexMatrix linear;
    ComplexVector translation;

    int dim() const { return static_cast<int>(linear.rows()); }
};

AffineIsometry affine_identity(int dim);
AffineIsometry compose(const AffineIsometry& a, const AffineIsometry& b);
AffineIsometry inverse(const AffineIsometry& a);
AffineIsometry affine_power(const AffineIsometry& a, long long k);
double affine_distance(const AffineIsometry& a, const AffineIsometry& b);

/// Homomorphism from the group into the affine isometries of C^d, given by
/// one image per standard generator (free generators first).
struct Representation {
    GroupSpec group;
    std::vector<AffineIsometry> generators;
    int dim = 0;
};

// Checks shapes, unitarity of linear parts (1e-9), pairwise commutation of
// the generator images and torsion orders (1e-8).
void validate(const Representation& rep);
Representation trivial_representation(const GroupSpec& spec, int dim);

// Linear part of the image of gamma: product of generator linear parts
// raised to gamma's exponents.
ComplexMatrix dtau(const Representation& rep, const GroupElement& gamma);
// Full affine image of gamma.
AffineIsometry tau(const Representation& rep, const GroupElement& gamma);
// True when all generator images (and translations) have real entries.
bool has_real_data(const Representation& rep, double tol = 1e-12);

struct GainEdge {
    std::string id;
    int source = 0;  // index into the vertex list
    int range = 0;
    GroupElement gain;
    ComplexMatrix phi;  // dY x dX constraint map
    // For split (cylindrical) norms: which block this edge constrains.
    // -1 lets the norm derivative pick the dominant block.
    int norm_block = -1;
};

struct GainFramework {
    std::vector<std::string> vertices;
    std::vector<GainEdge> edges;
    Representation rep;
    int dim_x = 0;
    int dim_y = 0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
};

// Structural validation: shapes, loop gains nonzero, parallel edges with the
// same endpoints carry distinct gains (in either orientation, so the covering
// graph is simple).
void validate(const GainFramework& fw);
bool has_real_data(const GainFramework& fw, double tol = 1e-12);
// Largest free-coordinate magnitude over all edge gains; the window margin
// needed to apply the framework operator.
long long gain_margin(const GainFramework& fw);

struct OrbitMatrix {
    ComplexMatrix matrix;  // (|E0| dY) x (|V0| dX)
    Character character;
};

/// Character-twisted constraint matrix. Loop edge row at v = s(e) = r(e):
/// phi_e (I - chi(m_e) dtau(m_e)); non-loop row: phi_e at s(e) and
/// -chi(m_e) phi_e dtau(m_e) at r(e).
OrbitMatrix orbit_matrix(const GainFramework& fw, const Character& chi);

struct KernelReport {
    bool member = false;
    ComplexMatrix basis;  // orthonormal columns, |V0| dX rows
};

// chi is in the RUM spectrum iff the orbit matrix kernel is nontrivial.
KernelReport rum_membership(const GainFramework& fw, const Character& chi, double tol = 1e-9);

struct SpectrumPoint {
    Character chi;
    int kernel_dim = 0;
    double sigma_min = 0.0;
};

/// Exact spectrum enumeration over all characters of a finite group.
/// Throws UsageError when the group has free factors (use the scan).
std::vector<SpectrumPoint> rum_spectrum_finite(const GainFramework& fw, double tol = 1e-9);

struct ScanTraceRow {
    std::vector<double> angles;
    std::vector<int> torsion;
    double sigma_min = 0.0;
};

struct ScanResult {
    std::vector<SpectrumPoint> points;
    std::vector<ScanTraceRow> trace;
};

struct ScanOptions {
    int samples_per_circle = 4096;  // >= 16
    double rank_tol = 1e-9;
    // A grid point or refined point enters the spectrum when
    // sigma_min <= accept_tol * max(1, sigma_max).
    double accept_tol = 1e-7;
    double refine_precision = 1e-10;  // angular precision of golden-section
    double snap_tol = 1e-6;           // snap to joint spectral points
};

/// Grid scan of sigma_min over the free-factor torus (per torsion index
/// combination), with golden-section refinement of isolated dips. Plateau
/// points (whole neighborhoods below threshold) are reported at grid
/// resolution. The joint spectral points are always included. Supports
/// refinement for free rank 1 and 2; higher ranks return unrefined grid
/// candidates. Requires free_rank >= 1.
ScanResult rum_spectrum_scan(const GainFramework& fw, const ScanOptions& opts = {});

struct JointSpectralPoint {
    Character chi;  // conjugate character of the joint eigenvalue
    JointEigenpair pair;
};

/// Joint spectral points of the representation: joint eigenvalues of the
/// standard-generator tuple of dtau, each mapped to the conjugate character.
/// Throws ContractError when a torsion eigenvalue is not a root of unity of
/// the right order (within 1e-8).
std::vector<JointSpectralPoint> joint_spectral_points(const Representation& rep,
                                                      double cluster_tol = 1e-8);
std::vector<JointSpectralPoint> joint_spectral_points(const GainFramework& fw,
                                                      double cluster_tol = 1e-8);

// Character with chi(gamma_i) = conj(lambda_i) on the standard generators.
Character character_from_joint_eigenvalue(const GroupSpec& spec, const ComplexVector& lambda,
                                          double torsion_tol = 1e-8);

}  // namespace rum
