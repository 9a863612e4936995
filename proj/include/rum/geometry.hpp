#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rum/flex.hpp"
#include "rum/gain.hpp"

namespace rum {

using RealVector = Eigen::VectorXd;
using RealRowVector = Eigen::RowVectorXd;

/// Seed points for the orbit representatives; the covering places the copy
/// over gamma at tau(gamma) p_v.
struct Placement {
    std::map<std::string, RealVector> seeds;  // vertex id -> point
};

enum class NormKind { euclidean, lq, cylindrical, smooth_numeric };

struct NormSpec {
    NormKind kind = NormKind::euclidean;
    double q = 2.0;   // lq norms, q in (1, inf)
    int split = 0;    // cylindrical: size of the leading block
    std::function<double(const RealVector&)> norm;  // smooth_numeric only
};

// Unnormalized Euclidean constraint row (pv - pw)^T.
RealRowVector functional_euclidean(const RealVector& pv, const RealVector& pw);

// lq constraint row ||d||_q^{1-q} (sgn(d_i) |d_i|^{q-1})_i; reduces to
// d / ||d||_2 at q = 2.
RealRowVector functional_lq(const RealVector& d, double q);

// Cylindrical row: the designated block of d, zero elsewhere. block = 0 for
// the leading split coordinates, 1 for the rest; block < 0 picks whichever
// block has the larger Euclidean norm (ties to the leading block), which is
// the smooth-point derivative direction of max(||x_head||, ||x_tail||).
RealRowVector functional_cylindrical(const RealVector& d, int split, int block = -1);

// Central-difference row of t -> norm(d + t e_i). Throws
// DegenerateConstraintError when one-sided differences disagree (non-smooth
// point). Step h <= 0 selects 1e-5 * max(1, ||d||).
RealRowVector functional_smooth_numeric(const std::function<double(const RealVector&)>& norm,
                                        const RealVector& d, double h = 0.0);

// Constraint row for a bar from pv to pw under the given norm family.
RealRowVector derive_constraint(const NormSpec& norm, const RealVector& pv,
                                const RealVector& pw, int cylindrical_block = -1);

struct CoveringVertex {
    std::string id;       // bare representative id over gamma = 0, "v@gamma" otherwise
    int orbit = 0;        // index of the gain-framework vertex
    GroupElement gamma;
    RealVector point;     // empty when the framework has no placement
};

struct CoveringBar {
    int from = 0;  // indices into the vertex list
    int to = 0;
    ComplexMatrix constraint;  // dY x dX, acting on velocity differences
    int source_edge = 0;       // provenance: gain edge and its translate
    GroupElement gamma;
};

struct CoveringFramework {
    GroupSpec group;
    Window window;
    std::vector<CoveringVertex> vertices;
    std::vector<CoveringBar> bars;
};

/// Unrolls the gain framework over the window: one vertex copy per (v, gamma),
/// one bar per edge and per gamma with gamma + m_e still inside. With a
/// placement, points are tau(gamma) p_v and (with a norm) constraints are
/// regenerated from the placed bar vectors; otherwise bars inherit
/// phi_e dtau(-gamma).
CoveringFramework build_covering(const GainFramework& fw,
                                 const std::optional<Placement>& placement,
                                 const std::optional<NormSpec>& norm, const Window& window);

/// Covering data as consumed by the quotient construction: opaque vertex ids,
/// undirected constrained bars, and the group action given per generator
/// (entry -1 when the image of a vertex leaves the list).
struct CoveringDescription {
    GroupSpec group;
    std::vector<std::string> vertex_ids;
    struct Bar {
        int u = 0;
        int v = 0;
        ComplexMatrix constraint;  // for the ordered pair (u, v)
    };
    std::vector<Bar> bars;
    std::vector<std::vector<int>> generator_images;  // [generator][vertex]
};

CoveringDescription describe(const CoveringFramework& cov);

/// Quotient of a symmetric framework by a free action: one vertex per orbit
/// (lexicographically smallest id as representative), one directed edge per
/// bar orbit with its unique gain, and the representative constraint.
/// Throws ValidationError when the action fixes a vertex or the orbit data is
/// inconsistent.
GainFramework quotient_gain_framework(const CoveringDescription& desc,
                                      const Representation& rep, double sym_tol = 1e-8);

struct BarResidualReport {
    double max_residual = 0.0;
    bool pass = false;
};

/// Evaluates every covering bar constraint on the endpoint velocity
/// difference of the field (indexed as f(gamma)_v); pass iff the max
/// residual is within tol.
BarResidualReport cross_validate_flex(const CoveringFramework& cov, const WindowedField& f,
                                      int dim_x, double tol);

}  // namespace rum
