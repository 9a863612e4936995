#include "rum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(const std::complex<double>& z) {
    double a = std::arg(z);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

double angular_distance(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, kTwoPi - d);
}

void require_unitary(const ComplexMatrix& u, double tol) {
    if (u.rows() != u.cols() || u.rows() == 0)
        throw StructuralError("unitary operations need a nonempty square matrix");
    double dev = (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
    if (dev > tol) throw ContractError("matrix is not unitary (||U*U - I|| = " +
                                       std::to_string(dev) + ")");
}

// Kernel basis with an absolute singular-value threshold.
ComplexMatrix kernel_below(const ComplexMatrix& m, double abs_threshold) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (; rank < sv.size(); ++rank)
        if (sv(rank) <= abs_threshold) break;
    return svd.matrixV().rightCols(m.cols() - rank);
}

// Eigenvalues of a (numerically) unitary matrix, pushed onto the unit circle.
std::vector<std::complex<double>> unit_eigenvalues(const ComplexMatrix& u) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(u, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> vals(u.rows());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        vals[i] = std::abs(z) > 0 ? z / std::abs(z) : std::complex<double>(1, 0);
    }
    return vals;
}

std::vector<Eigenspace> eigendecompose_unchecked(const ComplexMatrix& u, double cluster_tol) {
    auto vals = unit_eigenvalues(u);
    std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
        return angle_of(a) < angle_of(b);
    });

    // Cluster along the sorted circle; the first and last cluster may wrap.
    std::vector<std::vector<std::complex<double>>> clusters;
    for (const auto& v : vals) {
        if (!clusters.empty() &&
            angular_distance(angle_of(clusters.back().back()), angle_of(v)) < cluster_tol)
            clusters.back().push_back(v);
        else
            clusters.push_back({v});
    }
    if (clusters.size() > 1 &&
        angular_distance(angle_of(clusters.front().front()),
                         angle_of(clusters.back().back())) < cluster_tol) {
        auto& first = clusters.front();
        first.insert(first.end(), clusters.back().begin(), clusters.back().end());
        clusters.pop_back();
    }

    // Cluster representative: normalized mean direction.
    std::vector<std::complex<double>> reps;
    reps.reserve(clusters.size());
    for (const auto& c : clusters) {
        std::complex<double> s = 0;
        for (const auto& v : c) s += v;
        reps.push_back(s / std::abs(s));
    }

    std::vector<Eigenspace> out;
    out.reserve(clusters.size());
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        // Threshold between this cluster and the closest foreign eigenvalue.
        double in_max = 0, out_min = std::numeric_limits<double>::infinity();
        for (std::size_t cj = 0; cj < clusters.size(); ++cj)
            for (const auto& v : clusters[cj]) {
                double d = std::abs(v - reps[ci]);
                if (cj == ci)
                    in_max = std::max(in_max, d);
                else
                    out_min = std::min(out_min, d);
            }
        double thr;
        if (std::isinf(out_min))
            thr = std::max(in_max * 2, 1e-7);
        else
            thr = 0.5 * (in_max + out_min);
        ComplexMatrix shifted = u - reps[ci] * ComplexMatrix::Identity(u.rows(), u.cols());
        ComplexMatrix basis = kernel_below(shifted, thr);
        if (basis.cols() == 0)
            throw ContractError("eigenspace extraction failed; matrix may be far from normal");
        out.push_back({reps[ci], std::move(basis)});
    }

    Eigen::Index total = 0;
    for (const auto& e : out) total += e.basis.cols();
    if (total != u.rows())
        throw ContractError("eigenspace dimensions do not sum to the matrix dimension");

    std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) {
        return angle_of(a.eigenvalue) < angle_of(b.eigenvalue);
    });
    return out;
}

void joint_recurse(const std::vector<ComplexMatrix>& tuple, std::size_t level,
                   const ComplexMatrix& basis, ComplexVector lambda_prefix,
                   double cluster_tol, std::vector<JointEigenpair>& out) {
    if (level == tuple.size()) {
        out.push_back({std::move(lambda_prefix), basis});
        return;
    }
    // Restriction of the next operator to the current invariant subspace.
    ComplexMatrix restricted = basis.adjoint() * tuple[level] * basis;
    for (const auto& es : eigendecompose_unchecked(restricted, cluster_tol)) {
        ComplexVector lambda(level + 1);
        lambda.head(level) = lambda_prefix;
        lambda(level) = es.eigenvalue;
        joint_recurse(tuple, level + 1, orthonormalize(basis * es.basis), std::move(lambda),
                      cluster_tol, out);
    }
}

}  // namespace

void check_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw StructuralError(std::string(what) + " has NaN or Inf entries");
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

double smallest_singular_value(const ComplexMatrix& m) {
    if (m.rows() == 0) return 0.0;
    if (m.cols() == 0) return 0.0;
    auto sv = m.jacobiSvd().singularValues();
    if (sv.size() < m.cols()) return 0.0;  // wide matrix: rank < cols is automatic
    return sv(sv.size() - 1);
}

ComplexMatrix numeric_kernel(const ComplexMatrix& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0)
        throw StructuralError("numeric_kernel: empty matrix dimensions");
    check_finite(m);
    if (tol <= 0) throw StructuralError("numeric_kernel: tol must be positive");
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (; rank < sv.size(); ++rank)
        if (sv(rank) <= cutoff) break;
    return svd.matrixV().rightCols(m.cols() - rank);
}

std::vector<Eigenspace> unitary_eigendecomposition(const ComplexMatrix& u, double cluster_tol) {
    check_finite(u);
    require_unitary(u, 1e-9);
    return eigendecompose_unchecked(u, cluster_tol);
}

std::vector<JointEigenpair> joint_spectrum(const std::vector<ComplexMatrix>& tuple,
                                           double cluster_tol) {
    if (tuple.empty()) throw StructuralError("joint_spectrum: empty tuple");
    const Eigen::Index dim = tuple.front().rows();
    if (dim == 0) throw StructuralError("joint_spectrum: zero-dimensional space");
    for (const auto& t : tuple) {
        check_finite(t);
        require_unitary(t, 1e-9);
        if (t.rows() != dim) throw StructuralError("joint_spectrum: mismatched dimensions");
    }
    for (std::size_t i = 0; i < tuple.size(); ++i)
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            double dev = (tuple[i] * tuple[j] - tuple[j] * tuple[i]).norm();
            if (dev > 1e-9)
                throw ContractError("joint_spectrum: operators " + std::to_string(i) + " and " +
                                    std::to_string(j) + " do not commute (||[A,B]|| = " +
                                    std::to_string(dev) + ")");
        }

    std::vector<JointEigenpair> out;
    joint_recurse(tuple, 0, ComplexMatrix::Identity(dim, dim), ComplexVector(0), cluster_tol,
                  out);
    return out;
}

ComplexMatrix orthonormalize(const ComplexMatrix& m) {
    if (m.cols() == 0) return m;
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), m.cols());
    return q;
}

}  // namespace rum
