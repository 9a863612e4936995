#include "rum/group.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int mod_positive(long long v, int n) {
    long long m = v % n;
    if (m < 0) m += n;
    return static_cast<int>(m);
}
}  // namespace

long long GroupSpec::torsion_size() const {
    long long s = 1;
    for (int n : torsion_orders) s *= n;
    return s;
}

void validate(const GroupSpec& spec) {
    if (spec.free_rank < 0)
        throw StructuralError("group spec: free_rank must be non-negative");
    if (spec.free_rank + spec.torsion_rank() < 1)
        throw StructuralError("group spec: need at least one factor (r + k >= 1)");
    for (int n : spec.torsion_orders)
        if (n < 2) throw StructuralError("group spec: torsion orders must be >= 2");
}

GroupElement zero_element(const GroupSpec& spec) {
    return GroupElement{std::vector<long long>(spec.free_rank, 0),
                        std::vector<int>(spec.torsion_rank(), 0)};
}

void check_element(const GroupSpec& spec, const GroupElement& a) {
    if (static_cast<int>(a.free.size()) != spec.free_rank ||
        static_cast<int>(a.torsion.size()) != spec.torsion_rank())
        throw StructuralError("group element does not match group spec");
    for (int i = 0; i < spec.torsion_rank(); ++i)
        if (a.torsion[i] < 0 || a.torsion[i] >= spec.torsion_orders[i])
            throw StructuralError("torsion coordinate out of range");
}

GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
    check_element(spec, a);
    check_element(spec, b);
    GroupElement out = a;
    for (int i = 0; i < spec.free_rank; ++i) out.free[i] += b.free[i];
    for (int i = 0; i < spec.torsion_rank(); ++i)
        out.torsion[i] = mod_positive(static_cast<long long>(a.torsion[i]) + b.torsion[i],
                                      spec.torsion_orders[i]);
    return out;
}

GroupElement negate(const GroupSpec& spec, const GroupElement& a) {
    check_element(spec, a);
    GroupElement out = a;
    for (auto& v : out.free) v = -v;
    for (int i = 0; i < spec.torsion_rank(); ++i)
        out.torsion[i] = mod_positive(-static_cast<long long>(a.torsion[i]),
                                      spec.torsion_orders[i]);
    return out;
}

GroupElement scale(const GroupSpec& spec, const GroupElement& a, long long k) {
    check_element(spec, a);
    GroupElement out = a;
    for (auto& v : out.free) v *= k;
    for (int i = 0; i < spec.torsion_rank(); ++i)
        out.torsion[i] = mod_positive(static_cast<long long>(a.torsion[i]) * k,
                                      spec.torsion_orders[i]);
    return out;
}

GroupElement standard_generator(const GroupSpec& spec, int i) {
    if (i < 0 || i >= spec.num_generators())
        throw StructuralError("generator index out of range");
    GroupElement g = zero_element(spec);
    if (i < spec.free_rank)
        g.free[i] = 1;
    else
        g.torsion[i - spec.free_rank] = 1;
    return g;
}

long long free_inf_norm(const GroupElement& a) {
    long long m = 0;
    for (long long v : a.free) m = std::max(m, std::llabs(v));
    return m;
}

bool element_less(const GroupElement& a, const GroupElement& b) {
    if (a.free != b.free) return a.free < b.free;
    return a.torsion < b.torsion;
}

std::string to_string(const GroupElement& a) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (long long v : a.free) {
        if (!first) os << ",";
        os << v;
        first = false;
    }
    if (!a.torsion.empty()) {
        os << ";";
        first = true;
        for (int v : a.torsion) {
            if (!first) os << ",";
            os << v;
            first = false;
        }
    }
    os << ")";
    return os.str();
}

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

Character trivial_character(const GroupSpec& spec) {
    return Character{std::vector<double>(spec.free_rank, 0.0),
                     std::vector<int>(spec.torsion_rank(), 0)};
}

void check_character(const GroupSpec& spec, const Character& chi) {
    if (static_cast<int>(chi.angles.size()) != spec.free_rank ||
        static_cast<int>(chi.torsion_indices.size()) != spec.torsion_rank())
        throw StructuralError("character does not match group spec");
    for (int i = 0; i < spec.torsion_rank(); ++i)
        if (chi.torsion_indices[i] < 0 || chi.torsion_indices[i] >= spec.torsion_orders[i])
            throw StructuralError("character torsion index out of range");
}

std::complex<double> evaluate_character(const GroupSpec& spec, const Character& chi,
                                        const GroupElement& gamma) {
    check_character(spec, chi);
    check_element(spec, gamma);
    double phase = 0.0;
    for (int i = 0; i < spec.free_rank; ++i)
        phase += chi.angles[i] * static_cast<double>(gamma.free[i]);
    for (int i = 0; i < spec.torsion_rank(); ++i)
        phase += kTwoPi * chi.torsion_indices[i] * gamma.torsion[i] / spec.torsion_orders[i];
    return std::polar(1.0, phase);
}

Character conjugate(const GroupSpec& spec, const Character& chi) {
    check_character(spec, chi);
    Character out = chi;
    for (auto& a : out.angles) a = wrap_angle(-a);
    for (int i = 0; i < spec.torsion_rank(); ++i) {
        int n = spec.torsion_orders[i];
        out.torsion_indices[i] = (n - chi.torsion_indices[i]) % n;
    }
    return out;
}

Character multiply(const GroupSpec& spec, const Character& a, const Character& b) {
    check_character(spec, a);
    check_character(spec, b);
    Character out = a;
    for (int i = 0; i < spec.free_rank; ++i) out.angles[i] = wrap_angle(a.angles[i] + b.angles[i]);
    for (int i = 0; i < spec.torsion_rank(); ++i)
        out.torsion_indices[i] =
            (a.torsion_indices[i] + b.torsion_indices[i]) % spec.torsion_orders[i];
    return out;
}

double character_distance(const GroupSpec& spec, const Character& a, const Character& b) {
    check_character(spec, a);
    check_character(spec, b);
    if (a.torsion_indices != b.torsion_indices)
        return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (int i = 0; i < spec.free_rank; ++i) {
        double delta = std::fabs(wrap_angle(a.angles[i]) - wrap_angle(b.angles[i]));
        delta = std::min(delta, kTwoPi - delta);
        d = std::max(d, delta);
    }
    return d;
}

bool characters_equal(const GroupSpec& spec, const Character& a, const Character& b,
                      double angle_tol) {
    return character_distance(spec, a, b) <= angle_tol;
}

std::string to_string(const Character& chi) {
    std::ostringstream os;
    os << "chi(";
    bool first = true;
    for (double a : chi.angles) {
        if (!first) os << ",";
        os << a;
        first = false;
    }
    if (!chi.torsion_indices.empty()) {
        os << ";";
        first = true;
        for (int j : chi.torsion_indices) {
            if (!first) os << ",";
            os << j;
            first = false;
        }
    }
    os << ")";
    return os.str();
}

Window make_window(const GroupSpec& spec, int n) {
    validate(spec);
    if (n < 0) throw StructuralError("window radius must be non-negative");
    Window w{spec, n, {}};
    const int r = spec.free_rank;
    const int k = spec.torsion_rank();
    long long count = spec.torsion_size();
    for (int i = 0; i < r; ++i) count *= (2LL * n + 1);
    w.elements.reserve(static_cast<std::size_t>(count));

    GroupElement cur = zero_element(spec);
    for (auto& v : cur.free) v = -n;
    // Mixed-radix enumeration, last coordinate fastest.
    while (true) {
        w.elements.push_back(cur);
        int pos = r + k - 1;
        for (; pos >= 0; --pos) {
            if (pos >= r) {
                int i = pos - r;
                if (++cur.torsion[i] < spec.torsion_orders[i]) break;
                cur.torsion[i] = 0;
            } else {
                if (++cur.free[pos] <= n) break;
                cur.free[pos] = -n;
            }
        }
        if (pos < 0) break;
    }
    return w;
}

std::optional<std::size_t> Window::index_of(const GroupElement& gamma) const {
    check_element(spec, gamma);
    std::size_t idx = 0;
    for (int i = 0; i < spec.free_rank; ++i) {
        if (gamma.free[i] < -radius || gamma.free[i] > radius) return std::nullopt;
        idx = idx * (2 * radius + 1) + static_cast<std::size_t>(gamma.free[i] + radius);
    }
    for (int i = 0; i < spec.torsion_rank(); ++i)
        idx = idx * spec.torsion_orders[i] + static_cast<std::size_t>(gamma.torsion[i]);
    return idx;
}

double folner_defect(const GroupSpec& spec, const GroupElement& gamma, int n) {
    validate(spec);
    check_element(spec, gamma);
    if (n < 0) throw StructuralError("window radius must be non-negative");
    // Torsion coordinates wrap, so only the free box loses elements.
    double total = 1.0, overlap = 1.0;
    for (int i = 0; i < spec.free_rank; ++i) {
        long long width = 2LL * n + 1;
        long long keep = std::max(0LL, width - std::llabs(gamma.free[i]));
        total *= static_cast<double>(width);
        overlap *= static_cast<double>(keep);
    }
    return (total - overlap) / total;
}

}  // namespace rum
