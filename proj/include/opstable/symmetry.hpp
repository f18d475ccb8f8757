#pragma once

#include <string>
#include <vector>

#include "opstable/spectral.hpp"

namespace opstable {

inline Matrix rotation2(double theta) {
    return {{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

/// Reflection through the line at angle theta/2 (F_theta of the group tables).
inline Matrix reflection2(double theta) {
    return {{std::cos(theta), std::sin(theta)}, {std::sin(theta), -std::cos(theta)}};
}

/// The admissible 2D symmetry groups: cyclic C_n, dihedral D_n (with the
/// named small cases D1 = {I, F_0}, D1* = {I, -F_0}, D2), the full orthogonal
/// group O2, and the rotation group O2+ (only realizable for non-Levy
/// operator self-similar processes; the Levy classifier never returns it).
struct SymmetryGroup2D {
    enum class Kind { Cn, D1, D1Star, D2, Dn, O2, O2Plus };
    Kind kind = Kind::Cn;
    int n = 1; // order parameter for Cn / Dn

    static SymmetryGroup2D cyclic(int order) { return {Kind::Cn, order}; }
    static SymmetryGroup2D dihedral(int order) { return {Kind::Dn, order}; }

    bool finite() const { return kind != Kind::O2 && kind != Kind::O2Plus; }

    std::string name() const {
        switch (kind) {
        case Kind::Cn: return "C" + std::to_string(n);
        case Kind::D1: return "D1";
        case Kind::D1Star: return "D1*";
        case Kind::D2: return "D2";
        case Kind::Dn: return "D" + std::to_string(n);
        case Kind::O2: return "O2";
        case Kind::O2Plus: return "O2+";
        }
        return "?";
    }

    /// Elements of a finite group (throws for O2 / O2+).
    std::vector<Matrix> elements() const {
        const double two_pi = 6.283185307179586476925286766559;
        std::vector<Matrix> out;
        switch (kind) {
        case Kind::Cn:
            for (int k = 0; k < n; ++k) out.push_back(rotation2(two_pi * k / n));
            return out;
        case Kind::D1: return {Matrix::identity(2), reflection2(0.0)};
        case Kind::D1Star: return {Matrix::identity(2), reflection2(0.0) * -1.0};
        case Kind::D2:
            return {Matrix::identity(2), reflection2(0.0), Matrix::identity(2) * -1.0,
                    reflection2(0.0) * -1.0};
        case Kind::Dn:
            for (int k = 0; k < n; ++k) out.push_back(rotation2(two_pi * k / n));
            for (int k = 0; k < n; ++k) out.push_back(reflection2(two_pi * k / n));
            return out;
        case Kind::O2:
        case Kind::O2Plus: throw UnsupportedError("SymmetryGroup2D: infinite group has no element list");
        }
        return out;
    }
};

/// Whether the weighted atom multiset is invariant under the orthogonal map
/// A: angular matching within tol radians, exact weight matching to 1e-12.
/// Atoms must lie on the Euclidean unit circle.
inline bool measure_invariant_under(const SpectralMeasure& lam, const Matrix& a,
                                    double tol = 1e-8) {
    if (!lam.is_discrete())
        throw UnsupportedError("measure_invariant_under: discrete measure required");
    const auto& atoms = lam.atoms();
    for (const auto& atom : atoms)
        if (atom.u.size() != 2 || std::abs(euclid_norm(atom.u) - 1.0) > 1e-9)
            throw ModelError("measure_invariant_under: atoms must lie on the Euclidean unit circle");

    std::vector<bool> used(atoms.size(), false);
    for (const auto& atom : atoms) {
        Vec img = a * atom.u;
        bool matched = false;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (used[j]) continue;
            const Vec& v = atoms[j].u;
            const double cross = img[0] * v[1] - img[1] * v[0];
            const double dotp = img[0] * v[0] + img[1] * v[1];
            const double angle = std::atan2(std::abs(cross), dotp);
            if (angle <= tol && std::abs(atom.w - atoms[j].w) <= 1e-12) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

/// Largest n <= n_max with invariance under rotation by 2 pi / n. Candidates
/// are divisors of the atom count (orbits of a free rotation action all have
/// size n).
inline int rotation_invariance_order(const SpectralMeasure& lam, int n_max = 0) {
    if (!lam.is_discrete())
        throw UnsupportedError("rotation_invariance_order: discrete measure required");
    const int count = static_cast<int>(lam.atoms().size());
    if (n_max <= 0) n_max = count;
    const double two_pi = 6.283185307179586476925286766559;
    for (int n = n_max; n >= 2; --n) {
        if (count % n != 0) continue;
        if (measure_invariant_under(lam, rotation2(two_pi / n))) return n;
    }
    return 1;
}

/// Result of the 2D classification. Scalar exponents are reported out of
/// classifier scope: the law is multivariable stable and every maximal
/// compact subgroup is admissible, so no single group is returned.
struct SymmetryReport {
    bool multivariable_stable = false;
    SymmetryGroup2D group; // meaningful unless multivariable_stable
    std::string note;
};

/// Symmetry group of the law from (Jordan exponent form, spectral measure):
///   B1 diagonal-distinct -> S0(lambda) intersect D2,
///   B2 complex-pair      -> C_n by rotation order, or O2 when uniform,
///   B3 nilpotent         -> S0(lambda) intersect C2.
inline SymmetryReport classify_symmetry(const ExponentForm& form, const SpectralMeasure& lam) {
    SymmetryReport rep;
    if (form.kind == ExponentKind::Scalar) {
        rep.multivariable_stable = true;
        rep.note = "multivariable stable (scalar exponent): all maximal compact subgroups admissible";
        return rep;
    }
    const bool uniform = lam.kind() == SpectralMeasure::Kind::UniformCircle;

    switch (form.kind) {
    case ExponentKind::DiagonalDistinct: {
        if (uniform) {
            rep.group = {SymmetryGroup2D::Kind::D2, 2};
            return rep;
        }
        const bool f0 = measure_invariant_under(lam, reflection2(0.0));
        const bool mf0 = measure_invariant_under(lam, reflection2(0.0) * -1.0);
        const bool mi = measure_invariant_under(lam, Matrix::identity(2) * -1.0);
        if (f0 && mi) rep.group = {SymmetryGroup2D::Kind::D2, 2};
        else if (f0) rep.group = {SymmetryGroup2D::Kind::D1, 1};
        else if (mf0) rep.group = {SymmetryGroup2D::Kind::D1Star, 1};
        else if (mi) rep.group = SymmetryGroup2D::cyclic(2);
        else rep.group = SymmetryGroup2D::cyclic(1);
        return rep;
    }
    case ExponentKind::ComplexPair: {
        if (uniform) {
            rep.group = {SymmetryGroup2D::Kind::O2, 0};
            return rep;
        }
        rep.group = SymmetryGroup2D::cyclic(rotation_invariance_order(lam));
        return rep;
    }
    case ExponentKind::Nilpotent: {
        const bool mi = uniform || measure_invariant_under(lam, Matrix::identity(2) * -1.0);
        rep.group = SymmetryGroup2D::cyclic(mi ? 2 : 1);
        return rep;
    }
    case ExponentKind::Scalar: break; // handled above
    }
    throw Error("classify_symmetry: bad exponent form");
}

/// The exponent set E(mu): a single point when the symmetry group is finite,
/// a one-parameter family beta I + c K (K the rotation generator) when the
/// group is O2 (or O2+ for non-Levy self-similar processes).
struct ExponentSetDescription {
    bool unique = true;
    Matrix base;          // the given exponent
    Matrix tangent_basis; // skew generator of the family when not unique
    std::string text;
};

inline ExponentSetDescription exponent_set_description(const ExponentForm& form,
                                                       const SymmetryGroup2D& group) {
    ExponentSetDescription d;
    d.base = form.canonical();
    if (group.finite()) {
        d.unique = true;
        d.text = "exponent unique (finite symmetry group, trivial tangent space)";
    } else {
        d.unique = false;
        d.tangent_basis = {{0.0, -1.0}, {1.0, 0.0}};
        d.text = "one-parameter family beta*I + c*[[0,-1],[1,0]] (skew-symmetric tangent space)";
    }
    return d;
}

/// Orbit polylines {t^B u} of the Levy measure support, one per atom, over a
/// log-spaced t grid.
struct OrbitSet {
    std::vector<double> t_values;
    std::vector<std::vector<Vec>> polylines; // [atom][t index]
};

inline OrbitSet levy_support_orbits(const Matrix& b, const SpectralMeasure& lam, double t_min,
                                    double t_max, std::size_t points_per_orbit) {
    if (!lam.is_discrete())
        throw UnsupportedError("levy_support_orbits: discrete measure required");
    if (!(t_min > 0.0) || !(t_max >= t_min))
        throw ModelError("levy_support_orbits: need 0 < t_min <= t_max");
    if (points_per_orbit < 1) throw ModelError("levy_support_orbits: need at least one point");
    OrbitSet out;
    const std::size_t n = t_max == t_min ? 1 : points_per_orbit;
    const double log_lo = std::log(t_min), log_hi = std::log(t_max);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.t_values.push_back(std::exp(log_lo + f * (log_hi - log_lo)));
    }
    PowerEvaluator pw(b);
    for (const auto& atom : lam.atoms()) {
        std::vector<Vec> line;
        line.reserve(out.t_values.size());
        for (double t : out.t_values) line.push_back(pw.power_apply(t, atom.u));
        out.polylines.push_back(std::move(line));
    }
    return out;
}

/// Change of basis for (B, lambda): B' = P^{-1} B P and each atom u maps to
/// the polar direction u' of P^{-1} u under B' (Euclidean norm, so B' must
/// be a Jordan form) with weight w' = t0 w, where P^{-1} u = t0^{B'} u'.
/// Preserves the Levy measure: radial tail mass beyond new radius r scales
/// as w t0 / r along each orbit.
inline std::pair<Matrix, SpectralMeasure> transform_spectral(const Matrix& p, const Matrix& b,
                                                             const SpectralMeasure& lam) {
    if (!lam.is_discrete())
        throw UnsupportedError("transform_spectral: discrete measure required");
    if (std::abs(determinant(p)) < 1e-12)
        throw ModelError("transform_spectral: basis not invertible");
    Matrix p_inv = inverse(p);
    Matrix b_new = p_inv * b * p;
    BNorm norm_new = BNorm::euclidean(b_new);
    std::vector<SpectralAtom> atoms;
    for (const auto& atom : lam.atoms()) {
        Vec y = p_inv * atom.u;
        auto [t0, u_new] = norm_new.polar_decompose(y);
        atoms.push_back({u_new, atom.w * t0});
    }
    return {b_new, SpectralMeasure::discrete(std::move(atoms))};
}

} // namespace opstable
