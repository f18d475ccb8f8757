#pragma once

#include <vector>

#include "opstable/bnorm.hpp"

namespace opstable {

struct SpectralAtom {
    Vec u;    // point on the unit B-sphere
    double w; // strictly positive weight
};

/// Finite spectral measure on the unit B-sphere: either a finite set of
/// weighted atoms, or the uniform measure on the Euclidean circle (d=2).
class SpectralMeasure {
public:
    enum class Kind { Discrete, UniformCircle };

    static SpectralMeasure discrete(std::vector<SpectralAtom> atoms) {
        if (atoms.empty()) throw ModelError("spectral measure: needs at least one atom");
        SpectralMeasure m;
        m.kind_ = Kind::Discrete;
        m.atoms_ = std::move(atoms);
        for (const auto& a : m.atoms_) {
            if (!(a.w > 0.0)) throw ModelError("spectral measure: weights must be positive");
            m.mass_ += a.w;
        }
        return m;
    }

    static SpectralMeasure uniform_circle(double mass) {
        if (!(mass > 0.0)) throw ModelError("spectral measure: mass must be positive");
        SpectralMeasure m;
        m.kind_ = Kind::UniformCircle;
        m.mass_ = mass;
        return m;
    }

    Kind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == Kind::Discrete; }
    double total_mass() const { return mass_; }

    const std::vector<SpectralAtom>& atoms() const {
        if (kind_ != Kind::Discrete) throw UnsupportedError("spectral measure: no atoms for the uniform variant");
        return atoms_;
    }

    std::size_t dimension() const {
        return kind_ == Kind::Discrete ? atoms_.front().u.size() : 2;
    }

    /// Every atom must sit on the unit B-sphere within 1e-9.
    void validate_on_sphere(const BNorm& norm) const {
        if (kind_ != Kind::Discrete) return;
        for (const auto& a : atoms_)
            if (std::abs(norm.eval(a.u) - 1.0) > 1e-9)
                throw ModelError("spectral measure: atom is not on the unit B-sphere");
    }

    /// Invariance under x -> -x (atom-exact); the uniform measure qualifies.
    bool symmetric() const {
        if (kind_ == Kind::UniformCircle) return true;
        for (const auto& a : atoms_) {
            bool matched = false;
            for (const auto& b : atoms_) {
                double diff = 0.0;
                for (std::size_t i = 0; i < a.u.size(); ++i)
                    diff = std::max(diff, std::abs(a.u[i] + b.u[i]));
                if (diff <= 1e-12 && std::abs(a.w - b.w) <= 1e-14) { matched = true; break; }
            }
            if (!matched) return false;
        }
        return true;
    }

private:
    Kind kind_ = Kind::Discrete;
    std::vector<SpectralAtom> atoms_;
    double mass_ = 0.0;
};

/// Second moment Lambda = int u u^T lambda(du). Closed form mass*I/2 for the
/// uniform circle.
inline Matrix second_moment(const SpectralMeasure& lam) {
    if (lam.kind() == SpectralMeasure::Kind::UniformCircle)
        return Matrix::identity(2) * (lam.total_mass() / 2.0);
    const std::size_t d = lam.dimension();
    Matrix out(d, d);
    for (const auto& a : lam.atoms()) out += outer(a.u, a.u) * a.w;
    return out;
}

/// Sum of w*u over atoms; zero for the uniform circle. Divide by the total
/// mass for E[v].
inline Vec weighted_mean_direction(const SpectralMeasure& lam) {
    if (lam.kind() == SpectralMeasure::Kind::UniformCircle) return Vec(2, 0.0);
    Vec s(lam.dimension(), 0.0);
    for (const auto& a : lam.atoms()) s = s + a.w * a.u;
    return s;
}

/// Fullness condition: the smallest B-invariant subspace containing supp
/// lambda is all of R^d. Rank of [u, Bu, ..., B^{d-1}u : atoms] via singular
/// values with threshold 1e-10.
inline bool fullness_check(const Matrix& b, const SpectralMeasure& lam) {
    if (lam.kind() == SpectralMeasure::Kind::UniformCircle) return true;
    const std::size_t d = b.rows();
    std::vector<Vec> cols;
    for (const auto& a : lam.atoms()) {
        Vec v = a.u;
        for (std::size_t k = 0; k < d; ++k) {
            cols.push_back(v);
            v = b * v;
        }
    }
    // Gram matrix M M^T; singular values are sqrt of its eigenvalues
    Matrix g(d, d);
    for (const auto& v : cols) g += outer(v, v);
    SymEigen eg = sym_eigen(g);
    double smax = std::sqrt(std::max(eg.values.back(), 0.0));
    const double thresh = 1e-10 * std::max(1.0, smax);
    std::size_t rank = 0;
    for (double lamv : eg.values)
        if (std::sqrt(std::max(lamv, 0.0)) > thresh) ++rank;
    return rank == d;
}

} // namespace opstable
