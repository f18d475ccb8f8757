#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "opstable/linalg.hpp"
#include "opstable/quadrature.hpp"

namespace opstable {

/// Checks whether the Euclidean norm is a valid exponent-adapted norm for B,
/// i.e. t -> |t^B x| is strictly increasing for every x != 0. Equivalent to
/// B + B^T being positive definite: d/dt |t^B x|^2 = (2/t) y^T ((B+B^T)/2) y
/// with y = t^B x ranging over all nonzero vectors. Every valid-exponent
/// Jordan form passes (diagonal, rotation block, nilpotent entry n with
/// |n| < 2b), and so do the worked non-Jordan exponents with B symmetric or
/// near-normal.
inline bool euclidean_valid_for(const Matrix& b) {
    if (!b.square()) return false;
    Matrix sym = (b + b.transpose()) * 0.5;
    SymEigen eg = sym_eigen(sym);
    return eg.values.front() > 1e-12;
}

/// Exponent-adapted norm. Three variants:
///   Euclidean    the plain Euclidean norm (valid when B is in Jordan form),
///   QuadraticJM  |x|_B^2 = x^T G x with B^T G + G B = I (the p=2 case of the
///                Jurek-Mason integral, solved in closed form),
///   GeneralJM    (int_0^1 |s^B x|^p s^{-1} ds)^{1/p} by adaptive quadrature.
class BNorm {
public:
    enum class Kind { Euclidean, QuadraticJM, GeneralJM };

    static BNorm euclidean(const Matrix& b) {
        require_valid_exponent(b);
        if (!euclidean_valid_for(b))
            throw ModelError("euclidean norm: B is not in Jordan form, monotonicity not guaranteed");
        BNorm n;
        n.kind_ = Kind::Euclidean;
        n.b_ = b;
        n.finish_init();
        return n;
    }

    /// The Jurek-Mason norm of order p for exponent B.
    static BNorm jurek_mason(const Matrix& b, double p) {
        require_valid_exponent(b);
        if (!(p >= 1.0)) throw ModelError("build_jm_norm: p must be >= 1");
        BNorm n;
        n.b_ = b;
        n.p_ = p;
        if (p == 2.0) {
            n.kind_ = Kind::QuadraticJM;
            // |x|_B^2 = int_0^1 x^T (s^B)^T s^B x s^-1 ds = x^T G x where
            // G = int_0^inf e^{-B^T w} e^{-B w} dw solves B^T G + G B = I.
            n.gram_ = solve_lyapunov(b.transpose(), Matrix::identity(b.rows()));
            Matrix resid = b.transpose() * n.gram_ + n.gram_ * b - Matrix::identity(b.rows());
            if (resid.max_abs() > 1e-10)
                throw NumericError("build_jm_norm: Gram residual too large");
        } else {
            n.kind_ = Kind::GeneralJM;
        }
        n.finish_init();
        return n;
    }

    Kind kind() const { return kind_; }
    const Matrix& exponent() const { return b_; }
    double order() const { return p_; }

    /// Gram matrix of the p=2 variant.
    const Matrix& gram() const {
        if (kind_ != Kind::QuadraticJM) throw Error("BNorm: no Gram matrix for this variant");
        return gram_;
    }

    double operator()(const Vec& x) const { return eval(x); }

    double eval(const Vec& x) const {
        if (x.size() != b_.rows()) throw Error("norm_eval: dimension mismatch");
        switch (kind_) {
        case Kind::Euclidean: return euclid_norm(x);
        case Kind::QuadraticJM: {
            double q = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < x.size(); ++j) q += x[i] * gram_(i, j) * x[j];
            return std::sqrt(std::max(q, 0.0));
        }
        case Kind::GeneralJM: {
            if (euclid_norm(x) == 0.0) return 0.0;
            // s = e^{-w}: int_0^wmax |e^{-Bw} x|^p dw; integrand ~ e^{-p b* w}
            auto f = [&](double w) {
                Vec y = power_.exp_scaled(-w) * x;
                return std::pow(euclid_norm(y), p_);
            };
            double v = adaptive_simpson(f, 0.0, w_max_, 1e-9);
            return std::pow(v, 1.0 / p_);
        }
        }
        throw Error("BNorm: bad kind");
    }

    /// Radial projection onto the unit B-sphere: direction / |direction|_B.
    /// This is the normalization that places user-supplied atoms (the sphere
    /// point on the same ray, e.g. the +-c_i e_i axis intersections of the
    /// quadratic-norm model).
    Vec project_to_sphere(const Vec& direction) const {
        const double n = eval(direction);
        if (!(n > 0.0)) throw Error("project_to_sphere: direction must be nonzero");
        return (1.0 / n) * direction;
    }

    /// Unique polar coordinates x = t^B u with |u|_B = 1, by bracketing plus
    /// bisection in log t on g(t) = |t^{-B} x|_B - 1 (strictly decreasing).
    std::pair<double, Vec> polar_decompose(const Vec& x) const {
        if (x.size() != b_.rows()) throw Error("polar_decompose: dimension mismatch");
        if (euclid_norm(x) == 0.0) throw Error("polar_decompose: x must be nonzero");

        auto g = [&](double logt) {
            Vec u = power_.exp_scaled(-logt) * x;
            return eval(u) - 1.0;
        };

        // initial bracket from the eigenvalue range, then geometric expansion
        const double nx = std::max(eval(x), 1e-300);
        double lo = std::log(nx) / bmax_;
        double hi = std::log(nx) / bmin_;
        if (lo > hi) std::swap(lo, hi);
        lo -= 0.5;
        hi += 0.5;
        double step = 1.0;
        int expand = 0;
        while (g(lo) < 0.0) { // need smaller t
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (++expand > 200) throw NumericError("polar_decompose: bracketing failed (invalid norm/exponent pairing?)");
        }
        step = 1.0;
        expand = 0;
        while (g(hi) > 0.0) {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (++expand > 200) throw NumericError("polar_decompose: bracketing failed (invalid norm/exponent pairing?)");
        }
        int iters = 0;
        while (hi - lo > 1e-12 && iters < 200) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
            ++iters;
        }
        const double logt = 0.5 * (lo + hi);
        Vec u = power_.exp_scaled(-logt) * x;
        return {std::exp(logt), u};
    }

    const PowerEvaluator& power() const { return power_; }

private:
    void finish_init() {
        bmin_ = min_spectral_real_part(b_);
        bmax_ = max_spectral_real_part(b_);
        w_max_ = 60.0 / (2.0 * bmin_ - 1.0);
        power_ = PowerEvaluator(b_);
    }

    Kind kind_ = Kind::Euclidean;
    Matrix b_;
    Matrix gram_;
    double p_ = 2.0;
    double bmin_ = 1.0, bmax_ = 1.0;
    double w_max_ = 60.0;
    PowerEvaluator power_{Matrix::identity(1)};
};

/// build_jm_norm of the module contract: p = 2 yields the closed-form
/// QuadraticJM variant, other p the quadrature-backed GeneralJM.
inline BNorm build_jm_norm(const Matrix& b, double p) { return BNorm::jurek_mason(b, p); }

inline double norm_eval(const BNorm& n, const Vec& x) { return n.eval(x); }

inline std::pair<double, Vec> polar_decompose(const BNorm& n, const Vec& x) {
    return n.polar_decompose(x);
}

inline Vec project_to_sphere(const BNorm& n, const Vec& direction) {
    return n.project_to_sphere(direction);
}

struct NormConditionReport {
    bool pass = true;
    double worst_violation = 0.0; // max decrease of t -> |t^B x|_B along the grid
    double at_t = 0.0;
    Vec at_x;
};

/// Numerically checks condition (i): t -> |t^B x|_B strictly increasing,
/// over a log-spaced t grid and pseudo-random directions. Diagnostic only.
inline NormConditionReport verify_norm_conditions(const BNorm& n, const Matrix& b,
                                                  int sample_count = 200,
                                                  std::uint64_t seed = 12345) {
    NormConditionReport rep;
    const std::size_t d = b.rows();
    PowerEvaluator pw(b);
    std::uint64_t state = seed ? seed : 1;
    auto next_u = [&]() {
        // xorshift64*, plenty for sampling directions
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return (state * 0x2545F4914F6CDD1DULL >> 11) * 0x1.0p-53;
    };
    const int t_points = 121;
    for (int s = 0; s < sample_count; ++s) {
        Vec x(d);
        double nx = 0.0;
        while (nx < 1e-8) {
            for (std::size_t i = 0; i < d; ++i) x[i] = 2.0 * next_u() - 1.0;
            nx = euclid_norm(x);
        }
        for (std::size_t i = 0; i < d; ++i) x[i] /= nx;
        double prev = -1.0;
        for (int k = 0; k < t_points; ++k) {
            const double logt = -3.0 * std::log(10.0) + k * (6.0 * std::log(10.0) / (t_points - 1));
            const double val = n.eval(pw.exp_scaled(logt) * x);
            if (k > 0 && val <= prev) {
                const double drop = prev - val;
                if (drop > rep.worst_violation) {
                    rep.worst_violation = drop;
                    rep.at_t = std::exp(logt);
                    rep.at_x = x;
                }
                rep.pass = false;
            }
            prev = val;
        }
    }
    return rep;
}

} // namespace opstable
