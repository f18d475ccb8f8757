#pragma once

#include <complex>
#include <optional>

#include "opstable/spectral.hpp"

namespace opstable {

enum class DriftMode { None, MeanZero, MeanVelocity };

/// Full model description of an operator stable Levy process: exponent,
/// adapted norm, spectral measure, and how the simulated process is centered.
struct ProcessSpec {
    Matrix b;             // exponent
    BNorm norm;           // exponent-adapted norm carrying S_B
    SpectralMeasure lambda = SpectralMeasure::uniform_circle(1.0);
    DriftMode drift_mode = DriftMode::None;
    Vec velocity;         // MeanVelocity only
    Vec x0;               // starting point, defaults to the origin

    std::size_t dimension() const { return b.rows(); }

    void validate() const {
        require_valid_exponent(b);
        if (lambda.kind() == SpectralMeasure::Kind::UniformCircle) {
            if (b.rows() != 2)
                throw ModelError("uniform spectral measure requires d = 2");
            if (norm.kind() != BNorm::Kind::Euclidean)
                throw ModelError("uniform spectral measure requires the Euclidean norm");
        } else if (lambda.dimension() != b.rows()) {
            throw ModelError("spectral measure dimension does not match the exponent");
        }
        lambda.validate_on_sphere(norm);
        if (!fullness_check(b, lambda))
            throw ModelError("spectral measure violates fullness: lin_B(supp lambda) != R^d");
        if (drift_mode != DriftMode::None && max_spectral_real_part(b) >= 1.0)
            throw MeanUndefinedError("centering requested but the mean is undefined "
                                     "(an eigenvalue real part is >= 1)");
        if (drift_mode == DriftMode::MeanVelocity && velocity.size() != b.rows())
            throw ModelError("velocity dimension does not match the exponent");
        if (!x0.empty() && x0.size() != b.rows())
            throw ModelError("x0 dimension does not match the exponent");
    }

    Vec origin() const { return x0.empty() ? Vec(b.rows(), 0.0) : x0; }
};

/// Sigma_1 = int_0^1 s^B Lambda (s^B)^T s^-2 ds, in closed form as the
/// solution of (B - I/2) S + S (B - I/2)^T = Lambda.
inline Matrix sigma1(const Matrix& b, const Matrix& lambda_mat) {
    if (min_spectral_real_part(b) <= 0.5)
        throw ModelError("sigma1: exponent eigenvalue real part <= 1/2, integral diverges");
    Matrix shifted = b - Matrix::identity(b.rows()) * 0.5;
    return solve_lyapunov(shifted, lambda_mat);
}

/// Scaling identity: Sigma_eps = eps^{-1} eps^B Sigma_1 (eps^B)^T.
inline Matrix sigma_eps(const Matrix& sigma_1, const Matrix& b, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ModelError("sigma_eps: eps must lie in (0, 1]");
    Matrix e = mat_power(b, eps);
    return (e * sigma_1 * e.transpose()) * (1.0 / eps);
}

/// Direct quadrature of int_0^eps s^B Lambda (s^B)^T s^-2 ds (cross-check
/// route for the closed form). Substituting s = e^{-w} and absorbing the
/// leftover e^w into the exponent gives the overflow-free integrand
/// e^{-(B-I/2)w} Lambda e^{-(B-I/2)^T w}, decaying like e^{-(2b*-1)w}.
inline Matrix sigma_eps_quadrature(const Matrix& b, const Matrix& lambda_mat, double eps,
                                   double rel_tol = 1e-12) {
    const std::size_t d = b.rows();
    const double bstar = min_spectral_real_part(b);
    if (bstar <= 0.5) throw ModelError("sigma_eps_quadrature: integral diverges");
    PowerEvaluator pw(b - Matrix::identity(d) * 0.5);
    const double w_lo = -std::log(eps);
    const double w_hi = w_lo + 60.0 / (2.0 * bstar - 1.0);
    Matrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            auto f = [&](double w) {
                Matrix m = pw.exp_scaled(-w);
                double acc = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    for (std::size_t l = 0; l < d; ++l)
                        acc += m(i, k) * lambda_mat(k, l) * m(j, l);
                return acc;
            };
            // absolute floor keeps identically-zero entries from recursing
            const double v = adaptive_simpson(f, w_lo, w_hi, rel_tol,
                                              1e-13 * std::max(1.0, lambda_mat.max_abs()));
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

/// A_eps with A A^T = Sigma_eps: the symmetric PSD square root.
inline Matrix gaussian_factor(const Matrix& sigma_eps_mat) { return sym_sqrt(sigma_eps_mat); }

/// E[U^{-B}] = int_0^1 u^{-B} du = (I - B)^{-1}; needs real parts < 1.
inline Matrix expected_U_negB(const Matrix& b) {
    if (max_spectral_real_part(b) >= 1.0)
        throw MeanUndefinedError("expected_U_negB: eigenvalue real part >= 1");
    return inverse(Matrix::identity(b.rows()) - b);
}

/// E[N^eps(T)] = T lambda(S_B) eps^{B-I} (I-B)^{-1} E[v]. Stored positive;
/// the simulator subtracts it. Zero exactly for symmetric measures.
inline Vec shot_noise_mean(const ProcessSpec& spec, double eps, double t_horizon) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ModelError("shot_noise_mean: eps must lie in (0, 1]");
    if (max_spectral_real_part(spec.b) >= 1.0)
        throw MeanUndefinedError("shot_noise_mean: the mean is undefined "
                                 "(an eigenvalue real part is >= 1)");
    Vec wsum = weighted_mean_direction(spec.lambda); // = mass * E[v]
    Matrix eps_pow = mat_power(spec.b - Matrix::identity(spec.b.rows()), eps);
    Matrix u_mean = expected_U_negB(spec.b);
    return t_horizon * (eps_pow * (u_mean * wsum));
}

/// Compensator c_eps = E[N^eps(T)]/T.
inline Vec compensator(const ProcessSpec& spec, double eps) {
    return shot_noise_mean(spec, eps, 1.0);
}

/// Everything Section-4 style output needs for a given spec and eps.
struct DerivedQuantities {
    double total_mass = 0.0;
    Vec mean_dir;     // E[v]
    Matrix lambda_mat; // second moment
    Matrix sigma_1;
    double eps = 0.0;
    Matrix sigma_e;
    Matrix a_eps;
    std::optional<Vec> comp; // compensator, absent when the mean is undefined
};

inline DerivedQuantities derive_quantities(const ProcessSpec& spec, double eps) {
    DerivedQuantities d;
    d.total_mass = spec.lambda.total_mass();
    d.mean_dir = (1.0 / d.total_mass) * weighted_mean_direction(spec.lambda);
    d.lambda_mat = second_moment(spec.lambda);
    d.sigma_1 = sigma1(spec.b, d.lambda_mat);
    d.eps = eps;
    d.sigma_e = sigma_eps(d.sigma_1, spec.b, eps);
    d.a_eps = gaussian_factor(d.sigma_e);
    if (max_spectral_real_part(spec.b) < 1.0) d.comp = compensator(spec, eps);
    return d;
}

namespace detail {

/// Radial coordinate threshold: s such that s^B u crosses the unit ball used
/// by the truncation indicator. Atoms lie on S_B, so the B-norm radial
/// coordinate of s^B u is exactly s and the crossing is at s = 1.
inline double truncation_threshold() { return 1.0; }

} // namespace detail

/// Drift a_eps of the truncated-series parametrization:
/// a_eps = x0 + int_{|x|>1} x nu_eps(dx) - int_{|x|<=1} x nu^eps(dx),
/// with nu_eps the discarded (s < eps) and nu^eps the retained (s >= eps)
/// parts, indicators resolved at B-norm radial coordinate 1. Per-atom 1D
/// radial quadrature.
inline Vec generic_drift(const ProcessSpec& spec, double eps) {
    if (!spec.lambda.is_discrete())
        throw UnsupportedError("generic_drift: discrete spectral measure required");
    if (!(eps > 0.0 && eps <= 1.0)) throw ModelError("generic_drift: eps must lie in (0, 1]");
    const std::size_t d = spec.dimension();
    const double s_star = detail::truncation_threshold();
    PowerEvaluator pw(spec.b);
    Vec a = spec.origin();
    // small-jump part lives on s in (0, eps) with eps <= s_star = 1, so the
    // |x| > 1 integral over nu_eps vanishes; the retained-part integral runs
    // over s in [eps, s_star].
    for (const auto& atom : spec.lambda.atoms()) {
        for (std::size_t i = 0; i < d; ++i) {
            auto f = [&](double s) { return pw.power_apply(s, atom.u)[i] / (s * s); };
            double v = eps < s_star ? adaptive_simpson(f, eps, s_star, 1e-10, 1e-14) : 0.0;
            a[i] -= atom.w * v;
        }
    }
    return a;
}

/// Log characteristic function of X(1) in the Levy-Khintchine form, radial
/// integrals by adaptive quadrature per atom. Discrete measures only.
inline std::complex<double> log_cf(const ProcessSpec& spec, const Vec& y) {
    if (!spec.lambda.is_discrete())
        throw UnsupportedError("log_cf: discrete spectral measure required");
    const std::size_t d = spec.dimension();
    if (y.size() != d) throw Error("log_cf: dimension mismatch");
    const std::complex<double> i_unit(0.0, 1.0);
    std::complex<double> out = i_unit * dot(y, spec.origin());
    const double ny = euclid_norm(y);
    if (ny == 0.0) return out;

    const double bstar = min_spectral_real_part(spec.b);
    PowerEvaluator pw(spec.b);
    PowerEvaluator pw_shifted(spec.b - Matrix::identity(d) * 0.5);
    const double s_star = detail::truncation_threshold();

    for (const auto& atom : spec.lambda.atoms()) {
        auto theta = [&](double s) { return dot(y, pw.power_apply(s, atom.u)); };

        // inner part: (e^{i th} - 1 - i th) s^-2 over (0, s_star], s = e^{-w}.
        // Deep in the tail th underflows while e^w overflows, so evaluate
        // through th~ = th e^{w/2} (the shifted exponent) and the Taylor form
        // (e^{i th} - 1 - i th) e^w = -th~^2/2 - i th~^3 e^{-w/2}/6 + O(th^4 e^w).
        const double w_hi = 60.0 / (2.0 * bstar - 1.0) + std::log(1.0 / s_star);
        auto inner = [&](double w) -> std::complex<double> {
            const double th_shifted = dot(y, pw_shifted.exp_scaled(-w) * atom.u);
            const double half_w = std::exp(-0.5 * w);
            const double th = th_shifted * half_w;
            if (std::abs(th) > 1e-6)
                return (std::exp(i_unit * th) - 1.0 - i_unit * th) * std::exp(w);
            return {-0.5 * th_shifted * th_shifted +
                        th_shifted * th_shifted * th * th / 24.0,
                    -th_shifted * th_shifted * th_shifted * half_w / 6.0};
        };
        std::complex<double> v = adaptive_simpson(inner, -std::log(s_star), w_hi, 1e-9, 1e-13);

        // outer part: (e^{i th} - 1) s^-2 from s_star to the oscillation
        // cut-off where |s^B u| >= 1e4 / |y|; integrate in v = log s so the
        // amplitude decays as e^{-v} and the coarse error scale stays sane
        double s_max = s_star;
        const double target = 1e4 / ny;
        while (euclid_norm(pw.power_apply(s_max, atom.u)) < target && s_max < 1e300)
            s_max *= 2.0;
        auto outer_f = [&](double logs) {
            const double s = std::exp(logs);
            return (std::exp(i_unit * theta(s)) - 1.0) / s;
        };
        // forced minimum depth: the phase theta reaches ~1e4, and coarse
        // Simpson panels alias whole oscillations
        v += adaptive_simpson(outer_f, std::log(s_star), std::log(s_max), 1e-9, 1e-12, 48, 13);
        out += atom.w * v;
    }
    return out;
}

} // namespace opstable
