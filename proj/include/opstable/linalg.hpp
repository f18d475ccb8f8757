#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "opstable/matrix.hpp"

namespace opstable {

/// exp(M) by scaling and squaring with a truncated series.
/// Componentwise relative accuracy ~1e-12 for ||M|| <= 50.
inline Matrix mat_exp(const Matrix& m) {
    if (!m.square()) throw Error("mat_exp: matrix not square");
    if (!m.all_finite()) throw Error("mat_exp: non-finite entries");
    const std::size_t n = m.rows();

    int s = 0;
    double norm = m.norm_inf();
    while (norm > 0.5) {
        norm *= 0.5;
        ++s;
    }
    Matrix t = m * std::ldexp(1.0, -s);

    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * t;
        term *= 1.0 / k;
        result += term;
        if (term.max_abs() <= 1e-18 * std::max(1.0, result.max_abs())) break;
    }
    for (int i = 0; i < s; ++i) result = result * result;
    return result;
}

/// t^B = exp(B log t), defined for t > 0.
inline Matrix mat_power(const Matrix& b, double t) {
    if (!(t > 0.0)) throw Error("mat_power: t must be positive");
    return mat_exp(b * std::log(t));
}

// ---- symmetric eigendecomposition (cyclic Jacobi) ----

struct SymEigen {
    Vec values;     // ascending
    Matrix vectors; // columns are orthonormal eigenvectors
};

inline SymEigen sym_eigen(const Matrix& s) {
    if (!s.square()) throw Error("sym_eigen: matrix not square");
    const std::size_t n = s.rows();
    const double scale = std::max(1.0, s.max_abs());
    if (max_abs_diff(s, s.transpose()) > 1e-10 * scale)
        throw Error("sym_eigen: matrix not symmetric");

    Matrix a = s;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= 1e-32 * scale * scale) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    SymEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    // sort ascending, permuting eigenvector columns along
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return out.values[x] < out.values[y]; });
    Vec vals(n);
    Matrix vecs(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        vals[c] = out.values[idx[c]];
        for (std::size_t r = 0; r < n; ++r) vecs(r, c) = v(r, idx[c]);
    }
    out.values = std::move(vals);
    out.vectors = std::move(vecs);
    return out;
}

/// Symmetric PSD square root: A = V sqrt(L) V^T with A A = S.
/// Rejects non-symmetric input and eigenvalues below -1e-10.
inline Matrix sym_sqrt(const Matrix& s) {
    SymEigen eg = sym_eigen(s); // checks symmetry
    const std::size_t n = s.rows();
    const double scale = std::max(1.0, s.max_abs());
    Matrix a(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = eg.values[k];
        if (lam < -1e-10 * scale)
            throw Error("sym_sqrt: matrix has a negative eigenvalue");
        lam = std::max(lam, 0.0);
        const double r = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) += r * eg.vectors(i, k) * eg.vectors(j, k);
    }
    // enforce exact symmetry against roundoff
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = m;
        }
    return a;
}

/// Solves A P + P A^T = Q for symmetric P via the d^2 x d^2 Kronecker system.
/// Requires the system nonsingular (no pair of eigenvalues of A summing to 0).
inline Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    if (!a.square() || !q.square() || a.rows() != q.rows())
        throw Error("solve_lyapunov: dimension mismatch");
    const std::size_t d = a.rows();
    Matrix k(d * d, d * d);
    Vec rhs(d * d);
    auto flat = [d](std::size_t i, std::size_t j) { return i * d + j; };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            rhs[flat(i, j)] = q(i, j);
            for (std::size_t c = 0; c < d; ++c) {
                k(flat(i, j), flat(c, j)) += a(i, c); // (A P)_{ij}
                k(flat(i, j), flat(i, c)) += a(j, c); // (P A^T)_{ij}
            }
        }
    Vec x = solve_linear(k, rhs);
    Matrix p(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) = x[flat(i, j)];
    // symmetrize and check the residual
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double m = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = p(j, i) = m;
        }
    Matrix resid = a * p + p * a.transpose() - q;
    if (resid.max_abs() > 1e-10 * std::max(1.0, q.max_abs()))
        throw NumericError("solve_lyapunov: residual too large (eigenvalue condition violated?)");
    return p;
}

// ---- eigenvalues of small general matrices ----

/// All eigenvalues of a square matrix. Closed form for d<=2,
/// Durand-Kerner on the characteristic polynomial for 3<=d<=6.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& b) {
    if (!b.square()) throw Error("eigenvalues: matrix not square");
    const std::size_t n = b.rows();
    if (n == 0) return {};
    if (n == 1) return {std::complex<double>(b(0, 0), 0.0)};
    if (n == 2) {
        const double tr = b(0, 0) + b(1, 1);
        const double det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            return {std::complex<double>((tr - r) / 2.0, 0.0),
                    std::complex<double>((tr + r) / 2.0, 0.0)};
        }
        const double im = std::sqrt(-disc) / 2.0;
        return {std::complex<double>(tr / 2.0, -im), std::complex<double>(tr / 2.0, im)};
    }
    if (n > 6) throw UnsupportedError("eigenvalues: dimension > 6 not supported");

    // characteristic polynomial coefficients by Faddeev-LeVerrier
    std::vector<double> c(n + 1, 0.0); // p(x) = x^n + c[1] x^{n-1} + ... + c[n]
    Matrix mk = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = b * mk;
        double ck = -mk.trace() / static_cast<double>(k);
        c[k] = ck;
        mk += Matrix::identity(n) * ck;
    }
    // Durand-Kerner iteration
    std::vector<std::complex<double>> roots(n);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        acc *= seed;
        roots[i] = acc;
    }
    auto poly = [&](std::complex<double> x) {
        std::complex<double> v(1.0, 0.0);
        for (std::size_t k = 1; k <= n; ++k) v = v * x + c[k];
        return v;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> num = poly(roots[i]);
            std::complex<double> den(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= roots[i] - roots[j];
            std::complex<double> delta = num / den;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14 * std::max(1.0, b.max_abs())) break;
    }
    return roots;
}

/// b* of the exponent: the smallest real part among eigenvalues.
inline double min_spectral_real_part(const Matrix& b) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(b)) m = std::min(m, ev.real());
    return m;
}

inline double max_spectral_real_part(const Matrix& b) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(b)) m = std::max(m, ev.real());
    return m;
}

// ---- Jordan-type classification of 2x2 exponents ----

enum class ExponentKind { Scalar, DiagonalDistinct, ComplexPair, Nilpotent };

/// Jordan classification of a valid 2x2 exponent. The canonical forms are
///   Scalar            b I
///   DiagonalDistinct  diag(b1, b2), b1 != b2
///   ComplexPair       [[b, -c], [c, b]], c > 0
///   Nilpotent         [[b, 0], [1, b]]
/// with all real parts > 1/2. `basis` maps standard coordinates to Jordan
/// coordinates: P^{-1} B P equals the canonical matrix.
struct ExponentForm {
    ExponentKind kind = ExponentKind::Scalar;
    double b = 0.0;  // Scalar / ComplexPair / Nilpotent eigenvalue; b1 for DiagonalDistinct
    double b2 = 0.0; // second eigenvalue (DiagonalDistinct only)
    double c = 0.0;  // imaginary part (ComplexPair only), canonicalized positive
    Matrix basis;    // P
    Matrix basis_inv;

    Matrix canonical() const {
        switch (kind) {
        case ExponentKind::Scalar: return {{b, 0.0}, {0.0, b}};
        case ExponentKind::DiagonalDistinct: return {{b, 0.0}, {0.0, b2}};
        case ExponentKind::ComplexPair: return {{b, -c}, {c, b}};
        case ExponentKind::Nilpotent: return {{b, 0.0}, {1.0, b}};
        }
        throw Error("ExponentForm: bad kind");
    }

    std::string name() const {
        switch (kind) {
        case ExponentKind::Scalar: return "scalar";
        case ExponentKind::DiagonalDistinct: return "diagonal-distinct";
        case ExponentKind::ComplexPair: return "complex-pair";
        case ExponentKind::Nilpotent: return "nilpotent";
        }
        return "?";
    }
};

/// Throws ModelError unless every eigenvalue real part exceeds 1/2
/// (the no-Gaussian-component assumption).
inline void require_valid_exponent(const Matrix& b) {
    if (!b.square()) throw Error("exponent must be square");
    if (!b.all_finite()) throw Error("exponent has non-finite entries");
    if (min_spectral_real_part(b) <= 0.5)
        throw ModelError("invalid exponent: an eigenvalue has real part <= 1/2");
}

inline ExponentForm classify_jordan(const Matrix& b) {
    if (!b.square() || b.rows() != 2) throw Error("classify_jordan: expects a 2x2 matrix");
    if (std::abs(determinant(b)) < 1e-14 * std::max(1.0, b.max_abs()))
        throw Error("classify_jordan: matrix is singular");
    require_valid_exponent(b);

    const double tr = b(0, 0) + b(1, 1);
    const double det = determinant(b);
    const double disc = tr * tr - 4.0 * det;
    const double scale2 = std::max(1.0, b.max_abs() * b.max_abs());

    ExponentForm f;
    if (disc < -1e-9 * scale2) {
        // complex pair b0 +- i c0: put P = [p, (B - b0 I) p / c0], then
        // P^{-1} B P = [[b0, -c0], [c0, b0]] with c0 > 0 by construction.
        const double b0 = tr / 2.0;
        const double c0 = std::sqrt(-disc) / 2.0;
        Matrix m = b - Matrix::identity(2) * b0;
        Vec p1{1.0, 0.0};
        Vec p2 = m * p1;
        p2[0] /= c0;
        p2[1] /= c0;
        f.kind = ExponentKind::ComplexPair;
        f.b = b0;
        f.c = c0;
        f.basis = {{p1[0], p2[0]}, {p1[1], p2[1]}};
    } else if (disc > 1e-9 * scale2) {
        const double r = std::sqrt(disc);
        const double lam_lo = (tr - r) / 2.0;
        const double lam_hi = (tr + r) / 2.0;
        auto eigvec = [&](double lam) {
            // kernel of B - lam I, pick the numerically larger of two candidate rows
            Vec v1{b(0, 1), lam - b(0, 0)};
            Vec v2{lam - b(1, 1), b(1, 0)};
            Vec v = euclid_norm(v1) >= euclid_norm(v2) ? v1 : v2;
            double n = euclid_norm(v);
            if (n == 0.0) { v = {1.0, 0.0}; n = 1.0; } // B already diagonal with this lam
            v[0] /= n;
            v[1] /= n;
            // fix sign: largest-magnitude component positive
            if ((std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1]) < 0.0) { v[0] = -v[0]; v[1] = -v[1]; }
            return v;
        };
        Vec u = eigvec(lam_lo);
        Vec w = eigvec(lam_hi);
        // first column = eigenvector most aligned with e1, so that a diagonal
        // input classifies with P = I and b1 = B(0,0)
        double lam1 = lam_lo, lam2 = lam_hi;
        if (std::abs(w[0]) > std::abs(u[0])) {
            std::swap(u, w);
            std::swap(lam1, lam2);
        }
        f.kind = ExponentKind::DiagonalDistinct;
        f.b = lam1;
        f.b2 = lam2;
        f.basis = {{u[0], w[0]}, {u[1], w[1]}};
    } else {
        const double b0 = tr / 2.0;
        Matrix nil = b - Matrix::identity(2) * b0;
        if (nil.max_abs() <= 1e-9 * std::sqrt(scale2)) {
            f.kind = ExponentKind::Scalar;
            f.b = b0;
            f.basis = Matrix::identity(2);
        } else {
            // generalized eigenvector chain: p2 = N p1 with N p2 = 0
            Vec e1{1.0, 0.0}, e2{0.0, 1.0};
            Vec n1 = nil * e1;
            Vec n2 = nil * e2;
            Vec p1 = euclid_norm(n1) >= euclid_norm(n2) ? e1 : e2;
            Vec p2 = nil * p1;
            f.kind = ExponentKind::Nilpotent;
            f.b = b0;
            f.basis = {{p1[0], p2[0]}, {p1[1], p2[1]}};
        }
    }
    f.basis_inv = inverse(f.basis);

    Matrix check = f.basis_inv * b * f.basis - f.canonical();
    if (check.max_abs() > 1e-10 * std::max(1.0, b.max_abs()))
        throw NumericError("classify_jordan: canonical-form residual too large");
    return f;
}

/// B = P diag(1/alpha1, 1/alpha2) P^{-1} with P columns the unit vectors at
/// the given angles (degrees).
inline Matrix build_exponent_from_eigen(double angle1_deg, double angle2_deg,
                                        double alpha1, double alpha2) {
    if (!(alpha1 > 0.0 && alpha1 < 2.0) || !(alpha2 > 0.0 && alpha2 < 2.0))
        throw ModelError("build_exponent_from_eigen: stable indices must lie in (0, 2)");
    const double deg = std::acos(-1.0) / 180.0;
    const double a1 = angle1_deg * deg, a2 = angle2_deg * deg;
    Matrix p{{std::cos(a1), std::cos(a2)}, {std::sin(a1), std::sin(a2)}};
    if (std::abs(determinant(p)) < 1e-9)
        throw ModelError("build_exponent_from_eigen: eigenvector angles are parallel");
    Matrix d = Matrix::diagonal({1.0 / alpha1, 1.0 / alpha2});
    return p * d * inverse(p);
}

// ---- fast evaluation of t^B for repeated use ----

/// Precomputes the spectral structure of a (2x2) matrix so that t^B and
/// t^B v can be evaluated in closed form (Lagrange-Sylvester interpolation).
/// Falls back to mat_exp for other dimensions or near-degenerate spectra.
class PowerEvaluator {
public:
    explicit PowerEvaluator(const Matrix& b) : b_(b) {
        if (!b.square()) throw Error("PowerEvaluator: matrix not square");
        const std::size_t n = b.rows();
        if (n != 2) {
            mode_ = Mode::General;
            return;
        }
        const double tr = b(0, 0) + b(1, 1);
        const double det = determinant(b);
        const double disc = tr * tr - 4.0 * det;
        const double scale2 = std::max(1.0, b.max_abs() * b.max_abs());
        if (disc > 1e-8 * scale2) {
            mode_ = Mode::RealDistinct;
            const double r = std::sqrt(disc);
            lam1_ = (tr - r) / 2.0;
            lam2_ = (tr + r) / 2.0;
            // spectral projectors: t^B = t^l1 P1 + t^l2 P2
            proj1_ = (b - Matrix::identity(2) * lam2_) * (1.0 / (lam1_ - lam2_));
            proj2_ = (b - Matrix::identity(2) * lam1_) * (1.0 / (lam2_ - lam1_));
        } else if (disc < -1e-8 * scale2) {
            mode_ = Mode::ComplexPair;
            lam1_ = tr / 2.0;
            lam2_ = std::sqrt(-disc) / 2.0; // imaginary part
            proj1_ = (b - Matrix::identity(2) * lam1_) * (1.0 / lam2_);
        } else if (std::abs(disc) < 1e-12 * scale2) {
            mode_ = Mode::Repeated;
            lam1_ = tr / 2.0;
            proj1_ = b - Matrix::identity(2) * lam1_; // nilpotent (possibly zero)
        } else {
            mode_ = Mode::General; // borderline spectrum, use the safe path
        }
    }

    /// exp(B s); t^B is power_log(log t).
    Matrix exp_scaled(double s) const {
        switch (mode_) {
        case Mode::RealDistinct:
            return proj1_ * std::exp(lam1_ * s) + proj2_ * std::exp(lam2_ * s);
        case Mode::ComplexPair: {
            const double g = std::exp(lam1_ * s);
            const double cth = std::cos(lam2_ * s), sth = std::sin(lam2_ * s);
            return Matrix::identity(2) * (g * cth) + proj1_ * (g * sth);
        }
        case Mode::Repeated: {
            const double g = std::exp(lam1_ * s);
            return Matrix::identity(2) * g + proj1_ * (g * s);
        }
        case Mode::General: return mat_exp(b_ * s);
        }
        throw Error("PowerEvaluator: bad mode");
    }

    Matrix power(double t) const {
        if (!(t > 0.0)) throw Error("PowerEvaluator: t must be positive");
        return exp_scaled(std::log(t));
    }

    /// t^B v without forming the matrix (2x2 fast path).
    Vec power_apply(double t, const Vec& v) const {
        if (!(t > 0.0)) throw Error("PowerEvaluator: t must be positive");
        const double s = std::log(t);
        switch (mode_) {
        case Mode::RealDistinct: {
            const double g1 = std::exp(lam1_ * s), g2 = std::exp(lam2_ * s);
            return Vec{g1 * (proj1_(0, 0) * v[0] + proj1_(0, 1) * v[1]) +
                           g2 * (proj2_(0, 0) * v[0] + proj2_(0, 1) * v[1]),
                       g1 * (proj1_(1, 0) * v[0] + proj1_(1, 1) * v[1]) +
                           g2 * (proj2_(1, 0) * v[0] + proj2_(1, 1) * v[1])};
        }
        case Mode::ComplexPair: {
            const double g = std::exp(lam1_ * s);
            const double cth = std::cos(lam2_ * s), sth = std::sin(lam2_ * s);
            return Vec{g * (cth * v[0] + sth * (proj1_(0, 0) * v[0] + proj1_(0, 1) * v[1])),
                       g * (cth * v[1] + sth * (proj1_(1, 0) * v[0] + proj1_(1, 1) * v[1]))};
        }
        case Mode::Repeated: {
            const double g = std::exp(lam1_ * s);
            return Vec{g * (v[0] + s * (proj1_(0, 0) * v[0] + proj1_(0, 1) * v[1])),
                       g * (v[1] + s * (proj1_(1, 0) * v[0] + proj1_(1, 1) * v[1]))};
        }
        case Mode::General: return exp_scaled(s) * v;
        }
        throw Error("PowerEvaluator: bad mode");
    }

private:
    enum class Mode { RealDistinct, ComplexPair, Repeated, General };
    Mode mode_ = Mode::General;
    Matrix b_;
    double lam1_ = 0.0, lam2_ = 0.0;
    Matrix proj1_, proj2_;
};

} // namespace opstable
