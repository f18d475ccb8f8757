#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "opstable/model.hpp"
#include "opstable/rng.hpp"

namespace opstable {

/// Uniform output grid 0, dt, 2dt, ..., T. dt must divide T within 1e-12.
struct PathGrid {
    double horizon = 1.0;
    double dt = 0.001;

    PathGrid() = default;
    PathGrid(double t_horizon, double step) : horizon(t_horizon), dt(step) {
        if (!(horizon > 0.0) || !(dt > 0.0)) throw ModelError("PathGrid: T and dt must be positive");
        const double n = std::round(horizon / dt);
        if (std::abs(n * dt - horizon) > 1e-12 * std::max(1.0, horizon))
            throw ModelError("PathGrid: dt does not divide T");
        steps_ = static_cast<std::size_t>(n);
    }

    std::size_t steps() const { return steps_; }
    std::size_t size() const { return steps_ + 1; }
    double time(std::size_t i) const { return i == steps_ ? horizon : i * dt; }

    std::vector<double> times() const {
        std::vector<double> t(size());
        for (std::size_t i = 0; i < size(); ++i) t[i] = time(i);
        return t;
    }

private:
    std::size_t steps_ = 1000;
};

struct JumpRecord {
    double tau = 0.0; // arrival time in (0, T]
    Vec jump;
};

/// One simulated path: states on the grid (cadlag sampling: the state at t
/// includes exactly the jumps with tau <= t) plus the jump record.
struct SamplePath {
    PathGrid grid;
    std::vector<Vec> states;
    std::vector<JumpRecord> jumps;
};

struct SimConfig {
    double epsilon = 0.001;
    std::uint64_t seed = 1;
    std::size_t n_paths = 1;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ModelError("SimConfig: epsilon must lie in (0, 1]");
        if (n_paths < 1) throw ModelError("SimConfig: n_paths must be >= 1");
    }
};

/// Poisson point process arrivals Gamma_1 < Gamma_2 < ... <= threshold,
/// built as cumulative sums of unit-rate exponentials.
inline std::vector<double> draw_poisson_arrivals(double threshold, Rng& rng) {
    if (!(threshold > 0.0)) throw ModelError("draw_poisson_arrivals: threshold must be positive");
    std::vector<double> gammas;
    double g = rng.exponential();
    while (g <= threshold) {
        gammas.push_back(g);
        g += rng.exponential();
    }
    return gammas;
}

/// One draw from lambda / lambda(S_B).
inline Vec sample_spectral(const SpectralMeasure& lam, Rng& rng) {
    if (lam.kind() == SpectralMeasure::Kind::UniformCircle) {
        const double a = rng.uniform(0.0, 6.283185307179586476925286766559);
        return Vec{std::cos(a), std::sin(a)};
    }
    const double target = rng.uniform01() * lam.total_mass();
    double acc = 0.0;
    for (const auto& atom : lam.atoms()) {
        acc += atom.w;
        if (target < acc) return atom.u;
    }
    return lam.atoms().back().u;
}

namespace detail {

/// Jumps of the compound Poisson part over [0, T], sorted by arrival time.
inline std::vector<JumpRecord> draw_jumps(const ProcessSpec& spec, double eps,
                                          double t_horizon, Rng& rng) {
    const double mass = spec.lambda.total_mass();
    const double threshold = t_horizon * mass / eps;
    PowerEvaluator pw(spec.b);
    std::vector<double> gammas = draw_poisson_arrivals(threshold, rng);
    std::vector<JumpRecord> jumps;
    jumps.reserve(gammas.size());
    for (double g : gammas) {
        JumpRecord j;
        j.tau = rng.uniform(0.0, t_horizon);
        Vec v = sample_spectral(spec.lambda, rng);
        const double radial = g / (t_horizon * mass); // in (0, 1/eps]
        j.jump = pw.power_apply(1.0 / radial, v);     // (Gamma/(T mass))^{-B} v
        jumps.push_back(std::move(j));
    }
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const JumpRecord& a, const JumpRecord& b) { return a.tau < b.tau; });
    return jumps;
}

/// Cumulative jump sums evaluated at sorted sample times (tau <= t, tau > 0).
inline std::vector<Vec> accumulate_jumps(const std::vector<JumpRecord>& jumps,
                                         const std::vector<double>& times, std::size_t d) {
    std::vector<Vec> out(times.size(), Vec(d, 0.0));
    Vec acc(d, 0.0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        while (next < jumps.size() && jumps[next].tau <= times[i]) {
            if (jumps[next].tau > 0.0)
                for (std::size_t k = 0; k < d; ++k) acc[k] += jumps[next].jump[k];
            ++next;
        }
        out[i] = acc;
    }
    return out;
}

} // namespace detail

/// Compound Poisson large-jump process N^eps sampled on the grid.
inline SamplePath shot_noise_path(const ProcessSpec& spec, double eps, const PathGrid& grid,
                                  Rng& rng) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ModelError("shot_noise_path: eps must lie in (0, 1]");
    SamplePath p;
    p.grid = grid;
    p.jumps = detail::draw_jumps(spec, eps, grid.horizon, rng);
    p.states = detail::accumulate_jumps(p.jumps, grid.times(), spec.dimension());
    return p;
}

/// A_eps W(t) on the grid: cumulative N(0, dt I) increments premultiplied by
/// a_eps_factor.
inline SamplePath gaussian_path(const Matrix& a_eps_factor, const PathGrid& grid, Rng& rng) {
    const std::size_t d = a_eps_factor.rows();
    SamplePath p;
    p.grid = grid;
    p.states.assign(grid.size(), Vec(d, 0.0));
    Vec w(d, 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double sd = std::sqrt(grid.time(i) - grid.time(i - 1));
        for (std::size_t k = 0; k < d; ++k) w[k] += sd * rng.normal();
        p.states[i] = a_eps_factor * w;
    }
    return p;
}

namespace detail {

struct DriftSpec {
    Vec origin;
    Vec slope; // added as slope * t
};

inline DriftSpec drift_for(const ProcessSpec& spec, double eps) {
    DriftSpec d;
    d.origin = spec.origin();
    d.slope = Vec(spec.dimension(), 0.0);
    switch (spec.drift_mode) {
    case DriftMode::None: break;
    case DriftMode::MeanZero: {
        Vec c = compensator(spec, eps);
        d.slope = -1.0 * c;
        break;
    }
    case DriftMode::MeanVelocity: {
        Vec c = compensator(spec, eps);
        d.slope = spec.velocity - c;
        break;
    }
    }
    return d;
}

/// States of Z_eps at arbitrary sorted times in [0, T] plus the jump record.
/// The three independent randomness sources are drawn from split substreams
/// so that components can be reproduced in isolation.
inline std::pair<std::vector<Vec>, std::vector<JumpRecord>>
simulate_at_times(const ProcessSpec& spec, double eps, double t_horizon,
                  const std::vector<double>& times, const Matrix& a_eps_factor, Rng& rng) {
    const std::size_t d = spec.dimension();
    Rng jump_rng = rng.split();
    Rng gauss_rng = rng.split();

    DriftSpec drift = drift_for(spec, eps);
    std::vector<JumpRecord> jumps = draw_jumps(spec, eps, t_horizon, jump_rng);
    std::vector<Vec> states = accumulate_jumps(jumps, times, d);

    Vec w(d, 0.0);
    double prev_t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t > prev_t) {
            const double sd = std::sqrt(t - prev_t);
            for (std::size_t k = 0; k < d; ++k) w[k] += sd * gauss_rng.normal();
            prev_t = t;
        }
        Vec g = a_eps_factor * w;
        for (std::size_t k = 0; k < d; ++k)
            states[i][k] += drift.origin[k] + drift.slope[k] * t + g[k];
    }
    return {std::move(states), std::move(jumps)};
}

} // namespace detail

/// Z_eps(t) = drift(t) + A_eps W(t) + N^eps(t) on the grid, per Eq-style
/// composition: drift is -c_eps t (MeanZero), (v - c_eps) t (MeanVelocity) or
/// the x0 offset alone (None).
inline SamplePath simulate_path(const ProcessSpec& spec, const SimConfig& config,
                                const PathGrid& grid, Rng& rng) {
    config.validate();
    spec.validate();
    DerivedQuantities dq = derive_quantities(spec, config.epsilon);
    SamplePath p;
    p.grid = grid;
    auto [states, jumps] =
        detail::simulate_at_times(spec, config.epsilon, grid.horizon, grid.times(), dq.a_eps, rng);
    p.states = std::move(states);
    p.jumps = std::move(jumps);
    return p;
}

/// Path k of a batch with the stated determinism contract; derived
/// quantities are passed in so batch drivers can hoist them.
inline SamplePath simulate_batch_member(const ProcessSpec& spec, const DerivedQuantities& dq,
                                        double eps, const PathGrid& grid, std::uint64_t seed,
                                        std::size_t k) {
    Rng rng(substream_seed(seed, k));
    SamplePath p;
    p.grid = grid;
    auto [states, jumps] =
        detail::simulate_at_times(spec, eps, grid.horizon, grid.times(), dq.a_eps, rng);
    p.states = std::move(states);
    p.jumps = std::move(jumps);
    return p;
}

/// Deterministic batch: path k is generated from substream_seed(seed, k),
/// independent of execution order.
inline std::vector<SamplePath> simulate_batch(const ProcessSpec& spec, const SimConfig& config,
                                              const PathGrid& grid) {
    config.validate();
    spec.validate();
    DerivedQuantities dq = derive_quantities(spec, config.epsilon);
    std::vector<SamplePath> out(config.n_paths);
    for (std::size_t k = 0; k < config.n_paths; ++k)
        out[k] = simulate_batch_member(spec, dq, config.epsilon, grid, config.seed, k);
    return out;
}

/// The rotating self-similar (non-Levy) process of the concluding remarks:
/// X(t) = t^beta (cos(Theta + log t), sin(Theta + log t)), X(0) = 0, with
/// Theta uniform on [0, 2 pi).
inline SamplePath simulate_rotating_oss(double beta, const PathGrid& grid, Rng& rng) {
    if (!(beta > 0.0)) throw ModelError("simulate_rotating_oss: beta must be positive");
    const double theta = rng.uniform(0.0, 6.283185307179586476925286766559);
    SamplePath p;
    p.grid = grid;
    p.states.assign(grid.size(), Vec(2, 0.0));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid.time(i);
        const double r = std::pow(t, beta);
        p.states[i] = Vec{r * std::cos(theta + std::log(t)), r * std::sin(theta + std::log(t))};
    }
    return p;
}

/// Deterministic time change Y(t) = X(t^p): the inner generator is sampled
/// on the warped grid {t_i^p}; inner jump times map back as tau^{1/p}.
/// The generator receives the warped sample times and the inner horizon.
using InnerPathGenerator =
    std::function<std::pair<std::vector<Vec>, std::vector<JumpRecord>>(
        const std::vector<double>& times, double horizon)>;

inline SamplePath time_change(const InnerPathGenerator& inner, double p, const PathGrid& grid) {
    if (!(p > 0.0)) throw ModelError("time_change: p must be positive");
    std::vector<double> warped = grid.times();
    for (double& t : warped) t = std::pow(t, p);
    const double inner_horizon = std::pow(grid.horizon, p);
    auto [states, jumps] = inner(warped, inner_horizon);
    SamplePath out;
    out.grid = grid;
    out.states = std::move(states);
    out.jumps = std::move(jumps);
    for (auto& j : out.jumps) j.tau = std::pow(j.tau, 1.0 / p);
    return out;
}

/// Adapter: an operator stable spec as the inner process of a time change.
inline InnerPathGenerator make_spec_generator(const ProcessSpec& spec, double eps,
                                              std::uint64_t seed) {
    spec.validate();
    return [spec, eps, seed](const std::vector<double>& times, double horizon) {
        Rng rng(seed);
        DerivedQuantities dq = derive_quantities(spec, eps);
        return detail::simulate_at_times(spec, eps, horizon, times, dq.a_eps, rng);
    };
}

/// Hill estimator of the tail index from the k largest order statistics.
inline double hill_tail_index(std::vector<double> samples, std::size_t k) {
    if (k < 1 || k + 1 > samples.size())
        throw ModelError("hill_tail_index: need 1 <= k < sample count");
    std::sort(samples.begin(), samples.end(), std::greater<double>());
    const double xk = samples[k]; // (k+1)-th largest, the threshold
    if (!(xk > 0.0)) throw ModelError("hill_tail_index: threshold order statistic not positive");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(samples[i] / xk);
    if (!(acc > 0.0)) throw ModelError("hill_tail_index: degenerate sample");
    return static_cast<double>(k) / acc;
}

} // namespace opstable
