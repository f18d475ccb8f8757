#pragma once

#include <string>

#include "opstable/simulate.hpp"

namespace opstable {

/// Built-in model fixtures, one per worked example of the simulation section.
enum class ExampleId {
    Ex4_1, // diagonal exponent, four symmetric axis atoms
    Ex4_2, // same exponent, skewed two-atom measure, centered to mean zero
    Ex4_3, // same exponent, uniform spectral measure
    Ex4_4, // fracture-flow model: eigenvectors at 30 / -35 degrees
    Ex4_5, // nilpotent exponent
    Ex4_6, // complex-pair exponent
    Ex4_7, // plume model with mean velocity (10, 0)
    Ex4_8, // fracture-network model: eigenvectors at +-45 degrees
    Ex4_9, // non-Jordan exponent with the quadratic adapted norm
};

struct ExampleFixture {
    ExampleId id;
    std::string name;
    ProcessSpec spec;
    double epsilon = 0.001;
    double horizon = 1.0;
    double dt = 0.001;
};

inline const char* example_name(ExampleId id) {
    switch (id) {
    case ExampleId::Ex4_1: return "ex4_1";
    case ExampleId::Ex4_2: return "ex4_2";
    case ExampleId::Ex4_3: return "ex4_3";
    case ExampleId::Ex4_4: return "ex4_4";
    case ExampleId::Ex4_5: return "ex4_5";
    case ExampleId::Ex4_6: return "ex4_6";
    case ExampleId::Ex4_7: return "ex4_7";
    case ExampleId::Ex4_8: return "ex4_8";
    case ExampleId::Ex4_9: return "ex4_9";
    }
    return "?";
}

inline ExampleId parse_example_id(const std::string& s) {
    for (ExampleId id : {ExampleId::Ex4_1, ExampleId::Ex4_2, ExampleId::Ex4_3, ExampleId::Ex4_4,
                         ExampleId::Ex4_5, ExampleId::Ex4_6, ExampleId::Ex4_7, ExampleId::Ex4_8,
                         ExampleId::Ex4_9})
        if (s == example_name(id)) return id;
    throw ConfigError("unknown example id: " + s + " (expected ex4_1 ... ex4_9)");
}

namespace detail {

inline Vec unit_at_deg(double deg) {
    const double rad = deg * std::acos(-1.0) / 180.0;
    return Vec{std::cos(rad), std::sin(rad)};
}

inline std::vector<SpectralAtom> four_axis_atoms() {
    return {{Vec{1.0, 0.0}, 0.25},
            {Vec{-1.0, 0.0}, 0.25},
            {Vec{0.0, 1.0}, 0.25},
            {Vec{0.0, -1.0}, 0.25}};
}

} // namespace detail

/// Equal weights at the vertices of a regular n-gon inscribed in the unit
/// circle with one vertex at (1, 0); total mass = n * weight.
inline SpectralMeasure regular_ngon_measure(int n, double weight = 1.0) {
    if (n < 1) throw ModelError("regular_ngon_measure: n must be >= 1");
    std::vector<SpectralAtom> atoms;
    for (int k = 0; k < n; ++k)
        atoms.push_back({detail::unit_at_deg(360.0 * k / n), weight});
    return SpectralMeasure::discrete(std::move(atoms));
}

inline ExampleFixture section4_example(ExampleId id) {
    ExampleFixture f;
    f.id = id;
    f.name = example_name(id);

    const Matrix b_diag = Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5});

    switch (id) {
    case ExampleId::Ex4_1: {
        f.spec.b = b_diag;
        f.spec.norm = BNorm::euclidean(b_diag);
        f.spec.lambda = SpectralMeasure::discrete(detail::four_axis_atoms());
        f.spec.drift_mode = DriftMode::None;
        break;
    }
    case ExampleId::Ex4_2: {
        f.spec.b = b_diag;
        f.spec.norm = BNorm::euclidean(b_diag);
        f.spec.lambda = SpectralMeasure::discrete(
            {{Vec{1.0, 0.0}, 0.5}, {Vec{0.0, 1.0}, 0.5}});
        f.spec.drift_mode = DriftMode::MeanZero;
        break;
    }
    case ExampleId::Ex4_3: {
        f.spec.b = b_diag;
        f.spec.norm = BNorm::euclidean(b_diag);
        f.spec.lambda = SpectralMeasure::uniform_circle(1.0);
        f.spec.drift_mode = DriftMode::None;
        break;
    }
    case ExampleId::Ex4_4: {
        // exponent not in Jordan form, but B + B^T is positive definite so
        // the Euclidean norm is still exponent-adapted
        f.spec.b = build_exponent_from_eigen(30.0, -35.0, 1.3, 1.7);
        f.spec.norm = BNorm::euclidean(f.spec.b);
        f.spec.lambda = SpectralMeasure::discrete(
            {{detail::unit_at_deg(30.0), 0.4}, {detail::unit_at_deg(-35.0), 0.6}});
        f.spec.drift_mode = DriftMode::MeanZero;
        break;
    }
    case ExampleId::Ex4_5: {
        Matrix b{{1.0 / 1.5, 0.0}, {1.0, 1.0 / 1.5}};
        f.spec.b = b;
        f.spec.norm = BNorm::euclidean(b);
        f.spec.lambda = SpectralMeasure::discrete(detail::four_axis_atoms());
        f.spec.drift_mode = DriftMode::None;
        break;
    }
    case ExampleId::Ex4_6: {
        Matrix b{{1.0 / 1.5, 1.0}, {-1.0, 1.0 / 1.5}};
        f.spec.b = b;
        f.spec.norm = BNorm::euclidean(b);
        f.spec.lambda = SpectralMeasure::discrete(detail::four_axis_atoms());
        f.spec.drift_mode = DriftMode::None;
        break;
    }
    case ExampleId::Ex4_7: {
        Matrix b = Matrix::diagonal({1.0 / 1.5, 1.0 / 1.9});
        f.spec.b = b;
        f.spec.norm = BNorm::euclidean(b);
        f.spec.lambda = SpectralMeasure::discrete({{detail::unit_at_deg(0.0), 0.3},
                                                   {detail::unit_at_deg(6.0), 0.2},
                                                   {detail::unit_at_deg(-6.0), 0.2},
                                                   {detail::unit_at_deg(12.0), 0.1},
                                                   {detail::unit_at_deg(-12.0), 0.1},
                                                   {detail::unit_at_deg(18.0), 0.05},
                                                   {detail::unit_at_deg(-18.0), 0.05}});
        f.spec.drift_mode = DriftMode::MeanVelocity;
        f.spec.velocity = Vec{10.0, 0.0};
        break;
    }
    case ExampleId::Ex4_8: {
        f.spec.b = build_exponent_from_eigen(45.0, -45.0, 1.1, 1.2);
        f.spec.norm = BNorm::euclidean(f.spec.b); // B symmetric positive definite
        f.spec.lambda = SpectralMeasure::discrete({{detail::unit_at_deg(45.0), 0.4},
                                                   {detail::unit_at_deg(-45.0), 0.4},
                                                   {Vec{0.0, 1.0}, 0.2}});
        f.spec.drift_mode = DriftMode::MeanZero;
        break;
    }
    case ExampleId::Ex4_9: {
        Matrix b{{1.0 / 1.8, 0.5}, {0.0, 1.0 / 1.5}};
        f.spec.b = b;
        f.spec.norm = build_jm_norm(b, 2.0);
        f.spec.lambda = SpectralMeasure::discrete(
            {{f.spec.norm.project_to_sphere(Vec{1.0, 0.0}), 0.25},
             {f.spec.norm.project_to_sphere(Vec{-1.0, 0.0}), 0.25},
             {f.spec.norm.project_to_sphere(Vec{0.0, 1.0}), 0.25},
             {f.spec.norm.project_to_sphere(Vec{0.0, -1.0}), 0.25}});
        f.spec.drift_mode = DriftMode::None;
        break;
    }
    }
    f.spec.validate();
    return f;
}

} // namespace opstable
