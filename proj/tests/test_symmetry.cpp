#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "opstable/fixtures.hpp"
#include "opstable/symmetry.hpp"

using namespace opstable;

namespace {

const double kPi = std::acos(-1.0);

SpectralMeasure lambda_of(ExampleId id) { return section4_example(id).spec.lambda; }

} // namespace

TEST_CASE("measure_invariant_under") {
    SpectralMeasure four = lambda_of(ExampleId::Ex4_1);
    REQUIRE(measure_invariant_under(four, rotation2(kPi / 2.0)));
    REQUIRE(measure_invariant_under(four, reflection2(0.0)));
    REQUIRE(measure_invariant_under(four, Matrix::identity(2) * -1.0));
    REQUIRE_FALSE(measure_invariant_under(four, rotation2(kPi / 4.0)));

    // skewed two-atom measure has no antipodal atoms
    SpectralMeasure two = lambda_of(ExampleId::Ex4_2);
    REQUIRE_FALSE(measure_invariant_under(two, Matrix::identity(2) * -1.0));

    // equilateral 3-gon: reflection through the vertex axis
    SpectralMeasure gon3 = regular_ngon_measure(3, 1.0 / 3.0);
    REQUIRE(measure_invariant_under(gon3, reflection2(0.0)));
    REQUIRE(measure_invariant_under(gon3, rotation2(2.0 * kPi / 3.0)));
    REQUIRE_FALSE(measure_invariant_under(gon3, Matrix::identity(2) * -1.0));

    // unequal weights break the match even when the support is symmetric
    SpectralMeasure lopsided = SpectralMeasure::discrete(
        {{Vec{1.0, 0.0}, 0.3}, {Vec{-1.0, 0.0}, 0.7}});
    REQUIRE_FALSE(measure_invariant_under(lopsided, Matrix::identity(2) * -1.0));
    REQUIRE(measure_invariant_under(lopsided, reflection2(0.0)));

    // atoms must sit on the euclidean circle
    SpectralMeasure off = SpectralMeasure::discrete({{Vec{1.1, 0.0}, 1.0}});
    REQUIRE_THROWS_AS(measure_invariant_under(off, rotation2(kPi)), ModelError);
    REQUIRE_THROWS_AS(
        measure_invariant_under(SpectralMeasure::uniform_circle(1.0), rotation2(kPi)),
        UnsupportedError);
}

TEST_CASE("rotation_invariance_order") {
    REQUIRE(rotation_invariance_order(lambda_of(ExampleId::Ex4_1)) == 4);
    REQUIRE(rotation_invariance_order(regular_ngon_measure(3)) == 3);
    REQUIRE(rotation_invariance_order(regular_ngon_measure(5)) == 5);
    REQUIRE(rotation_invariance_order(SpectralMeasure::discrete({{Vec{1.0, 0.0}, 1.0}})) == 1);
    REQUIRE(rotation_invariance_order(lambda_of(ExampleId::Ex4_2)) == 1);
    // n_max caps the search
    REQUIRE(rotation_invariance_order(lambda_of(ExampleId::Ex4_1), 3) == 2);
}

TEST_CASE("classify_symmetry on the worked examples") {
    auto classify_fixture = [](ExampleId id) {
        ExampleFixture f = section4_example(id);
        ExponentForm form = classify_jordan(f.spec.b);
        return classify_symmetry(form, f.spec.lambda);
    };

    REQUIRE(classify_fixture(ExampleId::Ex4_1).group.name() == "D2");
    REQUIRE(classify_fixture(ExampleId::Ex4_3).group.name() == "D2"); // uniform measure
    REQUIRE(classify_fixture(ExampleId::Ex4_5).group.name() == "C2"); // nilpotent exponent
    REQUIRE(classify_fixture(ExampleId::Ex4_7).group.name() == "D1"); // mirror about e1 only

    // complex-pair exponent with the four-fold axis measure: the rotation by
    // pi/2 commutes with B2 and preserves the measure, so the group is C4
    REQUIRE(classify_fixture(ExampleId::Ex4_6).group.name() == "C4");
}

TEST_CASE("classify_symmetry on constructed measures") {
    Matrix b1 = Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5});
    Matrix b2{{1.0 / 1.5, 1.0}, {-1.0, 1.0 / 1.5}};
    Matrix b3{{1.0 / 1.5, 0.0}, {1.0, 1.0 / 1.5}};
    ExponentForm f1 = classify_jordan(b1);
    ExponentForm f2 = classify_jordan(b2);
    ExponentForm f3 = classify_jordan(b3);

    SECTION("3-gon under the three Jordan forms") {
        SpectralMeasure gon3 = regular_ngon_measure(3);
        REQUIRE(classify_symmetry(f1, gon3).group.name() == "D1");
        REQUIRE(classify_symmetry(f2, gon3).group.name() == "C3");
        REQUIRE(classify_symmetry(f3, gon3).group.name() == "C1");
    }
    SECTION("regular n-gons under the complex-pair form give C_n") {
        for (int n : {3, 4, 5}) {
            SymmetryReport rep = classify_symmetry(f2, regular_ngon_measure(n));
            REQUIRE(rep.group.kind == SymmetryGroup2D::Kind::Cn);
            REQUIRE(rep.group.n == n);
        }
    }
    SECTION("uniform measure under the complex-pair form gives O2") {
        SymmetryReport rep = classify_symmetry(f2, SpectralMeasure::uniform_circle(1.0));
        REQUIRE(rep.group.kind == SymmetryGroup2D::Kind::O2);
    }
    SECTION("diagonal form subgroup lattice") {
        // mirror about the y-axis only: atoms at +-110 degrees from e1... use
        // vertical-mirror pair e2-symmetric but not e1-symmetric
        auto at_deg = [](double d) { return Vec{std::cos(d * kPi / 180.0), std::sin(d * kPi / 180.0)}; };
        SpectralMeasure d1star = SpectralMeasure::discrete(
            {{at_deg(70.0), 0.5}, {at_deg(110.0), 0.5}, {at_deg(-90.0), 0.3}});
        REQUIRE(classify_symmetry(f1, d1star).group.name() == "D1*");

        SpectralMeasure c2 = SpectralMeasure::discrete(
            {{at_deg(30.0), 0.5}, {at_deg(210.0), 0.5}, {at_deg(100.0), 0.2}, {at_deg(280.0), 0.2}});
        REQUIRE(classify_symmetry(f1, c2).group.name() == "C2");

        SpectralMeasure c1 = SpectralMeasure::discrete(
            {{at_deg(30.0), 0.5}, {at_deg(140.0), 0.4}, {at_deg(255.0), 0.3}});
        REQUIRE(classify_symmetry(f1, c1).group.name() == "C1");
    }
    SECTION("nilpotent form sees only the origin reflection") {
        REQUIRE(classify_symmetry(f3, lambda_of(ExampleId::Ex4_1)).group.name() == "C2");
        REQUIRE(classify_symmetry(f3, lambda_of(ExampleId::Ex4_2)).group.name() == "C1");
    }
    SECTION("scalar form reports multivariable stable") {
        ExponentForm f0 = classify_jordan(Matrix::identity(2) * 0.8);
        SymmetryReport rep = classify_symmetry(f0, lambda_of(ExampleId::Ex4_1));
        REQUIRE(rep.multivariable_stable);
    }
}

TEST_CASE("classified group elements preserve the measure and commute") {
    struct Case {
        Matrix b;
        SpectralMeasure lam;
    };
    std::vector<Case> cases{
        {Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5}), lambda_of(ExampleId::Ex4_1)},
        {Matrix::diagonal({1.0 / 1.5, 1.0 / 1.9}), lambda_of(ExampleId::Ex4_7)},
        {Matrix{{1.0 / 1.5, 1.0}, {-1.0, 1.0 / 1.5}}, lambda_of(ExampleId::Ex4_6)},
        {Matrix{{1.0 / 1.5, 0.0}, {1.0, 1.0 / 1.5}}, lambda_of(ExampleId::Ex4_5)},
        {Matrix{{1.0 / 1.5, 1.0}, {-1.0, 1.0 / 1.5}}, regular_ngon_measure(5)},
    };
    for (const auto& c : cases) {
        ExponentForm form = classify_jordan(c.b);
        SymmetryReport rep = classify_symmetry(form, c.lam);
        REQUIRE(rep.group.finite());
        for (const Matrix& a : rep.group.elements()) {
            REQUIRE(measure_invariant_under(c.lam, a));
            Matrix comm = a * form.canonical() - form.canonical() * a;
            REQUIRE(comm.max_abs() <= 1e-10);
        }
        // admissible-group catalogue per Jordan form
        switch (form.kind) {
        case ExponentKind::DiagonalDistinct: {
            auto n = rep.group.name();
            REQUIRE((n == "C1" || n == "C2" || n == "D1" || n == "D1*" || n == "D2"));
            break;
        }
        case ExponentKind::ComplexPair:
            REQUIRE(rep.group.kind == SymmetryGroup2D::Kind::Cn);
            break;
        case ExponentKind::Nilpotent:
            REQUIRE((rep.group.name() == "C1" || rep.group.name() == "C2"));
            break;
        default: break;
        }
    }
}

TEST_CASE("exponent_set_description") {
    Matrix b1 = Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5});
    ExponentForm f1 = classify_jordan(b1);
    ExponentSetDescription d2 =
        exponent_set_description(f1, {SymmetryGroup2D::Kind::D2, 2});
    REQUIRE(d2.unique);

    ExponentSetDescription c3 =
        exponent_set_description(f1, SymmetryGroup2D::cyclic(3));
    REQUIRE(c3.unique);

    Matrix b2{{0.8, -0.5}, {0.5, 0.8}};
    ExponentForm f2 = classify_jordan(b2);
    ExponentSetDescription o2 =
        exponent_set_description(f2, {SymmetryGroup2D::Kind::O2, 0});
    REQUIRE_FALSE(o2.unique);
    REQUIRE(o2.tangent_basis(0, 1) == -1.0);
    REQUIRE(o2.tangent_basis(1, 0) == 1.0);
}

TEST_CASE("levy_support_orbits") {
    SECTION("eigen direction gives a straight ray") {
        Matrix b = Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5});
        SpectralMeasure single = SpectralMeasure::discrete(
            {{Vec{1.0, 0.0}, 0.5}, {Vec{0.0, 1.0}, 0.5}});
        OrbitSet orbits = levy_support_orbits(b, single, 0.01, 100.0, 64);
        for (const Vec& p : orbits.polylines[0]) REQUIRE(p[1] == 0.0);
        for (const Vec& p : orbits.polylines[1]) REQUIRE(p[0] == 0.0);
    }
    SECTION("complex-pair form spirals: radius t^b, angle offset by log t") {
        Matrix b{{1.0 / 1.5, 1.0}, {-1.0, 1.0 / 1.5}};
        SpectralMeasure single = SpectralMeasure::discrete({{Vec{1.0, 0.0}, 1.0}});
        OrbitSet orbits = levy_support_orbits(b, single, 0.1, 10.0, 33);
        for (std::size_t i = 0; i < orbits.t_values.size(); ++i) {
            const double t = orbits.t_values[i];
            const Vec& p = orbits.polylines[0][i];
            REQUIRE(euclid_norm(p) == Catch::Approx(std::pow(t, 1.0 / 1.5)).epsilon(1e-10));
            const double want_angle = -std::log(t); // orientation of this B2 block
            const double got_angle = std::atan2(p[1], p[0]);
            const double diff = std::remainder(got_angle - want_angle, 2.0 * kPi);
            REQUIRE(std::abs(diff) <= 1e-10);
        }
    }
    SECTION("nilpotent form: vertical ray from e2, curved orbit from e1") {
        Matrix b{{1.0 / 1.5, 0.0}, {1.0, 1.0 / 1.5}};
        SpectralMeasure atoms = SpectralMeasure::discrete(
            {{Vec{1.0, 0.0}, 0.5}, {Vec{0.0, 1.0}, 0.5}});
        OrbitSet orbits = levy_support_orbits(b, atoms, 0.1, 10.0, 17);
        bool e1_curves = false;
        for (std::size_t i = 0; i < orbits.t_values.size(); ++i) {
            if (std::abs(orbits.polylines[0][i][1]) > 1e-12) e1_curves = true;
            REQUIRE(orbits.polylines[1][i][0] == 0.0); // e2 stays vertical
        }
        REQUIRE(e1_curves);
    }
    SECTION("semigroup consistency of orbit points") {
        Matrix b = build_exponent_from_eigen(30.0, -35.0, 1.3, 1.7);
        SpectralMeasure lam = lambda_of(ExampleId::Ex4_4);
        OrbitSet orbits = levy_support_orbits(b, lam, 0.5, 2.0, 9);
        PowerEvaluator pw(b);
        for (std::size_t a = 0; a < orbits.polylines.size(); ++a)
            for (std::size_t i = 0; i < orbits.t_values.size(); ++i)
                for (double s : {0.5, 2.0}) {
                    Vec direct = pw.power_apply(orbits.t_values[i] * s, lam.atoms()[a].u);
                    Vec stepped = mat_power(b, s) * orbits.polylines[a][i];
                    REQUIRE(euclid_norm(direct - stepped) <=
                            1e-9 * (1.0 + euclid_norm(direct)));
                }
    }
    SECTION("degenerate range gives one point per atom, at t = 1 the atom itself") {
        SpectralMeasure lam = lambda_of(ExampleId::Ex4_1);
        Matrix b = Matrix::diagonal({1.0 / 1.8, 1.0 / 1.5});
        OrbitSet one = levy_support_orbits(b, lam, 1.0, 1.0, 16);
        REQUIRE(one.t_values.size() == 1);
        for (std::size_t a = 0; a < lam.atoms().size(); ++a)
            REQUIRE(euclid_norm(one.polylines[a][0] - lam.atoms()[a].u) <= 1e-10);
        REQUIRE_THROWS_AS(
            levy_support_orbits(b, SpectralMeasure::uniform_circle(1.0), 0.1, 1.0, 4),
            UnsupportedError);
    }
}

TEST_CASE("transform_spectral") {
    SECTION("identity basis is the identity transform") {
        ExampleFixture f1 = section4_example(ExampleId::Ex4_1);
        auto [b2, lam2] = transform_spectral(Matrix::identity(2), f1.spec.b, f1.spec.lambda);
        REQUIRE(max_abs_diff(b2, f1.spec.b) <= 1e-14);
        for (std::size_t a = 0; a < lam2.atoms().size(); ++a) {
            REQUIRE(euclid_norm(lam2.atoms()[a].u - f1.spec.lambda.atoms()[a].u) <= 1e-9);
            REQUIRE(lam2.atoms()[a].w == Catch::Approx(f1.spec.lambda.atoms()[a].w).epsilon(1e-10));
        }
    }
    SECTION("orthogonal basis commuting with B keeps the weights") {
        // B2-form exponents commute with rotations; rotated atoms stay unit
        Matrix b{{0.8, -0.6}, {0.6, 0.8}};
        SpectralMeasure lam = regular_ngon_measure(4, 0.25);
        Matrix p = rotation2(0.37);
        auto [b2, lam2] = transform_spectral(p, b, lam);
        REQUIRE(max_abs_diff(b2, b) <= 1e-12);
        for (std::size_t a = 0; a < lam2.atoms().size(); ++a)
            REQUIRE(lam2.atoms()[a].w == Catch::Approx(0.25).margin(1e-10));
    }
    SECTION("tail-mass oracle in the Jordan basis of the fracture model") {
        ExampleFixture f4 = section4_example(ExampleId::Ex4_4);
        ExponentForm form = classify_jordan(f4.spec.b);
        auto [bj, lamj] = transform_spectral(form.basis, f4.spec.b, f4.spec.lambda);
        REQUIRE(max_abs_diff(bj, form.canonical()) <= 1e-10);

        BNorm norm_j = BNorm::euclidean(bj);
        PowerEvaluator pw(f4.spec.b);
        Matrix p_inv = form.basis_inv;
        for (std::size_t a = 0; a < f4.spec.lambda.atoms().size(); ++a) {
            const auto& atom = f4.spec.lambda.atoms()[a];
            // independent route: bisection on s -> new-coordinates radial
            // coordinate of P^{-1} s^B u, crossing 1 at s0; the transformed
            // weight must equal w / s0 (the nu tail mass beyond new radius 1)
            auto radial = [&](double s) {
                Vec y = p_inv * pw.power_apply(s, atom.u);
                return norm_j.polar_decompose(y).first;
            };
            double lo = 1e-6, hi = 1e6;
            REQUIRE(radial(lo) < 1.0);
            REQUIRE(radial(hi) > 1.0);
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = std::sqrt(lo * hi);
                (radial(mid) < 1.0 ? lo : hi) = mid;
            }
            const double s0 = 0.5 * (lo + hi);
            REQUIRE(lamj.atoms()[a].w == Catch::Approx(atom.w / s0).margin(1e-8));
        }
    }
    SECTION("euclidean atoms in the new basis") {
        ExampleFixture f9 = section4_example(ExampleId::Ex4_9);
        ExponentForm form = classify_jordan(f9.spec.b);
        auto [bj, lamj] = transform_spectral(form.basis, f9.spec.b, f9.spec.lambda);
        for (const auto& atom : lamj.atoms())
            REQUIRE(euclid_norm(atom.u) == Catch::Approx(1.0).margin(1e-9));
    }
}
