#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "indefla/dtn.hpp"
#include "indefla/geometry.hpp"

using namespace indefla;

namespace {

double ed(const ScaledValue& v) { return v.to_double(); }

void check_entries(const ModeMatrix& got, double e11, double e12, double e21, double e22,
                   double tol = 1e-12) {
    CHECK(ed(got.e11) == doctest::Approx(e11).epsilon(tol));
    CHECK(ed(got.e12) == doctest::Approx(e12).epsilon(tol));
    CHECK(ed(got.e21) == doctest::Approx(e21).epsilon(tol));
    CHECK(ed(got.e22) == doctest::Approx(e22).epsilon(tol));
}

// relative check r_i * M12 == r_e * M21 that tolerates huge scaled entries
void check_weighted_symmetry(const AnnularGeometry& g, const ModeMatrix& mat) {
    const ScaledValue lhs = ScaledValue::from_double(g.r_i) * mat.e12;
    const ScaledValue rhs = ScaledValue::from_double(g.r_e) * mat.e21;
    const ScaledValue diff = abs(lhs - rhs);
    const ScaledValue scale = abs(lhs) + abs(rhs);
    if (scale.is_zero()) return;  // both identically zero
    CHECK((diff / scale).to_double() < 1e-12);
}

}  // namespace

TEST_CASE("hand-derived matrices for the unit annulus pair (1, 2, 4), m = 1") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 4.0);
    check_entries(interior_dtn_mode(g, 1), 5.0 / 3.0, -4.0 / 3.0, -2.0 / 3.0, 5.0 / 6.0);
    check_entries(exterior_dtn_mode(g, 1), 1.0, 0.0, 0.0, 5.0 / 6.0);
    check_entries(difference_mode(g, 1.0, 1), 2.0 / 3.0, -4.0 / 3.0, -2.0 / 3.0, 0.0);
    check_entries(invert_difference_mode(g, 1.0, 1), 0.0, -3.0 / 2.0, -3.0 / 4.0, -3.0 / 4.0);

    // hand determinant of the difference block
    const ScaledValue det = mode_matrix_det(difference_mode(g, 1.0, 1));
    CHECK(ed(det) == doctest::Approx(-8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("m = 0 logarithmic forms") {
    const double e = std::exp(1.0);
    // ln(r_e / r_i) = 1
    const AnnularGeometry g1 = make_geometry(1.0, e, 2.0 * e * e);
    const ModeMatrix b0 = interior_dtn_mode(g1, 0);
    check_entries(b0, 1.0, -1.0, -1.0 / e, 1.0 / e);

    // ln(R / r_e) = 1 with r_e = 2
    const AnnularGeometry g2 = make_geometry(1.0, 2.0, 2.0 * e);
    const ModeMatrix c0 = exterior_dtn_mode(g2, 0);
    check_entries(c0, 0.0, 0.0, 0.0, 0.5);
}

TEST_CASE("zero contrast removes the exterior part") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 4.0);
    // mu enters difference_mode linearly; mu = 0 is outside make_contrast's
    // domain but difference_mode itself is pure algebra over mu
    for (int m : {0, 1, 2, 7}) {
        const ModeMatrix b = interior_dtn_mode(g, m);
        const ModeMatrix d = difference_mode(g, 0.0, m);
        CHECK(ed(d.e11) == doctest::Approx(ed(b.e11)).epsilon(1e-14));
        CHECK(ed(d.e12) == doctest::Approx(ed(b.e12)).epsilon(1e-14));
        CHECK(ed(d.e21) == doctest::Approx(ed(b.e21)).epsilon(1e-14));
        CHECK(ed(d.e22) == doctest::Approx(ed(b.e22)).epsilon(1e-14));
    }
}

TEST_CASE("structural invariants across random geometries and modes") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> len(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double r_i = len(rng);
        const double r_e = r_i * (1.0 + len(rng));
        const double R = r_e * (1.0 + len(rng));
        const AnnularGeometry g = make_geometry(r_i, r_e, R);
        for (int m : {0, 1, 2, 3, 5, 8, 13, 21, 34, 60}) {
            const ModeMatrix b = interior_dtn_mode(g, m);
            const ModeMatrix c = exterior_dtn_mode(g, m);
            const ModeMatrix d = difference_mode(g, 1.0, m);

            check_weighted_symmetry(g, b);
            check_weighted_symmetry(g, c);
            check_weighted_symmetry(g, d);

            // exterior map is diagonal
            CHECK(c.e12.is_zero());
            CHECK(c.e21.is_zero());

            // interior signs for m != 0: positive diagonal, negative off-diagonal
            if (m != 0) {
                CHECK(ed(b.e11) > 0.0);
                CHECK(ed(b.e22) > 0.0);
                CHECK(ed(b.e12) < 0.0);
                CHECK(ed(b.e21) < 0.0);
                CHECK(ed(c.e11) == doctest::Approx(m / g.r_i).epsilon(1e-12));
            }

            // the critical difference block stays invertible
            CHECK(!mode_matrix_det(d).is_zero());
        }
    }
}

namespace {

// max entrywise |(inv * d)_ij - I_ij| normalized by the magnitudes of the
// summed terms, evaluated in scaled arithmetic so it stays meaningful when
// the inverse entries exceed double range
double identity_defect(const ModeMatrix& inv, const ModeMatrix& d) {
    auto entry = [](const ScaledValue& x, const ScaledValue& y, const ScaledValue& u,
                    const ScaledValue& v, double target) {
        const ScaledValue sum = x * y + u * v;
        const ScaledValue scale = abs(x * y) + abs(u * v) + ScaledValue::one();
        return (abs(sum - ScaledValue::from_double(target)) / scale).to_double();
    };
    double worst = 0.0;
    worst = std::max(worst, entry(inv.e11, d.e11, inv.e12, d.e21, 1.0));
    worst = std::max(worst, entry(inv.e11, d.e12, inv.e12, d.e22, 0.0));
    worst = std::max(worst, entry(inv.e21, d.e11, inv.e22, d.e21, 0.0));
    worst = std::max(worst, entry(inv.e21, d.e12, inv.e22, d.e22, 1.0));
    return worst;
}

}  // namespace

TEST_CASE("inverse times difference is the identity, across contrasts and huge modes") {
    std::mt19937 rng(1111);
    std::uniform_real_distribution<double> len(0.3, 2.0);
    for (double mu : {0.5, 1.0, 2.0, 3.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            const double r_i = len(rng);
            const double r_e = r_i * (1.0 + len(rng));
            const double R = r_e * (1.0 + len(rng));
            const AnnularGeometry g = make_geometry(r_i, r_e, R);
            for (int m : {0, 1, 4, 17, 60, 400, 5000}) {
                const ModeMatrix d = difference_mode(g, mu, m);
                const ModeMatrix inv = invert_difference_mode(g, mu, m);
                CHECK(identity_defect(inv, d) < 1e-12);
            }
        }
    }
}

TEST_CASE("mode sign does not matter and the workspace memoizes per |m|") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 8.0);
    DtnWorkspace ws(g, 1.0);
    CHECK(ws.mu() == 1.0);
    const ModeMatrix dp = ws.difference(9);
    const ModeMatrix dn = ws.difference(-9);
    CHECK(ed(dp.e11) == ed(dn.e11));
    CHECK(ed(dp.e12) == ed(dn.e12));
    const ModeMatrix ip = ws.inverse_difference(9);
    const ModeMatrix in = ws.inverse_difference(-9);
    CHECK(ed(ip.e21) == ed(in.e21));

    const ModeMatrix direct = invert_difference_mode(g, 1.0, 9);
    CHECK(ed(ip.e12) == doctest::Approx(ed(direct.e12)).epsilon(1e-15));
}

TEST_CASE("lambda block weights") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 8.0);
    const LambdaBlock l0 = lambda_block(g, 0);
    CHECK(l0.w_i == doctest::Approx(1.0));
    CHECK(l0.w_e == doctest::Approx(1.0));
    const LambdaBlock l7 = lambda_block(g, 7);
    CHECK(l7.w_i == doctest::Approx(std::sqrt(49.0 + 1.0)));
    CHECK(l7.w_e == doctest::Approx(std::sqrt(49.0 / 4.0 + 1.0)));
    CHECK(l7.w_i >= l7.w_e);
    // w -> |m| / r as m grows
    const LambdaBlock big = lambda_block(g, 4000);
    CHECK(big.w_i == doctest::Approx(4000.0).epsilon(1e-6));
    CHECK(big.w_e == doctest::Approx(2000.0).epsilon(1e-6));
}

TEST_CASE("theta is the half difference scaled by the lambda weights") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 4.0);
    for (double mu : {0.5, 1.0, 3.0}) {
        for (int m : {0, 1, 2, 9}) {
            const ModeMatrix d = difference_mode(g, mu, m);
            const LambdaBlock l = lambda_block(g, m);
            const ModeMatrix t = theta_mode(g, mu, m);
            CHECK(ed(t.e11) == doctest::Approx(0.5 * ed(d.e11) * l.w_i).epsilon(1e-14));
            CHECK(ed(t.e12) == doctest::Approx(0.5 * ed(d.e12) * l.w_e).epsilon(1e-14));
            CHECK(ed(t.e21) == doctest::Approx(0.5 * ed(d.e21) * l.w_i).epsilon(1e-14));
            CHECK(ed(t.e22) == doctest::Approx(0.5 * ed(d.e22) * l.w_e).epsilon(1e-14));
        }
    }
}

TEST_CASE("psi at m = 0 equals theta at m = 0 and is measure-weighted symmetric") {
    const AnnularGeometry g = make_geometry(1.0, 2.0, 4.0);
    const ModeMatrix p0 = psi_mode(g, 1.0, 0);
    const ModeMatrix t0 = theta_mode(g, 1.0, 0);
    CHECK(ed(p0.e11) == doctest::Approx(ed(t0.e11)).epsilon(1e-14));
    CHECK(ed(p0.e12) == doctest::Approx(ed(t0.e12)).epsilon(1e-14));
    CHECK(ed(p0.e21) == doctest::Approx(ed(t0.e21)).epsilon(1e-14));
    CHECK(ed(p0.e22) == doctest::Approx(ed(t0.e22)).epsilon(1e-14));

    std::mt19937 rng(3333);
    std::uniform_real_distribution<double> len(0.3, 2.5);
    for (int trial = 0; trial < 10; ++trial) {
        const double r_i = len(rng);
        const double r_e = r_i * (1.0 + len(rng));
        const double R = r_e * (1.0 + len(rng));
        const AnnularGeometry g2 = make_geometry(r_i, r_e, R);
        for (int m : {0, 1, 5, 23}) {
            const ModeMatrix p = psi_mode(g2, 1.7, m);
            // diag(r_i, r_e) * Psi symmetric: r_i p12 == r_e p21
            const double lhs = r_i * ed(p.e12);
            const double rhs = r_e * ed(p.e21);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}
