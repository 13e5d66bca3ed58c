#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "flagattr/projective.hpp"
#include "oracles.hpp"

using namespace flagattr;
using namespace flagattr::numerics;
using namespace flagattr::projective;

namespace {

HermitianSpectrum diag_spectrum(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    return hermitian_eigendecompose(m, 1e-12);
}

ProjectivePoint basis_point(int n, int i) {
    CVec v(n, cdbl{0.0, 0.0});
    v[i] = 1.0;
    return ProjectivePoint::from(std::move(v));
}

ProjectivePoint random_point(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cdbl{g(rng), g(rng)};
    return ProjectivePoint::from(std::move(v));
}

// central finite difference of the height along the projective curve
// [v + s*dir], the independent check for the gradient.
double height_directional_fd(const HermitianSpectrum& phi, const ProjectivePoint& x,
                             const CVec& dir, double h) {
    CVec plus = x.v, minus = x.v;
    vaxpy(plus, cdbl{h, 0.0}, dir);
    vaxpy(minus, cdbl{-h, 0.0}, dir);
    return (height(phi, ProjectivePoint::from(plus)) -
            height(phi, ProjectivePoint::from(minus))) /
           (2.0 * h);
}

}  // namespace

TEST_CASE("canonical representative") {
    const ProjectivePoint x = ProjectivePoint::from({cdbl{0.0, 2.0}, cdbl{0.0, 0.0}});
    CHECK(std::abs(x.v[0] - cdbl{1.0, 0.0}) < 1e-14);
    const ProjectivePoint y = ProjectivePoint::from({cdbl{0.0, -3.0}, cdbl{3.0, 0.0}});
    CHECK(y.v[0].imag() == doctest::Approx(0.0));
    CHECK(y.v[0].real() > 0.0);
    CHECK(points_equal(x, x));
    CHECK_FALSE(points_equal(x, basis_point(2, 1)));
}

TEST_CASE("fixed components read off a diagonal operator") {
    const HermitianSpectrum two = diag_spectrum({3.0, 3.0, 1.0});
    const auto c2 = fixed_components(two);
    REQUIRE(c2.size() == 2);
    CHECK(c2[0].eigenvalue == doctest::Approx(3.0));
    CHECK(c2[0].basis.cols() == 2);
    CHECK(c2[1].basis.cols() == 1);

    const auto cid = fixed_components(diag_spectrum({1.0, 1.0, 1.0}));
    REQUIRE(cid.size() == 1);
    CHECK(cid[0].basis.cols() == 3);

    const auto c3 = fixed_components(diag_spectrum({1.0, 2.0, 5.0}));
    REQUIRE(c3.size() == 3);
    CHECK(c3[0].height == doctest::Approx(-2.5));
    CHECK(c3[1].height == doctest::Approx(-1.0));
    CHECK(c3[2].height == doctest::Approx(-0.5));
    // distinct components are mutually orthogonal
    const ComplexMatrix g = matmul(c3[0].basis.adjoint(), c3[1].basis);
    CHECK(g.max_abs() < 1e-12);
}

TEST_CASE("height values") {
    const HermitianSpectrum phi = diag_spectrum({1.0, 2.0});
    CHECK(height(phi, basis_point(2, 0)) == doctest::Approx(-0.5));
    const ProjectivePoint mid = ProjectivePoint::from({1.0, 1.0});
    CHECK(height(phi, mid) == doctest::Approx(-0.75));
}

TEST_CASE("height strictly decreases along the flow") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const HermitianSpectrum phi =
            hermitian_eigendecompose(oracles::random_hermitian(n, rng), 1e-9);
        const ProjectivePoint x = random_point(n, rng);
        const double h0 = height(phi, x);
        const double h1 = height(phi, flow(phi, 0.1, x));
        CHECK(h1 < h0);
    }
}

TEST_CASE("gradient vanishes on fixed points") {
    std::mt19937_64 rng(555);
    const HermitianSpectrum phi =
        hermitian_eigendecompose(oracles::hermitian_with_spectrum({3.0, 1.0, -2.0}, rng), 1e-9);
    for (int k = 0; k < 3; ++k) {
        CVec e = phi.eigenvectors.col(k);
        const CVec g = gradient_field(phi, ProjectivePoint::from(std::move(e)));
        CHECK(vnorm(g) < 1e-10);
    }
}

TEST_CASE("gradient formula on a hand example") {
    const HermitianSpectrum phi = diag_spectrum({0.0, 1.0});
    const ProjectivePoint x = ProjectivePoint::from({1.0, 1.0});
    const CVec g = gradient_field(phi, x);
    const double c = 1.0 / (2.0 * std::sqrt(2.0));
    CHECK(std::abs(g[0] - cdbl{c, 0.0}) < 1e-12);
    CHECK(std::abs(g[1] - cdbl{-c, 0.0}) < 1e-12);
    // orthogonal to the representative
    CHECK(std::abs(vdot(x.v, g)) < 1e-12);
}

TEST_CASE("gradient matches finite differences of the height") {
    std::mt19937_64 rng(606);
    std::normal_distribution<double> gd(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const HermitianSpectrum phi =
            hermitian_eigendecompose(oracles::random_hermitian(n, rng), 1e-9);
        const ProjectivePoint x = random_point(n, rng);
        // tangent direction: orthogonal to the representative
        CVec dir(n);
        for (int i = 0; i < n; ++i) dir[i] = cdbl{gd(rng), gd(rng)};
        vaxpy(dir, -vdot(x.v, dir), x.v);
        const double dn = vnorm(dir);
        if (dn < 1e-6) continue;
        vscale(dir, 1.0 / dn);

        const double fd = height_directional_fd(phi, x, dir, 1e-5);
        const CVec g = gradient_field(phi, x);
        const double ip = vdot(g, dir).real();
        double lmax = 0.0;
        for (double l : phi.eigenvalues) lmax = std::max(lmax, std::abs(l));
        CHECK(std::abs(fd - ip) <= 1e-6 * std::max({1.0, std::abs(ip), lmax}));
    }
}

TEST_CASE("flow basics") {
    const HermitianSpectrum phi = diag_spectrum({1.0, 2.0});
    const ProjectivePoint x = ProjectivePoint::from({1.0, 1.0});
    CHECK(points_equal(flow(phi, 0.0, x), x, 1e-12));
    CHECK(projective_distance(flow(phi, 40.0, x), basis_point(2, 1)) < 1e-10);
    // large times cannot overflow thanks to the exponent shift
    CHECK(points_equal(flow(phi, 5000.0, x), basis_point(2, 1), 1e-12));
}

TEST_CASE("flow group law") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const HermitianSpectrum phi =
            hermitian_eigendecompose(oracles::random_hermitian(n, rng), 1e-9);
        const ProjectivePoint x = random_point(n, rng);
        const ProjectivePoint a = flow(phi, 0.3, flow(phi, 0.7, x));
        const ProjectivePoint b = flow(phi, 1.0, x);
        CHECK(projective_distance(a, b) < 1e-9);
    }
}

TEST_CASE("limit map on pinned examples") {
    const HermitianSpectrum phi2 = diag_spectrum({1.0, 2.0});
    const ProjectivePoint fixed = basis_point(2, 0);
    const auto [fb, ff] = limit_map(phi2, fixed);
    CHECK(points_equal(fb, fixed, 1e-10));
    CHECK(points_equal(ff, fixed, 1e-10));

    const auto [b1, f1] = limit_map(phi2, ProjectivePoint::from({1.0, 1.0}));
    CHECK(points_equal(b1, basis_point(2, 0), 1e-10));
    CHECK(points_equal(f1, basis_point(2, 1), 1e-10));

    const HermitianSpectrum phi3 = diag_spectrum({1.0, 2.0, 3.0});
    const auto [b2, f2] = limit_map(phi3, ProjectivePoint::from({0.0, 1.0, 1.0}));
    CHECK(points_equal(b2, basis_point(3, 1), 1e-10));
    CHECK(points_equal(f2, basis_point(3, 2), 1e-10));
}

TEST_CASE("limit map agrees with flowing far and snapping") {
    std::mt19937_64 rng(90210);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        std::vector<double> lambda(n);
        for (int i = 0; i < n; ++i) lambda[i] = 2.0 * i + (rng() % 100) / 200.0;
        const HermitianSpectrum phi =
            hermitian_eigendecompose(oracles::hermitian_with_spectrum(lambda, rng), 1e-9);
        const ProjectivePoint x = random_point(n, rng);
        const auto [back, fwd] = limit_map(phi, x);
        CHECK(projective_distance(fwd, flow(phi, 40.0, x)) < 1e-6);
        CHECK(projective_distance(back, flow(phi, -40.0, x)) < 1e-6);
    }
}

TEST_CASE("stable and unstable membership") {
    const HermitianSpectrum phi = diag_spectrum({1.0, 2.0});
    const ProjectivePoint e1 = basis_point(2, 0), e2 = basis_point(2, 1);
    const ProjectivePoint y = ProjectivePoint::from({1.0, 1.0});

    CHECK(stable_membership(phi, e2, e2, Sign::Plus));
    CHECK(stable_membership(phi, e2, e2, Sign::Minus));
    CHECK(stable_membership(phi, e2, y, Sign::Plus));
    CHECK_FALSE(stable_membership(phi, e1, y, Sign::Plus));
    CHECK(stable_membership(phi, e1, y, Sign::Minus));
    CHECK_FALSE(stable_membership(phi, e2, y, Sign::Minus));

    CHECK_THROWS_AS(stable_membership(phi, y, e1, Sign::Plus), NotAFixedPoint);
}

TEST_CASE("limits land in the matching stable sets") {
    std::mt19937_64 rng(31415);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        std::vector<double> lambda(n);
        for (int i = 0; i < n; ++i) lambda[i] = static_cast<double>(i);
        const HermitianSpectrum phi =
            hermitian_eigendecompose(oracles::hermitian_with_spectrum(lambda, rng), 1e-9);
        const ProjectivePoint x = random_point(n, rng);
        const auto [back, fwd] = limit_map(phi, x);
        CHECK(stable_membership(phi, fwd, x, Sign::Plus));
        CHECK(stable_membership(phi, back, x, Sign::Minus));
    }
}

TEST_CASE("component order is anti-isomorphic to the spectrum") {
    const lattice::FinitePoset chain = component_smale_order(diag_spectrum({1.0, 2.0, 5.0}));
    REQUIRE(chain.size() == 3);
    // the component of the largest eigenvalue sits at the bottom
    CHECK(chain.leq_label("nu=5", "nu=2"));
    CHECK(chain.leq_label("nu=2", "nu=1"));
    CHECK_FALSE(chain.leq_label("nu=1", "nu=5"));

    CHECK(component_smale_order(diag_spectrum({1.0, 1.0})).size() == 1);
    CHECK(component_smale_order(diag_spectrum({1.0, 1.0, 2.0})).size() == 2);
}

TEST_CASE("attraction order is the dual chain") {
    const lattice::FinitePoset chain = attraction_order(diag_spectrum({1.0, 2.0, 5.0}));
    CHECK(chain.leq_label("nu=1", "nu=5"));
    CHECK(lattice::enumerate_upper_sets(chain).size() == 4);
}

TEST_CASE("projective attractor pairs") {
    const auto pairs2 = projective_attractor_pairs(diag_spectrum({1.0, 2.0}));
    REQUIRE(pairs2.size() == 2);
    CHECK(pairs2[0].eigenvalue == doctest::Approx(2.0));
    CHECK(pairs2[0].attractor_dim == 1);
    CHECK(pairs2[0].repellor_dim == 1);
    CHECK(std::abs(pairs2[0].attractor_basis(1, 0)) == doctest::Approx(1.0));
    CHECK(pairs2[1].attractor_dim == 2);
    CHECK(pairs2[1].repellor_dim == 0);
    CHECK_FALSE(pairs2[1].repellor_basis.has_value());

    const auto pairs3 = projective_attractor_pairs(diag_spectrum({1.0, 2.0, 3.0}));
    CHECK(pairs3.size() == 3);
    for (const auto& p : pairs3) CHECK(p.attractor_dim + p.repellor_dim == 3);
}

TEST_CASE("forward invariance near an attractor") {
    std::mt19937_64 rng(112358);
    const HermitianSpectrum phi = diag_spectrum({1.0, 2.0, 3.0});
    // points whose component outside V_+^(2) = span(e2, e3) stays below the
    // component threshold: forward limits still land inside the attractor
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> tiny(-3e-9, 3e-9);
    for (int trial = 0; trial < 50; ++trial) {
        CVec v{cdbl{tiny(rng), tiny(rng)}, cdbl{g(rng), g(rng)}, cdbl{g(rng), g(rng)}};
        if (vnorm(v) < 1e-1) continue;
        const auto [back, fwd] = limit_map(phi, ProjectivePoint::from(std::move(v)));
        CHECK(std::abs(fwd.v[0]) < 1e-7);
        CHECK(std::abs(back.v[0]) < 1e-7);
    }
}
