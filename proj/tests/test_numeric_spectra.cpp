#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fractal_spectra/level_ops.hpp"
#include "fractal_spectra/numeric_spectra.hpp"

using namespace fractal_spectra;

namespace {

DMatrix dmat(std::initializer_list<std::initializer_list<double>> rows) {
    DMatrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

// Midpoint rule on a cosine-graded mesh: x = a + (b-a)(1-cos tau)/2 turns
// inverse-square-root endpoint singularities into a bounded integrand.
double integrate(const std::function<double(double)>& f, double a, double b) {
    const long m = 20000;
    double sum = 0.0;
    for (long k = 0; k < m; ++k) {
        const double tau = (k + 0.5) * M_PI / m;
        const double x = a + (b - a) * (1.0 - std::cos(tau)) / 2.0;
        sum += f(x) * (b - a) / 2.0 * std::sin(tau);
    }
    return sum * M_PI / m;
}

}  // namespace

TEST_CASE("eigen_symmetric on hand-checked matrices") {
    const EigenResult r = eigen_symmetric_d(dmat({{3, 1}, {1, 3}}));
    REQUIRE(r.values.size() == 2);
    CHECK_THAT(r.values[0], Catch::Matchers::WithinAbs(2.0, 1e-12));
    CHECK_THAT(r.values[1], Catch::Matchers::WithinAbs(4.0, 1e-12));

    const EigenResult id5 = eigen_symmetric(LevelMatrix::identity(5));
    for (double v : id5.values) CHECK_THAT(v, Catch::Matchers::WithinAbs(1.0, 1e-14));

    const CompareReport rep = compare_spectra(spectrum_Gamma(2), eigen_symmetric(hecke_operator(Group::Gamma, 2)), 1e-9);
    CHECK(rep.pass);

    CHECK_THROWS_AS(eigen_symmetric_d(dmat({{0, 1}, {2, 0}})), input_error);
}

TEST_CASE("eigen_symmetric contract: residual, orthonormality, determinism") {
    const LevelMatrix h = hecke_operator(Group::GammaBar, 3);
    const EigenResult r1 = eigen_symmetric(h);
    const EigenResult r2 = eigen_symmetric(h);
    CHECK(r1.values == r2.values);  // bitwise deterministic
    CHECK(r1.residual_bound <= 1e-9 * 4.0);

    const std::size_t n = r1.vectors.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += r1.vectors(k, i) * r1.vectors(k, j);
            CHECK_THAT(dot, Catch::Matchers::WithinAbs(i == j ? 1.0 : 0.0, 1e-9));
        }
}

TEST_CASE("eigenvalues are basis-independent under permutation conjugation") {
    std::mt19937_64 rng(4242);
    for (Group g : {Group::G, Group::Gamma}) {
        const LevelMatrix h = hecke_operator(g, 2);
        const EigenResult base = eigen_symmetric(h);
        const std::size_t n = h.rows();
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            LevelMatrix conj(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) conj(perm[i], perm[j]) = h(i, j);
            const EigenResult r = eigen_symmetric(conj);
            for (std::size_t i = 0; i < n; ++i)
                CHECK_THAT(r.values[i], Catch::Matchers::WithinAbs(base.values[i], 1e-9));
        }
    }
}

TEST_CASE("compare_spectra pairs expansions and detects drift") {
    const SpectrumMulti s = spectrum_G(4);
    const EigenResult er = eigen_symmetric(hecke_operator(Group::G, 4));
    CHECK(compare_spectra(s, er, 1e-9).pass);

    EigenResult bad = er;
    bad.values[3] += 1e-4;
    CHECK_FALSE(compare_spectra(s, bad, 1e-9).pass);

    EigenResult wrong_dim = er;
    wrong_dim.values.pop_back();
    CHECK_THROWS_AS(compare_spectra(s, wrong_dim, 1e-9), input_error);
}

TEST_CASE("empiric_histogram masses") {
    const DiscreteMeasure h = empiric_histogram(spectrum_G(3), 32);
    CHECK_THAT(h.total, Catch::Matchers::WithinAbs(1.0, 1e-10));
    for (const auto& [center, mass] : h.atoms) {
        const bool in_support = (center > -2.1 && center < 0.1) || (center > 1.9 && center < 4.1);
        CHECK(in_support);  // G's level-3 spectrum lives in [-2,0] u [2,4]
    }

    const DiscreteMeasure hg = empiric_histogram(spectrum_Gamma(4), 64);
    double at_one = 0.0;
    for (const auto& [center, mass] : hg.atoms)
        if (std::fabs(center - 1.0) <= 0.0626) at_one += mass;
    CHECK(at_one >= static_cast<double>(pow3(3) + 1) / pow3(4));

    CHECK_THROWS_AS(empiric_histogram(spectrum_G(2), 0), input_error);
}

TEST_CASE("limit densities normalize and match closed-form CDFs") {
    CHECK_THAT(density_Gtilde(2.0), Catch::Matchers::WithinAbs(1.0 / (2.0 * M_PI), 1e-15));
    CHECK_THROWS_AS(density_Gtilde(4.5), input_error);
    CHECK_THROWS_AS(density_G(1.0), input_error);  // the gap (0,2) is outside the support

    CHECK_THAT(integrate(&density_Gtilde, 0.0, 4.0), Catch::Matchers::WithinAbs(1.0, 1e-6));
    const double massG = integrate(&density_G, -2.0, 0.0) + integrate(&density_G, 2.0, 4.0);
    CHECK_THAT(massG, Catch::Matchers::WithinAbs(1.0, 1e-6));

    // CDFs differentiate back to the densities
    for (double x : {0.3, 1.1, 2.7, 3.6}) {
        const double num = (cdf_Gtilde(x + 1e-6) - cdf_Gtilde(x - 1e-6)) / 2e-6;
        CHECK_THAT(num, Catch::Matchers::WithinAbs(density_Gtilde(x), 1e-6));
    }
    for (double x : {-1.5, -0.4, 2.3, 3.8}) {
        const double num = (cdf_G(x + 1e-6) - cdf_G(x - 1e-6)) / 2e-6;
        CHECK_THAT(num, Catch::Matchers::WithinAbs(density_G(x), 1e-6));
    }

    // sqrt(4x - x^2) * g(x) is constant on the support
    for (double x : {0.5, 1.0, 2.0, 3.3})
        CHECK_THAT(density_Gtilde(x) * std::sqrt(4.0 * x - x * x),
                   Catch::Matchers::WithinAbs(1.0 / M_PI, 1e-14));
}

TEST_CASE("ks_distance") {
    const DiscreteMeasure level10 = measure_from_spectrum(spectrum_Gtilde(10));
    CHECK(ks_distance(level10, &cdf_Gtilde) <= 0.05);

    CHECK(ks_distance(level10, step_cdf(level10)) == 0.0);  // measure vs itself

    DiscreteMeasure uniform;
    for (int i = 0; i < 64; ++i) uniform.atoms.emplace_back(4.0 * (i + 0.5) / 64.0, 1.0 / 64.0);
    uniform.total = 1.0;
    CHECK(ks_distance(uniform, &cdf_Gtilde) > 0.05);
}

TEST_CASE("kesten_measure atoms and moments") {
    const DiscreteMeasure trivial = kesten_measure(LevelMatrix::identity(1), 0);
    REQUIRE(trivial.atoms.size() == 1);
    CHECK_THAT(trivial.atoms[0].first, Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THAT(trivial.atoms[0].second, Catch::Matchers::WithinAbs(1.0, 1e-14));

    const LevelMatrix markov = markov_operator(Group::G, 4);
    const DiscreteMeasure mu = kesten_measure(markov, 0);
    CHECK_THAT(mu.total, Catch::Matchers::WithinAbs(1.0, 1e-10));
    CHECK(moment_check(markov, 0, 10).max_deviation < 1e-9);

    // Different base points give different measures with a common support
    // (Gamma, level 2, vertices "00" and "11"; the infinite-graph equivalence
    // statement does not survive every finite truncation, e.g. GammaBar's -2
    // eigenspace vanishes at the vertex 22).
    const LevelMatrix mb = markov_operator(Group::Gamma, 2);
    const DiscreteMeasure m0 = kesten_measure(mb, 0);
    const DiscreteMeasure m4 = kesten_measure(mb, 4);
    REQUIRE(m0.atoms.size() == m4.atoms.size());
    bool same_masses = true;
    for (std::size_t i = 0; i < m0.atoms.size(); ++i) {
        CHECK_THAT(m0.atoms[i].first, Catch::Matchers::WithinAbs(m4.atoms[i].first, 1e-8));
        CHECK(m0.atoms[i].second > 1e-12);
        CHECK(m4.atoms[i].second > 1e-12);
        same_masses = same_masses && std::fabs(m0.atoms[i].second - m4.atoms[i].second) < 1e-12;
    }
    CHECK_FALSE(same_masses);
    CHECK(moment_check(mb, 4, 12).max_deviation < 1e-9);
    CHECK_THROWS_AS(kesten_measure(mb, 9), input_error);
}

TEST_CASE("eigenvector_G: closed form eigenvectors by the parity recursion") {
    for (int n = 1; n <= 3; ++n) {
        const std::vector<double> ones = eigenvector_G(n, 4.0);
        for (double x : ones) CHECK_THAT(x, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    const std::vector<double> v2 = eigenvector_G(1, 2.0);
    CHECK_THAT(v2[0], Catch::Matchers::WithinAbs(-1.0, 1e-12));  // word "0" gets v_2
    CHECK_THAT(v2[1], Catch::Matchers::WithinAbs(1.0, 1e-12));   // word "1" gets v_1

    const double lam = 1.0 + std::sqrt(5.0);
    const std::vector<double> v = eigenvector_G(2, lam);
    // chain ordering (11, 01, 00, 10) carries (1, sqrt5-2, 2-sqrt5, -1)
    const double r5 = std::sqrt(5.0);
    CHECK_THAT(v[3], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(v[1], Catch::Matchers::WithinAbs(r5 - 2.0, 1e-12));
    CHECK_THAT(v[0], Catch::Matchers::WithinAbs(2.0 - r5, 1e-12));
    CHECK_THAT(v[2], Catch::Matchers::WithinAbs(-1.0, 1e-12));

    CHECK_THROWS_AS(eigenvector_G(3, 2.5), input_error);
}

TEST_CASE("eigenvector_G residuals across the whole spectrum") {
    for (int n = 1; n <= 6; ++n) {
        const DMatrix delta = hecke_operator_d(Group::G, n);
        for (const auto& [lam, mult] : spectrum_G(n).eigen) {
            const std::vector<double> v = eigenvector_G(n, lam);
            double vnorm = 0.0, rnorm = 0.0;
            for (double x : v) vnorm += x * x;
            for (std::size_t i = 0; i < v.size(); ++i) {
                double mv = 0.0;
                for (std::size_t j = 0; j < v.size(); ++j) mv += delta(i, j) * v[j];
                const double res = mv - lam * v[i];
                rnorm += res * res;
            }
            REQUIRE(std::sqrt(rnorm) <= 1e-8 * std::sqrt(vnorm));
        }
    }
}
