#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rational.hpp"
#include "tree_groups.hpp"

namespace fractal_spectra {

inline constexpr double kValueMergeTol = 1e-12;

/// Sorted eigenvalue/multiplicity list with a total-dimension witness.
struct SpectrumMulti {
    std::vector<std::pair<double, long>> eigen;  // strictly increasing values
    long dim = 0;
};

/// Sorts, merges values closer than 1e-12, and checks dimension conservation.
inline SpectrumMulti make_spectrum(std::vector<std::pair<double, long>> pairs, long dim) {
    std::sort(pairs.begin(), pairs.end());
    SpectrumMulti s;
    s.dim = dim;
    long total = 0;
    for (const auto& [v, m] : pairs) {
        if (m <= 0) throw internal_error("make_spectrum: nonpositive multiplicity");
        total += m;
        if (!s.eigen.empty() && std::fabs(v - s.eigen.back().first) <= kValueMergeTol)
            s.eigen.back().second += m;
        else
            s.eigen.emplace_back(v, m);
    }
    if (total != dim) throw internal_error("make_spectrum: multiplicities do not sum to the dimension");
    return s;
}

inline std::vector<double> expand_with_multiplicity(const SpectrumMulti& s) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(s.dim));
    for (const auto& [v, m] : s.eigen) out.insert(out.end(), static_cast<std::size_t>(m), v);
    return out;
}

// ---------------------------------------------------------------------------
// Trigonometric spectra (d = 2)
// ---------------------------------------------------------------------------

/// spec(Delta_n) for G: {1 +- sqrt(5-4cos(2 pi j/2^n))} minus {0,-2}; all simple.
inline SpectrumMulti spectrum_G(int n) {
    checked_level_dim(Group::G, n);
    if (n == 0) return make_spectrum({{4.0, 1}}, 1);
    std::vector<std::pair<double, long>> vals;
    const long half = 1L << (n - 1);
    vals.emplace_back(2.0, 1);  // j = 0, plus branch (minus branch is the excluded 0)
    vals.emplace_back(4.0, 1);  // j = 2^(n-1), plus branch (minus branch is the excluded -2)
    for (long j = 1; j < half; ++j) {
        const double root = std::sqrt(5.0 - 4.0 * std::cos(2.0 * M_PI * static_cast<double>(j) / std::pow(2.0, n)));
        vals.emplace_back(1.0 - root, 1);
        vals.emplace_back(1.0 + root, 1);
    }
    return make_spectrum(std::move(vals), 1L << n);
}

/// spec(Delta_n) for Gtilde: {2 + 2cos(2 pi j / 2^(n+1)) : j = 0..2^n-1}.
inline SpectrumMulti spectrum_Gtilde(int n) {
    checked_level_dim(Group::Gtilde, n);
    std::vector<std::pair<double, long>> vals;
    const long dim = 1L << n;
    for (long j = 0; j < dim; ++j)
        vals.emplace_back(2.0 + 2.0 * std::cos(2.0 * M_PI * static_cast<double>(j) / std::pow(2.0, n + 1)), 1);
    return make_spectrum(std::move(vals), dim);
}

// ---------------------------------------------------------------------------
// Preimage families (d = 3)
// ---------------------------------------------------------------------------

/// Backward iterates of the renormalization map F, with residual
/// certification |F(x) - target| <= 1e-12 per element.
///   Gamma:    F(t) = 4 - 2t - t^2,        X_2 = {-1}
///   GammaBar: F(t) = (12 + t - t^2) / 2,  X_3 = {2}, Y_3 = {-1}
struct PreimageSets {
    Group group;
    std::map<int, std::vector<double>> X;
    std::map<int, std::vector<double>> Y;  // GammaBar only
};

inline double renorm_F(Group g, double t) {
    if (g == Group::Gamma) return 4.0 - 2.0 * t - t * t;
    if (g == Group::GammaBar || g == Group::GammaBarBar) return (12.0 + t - t * t) / 2.0;
    throw input_error("renorm_F: preimage machinery is defined for the Gamma family only");
}

namespace detail {

inline std::vector<double> quadratic_preimages(Group g, const std::vector<double>& targets) {
    std::vector<double> out;
    out.reserve(targets.size() * 2);
    for (double th : targets) {
        // Solve F(x) = th for x.
        double disc, lo, hi;
        if (g == Group::Gamma) {
            disc = 5.0 - th;  // x = -1 +- sqrt(5 - th)
            if (disc < 0) throw internal_error("preimage_sets: negative discriminant");
            lo = -1.0 - std::sqrt(disc);
            hi = -1.0 + std::sqrt(disc);
        } else {
            disc = 49.0 - 8.0 * th;  // x = (1 +- sqrt(49 - 8 th)) / 2
            if (disc < 0) throw internal_error("preimage_sets: negative discriminant");
            lo = (1.0 - std::sqrt(disc)) / 2.0;
            hi = (1.0 + std::sqrt(disc)) / 2.0;
        }
        for (double x : {lo, hi}) {
            if (std::fabs(renorm_F(g, x) - th) > 1e-12 * std::max(1.0, std::fabs(th)))
                throw internal_error("preimage_sets: residual certification failed");
            out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

inline PreimageSets preimage_sets(Group g, int n) {
    PreimageSets ps;
    ps.group = g;
    if (g == Group::Gamma) {
        if (n < 2) throw input_error("preimage_sets: Gamma families start at m = 2");
        ps.X[2] = {-1.0};
        for (int m = 3; m <= n; ++m) ps.X[m] = detail::quadratic_preimages(g, ps.X[m - 1]);
    } else if (g == Group::GammaBar || g == Group::GammaBarBar) {
        if (n < 3) throw input_error("preimage_sets: GammaBar families start at m = 3");
        ps.X[3] = {2.0};
        ps.Y[3] = {-1.0};
        for (int m = 4; m <= n; ++m) {
            ps.X[m] = detail::quadratic_preimages(g, ps.X[m - 1]);
            ps.Y[m] = detail::quadratic_preimages(g, ps.Y[m - 1]);
        }
    } else {
        throw input_error("preimage_sets: Gamma-family presets only");
    }
    return ps;
}

/// The hyperbola slice at lambda = 1: theta maps to the eigenvalue pair 1 +- sqrt(5-theta).
inline std::pair<double, double> pi_plus_minus(double theta) {
    const double r = std::sqrt(5.0 - theta);
    return {1.0 - r, 1.0 + r};
}

// ---------------------------------------------------------------------------
// Closed-form spectra with multiplicities (d = 3)
// ---------------------------------------------------------------------------

inline long pow3(int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
}

/// Multiplicities are the exponents of the determinant factorization at
/// lambda = 1: value 4 once, value 1 with 3^(n-1)+1, and pair pi(theta) with
/// 3^(n-m)+1 for theta in X_m.
inline SpectrumMulti spectrum_Gamma(int n) {
    checked_level_dim(Group::Gamma, n);
    if (n == 0) return make_spectrum({{4.0, 1}}, 1);
    if (n == 1) return make_spectrum({{1.0, 2}, {4.0, 1}}, 3);
    std::vector<std::pair<double, long>> vals{{4.0, 1}, {1.0, pow3(n - 1) + 1}};
    const PreimageSets ps = preimage_sets(Group::Gamma, n);
    for (int m = 2; m <= n; ++m) {
        const long mult = pow3(n - m) + 1;
        for (double th : ps.X.at(m)) {
            const auto [lo, hi] = pi_plus_minus(th);
            vals.emplace_back(lo, mult);
            vals.emplace_back(hi, mult);
        }
    }
    return make_spectrum(std::move(vals), pow3(n));
}

/// GammaBar multiplicity table: 4 once; 1 with (3^(n-2)+1)+(3^(n-2)-1); -2 with
/// 3^(n-1)-1; X_m with 3^(n-m)+1 (3<=m<=n); Y_m with 3^(n-m)-1 (3<=m<n);
/// X_(n+1) with 2.
inline SpectrumMulti spectrum_GammaBar(int n) {
    checked_level_dim(Group::GammaBar, n);
    if (n == 0) return make_spectrum({{4.0, 1}}, 1);
    if (n == 1) return make_spectrum({{1.0, 2}, {4.0, 1}}, 3);
    std::vector<std::pair<double, long>> vals{
        {4.0, 1}, {1.0, 2 * pow3(n - 2)}, {-2.0, pow3(n - 1) - 1}};
    const PreimageSets ps = preimage_sets(Group::GammaBar, n + 1);
    auto add_family = [&vals](const std::vector<double>& thetas, long mult) {
        if (mult <= 0) return;
        for (double th : thetas) {
            const auto [lo, hi] = pi_plus_minus(th);
            vals.emplace_back(lo, mult);
            vals.emplace_back(hi, mult);
        }
    };
    for (int m = 3; m <= n; ++m) add_family(ps.X.at(m), pow3(n - m) + 1);
    for (int m = 3; m < n; ++m) add_family(ps.Y.at(m), pow3(n - m) - 1);
    add_family(ps.X.at(n + 1), 2);
    return make_spectrum(std::move(vals), pow3(n));
}

/// r_n + r_n^-1 = t_n + t_n^-1, so the doubly-barred group shares GammaBar's spectra.
inline SpectrumMulti spectrum_GammaBarBar(int n) { return spectrum_GammaBar(n); }

inline SpectrumMulti spectrum_closed_form(Group g, int n) {
    switch (g) {
        case Group::G: return spectrum_G(n);
        case Group::Gtilde: return spectrum_Gtilde(n);
        case Group::Gamma: return spectrum_Gamma(n);
        case Group::GammaBar: return spectrum_GammaBar(n);
        case Group::GammaBarBar: return spectrum_GammaBarBar(n);
    }
    throw internal_error("spectrum_closed_form: bad tag");
}

// ---------------------------------------------------------------------------
// Quadratic dynamics and the Julia trichotomy
// ---------------------------------------------------------------------------

/// F(t) = c2 t^2 + c1 t + c0 on an interval [a,b] with F(a) = F(b) = a,
/// plus a seed point xi whose backward orbit parameterizes the spectrum.
struct QuadraticDynamics {
    double c2, c1, c0;
    double a, b;
    double xi;

    QuadraticDynamics(double c2_, double c1_, double c0_, double a_, double b_, double xi_)
        : c2(c2_), c1(c1_), c0(c0_), a(a_), b(b_), xi(xi_) {
        if (!(a < b)) throw input_error("QuadraticDynamics: empty interval");
        if (std::fabs(eval(a) - a) > 1e-9 || std::fabs(eval(b) - a) > 1e-9)
            throw input_error("QuadraticDynamics: F(a) = F(b) = a violated");
    }

    double eval(double t) const { return (c2 * t + c1) * t + c0; }

    double max_on_interval() const {
        double m = std::max(eval(a), eval(b));
        if (c2 != 0.0) {
            const double v = -c1 / (2.0 * c2);
            if (v > a && v < b) m = std::max(m, eval(v));
        }
        return m;
    }
};

namespace detail {

/// Interval endpoints derived from the fixed-point conditions F(a) = a and
/// F(b) = a rather than copied: a is the smaller fixed point, b the other
/// preimage of a. (For Gamma this gives [-4,2], whose image is [-4,5]; for
/// GammaBar it gives [-4,5].)
inline QuadraticDynamics derive_dynamics(double c2, double c1, double c0, double xi) {
    double disc = (c1 - 1.0) * (c1 - 1.0) - 4.0 * c2 * c0;
    const double a1 = (-(c1 - 1.0) + std::sqrt(disc)) / (2.0 * c2);
    const double a2 = (-(c1 - 1.0) - std::sqrt(disc)) / (2.0 * c2);
    const double a = std::min(a1, a2);
    disc = c1 * c1 - 4.0 * c2 * (c0 - a);
    const double b1 = (-c1 + std::sqrt(disc)) / (2.0 * c2);
    const double b2 = (-c1 - std::sqrt(disc)) / (2.0 * c2);
    const double b = std::max(b1, b2);
    return {c2, c1, c0, a, b, xi};
}

}  // namespace detail

inline QuadraticDynamics dynamics_Gamma() { return detail::derive_dynamics(-1.0, -2.0, 4.0, -1.0); }

inline QuadraticDynamics dynamics_GammaBar() { return detail::derive_dynamics(-0.5, 0.5, 6.0, 2.0); }

enum class DynCase { Subset, Equal, SupersetXiInK, SupersetXiNotInK };

/// Trichotomy of F([a,b]) versus [a,b]; in the superset case, membership of
/// xi in the bounded-orbit set K is decided by forward iteration.
inline DynCase dyn_classify(const QuadraticDynamics& d, double xi, int iters) {
    if (iters < 1) throw input_error("dyn_classify: iters must be >= 1");
    constexpr double kEscapeTol = 1e-9;
    const double fmax = d.max_on_interval();
    if (std::fabs(fmax - d.b) <= kEscapeTol) return DynCase::Equal;
    if (fmax < d.b) return DynCase::Subset;
    double x = xi;
    for (int i = 0; i < iters; ++i) {
        if (x < d.a - kEscapeTol || x > d.b + kEscapeTol) return DynCase::SupersetXiNotInK;
        x = d.eval(x);
    }
    if (x < d.a - kEscapeTol || x > d.b + kEscapeTol) return DynCase::SupersetXiNotInK;
    return DynCase::SupersetXiInK;
}

// ---------------------------------------------------------------------------
// Affine conjugation onto z^2 - lambda
// ---------------------------------------------------------------------------

/// psi(z) = alpha z + beta with psi^-1(F(psi(z))) = z^2 - lambda,
/// verified as an exact rational polynomial identity on construction.
struct JuliaConjugation {
    Rational alpha, beta;
    Rational lambda;
};

inline JuliaConjugation julia_conjugation(Group g) {
    Rational c2, c1, c0, alpha, beta;
    if (g == Group::Gamma) {
        c2 = Rational(-1); c1 = Rational(-2); c0 = Rational(4);
        alpha = Rational(-1); beta = Rational(-1);
    } else if (g == Group::GammaBar || g == Group::GammaBarBar) {
        c2 = Rational(-1, 2); c1 = Rational(1, 2); c0 = Rational(6);
        alpha = Rational(-2); beta = Rational(1, 2);
    } else {
        throw input_error("julia_conjugation: Gamma-family presets only");
    }
    // psi^-1(F(psi(z))): quadratic coefficient c2 alpha, linear (2 c2 beta + c1),
    // constant (c2 beta^2 + c1 beta + c0 - beta)/alpha.
    const Rational quad = c2 * alpha;
    const Rational lin = Rational(2) * c2 * beta + c1;
    const Rational constant = (c2 * beta * beta + c1 * beta + c0 - beta) / alpha;
    if (quad != Rational(1) || lin != Rational(0))
        throw internal_error("julia_conjugation: conjugate is not monic centered");
    return {alpha, beta, -constant};
}

// ---------------------------------------------------------------------------
// Limit spectra and weights
// ---------------------------------------------------------------------------

struct LimitSpectrum {
    std::vector<std::pair<double, double>> intervals;  // d = 2 groups
    bool cantor = false;
    bool isolated_points = false;
    Rational julia_lambda{0};
    std::string description;
};

inline LimitSpectrum limit_spectrum(Group g) {
    LimitSpectrum ls;
    switch (g) {
        case Group::G:
            ls.intervals = {{-2.0, 0.0}, {2.0, 4.0}};
            ls.description = "[-2,0] u [2,4]";
            return ls;
        case Group::Gtilde:
            ls.intervals = {{0.0, 4.0}};
            ls.description = "[0,4]";
            return ls;
        case Group::Gamma:
            ls.cantor = true;
            ls.isolated_points = true;
            ls.julia_lambda = julia_conjugation(g).lambda;
            ls.description = "1 +- sqrt(5-theta) over a Cantor set (affine image of the Julia set of z^2-6), plus isolated points";
            return ls;
        case Group::GammaBar:
        case Group::GammaBarBar:
            ls.cantor = true;
            ls.julia_lambda = julia_conjugation(g).lambda;
            ls.description = "1 +- sqrt(5-theta) over a Cantor set (affine image of the Julia set of z^2-45/16)";
            return ls;
    }
    throw internal_error("limit_spectrum: bad tag");
}

/// Limit of mult/dim as n grows, from the multiplicity tables. The Gamma
/// family carries positive weights on its point families; the d = 2 spectra
/// are simple, so every eigenvalue has weight 0.
inline Rational limiting_weight(Group g, double eigenvalue) {
    constexpr double tol = 1e-9;
    auto family_level = [&](Group gg, double target_x, double target_y, int* hit_y) -> int {
        // theta with pi_pm(theta) = eigenvalue; forward-iterate to the seed.
        const double theta0 = 5.0 - (eigenvalue - 1.0) * (eigenvalue - 1.0);
        double th = theta0;
        for (int steps = 0; steps <= 24; ++steps) {
            if (std::fabs(th - target_x) <= 1e-7) { *hit_y = 0; return steps; }
            if (target_y != target_x && std::fabs(th - target_y) <= 1e-7) { *hit_y = 1; return steps; }
            th = renorm_F(gg, th);
            if (std::fabs(th) > 1e6) break;
        }
        return -1;
    };
    if (g == Group::G || g == Group::Gtilde) {
        for (int n = 0; n <= 10; ++n) {
            for (const auto& [v, m] : spectrum_closed_form(g, n).eigen)
                if (std::fabs(v - eigenvalue) <= tol) return Rational(0);
        }
        throw input_error("limiting_weight: eigenvalue not in the closed-form spectrum");
    }
    if (g == Group::Gamma) {
        if (std::fabs(eigenvalue - 4.0) <= tol) return Rational(0);
        if (std::fabs(eigenvalue - 1.0) <= tol) return Rational(1, 3);
        int dummy = 0;
        const int steps = family_level(g, -1.0, -1.0, &dummy);
        if (steps < 0) throw input_error("limiting_weight: eigenvalue not recognized");
        const int m = 2 + steps;  // theta in X_m, weight (3^(n-m)+1)/3^n -> 3^-m
        return Rational(1) / Rational(pow3(m));
    }
    // GammaBar / GammaBarBar
    if (std::fabs(eigenvalue - 4.0) <= tol) return Rational(0);
    if (std::fabs(eigenvalue + 2.0) <= tol) return Rational(1, 3);
    if (std::fabs(eigenvalue - 1.0) <= tol) return Rational(2, 9);
    int hit_y = 0;
    const int steps = family_level(g, 2.0, -1.0, &hit_y);
    if (steps < 0) throw input_error("limiting_weight: eigenvalue not recognized");
    const int m = 3 + steps;  // X_m or Y_m; both carry per-eigenvalue weight 3^-m
    return Rational(1) / Rational(pow3(m));
}

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

/// Hausdorff distance between a finite set of reals and a union of closed
/// intervals that contains it (covering radius of the set inside the union).
inline double hausdorff_to_intervals(const std::vector<double>& values,
                                     const std::vector<std::pair<double, double>>& intervals) {
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    double worst = 0.0;
    for (const auto& [lo, hi] : intervals) {
        std::vector<double> inside;
        for (double x : v)
            if (x >= lo - 1e-12 && x <= hi + 1e-12) inside.push_back(x);
        if (inside.empty()) return hi - lo;  // whole component uncovered
        worst = std::max(worst, inside.front() - lo);
        worst = std::max(worst, hi - inside.back());
        for (std::size_t i = 1; i < inside.size(); ++i)
            worst = std::max(worst, (inside[i] - inside[i - 1]) / 2.0);
    }
    for (double x : v) {
        double dist = 1e300;
        for (const auto& [lo, hi] : intervals)
            dist = std::min(dist, x < lo ? lo - x : (x > hi ? x - hi : 0.0));
        worst = std::max(worst, dist);
    }
    return worst;
}

}  // namespace fractal_spectra
