#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "closed_form.hpp"
#include "determinant.hpp"
#include "level_ops.hpp"
#include "numeric_spectra.hpp"
#include "schreier.hpp"

namespace fractal_spectra {

// ---------------------------------------------------------------------------
// Deterministic sample points, filtered away from the poles of the
// renormalization maps.
// ---------------------------------------------------------------------------

class SamplePointSource {
  public:
    explicit SamplePointSource(std::uint64_t seed) : rng_(seed) {}

    Rational next() {
        const long num = static_cast<long>(rng_() % 19) - 9;  // -9..9
        const long den = static_cast<long>(rng_() % 4) + 1;   // 1..4
        return Rational(num, den);
    }

    /// Returns (lambda, mu) with keep(lambda, mu) true.
    std::pair<Rational, Rational> next_point(
        const std::function<bool(const Rational&, const Rational&)>& keep) {
        for (int tries = 0; tries < 4096; ++tries) {
            Rational l = next(), u = next();
            if (keep(l, u)) return {l, u};
        }
        throw internal_error("SamplePointSource: filter rejected too many points");
    }

  private:
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Exact determinant identities
// ---------------------------------------------------------------------------

/// |Q_n(l,u)| = (u^2-4)^(2^(n-2)) |Q_(n-1)(2l^2/(4-u^2), u + u l^2/(4-u^2))|
/// for G, n >= 2. (The prefactor is (mu^2-4)^(2^(n-2)), the determinant of
/// the 2 a_(n-1) - mu block; the exponent is odd only at n = 2 where the
/// sign matters.)
inline bool check_QG_recursion(int n, const Rational& l, const Rational& u) {
    if (n < 2) throw input_error("check_QG_recursion: n >= 2");
    const Rational pole = Rational(4) - u * u;
    if (pole.is_zero()) throw input_error("check_QG_recursion: mu = +-2 is a pole");
    const Rational lhs = exact_determinant(pencil_matrix({Group::G, n, l, u}));
    const Rational lp = Rational(2) * l * l / pole;
    const Rational up = u + u * l * l / pole;
    const Rational rhs =
        (u * u - Rational(4)).pow(1L << (n - 2)) * exact_determinant(pencil_matrix({Group::G, n - 1, lp, up}));
    return lhs == rhs;
}

inline Rational phi_polynomial(int k, const Rational& l, const Rational& u) {
    if (k == 0) return Rational(2) - u - l;
    if (k == 1) return Rational(2) - u + l;
    if (k == 2) return u * u - Rational(4) - l * l;
    Rational prev = phi_polynomial(k - 1, l, u);
    return prev * prev - Rational(2) * (Rational(2) * l).pow(1L << (k - 2));
}

/// |Q_n| = Phi_0 Phi_1 ... Phi_n for G.
inline bool check_phi_product(int n, const Rational& l, const Rational& u) {
    Rational rhs(1);
    for (int k = 0; k <= n; ++k) rhs *= phi_polynomial(k, l, u);
    return exact_determinant(pencil_matrix({Group::G, n, l, u})) == rhs;
}

/// Qtilde_n(l,u) = 1/2 Q_n(2l,2u) as exact matrices.
inline bool check_Gtilde_rescaling(int n, const Rational& l, const Rational& u) {
    LevelMatrix rhs = pencil_matrix({Group::G, n, Rational(2) * l, Rational(2) * u});
    rhs *= Rational(1, 2);
    return pencil_matrix({Group::Gtilde, n, l, u}) == rhs;
}

/// lem GF1 one-step recursion for Gamma, n >= 2:
/// |Q_n| = (alpha beta gamma^2)^(3^(n-2)) |Q_(n-1)(l^2 beta/(alpha gamma),
///          mu + 2 l^2 delta/(alpha gamma))|.
inline bool check_GF1_recursion(int n, const Rational& l, const Rational& u) {
    if (n < 2) throw input_error("check_GF1_recursion: n >= 2");
    const Rational alpha = Rational(2) - u + l;
    const Rational beta = Rational(2) - u - l;
    const Rational gamma = u * u - l * l - u - Rational(2);
    const Rational delta = u * u - l * l - Rational(2) * u - l;
    if (alpha.is_zero() || gamma.is_zero()) throw input_error("check_GF1_recursion: alpha gamma = 0 is a pole");
    const Rational lhs = exact_determinant(pencil_matrix({Group::Gamma, n, l, u}));
    const Rational lp = l * l * beta / (alpha * gamma);
    const Rational up = u + Rational(2) * l * l * delta / (alpha * gamma);
    const Rational rhs =
        (alpha * beta * gamma * gamma).pow(pow3(n - 2)) * exact_determinant(pencil_matrix({Group::Gamma, n - 1, lp, up}));
    return lhs == rhs;
}

/// lem BG1 one-step recursion for GammaBar, n >= 2:
/// |Q_n| = (gamma delta)^(2 3^(n-2)) (alpha beta)^(3^(n-2))
///         |Q_(n-1)(-2 l^2/(alpha delta), mu + 2 l^2 (mu-l-1)/(alpha delta))|.
inline bool check_BG1_recursion(int n, const Rational& l, const Rational& u) {
    if (n < 2) throw input_error("check_BG1_recursion: n >= 2");
    const Rational alpha = Rational(2) - u + l;
    const Rational beta = Rational(2) - u - l;
    const Rational gamma = Rational(1) + u + l;
    const Rational delta = Rational(1) + u - l;
    if (alpha.is_zero() || delta.is_zero()) throw input_error("check_BG1_recursion: alpha delta = 0 is a pole");
    const Rational lhs = exact_determinant(pencil_matrix({Group::GammaBar, n, l, u}));
    const Rational lp = Rational(-2) * l * l / (alpha * delta);
    const Rational up = u + Rational(2) * l * l * (u - l - Rational(1)) / (alpha * delta);
    const Rational rhs = (gamma * delta).pow(2 * pow3(n - 2)) * (alpha * beta).pow(pow3(n - 2)) *
                         exact_determinant(pencil_matrix({Group::GammaBar, n - 1, lp, up}));
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Numeric factorization checks (log-space; exponents grow like 3^n)
// ---------------------------------------------------------------------------

inline double hyperbola_H(double theta, double l, double u) {
    return u * u - l * u - 2.0 * l * l - 2.0 - u + theta * l;
}

/// lem factorQGF for Gamma at a sample point, compared in log-space.
inline bool check_Gamma_factorization(int n, double l, double u, double rel_tol = 1e-9) {
    const LogDet lhs = log_abs_determinant(to_double(pencil_matrix(
        {Group::Gamma, n, Rational::from_double(l), Rational::from_double(u)})));
    double log_rhs = 0.0;
    int sign_rhs = 1;
    auto mul_factor = [&](double f, long e) {
        if (f == 0.0) { sign_rhs = 0; return; }
        if (f < 0 && (e % 2)) sign_rhs = -sign_rhs;
        log_rhs += static_cast<double>(e) * std::log(std::fabs(f));
    };
    mul_factor(2.0 + 2.0 * l - u, 1);
    mul_factor(2.0 - l - u, pow3(n - 1) + 1);
    const PreimageSets ps = preimage_sets(Group::Gamma, n);
    for (int m = 2; m <= n; ++m)
        for (double th : ps.X.at(m)) mul_factor(hyperbola_H(th, l, u), pow3(n - m) + 1);
    if (sign_rhs == 0 || lhs.sign == 0) return sign_rhs == lhs.sign;
    return sign_rhs == lhs.sign &&
           std::fabs(lhs.log_abs - log_rhs) <= rel_tol * std::max(1.0, std::fabs(lhs.log_abs));
}

/// lem factorQBG for GammaBar at a sample point, compared in log-space.
inline bool check_GammaBar_factorization(int n, double l, double u, double rel_tol = 1e-9) {
    const LogDet lhs = log_abs_determinant(to_double(pencil_matrix(
        {Group::GammaBar, n, Rational::from_double(l), Rational::from_double(u)})));
    double log_rhs = 0.0;
    int sign_rhs = 1;
    auto mul_factor = [&](double f, long e) {
        if (e == 0) return;
        if (f == 0.0) { sign_rhs = 0; return; }
        if (f < 0 && (e % 2)) sign_rhs = -sign_rhs;
        log_rhs += static_cast<double>(e) * std::log(std::fabs(f));
    };
    const double alpha = 2.0 - u + l, beta = 2.0 - u - l, gamma = 1.0 + u + l, delta = 1.0 + u - l;
    mul_factor(alpha + l, 1);
    mul_factor(beta, pow3(n - 2) + 1);
    mul_factor(gamma, pow3(n - 1) - 1);
    mul_factor(delta - l, pow3(n - 2) - 1);
    const PreimageSets ps = preimage_sets(Group::GammaBar, n + 1);
    for (int m = 3; m <= n; ++m)
        for (double th : ps.X.at(m)) mul_factor(hyperbola_H(th, l, u), pow3(n - m) + 1);
    for (int m = 3; m < n; ++m)
        for (double th : ps.Y.at(m)) mul_factor(hyperbola_H(th, l, u), pow3(n - m) - 1);
    for (double th : ps.X.at(n + 1)) mul_factor(hyperbola_H(th, l, u), 2);
    if (sign_rhs == 0 || lhs.sign == 0) return sign_rhs == lhs.sign;
    return sign_rhs == lhs.sign &&
           std::fabs(lhs.log_abs - log_rhs) <= rel_tol * std::max(1.0, std::fabs(lhs.log_abs));
}

/// Exact n = 2 factorizations, where every factor is rational:
/// Gamma: |Q_2| = (alpha+l) beta^4 H_(-1)^2; GammaBar: (alpha+l) beta^2 gamma^2 H_2^2.
inline bool check_factorization_exact_n2(Group g, const Rational& l, const Rational& u) {
    const Rational alpha = Rational(2) - u + l;
    const Rational beta = Rational(2) - u - l;
    const auto H = [&](const Rational& th) {
        return u * u - l * u - Rational(2) * l * l - Rational(2) - u + th * l;
    };
    const Rational lhs = exact_determinant(pencil_matrix({g, 2, l, u}));
    if (g == Group::Gamma) return lhs == (alpha + l) * beta.pow(4) * H(Rational(-1)).pow(2);
    const Rational gamma = Rational(1) + u + l;
    return lhs == (alpha + l) * beta.pow(2) * gamma.pow(2) * H(Rational(2)).pow(2);
}

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 12345;
    int det_points = 8;        // sample points per identity and level
    int det_max_level = 4;     // exact identities up to this level
    int oracle_max_d2 = 6;     // closed form vs eigensolver caps
    int oracle_max_d3 = 4;
    int graph_max_d2 = 7;      // substitution/action isomorphism caps
    int graph_max_d3 = 5;
    bool inject_fault = false; // negative control
};

namespace detail {

inline void add_check(std::vector<CheckResult>& out, const std::string& name,
                      const std::function<bool(std::string&)>& body) {
    CheckResult r{name, false, ""};
    try {
        r.pass = body(r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    using detail::add_check;

    add_check(out, "determinant-identities", [&](std::string& detail) {
        SamplePointSource src(opt.seed);
        auto no_pole_g = [](const Rational& l, const Rational& u) {
            (void)l;
            return (Rational(4) - u * u) != Rational(0);
        };
        auto no_pole_gf = [](const Rational& l, const Rational& u) {
            return (Rational(2) - u + l) != Rational(0) && (u * u - l * l - u - Rational(2)) != Rational(0);
        };
        auto no_pole_bg = [](const Rational& l, const Rational& u) {
            return (Rational(2) - u + l) != Rational(0) && (Rational(1) + u - l) != Rational(0);
        };
        long checked = 0;
        for (int n = 2; n <= opt.det_max_level; ++n) {
            for (int k = 0; k < opt.det_points; ++k) {
                {
                    auto [l, u] = src.next_point(no_pole_g);
                    if (!check_QG_recursion(n, l, u)) { detail = "lem:QG recursion failed"; return false; }
                    if (!check_phi_product(n, l, u)) { detail = "Phi product failed"; return false; }
                    if (!check_Gtilde_rescaling(n, l, u)) { detail = "Gtilde rescaling failed"; return false; }
                }
                {
                    auto [l, u] = src.next_point(no_pole_gf);
                    if (!check_GF1_recursion(n, l, u)) { detail = "lem:GF1 recursion failed"; return false; }
                    if (!check_factorization_exact_n2(Group::Gamma, l, u)) { detail = "Gamma n=2 factorization failed"; return false; }
                }
                {
                    auto [l, u] = src.next_point(no_pole_bg);
                    if (!check_BG1_recursion(n, l, u)) { detail = "lem:BG1 recursion failed"; return false; }
                    if (!check_factorization_exact_n2(Group::GammaBar, l, u)) { detail = "GammaBar n=2 factorization failed"; return false; }
                }
                checked += 7;
            }
        }
        detail = std::to_string(checked) + " identity instances, zero tolerance";
        return true;
    });

    add_check(out, "oracle-equivalence", [&](std::string& detail) {
        double worst = 0.0;
        for (Group g : all_groups()) {
            const int cap = alphabet_size(g) == 2 ? opt.oracle_max_d2 : opt.oracle_max_d3;
            for (int n = 0; n <= cap; ++n) {
                LevelMatrix h = hecke_operator(g, n);
                if (opt.inject_fault && g == Group::G && n == 2) h(0, 1) += Rational(1);
                if (!h.is_symmetric()) { detail = "hecke operator not symmetric"; return false; }
                const CompareReport rep = compare_spectra(spectrum_closed_form(g, n), eigen_symmetric(h), 1e-9);
                worst = std::max(worst, rep.max_deviation);
                if (!rep.pass) {
                    detail = group_name(g) + " level " + std::to_string(n) + " deviation " + std::to_string(rep.max_deviation);
                    return false;
                }
            }
        }
        std::ostringstream os;
        os << "max deviation " << worst;
        detail = os.str();
        return true;
    });

    add_check(out, "dimension-conservation", [&](std::string& detail) {
        for (Group g : all_groups()) {
            const int cap = alphabet_size(g) == 2 ? 8 : 6;
            for (int n = 0; n <= cap; ++n) {
                const SpectrumMulti s = spectrum_closed_form(g, n);  // make_spectrum enforces the sum
                long total = 0;
                for (const auto& [v, m] : s.eigen) total += m;
                if (total != s.dim) { detail = "dimension mismatch"; return false; }
            }
        }
        detail = "sum of multiplicities = d^n for all presets";
        return true;
    });

    add_check(out, "schreier-equivalence", [&](std::string& detail) {
        for (Group g : all_groups()) {
            const int cap = alphabet_size(g) == 2 ? opt.graph_max_d2 : opt.graph_max_d3;
            for (int n = 0; n <= cap; ++n) {
                const LabeledGraph act = action_graph(g, n);
                if (!labeled_isomorphic(act, substitution_graph(g, n))) {
                    detail = group_name(g) + " level " + std::to_string(n) + " not isomorphic";
                    return false;
                }
                for (std::size_t l = 0; l < act.labels.size(); ++l)
                    if (act.succ[l] != block_permutation(g, act.labels[l], n)) {
                        detail = "adjacency disagrees with the block recursion";
                        return false;
                    }
            }
        }
        detail = "substitution graphs match action graphs; adjacency matches the operators";
        return true;
    });

    add_check(out, "gamma-growth", [&](std::string& detail) {
        for (int n = 0; n <= 7; ++n) {
            const GrowthResult gr = growth_and_diameter(action_graph(Group::Gamma, n));
            if (gr.basepoint_eccentricity != (1 << n) - 1) { detail = "eccentricity != 2^n-1"; return false; }
            std::vector<long> expect{1};
            for (int i = 0; i < n; ++i) {  // multiply by (1 + 2 X^(2^i))
                std::vector<long> next(expect.size() + (1u << i), 0);
                for (std::size_t k = 0; k < expect.size(); ++k) {
                    next[k] += expect[k];
                    next[k + (1u << i)] += 2 * expect[k];
                }
                expect = std::move(next);
            }
            if (gr.growth.coeffs != expect) { detail = "growth series != prod(1+2X^(2^i))"; return false; }
        }
        detail = "growth series and diameters match through level 7";
        return true;
    });

    add_check(out, "julia-conjugation", [&](std::string& detail) {
        if (julia_conjugation(Group::Gamma).lambda != Rational(6)) { detail = "Gamma lambda != 6"; return false; }
        if (julia_conjugation(Group::GammaBar).lambda != Rational(45, 16)) { detail = "GammaBar lambda != 45/16"; return false; }
        if (dyn_classify(dynamics_Gamma(), -1.0, 64) != DynCase::SupersetXiNotInK) { detail = "Gamma trichotomy case wrong"; return false; }
        if (dyn_classify(dynamics_GammaBar(), 2.0, 64) != DynCase::SupersetXiInK) { detail = "GammaBar trichotomy case wrong"; return false; }
        detail = "lambda = 6 and 45/16; trichotomy cases as expected";
        return true;
    });

    add_check(out, "kesten-moments", [&](std::string& detail) {
        double worst = 0.0;
        for (Group g : all_groups()) {
            const MomentReport rep = moment_check(markov_operator(g, 3), 0, 12);
            worst = std::max(worst, rep.max_deviation);
            if (rep.max_deviation > 1e-9) { detail = "moment identity broke 1e-9"; return false; }
        }
        std::ostringstream os;
        os << "max deviation " << worst;
        detail = os.str();
        return true;
    });

    add_check(out, "limit-convergence", [&](std::string& detail) {
        const auto limit = limit_spectrum(Group::G).intervals;
        double prev = 1e300;
        for (int n = 3; n <= 8; ++n) {
            std::vector<double> vals;
            for (const auto& [v, m] : spectrum_G(n).eigen) vals.push_back(v);
            const double h = hausdorff_to_intervals(vals, limit);
            if (h > prev + 1e-12) { detail = "Hausdorff distance increased"; return false; }
            prev = h;
        }
        if (prev > 0.1) { detail = "Hausdorff distance above 0.1 at level 8"; return false; }
        std::ostringstream os;
        os << "level-8 Hausdorff distance " << prev;
        detail = os.str();
        return true;
    });

    add_check(out, "limiting-weights", [&](std::string& detail) {
        const double s6 = std::sqrt(6.0), s3 = std::sqrt(3.0);
        if (limiting_weight(Group::Gamma, 1.0) != Rational(1, 3)) { detail = "Gamma weight(1)"; return false; }
        if (limiting_weight(Group::Gamma, 1.0 + s6) != Rational(1, 9)) { detail = "Gamma weight(1+sqrt6)"; return false; }
        if (limiting_weight(Group::GammaBar, -2.0) != Rational(1, 3)) { detail = "GammaBar weight(-2)"; return false; }
        if (limiting_weight(Group::GammaBar, 1.0) != Rational(2, 9)) { detail = "GammaBar weight(1)"; return false; }
        if (limiting_weight(Group::GammaBar, 1.0 + s3) != Rational(1, 27)) { detail = "GammaBar weight(1+sqrt3)"; return false; }
        detail = "mu-column reproduced";
        return true;
    });

    return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace fractal_spectra
