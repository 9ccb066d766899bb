// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.
//
// Usage: acceptance [path-to-cli-binary]
// The CLI path is needed by the negative-control criterion (10).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fractal_spectra/cli.hpp"
#include "fractal_spectra/determinant.hpp"
#include "fractal_spectra/julia.hpp"
#include "fractal_spectra/numeric_spectra.hpp"
#include "fractal_spectra/schreier.hpp"
#include "fractal_spectra/verify.hpp"

using namespace fractal_spectra;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    if (!pass) ++g_failures;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << " (" << name << ")"
              << (detail.empty() ? "" : ": " + detail) << std::endl;
}

long mult_of(const SpectrumMulti& s, double v) {
    for (const auto& [x, m] : s.eigen)
        if (std::fabs(x - v) <= 1e-9) return m;
    return 0;
}

bool has_value(const SpectrumMulti& s, double v) { return mult_of(s, v) > 0; }

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";

    criterion(1, "closed-form vs eigensolver oracle", [](std::string& detail) {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (Group g : all_groups()) {
            const int cap = alphabet_size(g) == 2 ? 7 : 5;
            for (int n = 0; n <= cap; ++n) {
                const EigenResult er = eigen_symmetric_d(hecke_operator_d(g, n));
                const CompareReport rep = compare_spectra(spectrum_closed_form(g, n), er, 1e-9);
                worst = std::max(worst, rep.max_deviation);
                if (!rep.pass) {
                    detail = group_name(g) + " level " + std::to_string(n) + " deviates by " +
                             std::to_string(rep.max_deviation);
                    return false;
                }
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream os;
        os.precision(3);
        os << "max deviation " << worst << ", " << secs << " s";
        detail = os.str();
        return secs < 60.0;
    });

    criterion(2, "symbolic eigenvalue lists", [](std::string& detail) {
        const double r2 = std::sqrt(2.0), r5 = std::sqrt(5.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
        // G levels 1..4
        if (!(has_value(spectrum_G(1), 2) && has_value(spectrum_G(1), 4))) { detail = "G level 1"; return false; }
        for (double s : {-1.0, 1.0})
            if (!has_value(spectrum_G(2), 1 + s * r5)) { detail = "G level 2"; return false; }
        for (double s : {-1.0, 1.0})
            for (double i : {-1.0, 1.0})
                if (!has_value(spectrum_G(3), 1 + s * std::sqrt(5 + i * 2 * r2))) { detail = "G level 3"; return false; }
        for (double s : {-1.0, 1.0})
            for (double m : {-1.0, 1.0})
                for (double i : {-1.0, 1.0})
                    if (!has_value(spectrum_G(4), 1 + s * std::sqrt(5 + m * 2 * std::sqrt(2 + i * r2)))) {
                        detail = "G level 4";
                        return false;
                    }
        // Gtilde lists {4; 2; 2 +- sqrt2; 2 +- sqrt(2 +- sqrt2)}
        if (!(has_value(spectrum_Gtilde(1), 2) && has_value(spectrum_Gtilde(1), 4))) { detail = "Gt level 1"; return false; }
        for (double s : {-1.0, 1.0})
            if (!has_value(spectrum_Gtilde(2), 2 + s * r2)) { detail = "Gt level 2"; return false; }
        for (double s : {-1.0, 1.0})
            for (double i : {-1.0, 1.0})
                if (!has_value(spectrum_Gtilde(3), 2 + s * std::sqrt(2 + i * r2))) { detail = "Gt level 3"; return false; }
        // Gamma level 3 contains 1 +- sqrt(6 -+ sqrt 6)
        for (double s : {-1.0, 1.0})
            for (double i : {-1.0, 1.0})
                if (!has_value(spectrum_Gamma(3), 1 + s * std::sqrt(6 + i * r6))) { detail = "Gamma level 3"; return false; }
        // GammaBar level 2 = {-2, 1-sqrt3, 1, 1+sqrt3, 4} with mults (2,2,2,2,1)
        const SpectrumMulti b2 = spectrum_GammaBar(2);
        if (b2.eigen.size() != 5 || mult_of(b2, -2) != 2 || mult_of(b2, 1 - r3) != 2 ||
            mult_of(b2, 1) != 2 || mult_of(b2, 1 + r3) != 2 || mult_of(b2, 4) != 1) {
            detail = "GammaBar level 2 table";
            return false;
        }
        detail = "all symbolic lists reproduced at 1e-9";
        return true;
    });

    criterion(3, "exact determinant identities (n <= 5, >= 20 points each, zero tolerance)",
              [](std::string& detail) {
        SamplePointSource src(20250811);
        auto no_pole_g = [](const Rational& l, const Rational& u) {
            (void)l;
            return (Rational(4) - u * u) != Rational(0);
        };
        auto no_pole_gf = [](const Rational& l, const Rational& u) {
            return (Rational(2) - u + l) != Rational(0) &&
                   (u * u - l * l - u - Rational(2)) != Rational(0);
        };
        auto no_pole_bg = [](const Rational& l, const Rational& u) {
            return (Rational(2) - u + l) != Rational(0) && (Rational(1) + u - l) != Rational(0);
        };
        long instances = 0;
        for (int n = 2; n <= 5; ++n) {
            for (int k = 0; k < 20; ++k) {
                {
                    auto [l, u] = src.next_point(no_pole_g);
                    if (!check_QG_recursion(n, l, u)) { detail = "lem:QG at n=" + std::to_string(n); return false; }
                    if (!check_phi_product(n, l, u)) { detail = "Phi product at n=" + std::to_string(n); return false; }
                    if (!check_Gtilde_rescaling(n, l, u)) { detail = "Gtilde rescaling at n=" + std::to_string(n); return false; }
                }
                {
                    auto [l, u] = src.next_point(no_pole_gf);
                    if (!check_GF1_recursion(n, l, u)) { detail = "lem:GF1 at n=" + std::to_string(n); return false; }
                }
                {
                    auto [l, u] = src.next_point(no_pole_bg);
                    if (!check_BG1_recursion(n, l, u)) { detail = "lem:BG1 at n=" + std::to_string(n); return false; }
                }
                instances += 5;
            }
        }
        detail = std::to_string(instances) + " exact identity instances";
        return true;
    });

    criterion(4, "dimension conservation", [](std::string& detail) {
        for (Group g : all_groups()) {
            const int cap = alphabet_size(g) == 2 ? 8 : 6;
            for (int n = 0; n <= cap; ++n) {
                const SpectrumMulti s = spectrum_closed_form(g, n);
                long total = 0;
                for (const auto& [v, m] : s.eigen) total += m;
                if (total != s.dim) { detail = group_name(g) + " level " + std::to_string(n); return false; }
            }
        }
        for (int n = 2; n <= 6; ++n) {
            long total = 1 + pow3(n - 1) + 1;
            for (int m = 2; m <= n; ++m) total += (1L << (m - 2)) * 2 * (pow3(n - m) + 1);
            if (total != pow3(n)) { detail = "Gamma counting identity at n=" + std::to_string(n); return false; }
        }
        detail = "sum of multiplicities = d^n everywhere; Gamma counting identity for n=2..6";
        return true;
    });

    criterion(5, "Schreier equivalence and adjacency spectra", [](std::string& detail) {
        for (Group g : {Group::G, Group::Gtilde, Group::Gamma, Group::GammaBar}) {
            const int cap = alphabet_size(g) == 2 ? 8 : 6;
            for (int n = 0; n <= cap; ++n) {
                const LabeledGraph act = action_graph(g, n);
                if (!labeled_isomorphic(act, substitution_graph(g, n))) {
                    detail = group_name(g) + " level " + std::to_string(n) + ": not isomorphic";
                    return false;
                }
                // adjacency == Hecke operator exactly (label-wise permutations),
                // hence adjacency spectra equal operator spectra with deviation 0
                for (std::size_t l = 0; l < act.labels.size(); ++l)
                    if (act.succ[l] != block_permutation(g, act.labels[l], n)) {
                        detail = "adjacency != operator at level " + std::to_string(n);
                        return false;
                    }
            }
            // numeric confirmation against the closed forms at the oracle caps
            const int ncap = alphabet_size(g) == 2 ? 7 : 5;
            const LevelMatrix adj = graph_adjacency(action_graph(g, ncap));
            const CompareReport rep = compare_spectra(spectrum_closed_form(g, ncap), eigen_symmetric(adj), 1e-9);
            if (!rep.pass) { detail = "adjacency spectrum deviates for " + group_name(g); return false; }
        }
        detail = "substitution = action (G,Gt <= 8; Gamma,GammaBar <= 6); adjacency = operator exactly";
        return true;
    });

    criterion(6, "Gamma growth series and diameter", [](std::string& detail) {
        for (int n = 0; n <= 8; ++n) {
            const GrowthResult r = growth_and_diameter(action_graph(Group::Gamma, n), n <= 5 ? 243 : 0);
            if (r.basepoint_eccentricity != (1 << n) - 1) {
                detail = "eccentricity != 2^n - 1 at n=" + std::to_string(n);
                return false;
            }
            if (n <= 5 && r.diameter && *r.diameter != (1 << n) - 1) {
                detail = "diameter != 2^n - 1 at n=" + std::to_string(n);
                return false;
            }
            std::vector<long> expect{1};
            for (int i = 0; i < n; ++i) {
                std::vector<long> next(expect.size() + (1u << i), 0);
                for (std::size_t k = 0; k < expect.size(); ++k) {
                    next[k] += expect[k];
                    next[k + (1u << i)] += 2 * expect[k];
                }
                expect = std::move(next);
            }
            if (r.growth.coeffs != expect) {
                detail = "growth series != prod (1 + 2X^(2^i)) at n=" + std::to_string(n);
                return false;
            }
        }
        detail = "exact product decomposition and eccentricity 2^n - 1 for n <= 8";
        return true;
    });

    criterion(7, "limit-set convergence and Julia data", [](std::string& detail) {
        const auto limit = limit_spectrum(Group::G).intervals;
        double prev = 1e300, last = 0.0;
        for (int n = 3; n <= 8; ++n) {
            std::vector<double> vals;
            for (const auto& [v, m] : spectrum_G(n).eigen) vals.push_back(v);
            last = hausdorff_to_intervals(vals, limit);
            if (last > prev + 1e-12) { detail = "Hausdorff distance increased at n=" + std::to_string(n); return false; }
            prev = last;
        }
        if (last > 0.1) { detail = "Hausdorff distance above 0.1 at level 8"; return false; }
        if (dyn_classify(dynamics_Gamma(), -1.0, 64) != DynCase::SupersetXiNotInK) { detail = "Gamma trichotomy"; return false; }
        if (dyn_classify(dynamics_GammaBar(), 2.0, 64) != DynCase::SupersetXiInK) { detail = "GammaBar trichotomy"; return false; }
        if (julia_conjugation(Group::Gamma).lambda != Rational(6)) { detail = "Gamma lambda"; return false; }
        if (julia_conjugation(Group::GammaBar).lambda != Rational(45, 16)) { detail = "GammaBar lambda"; return false; }
        std::ostringstream os;
        os << "level-8 Hausdorff distance " << last << "; lambda = 6 and 45/16 exact";
        detail = os.str();
        return true;
    });

    criterion(8, "measures: KS distance and Kesten moments", [](std::string& detail) {
        const double ks = ks_distance(measure_from_spectrum(spectrum_Gtilde(10)), &cdf_Gtilde);
        if (ks > 0.05) { detail = "Gtilde level-10 KS distance " + std::to_string(ks); return false; }
        double worst = 0.0;
        for (Group g : all_groups()) {
            const MomentReport rep = moment_check(markov_operator(g, 4), 0, 12);
            worst = std::max(worst, rep.max_deviation);
            if (rep.max_deviation > 1e-9) { detail = "moment identity broke for " + group_name(g); return false; }
        }
        std::ostringstream os;
        os << "KS " << ks << "; worst moment deviation " << worst;
        detail = os.str();
        return true;
    });

    criterion(9, "limiting weights (mu columns)", [](std::string& detail) {
        const double r6 = std::sqrt(6.0), r3 = std::sqrt(3.0);
        if (limiting_weight(Group::Gamma, 1.0) != Rational(1, 3)) { detail = "Gamma mu(1)"; return false; }
        for (double s : {-1.0, 1.0})
            if (limiting_weight(Group::Gamma, 1.0 + s * r6) != Rational(1, 9)) { detail = "Gamma mu(1 +- sqrt6)"; return false; }
        for (double s : {-1.0, 1.0})
            for (double i : {-1.0, 1.0})
                if (limiting_weight(Group::Gamma, 1.0 + s * std::sqrt(6.0 + i * r6)) != Rational(1, 27)) {
                    detail = "Gamma level-3 family";
                    return false;
                }
        if (limiting_weight(Group::GammaBar, 1.0) != Rational(2, 9)) { detail = "GammaBar mu(1)"; return false; }
        if (limiting_weight(Group::GammaBar, -2.0) != Rational(1, 3)) { detail = "GammaBar mu(-2)"; return false; }
        // per-eigenvalue 1/27 confirmed by the multiplicity counts at n=6:
        // X_3 carries 3^3 + 1 = 28, Y_3 carries 3^3 - 1 = 26, both -> 27/729.
        const SpectrumMulti s6 = spectrum_GammaBar(6);
        if (mult_of(s6, 1.0 + r3) != 28 || mult_of(s6, 1.0 - r3) != 28) { detail = "X_3 count at n=6"; return false; }
        if (mult_of(s6, 1.0 + r6) != 26 || mult_of(s6, 1.0 - r6) != 26) { detail = "Y_3 count at n=6"; return false; }
        if (limiting_weight(Group::GammaBar, 1.0 + r3) != Rational(1, 27) ||
            limiting_weight(Group::GammaBar, 1.0 + r6) != Rational(1, 27)) {
            detail = "per-eigenvalue 1/27";
            return false;
        }
        detail = "per-eigenvalue weights match; 2/27 is the mass of a +- pair, 1/27 per eigenvalue";
        return true;
    });

    criterion(10, "negative control: verify --selftest-negative exits 3", [&](std::string& detail) {
        if (cli_path.empty()) { detail = "no CLI path given"; return false; }
        const std::string cmd = "'" + cli_path + "' verify --selftest-negative > /dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        if (code != kExitVerification) {
            detail = "exit code " + std::to_string(code) + ", expected 3";
            return false;
        }
        const std::string ok_cmd = "'" + cli_path + "' verify > /dev/null 2>&1";
        const int ok_raw = std::system(ok_cmd.c_str());
        const int ok_code = WIFEXITED(ok_raw) ? WEXITSTATUS(ok_raw) : -1;
        if (ok_code != kExitOk) {
            detail = "clean verify exited " + std::to_string(ok_code);
            return false;
        }
        detail = "fault injection detected (exit 3); clean run exits 0";
        return true;
    });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(g_failures) + " CRITERIA FAILED")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
