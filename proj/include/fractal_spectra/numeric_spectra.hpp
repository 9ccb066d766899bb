#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "closed_form.hpp"
#include "matrix.hpp"

namespace fractal_spectra {

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver (cyclic Jacobi)
// ---------------------------------------------------------------------------

struct EigenResult {
    std::vector<double> values;  // ascending
    DMatrix vectors;             // column i pairs with values[i]
    double residual_bound;       // max_i ||M v_i - lambda_i v_i||_2
};

namespace detail {

inline double offdiag_norm(const DMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

}  // namespace detail

/// Cyclic Jacobi with a fixed sweep order; no randomized pivoting, so the
/// output is identical for identical input.
inline EigenResult eigen_symmetric_d(DMatrix m) {
    if (!m.is_square()) throw input_error("eigen_symmetric: matrix not square");
    if (!m.is_symmetric()) throw input_error("eigen_symmetric: matrix not symmetric");
    const std::size_t n = m.rows();
    DMatrix v = DMatrix::identity(n);
    double fro = 0.0;
    for (double x : m.data()) fro += x * x;
    fro = std::sqrt(fro);
    const double stop = (fro > 0 ? fro : 1.0) * 1e-13;

    DMatrix orig = m;
    for (int sweep = 0; sweep < 64 && detail::offdiag_norm(m) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::fabs(apq) <= stop / static_cast<double>(n)) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

    EigenResult r;
    r.values.resize(n);
    r.vectors = DMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        r.values[c] = m(order[c], order[c]);
        for (std::size_t k = 0; k < n; ++k) r.vectors(k, c) = v(k, order[c]);
    }
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mv = 0.0;
            for (std::size_t k = 0; k < n; ++k) mv += orig(i, k) * r.vectors(k, c);
            const double res = mv - r.values[c] * r.vectors(i, c);
            acc += res * res;
        }
        worst = std::max(worst, std::sqrt(acc));
    }
    r.residual_bound = worst;
    return r;
}

/// Exact symmetry is required of the rational input (tolerance 0).
inline EigenResult eigen_symmetric(const LevelMatrix& m) {
    if (!m.is_symmetric()) throw input_error("eigen_symmetric: matrix not symmetric");
    return eigen_symmetric_d(to_double(m));
}

// ---------------------------------------------------------------------------
// Spectrum comparison
// ---------------------------------------------------------------------------

struct CompareReport {
    double max_deviation;
    bool pass;
};

inline CompareReport compare_spectra(const SpectrumMulti& a, const EigenResult& b, double tol) {
    const std::vector<double> av = expand_with_multiplicity(a);
    if (av.size() != b.values.size())
        throw input_error("compare_spectra: dimension mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) dev = std::max(dev, std::fabs(av[i] - b.values[i]));
    return {dev, dev <= tol};
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

struct DiscreteMeasure {
    std::vector<std::pair<double, double>> atoms;  // (location, mass), sorted
    double total = 0.0;
};

inline DiscreteMeasure measure_from_spectrum(const SpectrumMulti& s) {
    DiscreteMeasure m;
    for (const auto& [v, mult] : s.eigen) {
        const double mass = static_cast<double>(mult) / static_cast<double>(s.dim);
        m.atoms.emplace_back(v, mass);
        m.total += mass;
    }
    return m;
}

/// Eigenvalue mass binned over [-4,4]; atom at each bin midpoint.
inline DiscreteMeasure empiric_histogram(const SpectrumMulti& s, int bins) {
    if (bins < 1) throw input_error("empiric_histogram: bins must be >= 1");
    const double lo = -4.0, hi = 4.0, w = (hi - lo) / bins;
    std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
    for (const auto& [v, mult] : s.eigen) {
        int b = static_cast<int>(std::floor((v - lo) / w));
        b = std::clamp(b, 0, bins - 1);
        mass[static_cast<std::size_t>(b)] += static_cast<double>(mult) / static_cast<double>(s.dim);
    }
    DiscreteMeasure m;
    for (int b = 0; b < bins; ++b) {
        if (mass[static_cast<std::size_t>(b)] == 0.0) continue;
        m.atoms.emplace_back(lo + (b + 0.5) * w, mass[static_cast<std::size_t>(b)]);
        m.total += mass[static_cast<std::size_t>(b)];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Limit densities (d = 2 groups)
// ---------------------------------------------------------------------------

/// Density of the pushforward of the uniform measure on [0,pi] x {+-1} under
/// chi(theta,eps) = 1 + eps sqrt(5+4cos theta); support (-2,0) u (2,4).
/// (The numerator is |x-1|: taking the derivative's absolute value keeps the
/// density nonnegative on both branches.)
inline double density_G(double x) {
    const bool in_lo = x > -2.0 && x < 0.0, in_hi = x > 2.0 && x < 4.0;
    if (!in_lo && !in_hi) throw input_error("density_G: x outside the open support");
    const double u = ((x - 1.0) * (x - 1.0) - 5.0) / 4.0;
    return std::fabs(x - 1.0) / (4.0 * M_PI * std::sqrt(1.0 - u * u));
}

/// Arcsine-type density 1/(pi sqrt(4x - x^2)) on (0,4).
inline double density_Gtilde(double x) {
    if (x <= 0.0 || x >= 4.0) throw input_error("density_Gtilde: x outside the open support");
    return 1.0 / (M_PI * std::sqrt(4.0 * x - x * x));
}

inline double cdf_G(double x) {
    if (x <= -2.0) return 0.0;
    if (x < 0.0) return std::acos(((1.0 - x) * (1.0 - x) - 5.0) / 4.0) / (2.0 * M_PI);
    if (x < 2.0) return 0.5;
    if (x < 4.0) return 1.0 - std::acos(((x - 1.0) * (x - 1.0) - 5.0) / 4.0) / (2.0 * M_PI);
    return 1.0;
}

inline double cdf_Gtilde(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 4.0) return 1.0;
    return (2.0 / M_PI) * std::asin(std::sqrt(x / 4.0));
}

/// Kolmogorov-Smirnov distance between a discrete measure and a CDF. The sup
/// over the line is attained at an atom, approached from either side; the
/// left approach evaluates the target just below the atom, which also makes
/// the distance of a step CDF to itself exactly zero.
inline double ks_distance(const DiscreteMeasure& h, const std::function<double(double)>& cdf) {
    std::vector<std::pair<double, double>> atoms = h.atoms;
    std::sort(atoms.begin(), atoms.end());
    double acc = 0.0, worst = 0.0;
    for (const auto& [x, mass] : atoms) {
        worst = std::max(worst, std::fabs(acc - cdf(std::nextafter(x, -1e300))));
        acc += mass;
        worst = std::max(worst, std::fabs(acc - cdf(x)));
    }
    worst = std::max(worst, std::fabs(acc - 1.0));
    return worst;
}

/// Right-continuous CDF of a discrete measure, as a callable.
inline std::function<double(double)> step_cdf(const DiscreteMeasure& m) {
    auto atoms = m.atoms;
    std::sort(atoms.begin(), atoms.end());
    return [atoms](double x) {
        double acc = 0.0;
        for (const auto& [loc, mass] : atoms) {
            if (loc > x) break;
            acc += mass;
        }
        return acc;
    };
}

// ---------------------------------------------------------------------------
// Kesten spectral measures
// ---------------------------------------------------------------------------

/// sigma_x = sum over eigenvalues of <proj_lambda e_x, e_x>; probability
/// measure on the spectrum of the Markov operator.
inline DiscreteMeasure kesten_measure(const LevelMatrix& markov, std::size_t basepoint) {
    if (basepoint >= markov.rows()) throw input_error("kesten_measure: basepoint out of range");
    const EigenResult er = eigen_symmetric(markov);
    const std::size_t n = markov.rows();
    double scale = 0.0;
    for (double v : er.values) scale = std::max(scale, std::fabs(v));
    const double cluster_tol = 1e-8 * std::max(scale, 1.0);
    DiscreteMeasure m;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        double mass = 0.0;
        while (j < n && er.values[j] - er.values[i] <= cluster_tol) {
            const double comp = er.vectors(basepoint, j);
            mass += comp * comp;
            ++j;
        }
        m.atoms.emplace_back(er.values[i], mass);
        m.total += mass;
        i = j;
    }
    return m;
}

struct MomentReport {
    double max_deviation;
    std::vector<double> deviations;  // index k-1 holds moment k
};

/// Checks  sum lambda^k mass  ==  (M^k)_{xx}  for k = 1..N.
inline MomentReport moment_check(const LevelMatrix& markov, std::size_t basepoint, int N) {
    if (N < 1) throw input_error("moment_check: N must be >= 1");
    const DiscreteMeasure mu = kesten_measure(markov, basepoint);
    const DMatrix m = to_double(markov);
    const std::size_t n = m.rows();
    std::vector<double> power(n, 0.0);
    power[basepoint] = 1.0;  // column e_x, multiplied by M each step
    MomentReport rep{0.0, {}};
    for (int k = 1; k <= N; ++k) {
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * power[j];
            next[i] = acc;
        }
        power = std::move(next);
        double moment = 0.0;
        for (const auto& [loc, mass] : mu.atoms) moment += std::pow(loc, k) * mass;
        const double dev = std::fabs(moment - power[basepoint]);
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Explicit eigenvectors for G
// ---------------------------------------------------------------------------

/// The interleaved vertex ordering of the chain Schreier graph: from the
/// ordering (s_1..s_k) of level n-1, level n is (1s_1, 0s_1, 0s_2, 1s_2, ...).
inline std::vector<std::uint32_t> chain_ordering_G(int n) {
    std::vector<std::uint32_t> order{0};
    for (int lvl = 1; lvl <= n; ++lvl) {
        const std::uint32_t sub = 1u << (lvl - 1);
        std::vector<std::uint32_t> next;
        next.reserve(2u * order.size());
        for (std::size_t j = 0; j < order.size(); ++j) {
            const std::uint32_t one = sub + order[j], zero = order[j];
            if (j % 2 == 0) {
                next.push_back(one);
                next.push_back(zero);
            } else {
                next.push_back(zero);
                next.push_back(one);
            }
        }
        order = std::move(next);
    }
    return order;
}

/// Eigenvector of Delta_n for G at eigenvalue lambda, by the two-term parity
/// recursion v_1 = 1, v_2 = lambda-3 placed along the chain ordering.
/// Returned in standard lexicographic index order.
inline std::vector<double> eigenvector_G(int n, double lambda) {
    bool found = false;
    for (const auto& [v, m] : spectrum_G(n).eigen)
        if (std::fabs(v - lambda) <= 1e-9) { found = true; break; }
    if (!found) throw input_error("eigenvector_G: lambda is not an eigenvalue at this level");
    const std::size_t dim = 1ull << n;
    std::vector<double> vv(dim + 1, 0.0);
    vv[1] = 1.0;
    if (dim >= 2) vv[2] = lambda - 3.0;
    for (std::size_t i = 3; i <= dim; ++i) {
        if (i % 2 == 1)
            vv[i] = ((lambda - 1.0) * vv[i - 1] - vv[i - 2]) / 2.0;
        else
            vv[i] = (lambda - 1.0) * vv[i - 1] - 2.0 * vv[i - 2];
    }
    const std::vector<std::uint32_t> order = chain_ordering_G(n);
    std::vector<double> out(dim, 0.0);
    for (std::size_t pos = 0; pos < dim; ++pos) out[order[pos]] = vv[pos + 1];
    return out;
}

}  // namespace fractal_spectra
