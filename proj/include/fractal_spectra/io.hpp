#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "closed_form.hpp"
#include "matrix.hpp"
#include "numeric_spectra.hpp"
#include "tree_groups.hpp"

namespace fractal_spectra {

/// All floating output carries 15 significant digits.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

/// Spectrum artifact schema:
/// {group, level, dim, eigen: [{value, mult}], method} with values as
/// decimal strings.
inline nlohmann::ordered_json spectrum_json(Group g, int level, const SpectrumMulti& s,
                                            const std::string& method) {
    nlohmann::ordered_json j;
    j["group"] = group_name(g);
    j["level"] = level;
    j["dim"] = s.dim;
    j["eigen"] = nlohmann::ordered_json::array();
    for (const auto& [v, m] : s.eigen) j["eigen"].push_back({{"value", format_double(v)}, {"mult", m}});
    j["method"] = method;
    return j;
}

inline SpectrumMulti spectrum_from_eigen(const EigenResult& er) {
    // cluster numeric eigenvalues into (value, mult) pairs
    double scale = 1.0;
    for (double v : er.values) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-8 * scale;
    std::vector<std::pair<double, long>> pairs;
    for (std::size_t i = 0; i < er.values.size();) {
        std::size_t j = i;
        while (j < er.values.size() && er.values[j] - er.values[i] <= tol) ++j;
        pairs.emplace_back(er.values[i], static_cast<long>(j - i));
        i = j;
    }
    return make_spectrum(std::move(pairs), static_cast<long>(er.values.size()));
}

/// Matrix CSV: row-major, exact rationals in GMP canonical text ("p" or "p/q").
inline std::string matrix_csv(const LevelMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m(i, j).str();
        }
        os << "\n";
    }
    return os.str();
}

/// Histogram CSV: bin_left,bin_right,mass.
inline std::string histogram_csv(const DiscreteMeasure& h, int bins) {
    const double lo = -4.0, hi = 4.0, w = (hi - lo) / bins;
    std::ostringstream os;
    os << "bin_left,bin_right,mass\n";
    for (const auto& [center, mass] : h.atoms) {
        const double left = center - w / 2.0, right = center + w / 2.0;
        os << format_double(left) << "," << format_double(right) << "," << format_double(mass) << "\n";
    }
    return os.str();
}

/// Atom CSV: location,mass.
inline std::string measure_csv(const DiscreteMeasure& m) {
    std::ostringstream os;
    os << "location,mass\n";
    for (const auto& [loc, mass] : m.atoms) os << format_double(loc) << "," << format_double(mass) << "\n";
    return os.str();
}

inline std::string density_samples_csv(Group g, int samples) {
    std::ostringstream os;
    os << "x,density\n";
    auto emit_interval = [&](double lo, double hi, double (*f)(double)) {
        for (int i = 1; i < samples; ++i) {
            const double x = lo + (hi - lo) * i / samples;
            os << format_double(x) << "," << format_double(f(x)) << "\n";
        }
    };
    if (g == Group::G) {
        emit_interval(-2.0, 0.0, &density_G);
        emit_interval(2.0, 4.0, &density_G);
    } else if (g == Group::Gtilde) {
        emit_interval(0.0, 4.0, &density_Gtilde);
    } else {
        throw input_error("density curves exist for g and gtilde only");
    }
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw input_error("failed writing '" + path + "'");
}

}  // namespace fractal_spectra
