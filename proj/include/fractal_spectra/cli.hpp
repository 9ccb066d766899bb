#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "io.hpp"
#include "julia.hpp"
#include "level_ops.hpp"
#include "schreier.hpp"
#include "verify.hpp"

namespace fractal_spectra {

// Exit-code contract, fixed for CI consumption.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitVerification = 3;

struct RunConfig {
    std::string command;
    Group group = Group::G;
    int level = 0;
    std::string method = "closed-form";  // closed-form | numeric | both
    int bins = 32;
    std::string out;                     // empty -> stdout
    std::string format = "json";         // json | csv | dot
    std::uint64_t seed = 12345;
    std::string construction = "action"; // action | subst
    bool kesten = false;
    bool verify_graph = false;
    bool selftest_negative = false;
    double julia_lambda = 6.0;
    int julia_depth = 1;
    std::string dump_matrix;             // optional path for the Hecke matrix CSV
};

/// Per-group level caps (closed-form wider than numeric); the dimension
/// budget from FRACTAL_SPECTRA_MAX_DIM still applies on top.
struct ResourceCaps {
    int closed_form_d2 = 10;
    int numeric_d2 = 7;
    int closed_form_d3 = 8;
    int numeric_d3 = 5;

    int closed_form_cap(Group g) const { return alphabet_size(g) == 2 ? closed_form_d2 : closed_form_d3; }
    int numeric_cap(Group g) const { return alphabet_size(g) == 2 ? numeric_d2 : numeric_d3; }
};

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& console) {
    if (cfg.out.empty())
        console << content;
    else
        write_text_file(cfg.out, content);
}

}  // namespace detail

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& console) {
    const ResourceCaps caps;
    if (cfg.level < 0) return kExitUsage;
    const bool numeric = cfg.method == "numeric" || cfg.method == "both";
    const int cap = numeric ? caps.numeric_cap(cfg.group) : caps.closed_form_cap(cfg.group);
    if (cfg.level > cap) {
        console << "level " << cfg.level << " exceeds the cap " << cap << " for method " << cfg.method << "\n";
        return kExitResource;
    }
    nlohmann::ordered_json j;
    if (cfg.method == "closed-form") {
        j = spectrum_json(cfg.group, cfg.level, spectrum_closed_form(cfg.group, cfg.level), "closed-form");
    } else if (cfg.method == "numeric") {
        const EigenResult er = eigen_symmetric_d(hecke_operator_d(cfg.group, cfg.level));
        j = spectrum_json(cfg.group, cfg.level, spectrum_from_eigen(er), "numeric");
        j["residual_bound"] = format_double(er.residual_bound);
    } else if (cfg.method == "both") {
        const SpectrumMulti closed = spectrum_closed_form(cfg.group, cfg.level);
        const EigenResult er = eigen_symmetric_d(hecke_operator_d(cfg.group, cfg.level));
        const CompareReport rep = compare_spectra(closed, er, 1e-9);
        j = spectrum_json(cfg.group, cfg.level, closed, "closed-form");
        j["comparison"] = {{"method", "numeric"},
                           {"max_deviation", format_double(rep.max_deviation)},
                           {"tolerance", format_double(1e-9)},
                           {"pass", rep.pass}};
        if (!rep.pass) {
            detail::emit(cfg, j.dump(2) + "\n", console);
            return kExitVerification;
        }
    } else {
        return kExitUsage;
    }
    if (!cfg.dump_matrix.empty()) write_text_file(cfg.dump_matrix, matrix_csv(hecke_operator(cfg.group, cfg.level)));
    detail::emit(cfg, j.dump(2) + "\n", console);
    return kExitOk;
}

inline int cmd_graph(const RunConfig& cfg, std::ostream& console) {
    const ResourceCaps caps;
    if (cfg.level < 0) return kExitUsage;
    if (cfg.level > caps.closed_form_cap(cfg.group)) {
        console << "level " << cfg.level << " exceeds the graph cap\n";
        return kExitResource;
    }
    const LabeledGraph g = cfg.construction == "subst" ? substitution_graph(cfg.group, cfg.level)
                                                       : action_graph(cfg.group, cfg.level);
    if (cfg.verify_graph) {
        const LabeledGraph other = cfg.construction == "subst" ? action_graph(cfg.group, cfg.level)
                                                               : substitution_graph(cfg.group, cfg.level);
        if (!labeled_isomorphic(g, other)) {
            console << "substitution/action isomorphism FAILED\n";
            return kExitVerification;
        }
        console << "substitution/action isomorphism verified\n";
    }
    if (cfg.format == "dot")
        detail::emit(cfg, export_dot(g), console);
    else if (cfg.format == "csv")
        detail::emit(cfg, export_csv(g), console);
    else
        return kExitUsage;
    return kExitOk;
}

inline int cmd_measure(const RunConfig& cfg, std::ostream& console) {
    const ResourceCaps caps;
    if (cfg.level < 0 || cfg.bins < 1) return kExitUsage;
    if (cfg.kesten) {
        if (cfg.level > caps.numeric_cap(cfg.group)) {
            console << "level exceeds the numeric cap\n";
            return kExitResource;
        }
        const LevelMatrix markov = markov_operator(cfg.group, cfg.level);
        const DiscreteMeasure m = kesten_measure(markov, 0);
        const MomentReport rep = moment_check(markov, 0, 12);
        console << "kesten_moment_max_dev_N12 = " << format_double(rep.max_deviation) << "\n";
        detail::emit(cfg, measure_csv(m), console);
        return rep.max_deviation <= 1e-9 ? kExitOk : kExitVerification;
    }
    if (cfg.level > caps.closed_form_cap(cfg.group)) {
        console << "level exceeds the closed-form cap\n";
        return kExitResource;
    }
    const SpectrumMulti s = spectrum_closed_form(cfg.group, cfg.level);
    const DiscreteMeasure hist = empiric_histogram(s, cfg.bins);
    std::string artifact = histogram_csv(hist, cfg.bins);
    if (cfg.group == Group::G || cfg.group == Group::Gtilde) {
        const auto cdf = cfg.group == Group::G ? &cdf_G : &cdf_Gtilde;
        const double ks = ks_distance(measure_from_spectrum(s), cdf);
        console << "ks_distance = " << format_double(ks) << "\n";
        if (!cfg.out.empty()) {
            const auto dotpos = cfg.out.rfind('.');
            const std::string stem = dotpos == std::string::npos ? cfg.out : cfg.out.substr(0, dotpos);
            write_text_file(stem + "_density.csv", density_samples_csv(cfg.group, 256));
        }
    }
    detail::emit(cfg, artifact, console);
    return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& console) {
    VerifyOptions opt;
    opt.seed = cfg.seed;
    opt.inject_fault = cfg.selftest_negative;
    const std::vector<CheckResult> checks = run_verification(opt);
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["selftest_negative"] = cfg.selftest_negative;
    j["checks"] = nlohmann::ordered_json::array();
    int failed = 0;
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        if (!c.pass) ++failed;
    }
    j["failed"] = failed;
    j["pass"] = failed == 0;
    detail::emit(cfg, j.dump(2) + "\n", console);
    return failed == 0 ? kExitOk : kExitVerification;
}

inline int cmd_julia(const RunConfig& cfg, std::ostream& console) {
    if (cfg.julia_lambda <= 0 || cfg.julia_depth < 1) return kExitUsage;
    if (cfg.julia_depth > 20) {
        console << "depth exceeds the budget\n";
        return kExitResource;
    }
    const std::vector<double> pre = julia_preimages_of_zero(cfg.julia_lambda, cfg.julia_depth);
    nlohmann::ordered_json j;
    j["lambda"] = format_double(cfg.julia_lambda);
    j["depth"] = cfg.julia_depth;
    j["preimages"] = nlohmann::ordered_json::array();
    for (double z : pre) j["preimages"].push_back(format_double(z));
    const bool gamma_family = std::fabs(cfg.julia_lambda - 6.0) <= 1e-12 ||
                              std::fabs(cfg.julia_lambda - 45.0 / 16.0) <= 1e-12;
    if (gamma_family) {
        std::vector<double> image;
        for (double z : pre) {
            image.push_back(1.0 + z);
            image.push_back(1.0 - z);
        }
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end(),
                                [](double x, double y) { return std::fabs(x - y) <= 1e-12; }),
                    image.end());
        j["spectral_image"] = nlohmann::ordered_json::array();
        for (double x : image) j["spectral_image"].push_back(format_double(x));
    }
    detail::emit(cfg, j.dump(2) + "\n", console);
    return kExitOk;
}

inline int run_command(const RunConfig& cfg, std::ostream& console) {
    try {
        if (cfg.command == "spectrum") return cmd_spectrum(cfg, console);
        if (cfg.command == "graph") return cmd_graph(cfg, console);
        if (cfg.command == "measure") return cmd_measure(cfg, console);
        if (cfg.command == "verify") return cmd_verify(cfg, console);
        if (cfg.command == "julia") return cmd_julia(cfg, console);
        return kExitUsage;
    } catch (const resource_error& e) {
        console << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const input_error& e) {
        console << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        console << "error: " << e.what() << "\n";
        return kExitVerification;
    }
}

}  // namespace fractal_spectra
