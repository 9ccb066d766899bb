#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace fractal_spectra {

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

enum class Group { G, Gtilde, Gamma, GammaBar, GammaBarBar };

inline int alphabet_size(Group g) {
    return (g == Group::G || g == Group::Gtilde) ? 2 : 3;
}

inline std::string group_name(Group g) {
    switch (g) {
        case Group::G: return "g";
        case Group::Gtilde: return "gtilde";
        case Group::Gamma: return "gamma";
        case Group::GammaBar: return "gammabar";
        case Group::GammaBarBar: return "gammabarbar";
    }
    throw internal_error("group_name: bad tag");
}

inline std::optional<Group> parse_group(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "g") return Group::G;
    if (s == "gtilde") return Group::Gtilde;
    if (s == "gamma") return Group::Gamma;
    if (s == "gammabar") return Group::GammaBar;
    if (s == "gammabarbar") return Group::GammaBarBar;
    return std::nullopt;
}

inline std::vector<Group> all_groups() {
    return {Group::G, Group::Gtilde, Group::Gamma, Group::GammaBar, Group::GammaBarBar};
}

/// The symmetric generating set used for the Hecke operator (4 summands).
inline std::vector<std::string> generator_names(Group g) {
    switch (g) {
        case Group::G:
        case Group::Gtilde: return {"a", "b", "c", "d"};
        case Group::Gamma: return {"a", "a^-1", "s", "s^-1"};
        case Group::GammaBar: return {"a", "a^-1", "t", "t^-1"};
        case Group::GammaBarBar: return {"a", "a^-1", "r", "r^-1"};
    }
    throw internal_error("generator_names: bad tag");
}

// ---------------------------------------------------------------------------
// Words and permutations
// ---------------------------------------------------------------------------

/// A vertex of the rooted d-ary tree: a finite word over {0,...,d-1}.
struct TreeWord {
    std::vector<int> letters;

    static TreeWord from_string(const std::string& s) {
        TreeWord w;
        w.letters.reserve(s.size());
        for (char c : s) {
            if (c < '0' || c > '9') throw input_error("TreeWord: bad letter in '" + s + "'");
            w.letters.push_back(c - '0');
        }
        return w;
    }
    std::string str() const {
        std::string s;
        s.reserve(letters.size());
        for (int x : letters) s.push_back(static_cast<char>('0' + x));
        return s;
    }
    std::size_t size() const { return letters.size(); }
};

/// First letter most significant, so the first letter selects the block row
/// of the level matrices.
inline std::uint64_t word_index(const TreeWord& w, int d) {
    std::uint64_t idx = 0;
    for (int x : w.letters) {
        if (x < 0 || x >= d) throw input_error("word_index: letter out of range");
        idx = idx * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(x);
    }
    return idx;
}

inline TreeWord index_word(std::uint64_t idx, int d, int n) {
    TreeWord w;
    w.letters.assign(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        w.letters[i] = static_cast<int>(idx % d);
        idx /= d;
    }
    return w;
}

struct Permutation {
    std::vector<int> images;

    explicit Permutation(int d = 0) : images(d) {
        for (int i = 0; i < d; ++i) images[i] = i;
    }
    static Permutation from_images(std::vector<int> im) {
        Permutation p;
        p.images = std::move(im);
        if (!p.is_bijection()) throw input_error("Permutation: not a bijection");
        return p;
    }
    static Permutation cycle_shift(int d, int k) {  // x -> x+k mod d
        Permutation p(d);
        for (int i = 0; i < d; ++i) p.images[i] = (i + k) % d;
        return p;
    }

    int degree() const { return static_cast<int>(images.size()); }
    int operator()(int x) const { return images[static_cast<std::size_t>(x)]; }

    bool is_bijection() const {
        std::vector<bool> seen(images.size(), false);
        for (int x : images) {
            if (x < 0 || x >= degree() || seen[static_cast<std::size_t>(x)]) return false;
            seen[static_cast<std::size_t>(x)] = true;
        }
        return true;
    }
    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (images[static_cast<std::size_t>(i)] != i) return false;
        return true;
    }
    Permutation inverse() const {
        Permutation p(degree());
        for (int i = 0; i < degree(); ++i) p.images[static_cast<std::size_t>(images[static_cast<std::size_t>(i)])] = i;
        return p;
    }
    /// (this o other)(x) = this(other(x))
    Permutation compose(const Permutation& other) const {
        Permutation p(degree());
        for (int i = 0; i < degree(); ++i) p.images[static_cast<std::size_t>(i)] = images[static_cast<std::size_t>(other(i))];
        return p;
    }
    friend bool operator==(const Permutation& a, const Permutation& b) { return a.images == b.images; }
};

// ---------------------------------------------------------------------------
// Transducers
// ---------------------------------------------------------------------------

/// A finite invertible Mealy machine: per-state output permutation of the
/// alphabet and per-letter state transitions. The initial state names the
/// tree automorphism it computes.
struct Transducer {
    int alphabet = 2;
    std::vector<std::string> state_names;
    std::vector<Permutation> output;              // [state]
    std::vector<std::vector<int>> transition;     // [state][letter] -> state
    int initial = 0;

    int state_of(const std::string& name) const {
        for (std::size_t i = 0; i < state_names.size(); ++i)
            if (state_names[i] == name) return static_cast<int>(i);
        throw input_error("Transducer: unknown state '" + name + "'");
    }
};

/// g(x sigma) = tau(q)(x) . machine_at(transition(q,x))(sigma)
inline TreeWord apply_transducer(const Transducer& t, const TreeWord& w) {
    TreeWord out;
    out.letters.reserve(w.letters.size());
    int q = t.initial;
    for (int x : w.letters) {
        if (x < 0 || x >= t.alphabet) throw input_error("apply_transducer: letter out of range");
        out.letters.push_back(t.output[static_cast<std::size_t>(q)](x));
        q = t.transition[static_cast<std::size_t>(q)][static_cast<std::size_t>(x)];
    }
    return out;
}

namespace detail {

// Full machine per preset; all generator states plus the trivial state "1".
inline Transducer preset_machine(Group g) {
    Transducer t;
    t.alphabet = alphabet_size(g);
    const int d = t.alphabet;
    std::vector<std::vector<std::string>> next_names;  // resolved to indices once all states exist
    auto add = [&](const std::string& name, Permutation out, std::vector<std::string> next) {
        t.state_names.push_back(name);
        t.output.push_back(std::move(out));
        t.transition.emplace_back();
        next_names.push_back(std::move(next));
    };
    const Permutation id(d), shift1 = Permutation::cycle_shift(d, 1), shift2 = Permutation::cycle_shift(d, d - 1);
    switch (g) {
        case Group::G:
            add("1", id, {"1", "1"});
            add("a", shift1, {"1", "1"});
            add("b", id, {"a", "c"});
            add("c", id, {"a", "d"});
            add("d", id, {"1", "b"});
            break;
        case Group::Gtilde:
            add("1", id, {"1", "1"});
            add("a", shift1, {"1", "1"});
            add("b", id, {"a", "c"});
            add("c", id, {"1", "d"});
            add("d", id, {"1", "b"});
            break;
        case Group::Gamma:
            add("1", id, {"1", "1", "1"});
            add("a", shift1, {"1", "1", "1"});
            add("a^-1", shift2, {"1", "1", "1"});
            add("s", id, {"a", "1", "s"});
            add("s^-1", id, {"a^-1", "1", "s^-1"});
            break;
        case Group::GammaBar:
            add("1", id, {"1", "1", "1"});
            add("a", shift1, {"1", "1", "1"});
            add("a^-1", shift2, {"1", "1", "1"});
            add("t", id, {"a", "a", "t"});
            add("t^-1", id, {"a^-1", "a^-1", "t^-1"});
            break;
        case Group::GammaBarBar:
            add("1", id, {"1", "1", "1"});
            add("a", shift1, {"1", "1", "1"});
            add("a^-1", shift2, {"1", "1", "1"});
            add("r", id, {"a", "a^-1", "r"});
            add("r^-1", id, {"a^-1", "a", "r^-1"});
            break;
    }
    for (std::size_t q = 0; q < t.state_names.size(); ++q) {
        t.transition[q].resize(static_cast<std::size_t>(d));
        for (int x = 0; x < d; ++x) t.transition[q][static_cast<std::size_t>(x)] = t.state_of(next_names[q][static_cast<std::size_t>(x)]);
    }
    return t;
}

}  // namespace detail

/// Transducer computing the named generator of the preset.
inline Transducer preset_transducer(Group g, const std::string& generator) {
    Transducer t = detail::preset_machine(g);
    const auto names = generator_names(g);
    if (std::find(names.begin(), names.end(), generator) == names.end())
        throw input_error("preset_transducer: '" + generator + "' is not a generator of " + group_name(g));
    t.initial = t.state_of(generator);
    return t;
}

// ---------------------------------------------------------------------------
// Wreath decomposition
// ---------------------------------------------------------------------------

/// Root permutation plus the d restrictions, each a generator name or "1".
struct WreathDecomposition {
    Permutation root;
    std::vector<std::string> children;
};

inline WreathDecomposition wreath_decompose(Group g, const std::string& generator) {
    const int d = alphabet_size(g);
    const Transducer t = preset_transducer(g, generator);
    WreathDecomposition w{t.output[static_cast<std::size_t>(t.initial)], {}};
    w.children.reserve(static_cast<std::size_t>(d));
    for (int x = 0; x < d; ++x)
        w.children.push_back(t.state_names[static_cast<std::size_t>(t.transition[static_cast<std::size_t>(t.initial)][static_cast<std::size_t>(x)])]);
    return w;
}

// ---------------------------------------------------------------------------
// Level actions
// ---------------------------------------------------------------------------

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

/// Dimension budget; FRACTAL_SPECTRA_MAX_DIM raises or lowers it globally.
inline std::uint64_t max_dim_budget() {
    if (const char* env = std::getenv("FRACTAL_SPECTRA_MAX_DIM")) {
        const long long v = std::atoll(env);
        if (v > 0) return static_cast<std::uint64_t>(v);
    }
    return 1u << 20;
}

inline std::uint64_t checked_level_dim(Group g, int n) {
    if (n < 0) throw input_error("level must be nonnegative");
    const int d = alphabet_size(g);
    const std::uint64_t dim = ipow(static_cast<std::uint64_t>(d), n);
    if (dim > max_dim_budget())
        throw resource_error("level " + std::to_string(n) + " exceeds the dimension budget");
    return dim;
}

/// Permutation induced on level-n words (lexicographic indexing); computed by
/// running the transducer over every word.
inline std::vector<std::uint32_t> level_action(Group g, const std::string& generator, int n) {
    const int d = alphabet_size(g);
    const std::uint64_t dim = checked_level_dim(g, n);
    const Transducer t = preset_transducer(g, generator);
    std::vector<std::uint32_t> perm(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
        const TreeWord w = index_word(i, d, n);
        perm[i] = static_cast<std::uint32_t>(word_index(apply_transducer(t, w), d));
    }
    return perm;
}

// ---------------------------------------------------------------------------
// Portraits
// ---------------------------------------------------------------------------

namespace detail {

// Free reduction using only the relations of the preset tables: all four
// generators are involutions for G and Gtilde; the Gamma family cancels
// formal inverses and applies a^3 = 1.
inline std::vector<std::string> free_reduce(Group g, const std::vector<std::string>& word) {
    const bool involutive = alphabet_size(g) == 2;
    auto inverse_name = [&](const std::string& x) -> std::string {
        if (involutive) return x;
        if (x.size() > 3 && x.substr(x.size() - 3) == "^-1") return x.substr(0, x.size() - 3);
        return x + "^-1";
    };
    std::vector<std::string> out;
    auto push = [&](const std::string& x) {
        if (x == "1") return;
        if (!out.empty() && out.back() == inverse_name(x)) {
            out.pop_back();
            return;
        }
        if (!involutive && (x == "a" || x == "a^-1") && !out.empty() && out.back() == x) {
            out.back() = inverse_name(x);  // aa -> a^-1, a^-1 a^-1 -> a
            return;
        }
        out.push_back(x);
    };
    for (const auto& x : word) push(x);
    return out;
}

struct WordDecomposition {
    Permutation root;
    std::vector<std::vector<std::string>> children;  // freely reduced
};

// Wreath decomposition of a product g_1 g_2 ... g_k (leftmost acts last on
// letters already permuted by the right factors).
inline WordDecomposition decompose_word(Group g, const std::vector<std::string>& word) {
    const int d = alphabet_size(g);
    WordDecomposition acc{Permutation(d), std::vector<std::vector<std::string>>(static_cast<std::size_t>(d))};
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const WreathDecomposition wd = wreath_decompose(g, *it);
        WordDecomposition next{wd.root.compose(acc.root), std::vector<std::vector<std::string>>(static_cast<std::size_t>(d))};
        for (int x = 0; x < d; ++x) {
            auto& child = next.children[static_cast<std::size_t>(x)];
            const std::string& head = wd.children[static_cast<std::size_t>(acc.root(x))];
            if (head != "1") child.push_back(head);
            const auto& tail = acc.children[static_cast<std::size_t>(x)];
            child.insert(child.end(), tail.begin(), tail.end());
        }
        acc = std::move(next);
    }
    for (auto& c : acc.children) c = free_reduce(g, c);
    return acc;
}

}  // namespace detail

/// Depth of the portrait of the given generator word, via iterated wreath
/// decomposition with free reduction of the child words.
inline int portrait_depth(Group g, const std::vector<std::string>& word, int max_level) {
    const std::vector<std::string> reduced = detail::free_reduce(g, word);
    if (reduced.size() <= 1) return 0;
    if (max_level <= 0) throw resource_error("portrait_depth: max_level exceeded");
    const detail::WordDecomposition wd = detail::decompose_word(g, reduced);
    int depth = 0;
    for (const auto& child : wd.children)
        depth = std::max(depth, portrait_depth(g, child, max_level - 1));
    return 1 + depth;
}

}  // namespace fractal_spectra
