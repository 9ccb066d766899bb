#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <set>

#include "fractal_spectra/level_ops.hpp"
#include "fractal_spectra/tree_groups.hpp"

using namespace fractal_spectra;

namespace {

TreeWord W(const std::string& s) { return TreeWord::from_string(s); }

std::string act(Group g, const std::string& gen, const std::string& word) {
    return apply_transducer(preset_transducer(g, gen), W(word)).str();
}

// Recombines a wreath decomposition: g(x sigma) = root(x) . child_x(sigma).
std::string act_via_wreath(Group g, const std::string& gen, const std::string& word) {
    if (word.empty()) return "";
    const WreathDecomposition wd = wreath_decompose(g, gen);
    const int x = word[0] - '0';
    const std::string& child = wd.children[static_cast<std::size_t>(x)];
    const std::string rest = word.substr(1);
    const std::string mapped = child == "1" ? rest : act(g, child, rest);
    return std::string(1, static_cast<char>('0' + wd.root(x))) + mapped;
}

std::vector<std::string> all_words(int d, int n) {
    std::vector<std::string> out;
    const std::uint64_t dim = ipow(static_cast<std::uint64_t>(d), n);
    for (std::uint64_t i = 0; i < dim; ++i) out.push_back(index_word(i, d, n).str());
    return out;
}

}  // namespace

TEST_CASE("apply_transducer on the defining examples") {
    CHECK(act(Group::G, "a", "01") == "11");
    CHECK(act(Group::G, "b", "00") == "01");
    // b(1 sigma) = 1 c(sigma), and c acts trivially on length-1 words
    // (its root output is the identity), so b fixes "10".
    CHECK(act(Group::G, "b", "10") == "10");
    CHECK(act(Group::G, "b", "11") == "11");
    CHECK(act(Group::G, "b", "100") == "101");  // c("00") = "01"

    CHECK(act(Group::G, "d", "00") == "00");
    CHECK(act(Group::G, "d", "01") == "01");

    CHECK(act(Group::Gamma, "s", "210") == "210");
    CHECK(act(Group::Gamma, "s", "201") == "202");  // s(2 sigma) = 2 s(sigma), s("01") = "02"
    CHECK(act(Group::GammaBarBar, "r", "10") == "12");
    CHECK(act(Group::GammaBar, "t", "10") == "11");

    CHECK_THROWS_AS(apply_transducer(preset_transducer(Group::G, "a"), W("02")), input_error);
    CHECK_THROWS_AS(preset_transducer(Group::G, "s"), input_error);
    CHECK_THROWS_AS(preset_transducer(Group::Gamma, "b"), input_error);
}

TEST_CASE("preset transducers act bijectively level by level") {
    for (Group g : all_groups()) {
        const int d = alphabet_size(g);
        const int nmax = d == 2 ? 6 : 4;
        for (const auto& gen : generator_names(g)) {
            const Transducer t = preset_transducer(g, gen);
            for (int n = 1; n <= nmax; ++n) {
                std::set<std::string> images;
                for (const auto& w : all_words(d, n)) images.insert(apply_transducer(t, W(w)).str());
                CHECK(images.size() == ipow(static_cast<std::uint64_t>(d), n));
            }
        }
    }
}

TEST_CASE("wreath_decompose matches the phi tables") {
    const auto b = wreath_decompose(Group::G, "b");
    CHECK(b.root.is_identity());
    CHECK(b.children == std::vector<std::string>{"a", "c"});

    const auto c = wreath_decompose(Group::G, "c");
    CHECK(c.children == std::vector<std::string>{"a", "d"});
    const auto dgen = wreath_decompose(Group::G, "d");
    CHECK(dgen.children == std::vector<std::string>{"1", "b"});

    const auto a = wreath_decompose(Group::G, "a");
    CHECK(a.root.images == std::vector<int>{1, 0});
    CHECK(a.children == std::vector<std::string>{"1", "1"});

    const auto s = wreath_decompose(Group::Gamma, "s");
    CHECK(s.root.is_identity());
    CHECK(s.children == std::vector<std::string>{"a", "1", "s"});

    const auto t = wreath_decompose(Group::GammaBar, "t");
    CHECK(t.children == std::vector<std::string>{"a", "a", "t"});
    const auto r = wreath_decompose(Group::GammaBarBar, "r");
    CHECK(r.children == std::vector<std::string>{"a", "a^-1", "r"});
    const auto ri = wreath_decompose(Group::GammaBarBar, "r^-1");
    CHECK(ri.children == std::vector<std::string>{"a^-1", "a", "r^-1"});
}

TEST_CASE("wreath decomposition reproduces the transducer action") {
    for (Group g : all_groups()) {
        const int d = alphabet_size(g);
        const int n = d == 2 ? 5 : 4;
        for (const auto& gen : generator_names(g))
            for (const auto& w : all_words(d, n)) CHECK(act_via_wreath(g, gen, w) == act(g, gen, w));
    }
}

TEST_CASE("level_action basics") {
    CHECK(level_action(Group::G, "a", 1) == std::vector<std::uint32_t>{1, 0});
    CHECK(level_action(Group::Gamma, "a", 1) == std::vector<std::uint32_t>{1, 2, 0});

    // d's level-2 action, with apply_transducer on all four words as the oracle.
    const Transducer td = preset_transducer(Group::G, "d");
    std::vector<std::uint32_t> oracle;
    for (const auto& w : all_words(2, 2))
        oracle.push_back(static_cast<std::uint32_t>(word_index(apply_transducer(td, W(w)), 2)));
    CHECK(level_action(Group::G, "d", 2) == oracle);
    CHECK(oracle == std::vector<std::uint32_t>{0, 1, 2, 3});  // d fixes level 2 entirely

    CHECK_THROWS_AS(level_action(Group::G, "a", 40), resource_error);
}

TEST_CASE("level actions restrict consistently to shorter prefixes") {
    for (Group g : all_groups()) {
        const int d = alphabet_size(g);
        const int nmax = d == 2 ? 8 : 6;
        for (const auto& gen : generator_names(g)) {
            std::vector<std::uint32_t> prev = level_action(g, gen, 0);
            for (int n = 1; n <= nmax; ++n) {
                const std::vector<std::uint32_t> cur = level_action(g, gen, n);
                for (std::size_t i = 0; i < cur.size(); ++i)
                    REQUIRE(cur[i] / static_cast<std::uint32_t>(d) == prev[i / static_cast<std::size_t>(d)]);
                prev = cur;
            }
        }
    }
}

TEST_CASE("Klein relations for G at every level") {
    for (int n = 0; n <= 6; ++n) {
        const auto b = level_action(Group::G, "b", n);
        const auto c = level_action(Group::G, "c", n);
        const auto dd = level_action(Group::G, "d", n);
        const auto a = level_action(Group::G, "a", n);
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(b[c[dd[i]]] == i);   // bcd = 1
            CHECK(b[b[i]] == i);
            CHECK(c[c[i]] == i);
            CHECK(dd[dd[i]] == i);
            CHECK(a[a[i]] == i);
        }
    }
}

TEST_CASE("level transitivity of the generated group") {
    for (Group g : all_groups()) {
        const int nmax = 6;
        for (int n = 1; n <= nmax; ++n) {
            std::vector<std::vector<std::uint32_t>> gens;
            for (const auto& name : generator_names(g)) gens.push_back(level_action(g, name, n));
            const std::size_t dim = gens[0].size();
            std::vector<bool> seen(dim, false);
            std::vector<std::uint32_t> stack{0};
            seen[0] = true;
            std::size_t count = 1;
            while (!stack.empty()) {
                const std::uint32_t v = stack.back();
                stack.pop_back();
                for (const auto& p : gens)
                    if (!seen[p[v]]) {
                        seen[p[v]] = true;
                        ++count;
                        stack.push_back(p[v]);
                    }
            }
            CHECK(count == dim);
        }
    }
}

TEST_CASE("portrait_depth on small words") {
    CHECK(portrait_depth(Group::G, {}, 10) == 0);
    CHECK(portrait_depth(Group::G, {"a"}, 10) == 0);
    CHECK(portrait_depth(Group::G, {"b", "b"}, 10) == 0);  // reduces to identity

    // Brute-force reference for "ab": one decomposition step gives children
    // (a, c), both single generators, so the depth is 1.
    const auto wd = detail::decompose_word(Group::G, {"a", "b"});
    REQUIRE(wd.children.size() == 2);
    CHECK(wd.children[0] == std::vector<std::string>{"a"});
    CHECK(wd.children[1] == std::vector<std::string>{"c"});
    CHECK(portrait_depth(Group::G, {"a", "b"}, 10) == 1);

    CHECK(portrait_depth(Group::Gamma, {"a", "s"}, 10) >= 1);
    CHECK_THROWS_AS(portrait_depth(Group::Gamma, {"s", "s"}, 6), resource_error);
}

TEST_CASE("portrait decomposition satisfies the contraction bound") {
    // |g_i| <= (|g|+1)/2 on geodesic-shaped words (the alternating normal
    // form [a] x1 a x2 a ..., x_i in {b,c,d}), where the word length is the
    // group length for these presets.
    std::mt19937_64 rng(2024);
    for (Group g : {Group::G, Group::Gtilde}) {
        const auto names = generator_names(g);
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<std::string> word;
            bool want_a = rng() % 2 == 0;
            const int len = 2 + static_cast<int>(rng() % 9);
            for (int i = 0; i < len; ++i) {
                word.push_back(want_a ? "a" : names[1 + rng() % 3]);
                want_a = !want_a;
            }
            const auto wd = detail::decompose_word(g, word);
            for (const auto& child : wd.children)
                CHECK(2 * child.size() <= word.size() + 1);
        }
    }
}

TEST_CASE("free reduction uses only the stated relations") {
    CHECK(detail::free_reduce(Group::G, {"a", "a", "b"}) == std::vector<std::string>{"b"});
    CHECK(detail::free_reduce(Group::Gamma, {"a", "a"}) == std::vector<std::string>{"a^-1"});
    CHECK(detail::free_reduce(Group::Gamma, {"a", "a^-1"}).empty());
    CHECK(detail::free_reduce(Group::Gamma, {"s", "s"}) == std::vector<std::string>{"s", "s"});
}

TEST_CASE("group parsing is case-insensitive") {
    CHECK(parse_group("G") == Group::G);
    CHECK(parse_group("GammaBarBar") == Group::GammaBarBar);
    CHECK(parse_group("gTILDE") == Group::Gtilde);
    CHECK_FALSE(parse_group("grigorchuk").has_value());
}
