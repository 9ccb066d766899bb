#pragma once

#include <map>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "tree_groups.hpp"

namespace fractal_spectra {

namespace detail {

// Block recursion on index arrays: the matrix of g at level n has block
// M(g|_x, n-1) at block row alpha(x), block column x. Expressed on coordinate
// indices: pi[x*d^(n-1) + r] = alpha(x)*d^(n-1) + pi_child(r). Independent of
// apply_transducer by construction.
class BlockPermCache {
  public:
    explicit BlockPermCache(Group g) : group_(g) {}

    const std::vector<std::uint32_t>& perm(const std::string& gen, int n) {
        const auto key = std::make_pair(gen, n);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<std::uint32_t> p;
        if (gen == "1") {
            const std::uint64_t dim = checked_level_dim(group_, n);
            p.resize(dim);
            for (std::uint64_t i = 0; i < dim; ++i) p[i] = static_cast<std::uint32_t>(i);
        } else if (n == 0) {
            p = {0};
        } else {
            const int d = alphabet_size(group_);
            const std::uint64_t dim = checked_level_dim(group_, n);
            const std::uint64_t sub = dim / static_cast<std::uint64_t>(d);
            const WreathDecomposition wd = wreath_decompose(group_, gen);
            p.resize(dim);
            for (int x = 0; x < d; ++x) {
                const auto& child = perm(wd.children[static_cast<std::size_t>(x)], n - 1);
                const std::uint64_t row = static_cast<std::uint64_t>(wd.root(x)) * sub;
                const std::uint64_t col = static_cast<std::uint64_t>(x) * sub;
                for (std::uint64_t r = 0; r < sub; ++r) p[col + r] = static_cast<std::uint32_t>(row + child[r]);
            }
        }
        return cache_.emplace(key, std::move(p)).first->second;
    }

  private:
    Group group_;
    std::map<std::pair<std::string, int>, std::vector<std::uint32_t>> cache_;
};

}  // namespace detail

/// Level-n permutation of a generator, computed by the block recursion
/// (the independent cross-check for level_action).
inline std::vector<std::uint32_t> block_permutation(Group g, const std::string& generator, int n) {
    const auto names = generator_names(g);
    if (std::find(names.begin(), names.end(), generator) == names.end())
        throw input_error("block_permutation: unknown generator '" + generator + "'");
    detail::BlockPermCache cache(g);
    return cache.perm(generator, n);
}

inline LevelMatrix permutation_to_matrix(const std::vector<std::uint32_t>& p) {
    const std::size_t dim = p.size();
    LevelMatrix m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) m(p[j], j) = Rational(1);
    return m;
}

/// Permutation matrix of the generator at level n, built by the block
/// recursion of the wreath tables. Convention: column j carries a 1 in row
/// g(j), so M e_j = e_{g(j)}.
inline LevelMatrix perm_matrix(Group g, const std::string& generator, int n) {
    return permutation_to_matrix(block_permutation(g, generator, n));
}

/// Hecke operator of the level-n representation: the sum of the four
/// generator permutation matrices. Symmetric with all row sums 4.
inline LevelMatrix hecke_operator(Group g, int n) {
    const std::uint64_t dim = checked_level_dim(g, n);
    LevelMatrix m(dim, dim);
    detail::BlockPermCache cache(g);
    for (const auto& gen : generator_names(g)) {
        const auto& p = cache.perm(gen, n);
        for (std::uint64_t j = 0; j < dim; ++j) m(p[j], j) += Rational(1);
    }
    return m;
}

/// Double-precision view of the Hecke operator without the rational
/// intermediate; used by the eigensolver paths at larger levels.
inline DMatrix hecke_operator_d(Group g, int n) {
    const std::uint64_t dim = checked_level_dim(g, n);
    DMatrix m(dim, dim, 0.0);
    detail::BlockPermCache cache(g);
    for (const auto& gen : generator_names(g)) {
        const auto& p = cache.perm(gen, n);
        for (std::uint64_t j = 0; j < dim; ++j) m(p[j], j) += 1.0;
    }
    return m;
}

/// Markov operator of the simple random walk: Hecke / 4. Row-stochastic.
inline LevelMatrix markov_operator(Group g, int n) {
    LevelMatrix m = hecke_operator(g, n);
    m *= Rational(1, 4);
    return m;
}

// ---------------------------------------------------------------------------
// Pencils
// ---------------------------------------------------------------------------

/// Two-parameter deformation of the level operator, with the per-group
/// convention taken verbatim from each display:
///   G:          Q_n = Delta_n - (lambda+1) a_n - (mu+1)
///   Gtilde:     Q_n = Delta_n - (lambda+1) a_n - (mu+2)
///   Gamma:      Q_n = S_n + lambda A_n - mu      (A = a+a^-1, S = s+s^-1)
///   GammaBar:   Q_n = T_n + lambda A_n - mu
///   GammaBarBar uses R_n = r+r^-1 (equal to T_n).
struct Pencil {
    Group group;
    int level;
    Rational lambda;
    Rational mu;
};

inline LevelMatrix pencil_matrix(const Pencil& q) {
    const Group g = q.group;
    const std::uint64_t dim = checked_level_dim(g, q.level);
    const LevelMatrix I = LevelMatrix::identity(dim);
    if (g == Group::G || g == Group::Gtilde) {
        LevelMatrix m = hecke_operator(g, q.level);
        LevelMatrix a = perm_matrix(g, "a", q.level);
        a *= q.lambda + Rational(1);
        m -= a;
        LevelMatrix shift = I;
        shift *= q.mu + Rational(g == Group::G ? 1 : 2);
        m -= shift;
        return m;
    }
    const auto names = generator_names(g);
    LevelMatrix A = perm_matrix(g, names[0], q.level) + perm_matrix(g, names[1], q.level);
    LevelMatrix S = perm_matrix(g, names[2], q.level) + perm_matrix(g, names[3], q.level);
    A *= q.lambda;
    LevelMatrix shift = I;
    shift *= q.mu;
    return S + A - shift;
}

}  // namespace fractal_spectra
