#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mdiag/geometry.hpp"
#include "mdiag/trees.hpp"

namespace mdiag {

// Subsets of {1..n} as bit masks, bit i for element i.
struct IndexPair {
    std::uint32_t I = 0;
    std::uint32_t J = 0;
    auto operator<=>(const IndexPair&) const = default;
};

std::vector<IndexPair> d_pairs(int n);

// Unions of all blue and purple nests with any sub-collection of red nests,
// as edge masks.
std::vector<std::uint32_t> q_sets(const Nesting& N);
std::vector<std::uint32_t> blue_sets(const Nesting& N);

bool in_image_mult(const Nesting& N, const Nesting& M);
bool in_image_assoc(const Nesting& N, const Nesting& M);
bool in_image_assoc(const Nesting& N, const Nesting& M, const GoodVector& v);
bool in_image(const Nesting& N, const Nesting& M);

// Orientation basis of a face: one row per admissible edge e, e_min - e_e
// for a monochrome nest with minimal own edge min, -e_e for a purple nest.
// Rows follow the vertices of the tree bottom to top and left to right.
// Entries are indexed by edge (index 0 unused).
std::vector<std::vector<int>> orientation_rows(const Nesting& N);

// Sign of a complementary pair: sign of the determinant of both orientation
// bases against the top cell.  Throws if they are dependent.
int sign_pair(const Nesting& N, const Nesting& M);

// The permutation rule for the same sign; nothing when the rule does not
// produce a bijection.
std::optional<int> lemma_sign(const Nesting& N, const Nesting& M);

struct SignedPair {
    Nesting left;
    Nesting right;
    int sign = 0;  // 0 when unsigned
};

enum class Filter { all, complementary, vertices };
Filter filter_of_name(const std::string& s);

int polytope_dim(Kind k, int n);

std::vector<SignedPair> diagonal_pairs(Kind k, int n, Filter f, bool signed_pairs, int jobs = 1);

// Pairs with tp F <= bm G, complementary dimensions (the relaxed formula).
std::vector<SignedPair> tp_bm_pairs(Kind k, int n, const GoodVector& v);

struct CountRow {
    int dim = 0;
    std::uint64_t complementary = 0;
    std::uint64_t vertex_pairs = 0;
};

std::vector<CountRow> counts(Kind k, int max_dim, int jobs = 1);

struct Cell {
    SignedPair pair;
    std::vector<RatPoint> vertices;
};

std::vector<Cell> subdivision(int n);

// Per-face data for the image test of the multiplihedra: bit k of `left` is
// set when some blue nest or Q-set satisfies the '>' clause for the k-th
// pair of D(n); `right` is the same for the '<' clause.
struct ImageMasks {
    static constexpr int words = 16;
    std::array<std::uint64_t, words> left{};
    std::array<std::uint64_t, words> right{};
};

ImageMasks image_masks(const Nesting& N, const std::vector<IndexPair>& D);
bool masks_cover(const ImageMasks& a, const ImageMasks& b, int npairs);

}  // namespace mdiag
