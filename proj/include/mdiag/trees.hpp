#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mdiag {

enum class Kind { assoc, mult };
enum class Color : std::uint8_t { none, blue, red, purple };

char color_char(Color c);
Color color_of_char(char c);
inline bool is_mono(Color c) { return c == Color::blue || c == Color::red; }
std::string kind_name(Kind k);
Kind kind_of_name(std::string_view s);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Edges lo..hi of the linear graph (1-based, inclusive).
struct Nest {
    int lo = 1;
    int hi = 1;
    Color color = Color::none;

    int size() const { return hi - lo + 1; }
    std::uint32_t mask() const { return ((1u << (hi + 1)) - 1u) & ~((1u << lo) - 1u); }
    bool contains(const Nest& o) const { return lo <= o.lo && o.hi <= hi; }
    bool has_edge(int e) const { return lo <= e && e <= hi; }
    bool same_edges(const Nest& o) const { return lo == o.lo && hi == o.hi; }
    auto operator<=>(const Nest&) const = default;
};

// A face of K_n (uncolored) or J_n (colored), stored as a nesting of the
// linear graph with n vertices.  Nests are kept in left-levelwise order:
// decreasing size, then increasing minimal edge.
struct Nesting {
    Kind kind = Kind::mult;
    int n = 1;
    std::vector<Nest> nests;

    int dim() const;
    int mono_count() const;
    bool atomic() const { return dim() == 0; }
    // Index of the minimal nest containing edge e, or -1.
    int minimal_nest(int e) const;
    // Edges of nest j that lie in no smaller nest, increasing.
    std::vector<int> own_edges(int j) const;
    void normalize();
    auto operator<=>(const Nesting&) const = default;
};

using ColoredNesting = Nesting;

struct Tree {
    Color color = Color::none;
    std::vector<Tree> children;

    bool is_leaf() const { return children.empty(); }
    int leaves() const;
    int internal_count() const;
    static Tree leaf() { return {}; }
    static Tree corolla(int k, Color c);
    auto operator<=>(const Tree&) const = default;
};

using PlanarTree = Tree;
using ColoredTree = Tree;

// Grammar: leaf `*`, uncolored node `(t1 t2 ...)`, colored `b(...)`,
// `r(...)`, `p(...)`.  Blanks are ignored.
Tree parse_tree(std::string_view s);
std::string to_string(const Tree& t);
std::string to_string(const Nesting& N);

// Throws std::invalid_argument naming the offending subtree.
void validate_tree(const Tree& t, Kind k);
void validate_nesting(const Nesting& N);

Nesting nesting_of_tree(const Tree& t, Kind k);
Tree tree_of_nesting(const Nesting& N);

// Parses a face written in the tree grammar; the kind is inferred from the
// presence of colors unless forced.
Nesting parse_face(std::string_view s);
Nesting parse_face(std::string_view s, Kind k);

std::vector<Tree> planar_trees(int n);
std::vector<Nesting> enumerate_faces(Kind k, int n);
std::vector<Nesting> enumerate_atomic(Kind k, int n);

bool face_leq(const Nesting& s, const Nesting& t);
std::vector<Nesting> refinements(const Nesting& F);

std::vector<int> admissible_edges(const Nesting& N);

// Covering moves of the Tamari-type order, applied to an atomic face.
std::vector<Nesting> tamari_covers(const Nesting& s);

class TamariPoset {
public:
    TamariPoset(Kind k, int n);
    Kind kind() const { return kind_; }
    int arity() const { return n_; }
    const std::vector<Nesting>& vertices() const { return verts_; }
    int index_of(const Nesting& s) const;
    bool leq(int a, int b) const { return (reach_[a][b >> 6] >> (b & 63)) & 1u; }
    bool leq(const Nesting& s, const Nesting& t) const;
    const std::vector<std::vector<int>>& covers() const { return covers_; }

private:
    Kind kind_;
    int n_;
    std::vector<Nesting> verts_;
    std::map<Nesting, int> index_;
    std::vector<std::vector<int>> covers_;
    std::vector<std::vector<std::uint64_t>> reach_;
};

const TamariPoset& tamari_poset(Kind k, int n);
bool tamari_leq(const Nesting& s, const Nesting& t);

// u with the blue tree v grafted on leaf i (1-based).
Tree graft(const Tree& u, int i, const Tree& v);
// The red tree u with vs[j] grafted on its j-th leaf.
Tree graft_level(const Tree& u, const std::vector<Tree>& vs);

struct Corolla {
    Color color;
    int arity;
    int position;  // leaf of the partial tree receiving it; 0 for the first
};
std::vector<Corolla> ll_decomposition(const Tree& t);
Tree ll_regraft(const std::vector<Corolla>& cs);

}  // namespace mdiag
