#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flagattr/errors.hpp"

namespace flagattr::lattice {

// Upper-set enumeration is capped here; beyond this the antichain count
// explodes and the masks no longer fit common word sizes.
inline constexpr int kEnumerationGuard = 24;

// Finite partial order over opaque string labels.  The relation is stored
// closed (reflexive and transitive) and verified antisymmetric.
class FinitePoset {
  public:
    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& label(int i) const { return elements_[i]; }
    int index_of(const std::string& label) const;  // -1 when absent

    bool leq(int i, int j) const { return leq_[i * size() + j] != 0; }
    bool leq_label(const std::string& a, const std::string& b) const;

    // Ordered pairs (i, j) with leq, including the diagonal.
    std::size_t relation_count() const;

    // Transitive reduction.
    std::vector<std::pair<int, int>> cover_pairs() const;

    // Length of the longest strict chain below each element.
    std::vector<int> heights() const;

    // Same element set and same relation, regardless of listing order.
    bool same_order(const FinitePoset& other) const;

    bool is_upper_mask(std::uint32_t mask) const;

    friend FinitePoset make_poset(std::vector<std::string> elements,
                                  const std::vector<std::pair<std::string, std::string>>& relations);

  private:
    FinitePoset() = default;

    std::vector<std::string> elements_;
    std::map<std::string, int> index_;
    std::vector<std::uint8_t> leq_;
};

// Builds the reflexive-transitive closure of the given relation pairs and
// verifies antisymmetry; a violation means the input contained a cycle.
FinitePoset make_poset(std::vector<std::string> elements,
                       const std::vector<std::pair<std::string, std::string>>& relations);

// Upward-closed subset of a poset, stored as a bit mask over element indices.
struct UpperSet {
    std::uint32_t mask = 0;
    int universe = 0;

    static UpperSet of(const FinitePoset& p, std::uint32_t mask);
    static UpperSet of_labels(const FinitePoset& p, const std::vector<std::string>& labels);

    int size() const;
    bool contains(int i) const { return (mask >> i) & 1u; }
    std::vector<std::string> member_labels(const FinitePoset& p) const;
    std::string label(const FinitePoset& p) const;  // "{a,b}" in element order
};

// All upper sets, found by backtracking over the Hasse diagram from the
// maximal elements down; sorted by (cardinality, mask).
std::vector<UpperSet> enumerate_upper_sets(const FinitePoset& p);

// The distributive lattice of all upper sets under union and intersection.
struct AttractorLattice {
    FinitePoset base;
    std::vector<UpperSet> nodes;

    int index_of_mask(std::uint32_t mask) const;  // -1 when absent
    int meet(int a, int b) const;
    int join(int a, int b) const;
    bool closed() const;
    bool distributive() const;

    // Inclusion order on the nodes, for export.
    FinitePoset inclusion_poset() const;
};

AttractorLattice attractor_lattice(const FinitePoset& p);

enum class ExportFormat { Dot, Json };

// Deterministic DOT (covers only, rank-grouped by height) or JSON
// {"elements", "leq", "upper_sets", "covers"}.  JSON omits "upper_sets" when
// include_upper_sets is false.
std::string hasse_export(const FinitePoset& p, ExportFormat format, bool include_upper_sets = true);
std::string hasse_export(const AttractorLattice& l, ExportFormat format);

}  // namespace flagattr::lattice
