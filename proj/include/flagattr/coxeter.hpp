#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "flagattr/errors.hpp"
#include "flagattr/poset.hpp"

namespace flagattr::coxeter {

// Element of the symmetric group in one-line notation; images are 1-based.
class Permutation {
  public:
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);

    int n() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[i - 1]; }  // 1-based
    const std::vector<int>& image() const { return image_; }

    // Composition as maps: (u.compose(w))(i) = u(w(i)).
    Permutation compose(const Permutation& w) const;
    Permutation inverse() const;

    std::string label() const;  // images joined by ','

    auto operator<=>(const Permutation&) const = default;

  private:
    std::vector<int> image_;
};

// Inversion count.
int length(const Permutation& w);

// Bruhat order via the rank criterion.
bool bruhat_leq(const Permutation& u, const Permutation& w);

// Order-reversing permutation, the unique Bruhat maximum.
Permutation longest_element(int n);

std::vector<Permutation> all_permutations(int n);

// Dimension signature 0 < d_1 < ... < d_k < n of a partial flag.
struct DimensionSignature {
    std::vector<int> dims;
    int ambient = 0;

    DimensionSignature(std::vector<int> d, int n);
    static DimensionSignature full(int n);

    int levels() const { return static_cast<int>(dims.size()); }
    int top_dim() const { return dims.back(); }

    // Consecutive position blocks [d_{i-1}+1 .. d_i], 1-based inclusive,
    // including the final block ending at n.
    std::vector<std::pair<int, int>> blocks() const;

    std::string label() const;
    bool operator==(const DimensionSignature&) const = default;
};

// Minimal-length representative of a coset modulo the Young subgroup of a
// signature: images increase within every block.
class CosetRep {
  public:
    CosetRep(Permutation p, const DimensionSignature& sig);

    // Sort images within blocks, producing the minimal representative of the
    // coset of an arbitrary permutation.
    static CosetRep minimize(const Permutation& p, const DimensionSignature& sig);

    const Permutation& perm() const { return perm_; }
    const DimensionSignature& signature() const { return sig_; }
    std::string label() const { return perm_.label(); }

    bool operator==(const CosetRep& o) const { return perm_ == o.perm_ && sig_ == o.sig_; }

  private:
    Permutation perm_;
    DimensionSignature sig_;
};

// All minimal representatives, in lexicographic one-line order.
std::vector<CosetRep> minimal_coset_reps(const DimensionSignature& sig);

// Bruhat order restricted to the minimal representatives.
lattice::FinitePoset coset_poset(const DimensionSignature& sig);

}  // namespace flagattr::coxeter
