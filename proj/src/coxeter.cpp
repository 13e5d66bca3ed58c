#include "flagattr/coxeter.hpp"

#include <algorithm>
#include <numeric>

namespace flagattr::coxeter {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = static_cast<int>(image_.size());
    if (n == 0) throw Error("permutation must be nonempty");
    std::vector<bool> seen(n, false);
    for (int v : image_) {
        if (v < 1 || v > n || seen[v - 1]) throw Error("not a permutation of 1..n");
        seen[v - 1] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    return Permutation(std::move(im));
}

Permutation Permutation::compose(const Permutation& w) const {
    if (n() != w.n()) throw SizeMismatch("composing permutations of different degree");
    std::vector<int> im(n());
    for (int i = 1; i <= n(); ++i) im[i - 1] = (*this)(w(i));
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(n());
    for (int i = 1; i <= n(); ++i) im[(*this)(i)-1] = i;
    return Permutation(std::move(im));
}

std::string Permutation::label() const {
    std::string s;
    for (int i = 0; i < n(); ++i) {
        if (i) s += ',';
        s += std::to_string(image_[i]);
    }
    return s;
}

int length(const Permutation& w) {
    int inv = 0;
    for (int i = 1; i <= w.n(); ++i)
        for (int j = i + 1; j <= w.n(); ++j)
            if (w(i) > w(j)) ++inv;
    return inv;
}

bool bruhat_leq(const Permutation& u, const Permutation& w) {
    const int n = u.n();
    if (n != w.n()) throw SizeMismatch("Bruhat comparison needs equal degree");
    // u <= w iff for all i, j: #{k <= i : u(k) <= j} >= #{k <= i : w(k) <= j}.
    std::vector<int> cu(n + 1, 0), cw(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        for (int j = u(i); j <= n; ++j) ++cu[j];
        for (int j = w(i); j <= n; ++j) ++cw[j];
        for (int j = 1; j <= n; ++j)
            if (cu[j] < cw[j]) return false;
    }
    return true;
}

Permutation longest_element(int n) {
    if (n < 1) throw Error("degree must be at least 1");
    std::vector<int> im(n);
    for (int i = 0; i < n; ++i) im[i] = n - i;
    return Permutation(std::move(im));
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

DimensionSignature::DimensionSignature(std::vector<int> d, int n) : dims(std::move(d)), ambient(n) {
    if (n < 1) throw Error("ambient dimension must be positive");
    if (dims.empty()) throw Error("signature needs at least one level");
    int prev = 0;
    for (int di : dims) {
        if (di <= prev || di >= n) throw Error("signature must satisfy 0 < d_1 < ... < d_k < n");
        prev = di;
    }
}

DimensionSignature DimensionSignature::full(int n) {
    std::vector<int> d(n - 1);
    std::iota(d.begin(), d.end(), 1);
    return DimensionSignature(std::move(d), n);
}

std::vector<std::pair<int, int>> DimensionSignature::blocks() const {
    std::vector<std::pair<int, int>> b;
    int prev = 0;
    for (int di : dims) {
        b.emplace_back(prev + 1, di);
        prev = di;
    }
    b.emplace_back(prev + 1, ambient);
    return b;
}

std::string DimensionSignature::label() const {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(dims[i]);
    }
    return s;
}

namespace {

bool increasing_within_blocks(const Permutation& p, const DimensionSignature& sig) {
    for (const auto& [lo, hi] : sig.blocks())
        for (int i = lo; i < hi; ++i)
            if (p(i) > p(i + 1)) return false;
    return true;
}

}  // namespace

CosetRep::CosetRep(Permutation p, const DimensionSignature& sig) : perm_(std::move(p)), sig_(sig) {
    if (perm_.n() != sig_.ambient) throw SizeMismatch("representative degree differs from ambient");
    if (!increasing_within_blocks(perm_, sig_))
        throw Error("not a minimal coset representative: images must increase within blocks");
}

CosetRep CosetRep::minimize(const Permutation& p, const DimensionSignature& sig) {
    std::vector<int> im = p.image();
    for (const auto& [lo, hi] : sig.blocks())
        std::sort(im.begin() + (lo - 1), im.begin() + hi);
    return CosetRep(Permutation(std::move(im)), sig);
}

namespace {

void emit_reps(const std::vector<std::pair<int, int>>& blocks, std::size_t bi,
               std::vector<int>& remaining, std::vector<int>& acc,
               const DimensionSignature& sig, std::vector<CosetRep>& out) {
    if (bi == blocks.size()) {
        out.emplace_back(Permutation(acc), sig);
        return;
    }
    const int width = blocks[bi].second - blocks[bi].first + 1;
    const int m = static_cast<int>(remaining.size());
    // choose `width` of the remaining values, in increasing order
    std::vector<int> idx(width);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<int> rest;
        rest.reserve(m - width);
        {
            std::size_t take = 0;
            for (int i = 0; i < m; ++i) {
                if (take < idx.size() && idx[take] == i) {
                    acc.push_back(remaining[i]);
                    ++take;
                } else {
                    rest.push_back(remaining[i]);
                }
            }
        }
        emit_reps(blocks, bi + 1, rest, acc, sig, out);
        acc.resize(acc.size() - width);

        int k = width - 1;
        while (k >= 0 && idx[k] == m - width + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < width; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::vector<CosetRep> minimal_coset_reps(const DimensionSignature& sig) {
    std::vector<int> values(sig.ambient);
    std::iota(values.begin(), values.end(), 1);
    std::vector<int> acc;
    std::vector<CosetRep> out;
    emit_reps(sig.blocks(), 0, values, acc, sig, out);
    return out;
}

lattice::FinitePoset coset_poset(const DimensionSignature& sig) {
    const std::vector<CosetRep> reps = minimal_coset_reps(sig);
    std::vector<std::string> labels;
    labels.reserve(reps.size());
    for (const CosetRep& r : reps) labels.push_back(r.label());
    std::vector<std::pair<std::string, std::string>> rel;
    for (const CosetRep& a : reps)
        for (const CosetRep& b : reps)
            if (bruhat_leq(a.perm(), b.perm())) rel.emplace_back(a.label(), b.label());
    return lattice::make_poset(std::move(labels), rel);
}

}  // namespace flagattr::coxeter
