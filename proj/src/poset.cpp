#include "flagattr/poset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace flagattr::lattice {

int FinitePoset::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

bool FinitePoset::leq_label(const std::string& a, const std::string& b) const {
    const int i = index_of(a), j = index_of(b);
    if (i < 0 || j < 0) throw Error("unknown poset element: " + (i < 0 ? a : b));
    return leq(i, j);
}

std::size_t FinitePoset::relation_count() const {
    std::size_t c = 0;
    for (std::uint8_t v : leq_) c += v;
    return c;
}

std::vector<std::pair<int, int>> FinitePoset::cover_pairs() const {
    const int n = size();
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !leq(i, j)) continue;
            bool direct = true;
            for (int k = 0; k < n && direct; ++k)
                if (k != i && k != j && leq(i, k) && leq(k, j)) direct = false;
            if (direct) covers.emplace_back(i, j);
        }
    return covers;
}

std::vector<int> FinitePoset::heights() const {
    const int n = size();
    std::vector<int> h(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : cover_pairs()) {
            if (h[b] < h[a] + 1) {
                h[b] = h[a] + 1;
                changed = true;
            }
        }
    }
    return h;
}

bool FinitePoset::same_order(const FinitePoset& other) const {
    if (size() != other.size()) return false;
    std::vector<int> map(size());
    for (int i = 0; i < size(); ++i) {
        const int j = other.index_of(elements_[i]);
        if (j < 0) return false;
        map[i] = j;
    }
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (leq(i, j) != other.leq(map[i], map[j])) return false;
    return true;
}

bool FinitePoset::is_upper_mask(std::uint32_t mask) const {
    const int n = size();
    if (n > 32) throw TooLarge("mask operations support at most 32 elements");
    for (int i = 0; i < n; ++i) {
        if (!((mask >> i) & 1u)) continue;
        for (int j = 0; j < n; ++j)
            if (leq(i, j) && !((mask >> j) & 1u)) return false;
    }
    return true;
}

FinitePoset make_poset(std::vector<std::string> elements,
                       const std::vector<std::pair<std::string, std::string>>& relations) {
    FinitePoset p;
    p.elements_ = std::move(elements);
    const int n = p.size();
    for (int i = 0; i < n; ++i) {
        if (p.index_.count(p.elements_[i])) throw Error("duplicate poset element label");
        p.index_[p.elements_[i]] = i;
    }
    p.leq_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) p.leq_[i * n + i] = 1;
    for (const auto& [a, b] : relations) {
        const int i = p.index_of(a), j = p.index_of(b);
        if (i < 0 || j < 0) throw Error("relation mentions unknown element");
        p.leq_[i * n + j] = 1;
    }
    // Warshall closure.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!p.leq_[i * n + k]) continue;
            for (int j = 0; j < n; ++j)
                if (p.leq_[k * n + j]) p.leq_[i * n + j] = 1;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p.leq_[i * n + j] && p.leq_[j * n + i])
                throw CycleDetected("relation contains a cycle through " + p.elements_[i] + " and " +
                                    p.elements_[j]);
    return p;
}

UpperSet UpperSet::of(const FinitePoset& p, std::uint32_t mask) {
    if (!p.is_upper_mask(mask)) throw Error("subset is not upward closed");
    return UpperSet{mask, p.size()};
}

UpperSet UpperSet::of_labels(const FinitePoset& p, const std::vector<std::string>& labels) {
    std::uint32_t mask = 0;
    for (const std::string& l : labels) {
        const int i = p.index_of(l);
        if (i < 0) throw Error("unknown poset element: " + l);
        mask |= (1u << i);
    }
    return of(p, mask);
}

int UpperSet::size() const { return std::popcount(mask); }

std::vector<std::string> UpperSet::member_labels(const FinitePoset& p) const {
    std::vector<std::string> out;
    for (int i = 0; i < p.size(); ++i)
        if (contains(i)) out.push_back(p.label(i));
    return out;
}

std::string UpperSet::label(const FinitePoset& p) const {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < p.size(); ++i) {
        if (!contains(i)) continue;
        if (!first) s += ',';
        s += p.label(i);
        first = false;
    }
    return s + "}";
}

namespace {

void enumerate_rec(const FinitePoset& p, const std::vector<int>& order, std::size_t pos,
                   std::uint32_t mask, std::vector<std::uint32_t>& out) {
    if (pos == order.size()) {
        out.push_back(mask);
        return;
    }
    const int x = order[pos];
    // exclude x
    enumerate_rec(p, order, pos + 1, mask, out);
    // include x only if everything strictly above it is already in
    for (int j = 0; j < p.size(); ++j)
        if (j != x && p.leq(x, j) && !((mask >> j) & 1u)) return;
    enumerate_rec(p, order, pos + 1, mask | (1u << x), out);
}

}  // namespace

std::vector<UpperSet> enumerate_upper_sets(const FinitePoset& p) {
    if (p.size() > kEnumerationGuard)
        throw TooLarge("upper-set enumeration is limited to posets with at most 24 elements");
    const std::vector<int> h = p.heights();
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return h[a] > h[b]; });

    std::vector<std::uint32_t> masks;
    enumerate_rec(p, order, 0, 0, masks);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<UpperSet> out;
    out.reserve(masks.size());
    for (std::uint32_t m : masks) out.push_back(UpperSet{m, p.size()});
    return out;
}

int AttractorLattice::index_of_mask(std::uint32_t mask) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].mask == mask) return static_cast<int>(i);
    return -1;
}

int AttractorLattice::meet(int a, int b) const { return index_of_mask(nodes[a].mask & nodes[b].mask); }
int AttractorLattice::join(int a, int b) const { return index_of_mask(nodes[a].mask | nodes[b].mask); }

bool AttractorLattice::closed() const {
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b)
            if (meet(static_cast<int>(a), static_cast<int>(b)) < 0 ||
                join(static_cast<int>(a), static_cast<int>(b)) < 0)
                return false;
    return true;
}

bool AttractorLattice::distributive() const {
    const int n = static_cast<int>(nodes.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const std::uint32_t lhs = nodes[x].mask & (nodes[y].mask | nodes[z].mask);
                const std::uint32_t rhs =
                    (nodes[x].mask & nodes[y].mask) | (nodes[x].mask & nodes[z].mask);
                if (lhs != rhs) return false;
            }
    return true;
}

FinitePoset AttractorLattice::inclusion_poset() const {
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (const UpperSet& u : nodes) labels.push_back(u.label(base));
    std::vector<std::pair<std::string, std::string>> rel;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b)
            if ((nodes[a].mask & nodes[b].mask) == nodes[a].mask)
                rel.emplace_back(labels[a], labels[b]);
    return make_poset(std::move(labels), rel);
}

AttractorLattice attractor_lattice(const FinitePoset& p) {
    return AttractorLattice{p, enumerate_upper_sets(p)};
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string poset_dot(const FinitePoset& p) {
    std::ostringstream os;
    os << "digraph {\n  rankdir=BT;\n";
    const std::vector<int> h = p.heights();
    const int hmax = h.empty() ? 0 : *std::max_element(h.begin(), h.end());
    for (int level = 0; level <= hmax; ++level) {
        os << "  { rank=same;";
        for (int i = 0; i < p.size(); ++i)
            if (h[i] == level) os << ' ' << quote(p.label(i)) << ';';
        os << " }\n";
    }
    for (const auto& [a, b] : p.cover_pairs())
        os << "  " << quote(p.label(a)) << " -> " << quote(p.label(b)) << ";\n";
    os << "}\n";
    return os.str();
}

std::string poset_json_text(const FinitePoset& p, bool include_upper_sets);

}  // namespace

std::string hasse_export(const FinitePoset& p, ExportFormat format, bool include_upper_sets) {
    return format == ExportFormat::Dot ? poset_dot(p) : poset_json_text(p, include_upper_sets);
}

std::string hasse_export(const AttractorLattice& l, ExportFormat format) {
    return hasse_export(l.inclusion_poset(), format, false);
}

}  // namespace flagattr::lattice

#include <json.hpp>

namespace flagattr::lattice {
namespace {

std::string poset_json_text(const FinitePoset& p, bool include_upper_sets) {
    nlohmann::ordered_json j;
    j["elements"] = p.elements();
    std::vector<std::vector<bool>> leq(p.size(), std::vector<bool>(p.size()));
    for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b) leq[a][b] = p.leq(a, b);
    j["leq"] = leq;
    if (include_upper_sets) {
        std::vector<std::vector<std::string>> upper;
        for (const UpperSet& u : enumerate_upper_sets(p)) upper.push_back(u.member_labels(p));
        j["upper_sets"] = upper;
    }
    std::vector<std::vector<std::string>> covers;
    for (const auto& [a, b] : p.cover_pairs())
        covers.push_back({p.label(a), p.label(b)});
    j["covers"] = covers;
    return j.dump(2) + "\n";
}

}  // namespace
}  // namespace flagattr::lattice
