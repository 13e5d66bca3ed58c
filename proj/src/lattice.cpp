#include "flagattr/lattice.hpp"

#include <algorithm>
#include <set>

namespace flagattr::lattice {

namespace {

std::string join_labels(const std::vector<std::string>& labels, const std::string& cell) {
    if (labels.empty()) return "empty";
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += " u ";
        s += cell + "(" + labels[i] + ")";
    }
    return s;
}

AttractorRealization realize(const UpperSet& u, const FinitePoset& order) {
    AttractorRealization r;
    r.upper = u;
    for (int i = 0; i < order.size(); ++i) {
        if (u.contains(i))
            r.attractor_fix.push_back(order.label(i));
        else
            r.repellor_fix.push_back(order.label(i));
    }
    r.attractor_desc = join_labels(r.attractor_fix, "thetaN-cell");
    r.repellor_desc = join_labels(r.repellor_fix, "N-cell");
    return r;
}

}  // namespace

AttractorRealization attractor_from_upper(const UpperSet& u, const FinitePoset& order) {
    if (u.universe != order.size()) throw SizeMismatch("upper set universe differs from the order");
    return realize(u, order);
}

AttractorRealization attractor_from_upper(const UpperSet& u, const FinitePoset& order,
                                          const numerics::HermitianSpectrum& phi) {
    if (u.universe != order.size() || order.size() != phi.block_count())
        throw SizeMismatch("upper set, order and spectrum are inconsistent");
    AttractorRealization r = realize(u, order);
    // order elements are listed by descending eigenvalue; an upper set of the
    // attraction order is a prefix of that listing
    int count = 0;
    while (count < order.size() && u.contains(count)) ++count;
    for (int i = count; i < order.size(); ++i)
        if (u.contains(i)) throw Error("upper set of the attraction chain must be a prefix");
    const int n = phi.dim();
    if (count > 0) {
        const int split = phi.multiplicity_blocks[count - 1].second;
        r.attractor_basis = phi.eigenvectors.block(0, n, 0, split);
        if (split < n) r.repellor_basis = phi.eigenvectors.block(0, n, split, n);
    } else {
        r.repellor_basis = phi.eigenvectors;
    }
    return r;
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Attractor: return "attractor";
        case PointClass::Connecting: return "connecting";
        case PointClass::Repellor: return "repellor";
    }
    return "?";
}

PointClass classify_point(const flags::FlagPoint& z, const AttractorRealization& realization,
                          const FinitePoset& order, const flags::SpecialFlowGenerator& gen) {
    const auto [alpha, omega] = flags::limits(gen, z);
    const int ia = order.index_of(alpha.label());
    const int io = order.index_of(omega.label());
    if (ia < 0 || io < 0) throw Error("limit cell is not an element of the order");
    const bool alpha_in = realization.upper.contains(ia);
    const bool omega_in = realization.upper.contains(io);

    const bool is_attr = alpha_in;
    const bool is_conn = !alpha_in && omega_in;
    const bool is_rep = !omega_in;
    const int hits = (is_attr ? 1 : 0) + (is_conn ? 1 : 0) + (is_rep ? 1 : 0);
    if (hits != 1)
        throw Inconsistent("point matches " + std::to_string(hits) +
                           " classes: alpha=" + alpha.label() + " omega=" + omega.label());
    if (is_attr) return PointClass::Attractor;
    if (is_conn) return PointClass::Connecting;
    return PointClass::Repellor;
}

LatticeReport lattice_isomorphism_check(const FinitePoset& p) {
    LatticeReport rep;
    const AttractorLattice lat = attractor_lattice(p);
    rep.upper_sets = lat.nodes.size();
    rep.closed = lat.closed();
    rep.distributive = lat.distributive();
    if (!rep.closed) rep.failures.push_back("upper sets are not closed under union/intersection");
    if (!rep.distributive) rep.failures.push_back("lattice is not distributive");

    std::vector<std::set<std::string>> fixes;
    fixes.reserve(lat.nodes.size());
    for (const UpperSet& u : lat.nodes) {
        const AttractorRealization r = attractor_from_upper(u, p);
        fixes.emplace_back(r.attractor_fix.begin(), r.attractor_fix.end());
    }

    rep.union_hom = true;
    rep.intersection_hom = true;
    for (std::size_t a = 0; a < lat.nodes.size(); ++a) {
        for (std::size_t b = 0; b < lat.nodes.size(); ++b) {
            const int j = lat.join(static_cast<int>(a), static_cast<int>(b));
            const int m = lat.meet(static_cast<int>(a), static_cast<int>(b));
            std::set<std::string> un, in;
            std::set_union(fixes[a].begin(), fixes[a].end(), fixes[b].begin(), fixes[b].end(),
                           std::inserter(un, un.begin()));
            std::set_intersection(fixes[a].begin(), fixes[a].end(), fixes[b].begin(),
                                  fixes[b].end(), std::inserter(in, in.begin()));
            if (j < 0 || fixes[j] != un) {
                rep.union_hom = false;
                rep.failures.push_back("fix(A_(U v V)) != fix(A_U) u fix(A_V) at nodes " +
                                       std::to_string(a) + "," + std::to_string(b));
            }
            if (m < 0 || fixes[m] != in) {
                rep.intersection_hom = false;
                rep.failures.push_back("fix(A_(U ^ V)) != fix(A_U) n fix(A_V) at nodes " +
                                       std::to_string(a) + "," + std::to_string(b));
            }
        }
    }

    rep.injective = true;
    for (std::size_t a = 0; a < fixes.size(); ++a)
        for (std::size_t b = a + 1; b < fixes.size(); ++b)
            if (fixes[a] == fixes[b]) {
                rep.injective = false;
                rep.failures.push_back("distinct upper sets share a fixed set");
            }
    return rep;
}

}  // namespace flagattr::lattice
