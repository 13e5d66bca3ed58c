#include "flagattr/flag.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <thread>

namespace flagattr::flags {

namespace {

double subset_sum_tol(const std::vector<double>& diag) {
    double m = 1.0;
    for (double x : diag) m = std::max(m, std::abs(x));
    return 1e-9 * m;
}

// Minimal gap between sums over size-d subsets of the diagonal.
double min_subset_sum_gap(const std::vector<double>& diag, int d) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> sums;
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        double s = 0.0;
        for (int i : idx) s += diag[i];
        sums.push_back(s);
        int k = d - 1;
        while (k >= 0 && idx[k] == n - d + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::sort(sums.begin(), sums.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < sums.size(); ++i) gap = std::min(gap, sums[i + 1] - sums[i]);
    return gap;
}

}  // namespace

SpecialFlowGenerator validate_special(std::vector<double> diag,
                                      const coxeter::DimensionSignature& sig) {
    if (static_cast<int>(diag.size()) != sig.ambient)
        throw SizeMismatch("diagonal length differs from ambient dimension");
    for (double x : diag)
        if (!std::isfinite(x)) throw NotSpecialRoots("diagonal entries must be finite");
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
        if (!(diag[i] < diag[i + 1]))
            throw NotSpecialRoots("diagonal must be strictly increasing");
    const double tau = subset_sum_tol(diag);
    for (int d : sig.dims)
        if (!(min_subset_sum_gap(diag, d) > tau))
            throw NotSpecialWeights("subset sums of size " + std::to_string(d) +
                                    " are not pairwise distinct");
    return SpecialFlowGenerator{std::move(diag), sig};
}

FlagPoint::FlagPoint(ComplexMatrix frame, coxeter::DimensionSignature sig)
    : frame_(std::move(frame)), sig_(std::move(sig)) {
    if (static_cast<int>(frame_.rows()) != sig_.ambient ||
        static_cast<int>(frame_.cols()) != sig_.top_dim())
        throw SizeMismatch("frame shape does not match the signature");
    const ComplexMatrix g = matmul(frame_.adjoint(), frame_);
    double dev = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            dev = std::max(dev, std::abs(g(i, j) - (i == j ? cdbl{1.0, 0.0} : cdbl{0.0, 0.0})));
    if (dev > numerics::kOrthTol) throw Error("frame columns are not orthonormal");
}

FlagPoint FlagPoint::unchecked(ComplexMatrix frame, coxeter::DimensionSignature sig) {
    if (static_cast<int>(frame.rows()) != sig.ambient ||
        static_cast<int>(frame.cols()) != sig.top_dim())
        throw SizeMismatch("frame shape does not match the signature");
    return FlagPoint(Unchecked{}, std::move(frame), std::move(sig));
}

ComplexMatrix FlagPoint::level(int i) const {
    return frame_.block(0, frame_.rows(), 0, sig_.dims[i]);
}

double flag_distance(const FlagPoint& a, const FlagPoint& b) {
    if (!(a.signature() == b.signature()))
        throw SizeMismatch("comparing flags of different signature");
    double d = 0.0;
    for (int i = 0; i < a.signature().levels(); ++i)
        d = std::max(d, numerics::max_principal_angle(a.level(i), b.level(i)));
    return d;
}

bool flags_equal(const FlagPoint& a, const FlagPoint& b, double tol) {
    return flag_distance(a, b) < tol;
}

FlagPoint coordinate_flag(const coxeter::CosetRep& rep) {
    const int n = rep.signature().ambient;
    const int d = rep.signature().top_dim();
    ComplexMatrix frame(n, d);
    for (int j = 0; j < d; ++j) frame(rep.perm()(j + 1) - 1, j) = 1.0;
    return FlagPoint(std::move(frame), rep.signature());
}

std::vector<FixedFlag> fixed_flags(const coxeter::DimensionSignature& sig) {
    std::vector<FixedFlag> out;
    for (const coxeter::CosetRep& r : coxeter::minimal_coset_reps(sig)) out.push_back(FixedFlag{r});
    return out;
}

namespace {

// rank of the row range [r0, r1) of the first d columns, against scale 1
// (the frame is orthonormal).
int row_block_rank(const ComplexMatrix& frame, int r0, int r1, int d, double tol_rel) {
    if (r0 >= r1) return 0;
    return numerics::checked_rank_with_scale(frame.block(r0, r1, 0, d), tol_rel, 1.0);
}

}  // namespace

coxeter::CosetRep cell_of(const FlagPoint& z, Side side, double tol_rel) {
    const coxeter::DimensionSignature& sig = z.signature();
    const int n = sig.ambient;
    const int k = sig.levels();
    const ComplexMatrix& q = z.frame();

    // value set of each level, recovered from intersection-dimension jumps
    std::vector<std::set<int>> value_sets(k);
    for (int i = 0; i < k; ++i) {
        const int d = sig.dims[i];
        std::vector<int> r(n + 2, 0);
        if (side == Side::N) {
            // r[j] = dim(F ∩ span(e_1..e_j)) = d - rank(rows j..n-1)
            r[0] = 0;
            for (int j = 1; j <= n; ++j) r[j] = d - row_block_rank(q, j, n, d, tol_rel);
            for (int j = 1; j <= n; ++j) {
                const int step = r[j] - r[j - 1];
                if (step < 0 || step > 1) throw IllConditioned("inconsistent rank profile");
                if (step == 1) value_sets[i].insert(j);
            }
        } else {
            // r[j] = dim(F ∩ span(e_j..e_n)) = d - rank(rows 0..j-2)
            for (int j = 1; j <= n; ++j) r[j] = d - row_block_rank(q, 0, j - 1, d, tol_rel);
            r[n + 1] = 0;
            for (int j = 1; j <= n; ++j) {
                const int step = r[j] - r[j + 1];
                if (step < 0 || step > 1) throw IllConditioned("inconsistent rank profile");
                if (step == 1) value_sets[i].insert(j);
            }
        }
        if (static_cast<int>(value_sets[i].size()) != d)
            throw IllConditioned("level value set has wrong cardinality");
        if (i > 0 && !std::includes(value_sets[i].begin(), value_sets[i].end(),
                                    value_sets[i - 1].begin(), value_sets[i - 1].end()))
            throw IllConditioned("level value sets are not nested");
    }

    std::vector<int> image;
    image.reserve(n);
    std::set<int> used;
    for (int i = 0; i < k; ++i) {
        for (int v : value_sets[i])
            if (!used.count(v)) image.push_back(v);
        used = value_sets[i];
    }
    for (int v = 1; v <= n; ++v)
        if (!used.count(v)) image.push_back(v);
    return coxeter::CosetRep(coxeter::Permutation(std::move(image)), sig);
}

namespace {

FlagPoint flow_flag_step(const SpecialFlowGenerator& gen, double t, const FlagPoint& z) {
    const int n = gen.signature.ambient;
    const int d = gen.signature.top_dim();
    double shift = -std::numeric_limits<double>::infinity();
    for (double x : gen.diag) shift = std::max(shift, t * x);

    ComplexMatrix a(n, d);
    for (int r = 0; r < n; ++r) {
        const double f = std::exp(t * gen.diag[r] - shift);
        for (int c = 0; c < d; ++c) a(r, c) = f * z.frame()(r, c);
    }
    for (int c = 0; c < d; ++c) {
        double m = 0.0;
        for (int r = 0; r < n; ++r) m = std::max(m, std::abs(a(r, c)));
        if (m == 0.0 || !std::isfinite(m))
            throw FlowOverflow("flow time too large for a representable frame");
        for (int r = 0; r < n; ++r) a(r, c) /= m;
    }
    return FlagPoint(numerics::orthonormalize(a), gen.signature);
}

}  // namespace

FlagPoint flow_flag(const SpecialFlowGenerator& gen, double t, const FlagPoint& z) {
    if (!std::isfinite(t)) throw FlowOverflow("flow time must be finite");
    // Long times are split so that no single scaling exceeds e^16; the
    // reorthonormalization between steps keeps the frame from collapsing.
    const double spread = gen.diag.back() - gen.diag.front();
    const double total = std::abs(t) * spread;
    const long steps_l = total > 16.0 ? static_cast<long>(std::ceil(total / 16.0)) : 1;
    if (steps_l > 1000000) throw FlowOverflow("flow time too large");
    const int steps = static_cast<int>(steps_l);
    FlagPoint cur = z;
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) cur = flow_flag_step(gen, dt, cur);
    return cur;
}

std::pair<FixedFlag, FixedFlag> limits(const SpecialFlowGenerator& gen, const FlagPoint& z) {
    if (!(z.signature() == gen.signature))
        throw SizeMismatch("flag signature differs from the generator signature");
    return {FixedFlag{cell_of(z, Side::ThetaN)}, FixedFlag{cell_of(z, Side::N)}};
}

double flag_height(const SpecialFlowGenerator& gen, const FlagPoint& z) {
    double h = 0.0;
    for (int i = 0; i < gen.signature.levels(); ++i) {
        const int d = gen.signature.dims[i];
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < gen.signature.ambient; ++r)
                h += gen.diag[r] * std::norm(z.frame()(r, c));
    }
    return -0.5 * h;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& a, const std::string& b) {
    std::uint64_t h = 14695981039346656037ull ^ (seed * 0x9e3779b97f4a7c15ull);
    h = fnv1a(h, a);
    h = fnv1a(h ^ 0xff, b);
    return h;
}

ComplexMatrix exp_nilpotent(const ComplexMatrix& y) {
    const std::size_t n = y.rows();
    ComplexMatrix e = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k < n; ++k) {
        term = matmul(y, term);
        const double inv = 1.0 / static_cast<double>(k);
        bool all_zero = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                term(i, j) *= inv;
                if (term(i, j) != cdbl{0.0, 0.0}) all_zero = false;
                e(i, j) += term(i, j);
            }
        if (all_zero) break;
    }
    return e;
}

struct CandidateSampler {
    std::mt19937_64 rng;
    std::vector<std::pair<int, int>> roots;  // strictly lower positions (row, col)
    int na, nb;

    cdbl random_entry() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double mag = std::exp(std::log(1e-3) + u(rng) * std::log(1e6));
        const double ang = 2.0 * std::numbers::pi * u(rng);
        return cdbl{mag * std::cos(ang), mag * std::sin(ang)};
    }

    WitnessConstruction sample(int index) {
        WitnessConstruction c;
        c.candidate_index = index;
        const int m = static_cast<int>(roots.size());
        if (index < na) {
            c.schedule = "single";
            const auto [p, q] = roots[index % m];
            c.entries.emplace_back(p, q, random_entry());
        } else if (index < na + nb) {
            c.schedule = "sparse";
            std::uniform_int_distribution<int> size_dist(2, std::max(2, m));
            const int s = std::min(m, size_dist(rng));
            std::vector<int> idx(m);
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (int i = 0; i < s; ++i) {
                const auto [p, q] = roots[idx[i]];
                c.entries.emplace_back(p, q, random_entry());
            }
        } else {
            c.schedule = "dense";
            for (const auto& [p, q] : roots) c.entries.emplace_back(p, q, random_entry());
        }
        return c;
    }
};

FlagPoint apply_construction(const WitnessConstruction& c, const coxeter::CosetRep& source) {
    const int n = source.signature().ambient;
    const int d = source.signature().top_dim();
    ComplexMatrix y(n, n);
    for (const auto& [p, q, val] : c.entries) y(p, q) = val;
    const ComplexMatrix e = exp_nilpotent(y);
    ComplexMatrix frame(n, d);
    for (int j = 0; j < d; ++j) {
        const int col = source.perm()(j + 1) - 1;
        for (int i = 0; i < n; ++i) frame(i, j) = e(i, col);
    }
    return FlagPoint(numerics::orthonormalize(frame), source.signature());
}

}  // namespace

std::optional<SmaleWitness> smale_witness_search(const SpecialFlowGenerator& gen,
                                                 const coxeter::CosetRep& source,
                                                 const coxeter::CosetRep& target, int budget,
                                                 std::uint64_t seed) {
    if (!(source.signature() == gen.signature) || !(target.signature() == gen.signature))
        throw SizeMismatch("cells and generator use different signatures");
    if (source.perm() == target.perm())
        throw Error("witness search requires distinct cells");
    if (budget <= 0) throw Error("witness search budget must be positive");

    const int n = gen.signature.ambient;
    CandidateSampler sampler;
    sampler.rng.seed(stream_seed(seed, source.label(), target.label()));
    for (int p = 1; p < n; ++p)
        for (int q = 0; q < p; ++q) sampler.roots.emplace_back(p, q);
    sampler.na = std::max(static_cast<int>(sampler.roots.size()), budget / 2);
    sampler.na = std::min(sampler.na, budget);
    sampler.nb = (budget - sampler.na) * 3 / 5;

    for (int index = 0; index < budget; ++index) {
        WitnessConstruction c = sampler.sample(index);
        c.stream_seed = stream_seed(seed, source.label(), target.label());
        try {
            FlagPoint z = apply_construction(c, source);
            const coxeter::CosetRep acell = cell_of(z, Side::ThetaN);
            if (!(acell.perm() == source.perm())) continue;
            const coxeter::CosetRep ocell = cell_of(z, Side::N);
            if (!(ocell.perm() == target.perm())) continue;
            return SmaleWitness{std::move(z), acell, ocell, std::move(c)};
        } catch (const IllConditioned&) {
            continue;
        } catch (const RankDeficient&) {
            continue;
        }
    }
    return std::nullopt;
}

SmaleRelationResult smale_relation(const SpecialFlowGenerator& gen, int budget, std::uint64_t seed,
                                   int threads) {
    const std::vector<coxeter::CosetRep> reps = coxeter::minimal_coset_reps(gen.signature);
    const int m = static_cast<int>(reps.size());

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) pairs.emplace_back(i, j);

    std::vector<std::optional<SmaleWitness>> found(pairs.size());
    auto work = [&](std::atomic<std::size_t>& next) {
        for (std::size_t p = next.fetch_add(1); p < pairs.size(); p = next.fetch_add(1))
            found[p] = smale_witness_search(gen, reps[pairs[p].first], reps[pairs[p].second],
                                            budget, seed);
    };
    if (threads <= 1) {
        std::atomic<std::size_t> next{0};
        work(next);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back([&] { work(next); });
        for (std::thread& t : pool) t.join();
    }

    std::vector<std::pair<std::string, std::string>> direct;
    std::vector<SmaleWitness> witnesses;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (!found[p]) continue;
        SmaleWitness& w = *found[p];
        // re-verify the stored point from scratch before accepting it
        const coxeter::CosetRep a = cell_of(w.point, Side::ThetaN);
        const coxeter::CosetRep o = cell_of(w.point, Side::N);
        if (!(a.perm() == w.alpha_cell.perm()) || !(o.perm() == w.omega_cell.perm())) continue;
        direct.emplace_back(w.alpha_cell.label(), w.omega_cell.label());
        witnesses.push_back(std::move(w));
    }
    std::vector<std::string> labels;
    labels.reserve(reps.size());
    for (const coxeter::CosetRep& r : reps) labels.push_back(r.label());
    lattice::FinitePoset closure = lattice::make_poset(std::move(labels), direct);
    return SmaleRelationResult{std::move(direct), std::move(witnesses), std::move(closure)};
}

VerifyReport verify_smale_equals_bruhat(const SpecialFlowGenerator& gen, int budget,
                                        std::uint64_t seed, int threads) {
    SmaleRelationResult rel = smale_relation(gen, budget, seed, threads);
    const lattice::FinitePoset bruhat = coxeter::coset_poset(gen.signature);

    VerifyReport rep;
    rep.fixed_count = bruhat.size();
    rep.direct_count = rel.direct.size();

    std::set<std::pair<std::string, std::string>> direct_set(rel.direct.begin(), rel.direct.end());
    for (const auto& d : rel.direct)
        if (!bruhat.leq_label(d.first, d.second)) rep.unsound.push_back(d);

    for (const auto& [i, j] : bruhat.cover_pairs()) {
        ++rep.cover_total;
        const auto key = std::make_pair(bruhat.label(i), bruhat.label(j));
        if (direct_set.count(key))
            ++rep.cover_witnessed;
        else
            rep.covers_missing.push_back(key);
    }

    rep.closure_equal = rel.closure.same_order(bruhat);
    rep.closure_pairs = rel.closure.relation_count();
    rep.bruhat_pairs = bruhat.relation_count();

    // comparable pairs at length gap >= 2: reported, not asserted
    const std::vector<coxeter::CosetRep> reps = coxeter::minimal_coset_reps(gen.signature);
    std::set<std::pair<std::string, std::string>> covers;
    for (const auto& [i, j] : bruhat.cover_pairs())
        covers.emplace(bruhat.label(i), bruhat.label(j));
    for (const coxeter::CosetRep& a : reps)
        for (const coxeter::CosetRep& b : reps) {
            if (a.perm() == b.perm() || !coxeter::bruhat_leq(a.perm(), b.perm())) continue;
            const auto key = std::make_pair(a.label(), b.label());
            if (covers.count(key)) continue;
            ++rep.distant_total;
            if (direct_set.count(key)) ++rep.distant_witnessed;
        }

    rep.witnesses = std::move(rel.witnesses);
    return rep;
}

FlagPoint random_flag(const coxeter::DimensionSignature& sig, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        ComplexMatrix a(sig.ambient, sig.top_dim());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = cdbl{g(rng), g(rng)};
        try {
            return FlagPoint(numerics::orthonormalize(a), sig);
        } catch (const RankDeficient&) {
            continue;
        }
    }
    throw Error("failed to sample a random flag");
}

PartitionReport cell_partition_check(const SpecialFlowGenerator& gen, std::size_t samples,
                                     std::uint64_t seed) {
    PartitionReport rep;
    rep.requested = samples;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        bool done = false;
        for (int attempt = 0; attempt < 100 && !done; ++attempt) {
            const FlagPoint z = random_flag(gen.signature, rng);
            try {
                const coxeter::CosetRep alpha = cell_of(z, Side::ThetaN);
                const coxeter::CosetRep omega = cell_of(z, Side::N);
                ++rep.classified;
                ++rep.pair_counts[{alpha.label(), omega.label()}];
                if (!coxeter::bruhat_leq(alpha.perm(), omega.perm()))
                    rep.violations.push_back("backward cell " + alpha.label() +
                                             " does not precede forward cell " + omega.label());
                done = true;
            } catch (const IllConditioned&) {
                ++rep.resamples;
            }
        }
        if (!done) rep.violations.push_back("sample could not be classified after 100 resamples");
    }
    return rep;
}

TransversalityReport transversality_probe(const SpecialFlowGenerator& gen,
                                          const SmaleWitness& witness) {
    const coxeter::DimensionSignature& sig = gen.signature;
    const int n = sig.ambient;
    const ComplexMatrix& q = witness.point.frame();

    {
        const ComplexMatrix g = matmul(q.adjoint(), q);
        double dev = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                dev = std::max(dev, std::abs(g(i, j) - (i == j ? cdbl{1.0, 0.0} : cdbl{0.0, 0.0})));
        if (dev > numerics::kOrthTol)
            throw IllConditioned("witness frame is degenerate");
    }

    TransversalityReport rep;
    const auto blocks = sig.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            rep.expected_dim += (blocks[i].second - blocks[i].first + 1) *
                                (blocks[j].second - blocks[j].first + 1);

    int tangent_rows = 0;
    for (int i = 0; i < sig.levels(); ++i) tangent_rows += n * sig.dims[i];

    std::vector<std::pair<int, int>> dirs;  // upper roots then lower roots
    for (int p = 0; p < n; ++p)
        for (int r = p + 1; r < n; ++r) dirs.emplace_back(p, r);
    for (int p = 0; p < n; ++p)
        for (int r = 0; r < p; ++r) dirs.emplace_back(p, r);

    ComplexMatrix t(tangent_rows, static_cast<int>(dirs.size()));
    for (std::size_t c = 0; c < dirs.size(); ++c) {
        const auto [p, r] = dirs[c];  // E_{p,r}: e_r -> e_p
        int row0 = 0;
        for (int i = 0; i < sig.levels(); ++i) {
            const int d = sig.dims[i];
            // Y Q_i has only row p populated, with the entries of row r of Q_i
            ComplexMatrix yq(n, d);
            for (int j = 0; j < d; ++j) yq(p, j) = q(r, j);
            // subtract the projection onto the level span
            const ComplexMatrix qi = witness.point.level(i);
            const ComplexMatrix coeff = matmul(qi.adjoint(), yq);
            const ComplexMatrix proj = matmul(qi, coeff);
            for (int rr = 0; rr < n; ++rr)
                for (int j = 0; j < d; ++j)
                    t(row0 + j * n + rr, c) = yq(rr, j) - proj(rr, j);
            row0 += n * d;
        }
    }
    rep.joint_rank = numerics::checked_rank_with_scale(t, 1e-8, 0.0);
    return rep;
}

}  // namespace flagattr::flags
