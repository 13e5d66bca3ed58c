#include "flagattr/cli.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "flagattr/coxeter.hpp"
#include "flagattr/errors.hpp"
#include "flagattr/flag.hpp"
#include "flagattr/lattice.hpp"
#include "flagattr/numerics.hpp"
#include "flagattr/poset.hpp"
#include "flagattr/projective.hpp"

namespace flagattr::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_g(v[i]);
    }
    return s;
}

std::vector<double> default_diag(int n) {
    std::vector<double> d(n);
    double x = 1.0;
    for (int i = 0; i < n; ++i, x *= 2.0) d[i] = x;
    return d;
}

// Only small posets get their upper sets inlined into JSON output.
constexpr int kJsonUpperSetLimit = 16;

ordered_json poset_to_json(const lattice::FinitePoset& p) {
    const bool with_upper = p.size() <= kJsonUpperSetLimit;
    return ordered_json::parse(hasse_export(p, lattice::ExportFormat::Json, with_upper));
}

ordered_json witness_to_json(const flags::SmaleWitness& w) {
    ordered_json j;
    j["alpha"] = w.alpha_cell.label();
    j["omega"] = w.omega_cell.label();
    j["schedule"] = w.construction.schedule;
    j["candidate_index"] = w.construction.candidate_index;
    ordered_json entries = ordered_json::array();
    for (const auto& [r, c, v] : w.construction.entries)
        entries.push_back({{"row", r}, {"col", c}, {"re", v.real()}, {"im", v.imag()}});
    j["entries"] = entries;
    ordered_json frame = ordered_json::array();
    for (std::size_t r = 0; r < w.point.frame().rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < w.point.frame().cols(); ++c) {
            const cdbl z = w.point.frame()(r, c);
            row.push_back({z.real(), z.imag()});
        }
        frame.push_back(row);
    }
    j["frame"] = frame;
    return j;
}

struct CommandContext {
    const RunConfig& cfg;
    std::ostringstream out;
    int code = 0;
};

void run_projective(CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.diag.empty()) throw Error("projective needs --diag with at least one eigenvalue");
    const int n = static_cast<int>(cfg.diag.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = cfg.diag[i];
    const numerics::HermitianSpectrum phi = numerics::hermitian_eigendecompose(m, cfg.tol);

    const auto comps = projective::fixed_components(phi);
    const lattice::FinitePoset order = projective::component_smale_order(phi);
    const lattice::FinitePoset attr_order = projective::attraction_order(phi);
    const auto pairs = projective::projective_attractor_pairs(phi);
    const auto upper = lattice::enumerate_upper_sets(attr_order);

    if (cfg.format == RunConfig::Format::Dot) {
        ctx.out << hasse_export(order, lattice::ExportFormat::Dot);
        return;
    }
    if (cfg.format == RunConfig::Format::Json) {
        ordered_json j;
        j["eigenvalues"] = cfg.diag;
        ordered_json cj = ordered_json::array();
        for (const auto& c : comps)
            cj.push_back({{"eigenvalue", c.eigenvalue},
                          {"multiplicity", c.basis.cols()},
                          {"height", c.height}});
        j["components"] = cj;
        j["component_order"] = poset_to_json(order);
        ordered_json pj = ordered_json::array();
        for (const auto& p : pairs)
            pj.push_back({{"eigenvalue", p.eigenvalue},
                          {"attractor_dim", p.attractor_dim},
                          {"repellor_dim", p.repellor_dim}});
        j["attractor_pairs"] = pj;
        j["lattice_size"] = upper.size();
        ctx.out << j.dump(2) << "\n";
        return;
    }
    ctx.out << "projective flow on P^" << (n - 1) << ", diagonal: " << join_doubles(cfg.diag)
            << "\n";
    ctx.out << "fixed components (" << comps.size() << ", descending eigenvalue):\n";
    for (const auto& c : comps)
        ctx.out << "  " << projective::eigenvalue_label(c.eigenvalue) << "  multiplicity "
                << c.basis.cols() << "  height " << fmt_g(c.height) << "\n";
    ctx.out << "component order: chain of length " << order.size()
            << ", anti-isomorphic to the spectrum (largest eigenvalue at the bottom)\n";
    ctx.out << "attractor-repellor pairs:\n";
    for (const auto& p : pairs)
        ctx.out << "  " << projective::eigenvalue_label(p.eigenvalue) << ": attractor dim "
                << p.attractor_dim << ", repellor dim " << p.repellor_dim << "\n";
    ctx.out << "attractor lattice: " << upper.size() << " upper sets (including the empty set)\n";
}

void run_bruhat(CommandContext& ctx, const coxeter::DimensionSignature& sig) {
    const lattice::FinitePoset p = coxeter::coset_poset(sig);
    switch (ctx.cfg.format) {
        case RunConfig::Format::Dot:
            ctx.out << hasse_export(p, lattice::ExportFormat::Dot);
            return;
        case RunConfig::Format::Json:
            ctx.out << poset_to_json(p).dump(2) << "\n";
            return;
        case RunConfig::Format::Text: {
            ctx.out << "coset order: n=" << sig.ambient << " dims=" << sig.label() << "\n";
            ctx.out << "elements (" << p.size() << "):";
            for (const std::string& e : p.elements()) ctx.out << " " << e << ";";
            ctx.out << "\n";
            ctx.out << "relation pairs (including reflexive): " << p.relation_count() << "\n";
            ctx.out << "cover edges: " << p.cover_pairs().size() << "\n";
            return;
        }
    }
}

void run_flag(CommandContext& ctx, const flags::SpecialFlowGenerator& gen) {
    const RunConfig& cfg = ctx.cfg;
    const auto fixed = flags::fixed_flags(gen.signature);
    const flags::PartitionReport stats =
        flags::cell_partition_check(gen, static_cast<std::size_t>(cfg.samples), cfg.seed);
    const flags::SmaleRelationResult rel =
        flags::smale_relation(gen, cfg.budget, cfg.seed, cfg.threads);

    if (cfg.format == RunConfig::Format::Json) {
        ordered_json j;
        j["n"] = gen.signature.ambient;
        j["dims"] = gen.signature.dims;
        j["diag"] = gen.diag;
        j["seed"] = cfg.seed;
        j["budget"] = cfg.budget;
        ordered_json fj = ordered_json::array();
        for (const auto& f : fixed) fj.push_back(f.label());
        j["fixed_flags"] = fj;
        ordered_json sj;
        sj["samples"] = stats.requested;
        sj["classified"] = stats.classified;
        sj["resamples"] = stats.resamples;
        ordered_json pc = ordered_json::array();
        for (const auto& [key, count] : stats.pair_counts)
            pc.push_back({{"alpha", key.first}, {"omega", key.second}, {"count", count}});
        sj["pairs"] = pc;
        j["cell_samples"] = sj;
        ordered_json wj = ordered_json::array();
        for (const auto& w : rel.witnesses) wj.push_back(witness_to_json(w));
        j["witnesses"] = wj;
        ctx.out << j.dump(2) << "\n";
        return;
    }
    if (cfg.format == RunConfig::Format::Dot) {
        ctx.out << hasse_export(rel.closure, lattice::ExportFormat::Dot);
        return;
    }
    ctx.out << "flag manifold: n=" << gen.signature.ambient << " dims=" << gen.signature.label()
            << " diag=" << join_doubles(gen.diag) << " seed=" << cfg.seed
            << " budget=" << cfg.budget << "\n";
    ctx.out << "fixed flags (" << fixed.size() << "):";
    for (const auto& f : fixed) ctx.out << " " << f.label() << ";";
    ctx.out << "\n";
    ctx.out << "cell statistics (" << stats.requested << " samples, " << stats.resamples
            << " resamples):\n";
    for (const auto& [key, count] : stats.pair_counts)
        ctx.out << "  alpha=" << key.first << " omega=" << key.second << ": " << count << "\n";
    ctx.out << "direct connecting pairs witnessed (" << rel.direct.size() << "):\n";
    for (const auto& w : rel.witnesses)
        ctx.out << "  " << w.alpha_cell.label() << " -> " << w.omega_cell.label()
                << "  schedule=" << w.construction.schedule
                << " candidate=" << w.construction.candidate_index
                << " entries=" << w.construction.entries.size() << "\n";
}

void run_network(CommandContext& ctx, const coxeter::DimensionSignature& sig) {
    const lattice::FinitePoset p = coxeter::coset_poset(sig);
    const lattice::AttractorLattice lat = lattice::attractor_lattice(p);

    if (ctx.cfg.format == RunConfig::Format::Dot) {
        ctx.out << hasse_export(lat, lattice::ExportFormat::Dot);
        return;
    }
    if (ctx.cfg.format == RunConfig::Format::Json) {
        ordered_json j;
        j["fixed_point_order"] = poset_to_json(p);
        ordered_json nodes = ordered_json::array();
        for (const auto& u : lat.nodes) nodes.push_back(u.member_labels(p));
        j["nodes"] = nodes;
        const int m = static_cast<int>(lat.nodes.size());
        std::vector<std::vector<int>> meet(m, std::vector<int>(m)), join(m, std::vector<int>(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                meet[a][b] = lat.meet(a, b);
                join[a][b] = lat.join(a, b);
            }
        j["meet"] = meet;
        j["join"] = join;
        j["distributive"] = lat.distributive();
        ctx.out << j.dump(2) << "\n";
        return;
    }
    ctx.out << "attractor network: n=" << sig.ambient << " dims=" << sig.label() << "\n";
    ctx.out << "fixed-point order: " << p.size() << " elements, " << p.relation_count()
            << " relation pairs\n";
    ctx.out << "attractor lattice: " << lat.nodes.size() << " upper sets\n";
    ctx.out << "meets/joins closed: " << (lat.closed() ? "yes" : "no") << "\n";
    ctx.out << "distributive: " << (lat.distributive() ? "yes" : "no") << "\n";
    ctx.out << "nodes:\n";
    for (const auto& u : lat.nodes) ctx.out << "  " << u.label(p) << "\n";
}

void run_verify(CommandContext& ctx, const flags::SpecialFlowGenerator& gen) {
    const RunConfig& cfg = ctx.cfg;
    const flags::VerifyReport vr =
        flags::verify_smale_equals_bruhat(gen, cfg.budget, cfg.seed, cfg.threads);
    const flags::PartitionReport pr =
        flags::cell_partition_check(gen, static_cast<std::size_t>(cfg.samples), cfg.seed + 1);
    const lattice::FinitePoset bruhat = coxeter::coset_poset(gen.signature);
    const lattice::LatticeReport lr = lattice::lattice_isomorphism_check(bruhat);

    const bool all_pass = vr.passed() && pr.passed() && lr.passed();

    if (cfg.format == RunConfig::Format::Json) {
        ordered_json j;
        j["n"] = gen.signature.ambient;
        j["dims"] = gen.signature.dims;
        j["diag"] = gen.diag;
        j["seed"] = cfg.seed;
        j["budget"] = cfg.budget;
        j["samples"] = cfg.samples;
        j["fixed_points"] = vr.fixed_count;
        j["witness_soundness"] = {{"pass", vr.sound()},
                                  {"direct_pairs", vr.direct_count},
                                  {"unsound", vr.unsound.size()}};
        j["cover_completeness"] = {{"pass", vr.covers_complete()},
                                   {"witnessed", vr.cover_witnessed},
                                   {"total", vr.cover_total}};
        j["closure_equality"] = {{"pass", vr.closure_equal},
                                 {"closure_pairs", vr.closure_pairs},
                                 {"expected_pairs", vr.bruhat_pairs}};
        j["cell_partition"] = {{"pass", pr.passed()},
                               {"classified", pr.classified},
                               {"requested", pr.requested},
                               {"resamples", pr.resamples},
                               {"violations", pr.violations.size()}};
        j["lattice_isomorphism"] = {{"pass", lr.passed()}, {"upper_sets", lr.upper_sets}};
        j["distant_pairs"] = {{"witnessed", vr.distant_witnessed}, {"total", vr.distant_total}};
        j["result"] = all_pass ? "PASS" : "FAIL";
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << "verify: n=" << gen.signature.ambient << " dims=" << gen.signature.label()
                << " diag=" << join_doubles(gen.diag) << " seed=" << cfg.seed
                << " budget=" << cfg.budget << " samples=" << cfg.samples << "\n";
        ctx.out << "fixed points: " << vr.fixed_count << "\n";
        ctx.out << "witness soundness: " << (vr.sound() ? "PASS" : "FAIL") << " ("
                << vr.direct_count << " direct pairs, " << vr.unsound.size() << " unsound)\n";
        ctx.out << "cover completeness: " << (vr.covers_complete() ? "PASS" : "FAIL") << " ("
                << vr.cover_witnessed << "/" << vr.cover_total << " covers witnessed)\n";
        ctx.out << "smale=bruhat: " << (vr.closure_equal ? "PASS" : "FAIL") << " ("
                << vr.closure_pairs << " pairs)\n";
        for (const auto& [a, b] : vr.unsound)
            ctx.out << "  unsound witness: " << a << " -> " << b << "\n";
        for (const auto& [a, b] : vr.covers_missing)
            ctx.out << "  cover without witness: " << a << " -> " << b << "\n";
        if (!vr.closure_equal)
            ctx.out << "  closure has " << vr.closure_pairs << " pairs, expected "
                    << vr.bruhat_pairs << "\n";
        ctx.out << "cell partition: " << (pr.passed() ? "PASS" : "FAIL") << " (" << pr.classified
                << "/" << pr.requested << " classified, " << pr.resamples << " resamples, "
                << pr.violations.size() << " order violations)\n";
        ctx.out << "lattice isomorphism: " << (lr.passed() ? "PASS" : "FAIL") << " ("
                << lr.upper_sets << " upper sets)\n";
        ctx.out << "distant pairs witnessed directly: " << vr.distant_witnessed << "/"
                << vr.distant_total << " (informational)\n";
        ctx.out << "result: " << (all_pass ? "PASS" : "FAIL") << "\n";
    }
    if (!all_pass) ctx.code = 2;
}

}  // namespace

RunResult run(const RunConfig& config) {
    CommandContext ctx{config, {}, 0};
    try {
        if (config.command == RunConfig::Command::Projective) {
            run_projective(ctx);
            return RunResult{ctx.code, ctx.out.str(), {}};
        }
        if (config.n < 1) throw Error("--n must be at least 1");
        std::vector<int> dims = config.dims;
        if (dims.empty()) {
            if (config.n < 2) throw Error("flag commands need n >= 2");
            for (int i = 1; i < config.n; ++i) dims.push_back(i);
        }
        const coxeter::DimensionSignature sig(dims, config.n);

        if (config.command == RunConfig::Command::Bruhat) {
            run_bruhat(ctx, sig);
            return RunResult{ctx.code, ctx.out.str(), {}};
        }
        if (config.command == RunConfig::Command::Network) {
            run_network(ctx, sig);
            return RunResult{ctx.code, ctx.out.str(), {}};
        }

        std::vector<double> diag = config.diag;
        if (diag.empty()) diag = default_diag(config.n);
        const flags::SpecialFlowGenerator gen = flags::validate_special(diag, sig);

        if (config.command == RunConfig::Command::Flag)
            run_flag(ctx, gen);
        else
            run_verify(ctx, gen);
        return RunResult{ctx.code, ctx.out.str(), {}};
    } catch (const Error& e) {
        return RunResult{1, ctx.out.str(), std::string("error: ") + e.what() + "\n"};
    } catch (const std::exception& e) {
        return RunResult{1, ctx.out.str(), std::string("error: ") + e.what() + "\n"};
    }
}

}  // namespace flagattr::cli
