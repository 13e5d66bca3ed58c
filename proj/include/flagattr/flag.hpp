#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flagattr/coxeter.hpp"
#include "flagattr/numerics.hpp"
#include "flagattr/poset.hpp"

namespace flagattr::flags {

inline constexpr double kFlagTol = 1e-7;       // principal-angle equality of flags
inline constexpr int kDefaultBudget = 200;     // witness candidates per ordered pair
inline constexpr std::uint64_t kDefaultSeed = 42;

// Real diagonal generator x_1 < ... < x_n whose flow contracts the orbits of
// the upper-unitriangular group forward in time.  Weight separation demands
// pairwise distinct d-subset sums of the diagonal for every signature level d.
struct SpecialFlowGenerator {
    std::vector<double> diag;
    coxeter::DimensionSignature signature;
};

// Checks strict increase of the diagonal and weight separation.
SpecialFlowGenerator validate_special(std::vector<double> diag,
                                      const coxeter::DimensionSignature& sig);

// Point of the flag manifold: an orthonormal n x d_k frame whose column
// prefixes span the flag subspaces.
class FlagPoint {
  public:
    FlagPoint(ComplexMatrix frame, coxeter::DimensionSignature sig);

    // Skips the orthonormality check; consumers that revalidate (the
    // transversality probe) can be handed deliberately degenerate frames.
    static FlagPoint unchecked(ComplexMatrix frame, coxeter::DimensionSignature sig);

    const ComplexMatrix& frame() const { return frame_; }
    const coxeter::DimensionSignature& signature() const { return sig_; }

    // Orthonormal basis of the level-i subspace (first d_i columns), i 0-based.
    ComplexMatrix level(int i) const;

  private:
    struct Unchecked {};
    FlagPoint(Unchecked, ComplexMatrix frame, coxeter::DimensionSignature sig)
        : frame_(std::move(frame)), sig_(std::move(sig)) {}

    ComplexMatrix frame_;
    coxeter::DimensionSignature sig_;
};

// Largest principal angle over all levels.
double flag_distance(const FlagPoint& a, const FlagPoint& b);
bool flags_equal(const FlagPoint& a, const FlagPoint& b, double tol = kFlagTol);

// Coordinate flag spanned by standard basis vectors in the order of a
// minimal coset representative.
FlagPoint coordinate_flag(const coxeter::CosetRep& rep);

struct FixedFlag {
    coxeter::CosetRep rep;
    FlagPoint point() const { return coordinate_flag(rep); }
    std::string label() const { return rep.label(); }
};

// One fixed flag per minimal coset representative.
std::vector<FixedFlag> fixed_flags(const coxeter::DimensionSignature& sig);

enum class Side { N, ThetaN };

// The cell (orbit of the upper- or lower-unitriangular group) containing z,
// identified through rank conditions against the standard coordinate
// filtration.  The N side names the forward limit, the ThetaN side the
// backward limit.
coxeter::CosetRep cell_of(const FlagPoint& z, Side side,
                          double tol_rel = numerics::kDefaultRankTol);

// diag(exp(t x_i)) applied to the frame, columns rescaled, reorthonormalized.
FlagPoint flow_flag(const SpecialFlowGenerator& gen, double t, const FlagPoint& z);

// (backward limit, forward limit) as fixed flags, computed from the cells.
std::pair<FixedFlag, FixedFlag> limits(const SpecialFlowGenerator& gen, const FlagPoint& z);

// Sum over levels of the projective height of the wedge line of the level
// frame; a strict Lyapunov function of the flow.
double flag_height(const SpecialFlowGenerator& gen, const FlagPoint& z);

// Parameters that reproduce a witness point: exp of a strictly
// lower-triangular matrix with the listed entries applied to the coordinate
// flag of the source cell.
struct WitnessConstruction {
    std::string schedule;                            // "single" | "sparse" | "dense"
    std::vector<std::tuple<int, int, cdbl>> entries; // (row, col) 0-based
    int candidate_index = 0;
    std::uint64_t stream_seed = 0;
};

// A point witnessing a connecting orbit: it lies on the unstable manifold of
// the alpha cell and in the stable manifold of the omega cell.
struct SmaleWitness {
    FlagPoint point;
    coxeter::CosetRep alpha_cell;  // ThetaN side, backward limit
    coxeter::CosetRep omega_cell;  // N side, forward limit
    WitnessConstruction construction;
};

// Searches for a point flowing from the coordinate flag of `source` to the
// coordinate flag of `target`: perturbs the source flag along strictly
// lower-triangular directions on a single-root, then sparse, then dense
// schedule.  Absence of a witness certifies nothing.
std::optional<SmaleWitness> smale_witness_search(const SpecialFlowGenerator& gen,
                                                 const coxeter::CosetRep& source,
                                                 const coxeter::CosetRep& target, int budget,
                                                 std::uint64_t seed);

struct SmaleRelationResult {
    std::vector<std::pair<std::string, std::string>> direct;  // (source, sink) label pairs
    std::vector<SmaleWitness> witnesses;
    lattice::FinitePoset closure;
};

// Runs the witness search over all ordered pairs of distinct fixed flags and
// closes the discovered relation reflexively and transitively.
SmaleRelationResult smale_relation(const SpecialFlowGenerator& gen, int budget = kDefaultBudget,
                                   std::uint64_t seed = kDefaultSeed, int threads = 1);

struct VerifyReport {
    int fixed_count = 0;
    std::size_t direct_count = 0;
    std::vector<std::pair<std::string, std::string>> unsound;         // witnessed non-relations
    std::size_t cover_total = 0;
    std::size_t cover_witnessed = 0;
    std::vector<std::pair<std::string, std::string>> covers_missing;
    bool closure_equal = false;
    std::size_t closure_pairs = 0;
    std::size_t bruhat_pairs = 0;
    std::size_t distant_total = 0;      // comparable pairs with length gap >= 2
    std::size_t distant_witnessed = 0;  // informational only
    std::vector<SmaleWitness> witnesses;

    bool sound() const { return unsound.empty(); }
    bool covers_complete() const { return cover_witnessed == cover_total; }
    bool passed() const { return sound() && covers_complete() && closure_equal; }
};

// Soundness, cover completeness and closure equality of the discovered
// relation against the combinatorial order.
VerifyReport verify_smale_equals_bruhat(const SpecialFlowGenerator& gen,
                                        int budget = kDefaultBudget,
                                        std::uint64_t seed = kDefaultSeed, int threads = 1);

struct PartitionReport {
    std::size_t requested = 0;
    std::size_t classified = 0;
    std::size_t resamples = 0;
    std::vector<std::string> violations;  // backward/forward cells out of order
    std::map<std::pair<std::string, std::string>, std::size_t> pair_counts;  // (alpha, omega)

    static std::size_t allowed_resamples(std::size_t n) { return n < 1000 ? 1 : n / 1000; }
    bool passed() const {
        return classified == requested && violations.empty() &&
               resamples <= allowed_resamples(requested);
    }
};

// Samples random flags; each must land in exactly one cell per side, and the
// backward cell must precede the forward cell in the combinatorial order.
PartitionReport cell_partition_check(const SpecialFlowGenerator& gen, std::size_t samples,
                                     std::uint64_t seed);

struct TransversalityReport {
    int joint_rank = 0;
    int expected_dim = 0;
    bool transversal() const { return joint_rank == expected_dim; }
};

// At the witness point, spans the tangent spaces of the two cell orbits by
// one-parameter subgroup derivatives and checks that together they fill the
// tangent space of the flag manifold.
TransversalityReport transversality_probe(const SpecialFlowGenerator& gen,
                                          const SmaleWitness& witness);

// Haar-like random flag from a seeded complex Gaussian frame.
FlagPoint random_flag(const coxeter::DimensionSignature& sig, std::mt19937_64& rng);

}  // namespace flagattr::flags
