#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flagattr/flag.hpp"
#include "flagattr/numerics.hpp"
#include "flagattr/poset.hpp"
#include "flagattr/projective.hpp"

namespace flagattr::lattice {

// Attractor determined by an upper set of fixed points, together with the
// dual repellor on the complement.
struct AttractorRealization {
    UpperSet upper;
    std::vector<std::string> attractor_fix;
    std::vector<std::string> repellor_fix;
    std::string attractor_desc;  // union of backward-cone cells over the upper set
    std::string repellor_desc;   // union of forward-cone cells over the complement
    std::optional<ComplexMatrix> attractor_basis;  // projective context only
    std::optional<ComplexMatrix> repellor_basis;
};

// Symbolic realization over any fixed-point order (flag context).
AttractorRealization attractor_from_upper(const UpperSet& u, const FinitePoset& order);

// Projective realization: members of the upper set are eigenvalue components
// of the attraction order, and the attractor subspace is the sum of the
// member eigenspaces.
AttractorRealization attractor_from_upper(const UpperSet& u, const FinitePoset& order,
                                          const numerics::HermitianSpectrum& phi);

enum class PointClass { Attractor, Connecting, Repellor };

std::string to_string(PointClass c);

// Locates a flag relative to an attractor-repellor pair through its two
// limit cells.  Exactly one class must apply; anything else throws
// Inconsistent.
PointClass classify_point(const flags::FlagPoint& z, const AttractorRealization& realization,
                          const FinitePoset& order, const flags::SpecialFlowGenerator& gen);

struct LatticeReport {
    std::size_t upper_sets = 0;
    bool closed = false;
    bool union_hom = false;
    bool intersection_hom = false;
    bool injective = false;
    bool distributive = false;
    std::vector<std::string> failures;

    bool passed() const {
        return closed && union_hom && intersection_hom && injective && distributive &&
               failures.empty();
    }
};

// Checks that U -> fixed set of A_U is a lattice isomorphism onto its image:
// unions and intersections are preserved, the map is injective, and the
// lattice of upper sets is distributive.
LatticeReport lattice_isomorphism_check(const FinitePoset& p);

}  // namespace flagattr::lattice
