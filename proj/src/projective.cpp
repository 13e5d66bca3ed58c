#include "flagattr/projective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace flagattr::projective {

ProjectivePoint ProjectivePoint::from(CVec raw) {
    const double nrm = vnorm(raw);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error("projective point needs a nonzero finite vector");
    vscale(raw, 1.0 / nrm);
    for (const cdbl& z : raw) {
        const double a = std::abs(z);
        if (a > 1e-10) {
            vscale(raw, std::conj(z) / a);
            break;
        }
    }
    return ProjectivePoint{std::move(raw)};
}

double projective_distance(const ProjectivePoint& x, const ProjectivePoint& y) {
    // sine of the angle between the lines, via the projection residual
    // (no cancellation for nearly equal points)
    CVec r = x.v;
    vaxpy(r, -vdot(y.v, x.v), y.v);
    return std::min(1.0, vnorm(r));
}

bool points_equal(const ProjectivePoint& x, const ProjectivePoint& y, double tol) {
    return x.v.size() == y.v.size() && projective_distance(x, y) < tol;
}

std::vector<FixedComponent> fixed_components(const numerics::HermitianSpectrum& phi) {
    std::vector<FixedComponent> out;
    for (int b = 0; b < phi.block_count(); ++b) {
        const double nu = phi.block_eigenvalue(b);
        out.push_back(FixedComponent{nu, phi.block_basis(b), -0.5 * nu});
    }
    return out;
}

double height(const numerics::HermitianSpectrum& phi, const ProjectivePoint& x) {
    const CVec w = phi.apply(x.v);
    const double num = vdot(x.v, w).real();
    const double den = vdot(x.v, x.v).real();
    return -0.5 * num / den;
}

CVec gradient_field(const numerics::HermitianSpectrum& phi, const ProjectivePoint& x) {
    CVec w = phi.apply(x.v);
    const double ray = vdot(x.v, w).real();
    vaxpy(w, cdbl{-ray, 0.0}, x.v);
    vscale(w, cdbl{-1.0, 0.0});
    return w;
}

ProjectivePoint flow(const numerics::HermitianSpectrum& phi, double t, const ProjectivePoint& x) {
    if (!std::isfinite(t)) throw FlowOverflow("flow time must be finite");
    CVec c = adjoint_matvec(phi.eigenvectors, x.v);
    double shift = -std::numeric_limits<double>::infinity();
    for (double l : phi.eigenvalues) shift = std::max(shift, t * l);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(t * phi.eigenvalues[i] - shift);
    CVec w = matvec(phi.eigenvectors, c);
    for (const cdbl& z : w)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw FlowOverflow("flow produced a non-finite representative");
    return ProjectivePoint::from(std::move(w));
}

namespace {

// Squared norms of the eigencomponents of v, one entry per multiplicity block.
std::vector<double> block_masses(const numerics::HermitianSpectrum& phi, const CVec& v,
                                 CVec* coords_out = nullptr) {
    CVec c = adjoint_matvec(phi.eigenvectors, v);
    std::vector<double> mass(phi.block_count(), 0.0);
    for (int b = 0; b < phi.block_count(); ++b) {
        const auto [lo, hi] = phi.multiplicity_blocks[b];
        for (int i = lo; i < hi; ++i) mass[b] += std::norm(c[i]);
    }
    if (coords_out) *coords_out = std::move(c);
    return mass;
}

// Representative of the projection of v onto eigenblock b.
CVec block_projection(const numerics::HermitianSpectrum& phi, const CVec& coords, int b) {
    CVec c(coords.size(), cdbl{0.0, 0.0});
    const auto [lo, hi] = phi.multiplicity_blocks[b];
    for (int i = lo; i < hi; ++i) c[i] = coords[i];
    return matvec(phi.eigenvectors, c);
}

}  // namespace

std::pair<ProjectivePoint, ProjectivePoint> limit_map(const numerics::HermitianSpectrum& phi,
                                                      const ProjectivePoint& x) {
    CVec coords;
    const std::vector<double> mass = block_masses(phi, x.v, &coords);
    int first_present = -1, last_present = -1;
    int dominant = 0;
    for (int b = 0; b < phi.block_count(); ++b) {
        if (mass[b] > mass[dominant]) dominant = b;
        if (std::sqrt(mass[b]) > kComponentTol) {
            if (first_present < 0) first_present = b;
            last_present = b;
        }
    }
    if (first_present < 0) first_present = last_present = dominant;
    // blocks are sorted by descending eigenvalue: the first present block has
    // the largest eigenvalue (forward limit), the last the smallest (backward)
    ProjectivePoint forward = ProjectivePoint::from(block_projection(phi, coords, first_present));
    ProjectivePoint backward = ProjectivePoint::from(block_projection(phi, coords, last_present));
    return {std::move(backward), std::move(forward)};
}

bool stable_membership(const numerics::HermitianSpectrum& phi, const ProjectivePoint& fixed,
                       const ProjectivePoint& y, Sign sign) {
    double lmax = 0.0;
    for (double l : phi.eigenvalues) lmax = std::max(lmax, std::abs(l));
    const CVec w = phi.apply(fixed.v);
    const double ray = vdot(fixed.v, w).real();
    CVec resid = w;
    vaxpy(resid, cdbl{-ray, 0.0}, fixed.v);
    if (vnorm(resid) > 1e-8 * (1.0 + lmax))
        throw NotAFixedPoint("reference point is not an eigenvector line");
    int bfix = 0;
    for (int b = 1; b < phi.block_count(); ++b)
        if (std::abs(phi.block_eigenvalue(b) - ray) < std::abs(phi.block_eigenvalue(bfix) - ray))
            bfix = b;

    CVec coords;
    const std::vector<double> mass = block_masses(phi, y.v, &coords);
    for (int b = 0; b < phi.block_count(); ++b) {
        if (b == bfix) continue;
        const double offending = (sign == Sign::Plus)
                                     ? phi.block_eigenvalue(b) - phi.block_eigenvalue(bfix)
                                     : phi.block_eigenvalue(bfix) - phi.block_eigenvalue(b);
        if (offending > 0.0 && std::sqrt(mass[b]) > kComponentTol) return false;
    }
    // The component inside the fixed block must be nonzero and lie on the
    // fixed line itself.
    CVec proj = block_projection(phi, coords, bfix);
    const double pn = vnorm(proj);
    if (pn <= kComponentTol) return false;
    CVec off = proj;
    vaxpy(off, -vdot(fixed.v, proj), fixed.v);
    return vnorm(off) <= kComponentTol;
}

std::string eigenvalue_label(double nu) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "nu=%.12g", nu);
    return std::string(buf);
}

namespace {

std::vector<std::string> component_labels(const numerics::HermitianSpectrum& phi) {
    std::vector<std::string> labels;
    for (int b = 0; b < phi.block_count(); ++b) {
        std::string l = eigenvalue_label(phi.block_eigenvalue(b));
        while (std::find(labels.begin(), labels.end(), l) != labels.end()) l += "'";
        labels.push_back(std::move(l));
    }
    return labels;
}

lattice::FinitePoset chain_poset(std::vector<std::string> labels, bool first_at_bottom) {
    std::vector<std::pair<std::string, std::string>> rel;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
        if (first_at_bottom)
            rel.emplace_back(labels[i], labels[i + 1]);
        else
            rel.emplace_back(labels[i + 1], labels[i]);
    }
    return lattice::make_poset(std::move(labels), rel);
}

}  // namespace

lattice::FinitePoset component_smale_order(const numerics::HermitianSpectrum& phi) {
    // labels run by descending eigenvalue; the largest eigenvalue is minimal
    return chain_poset(component_labels(phi), true);
}

lattice::FinitePoset attraction_order(const numerics::HermitianSpectrum& phi) {
    return chain_poset(component_labels(phi), false);
}

std::vector<ProjectiveAttractorPair> projective_attractor_pairs(const numerics::HermitianSpectrum& phi) {
    const int n = phi.dim();
    std::vector<ProjectiveAttractorPair> out;
    for (int b = 0; b < phi.block_count(); ++b) {
        const int split = phi.multiplicity_blocks[b].second;  // columns 0..split-1 have mu >= nu
        ComplexMatrix attr = phi.eigenvectors.block(0, n, 0, split);
        std::optional<ComplexMatrix> rep;
        if (split < n) rep = phi.eigenvectors.block(0, n, split, n);
        out.push_back(ProjectiveAttractorPair{phi.block_eigenvalue(b), std::move(attr), std::move(rep),
                                              split, n - split});
    }
    return out;
}

}  // namespace flagattr::projective
