#include "flagattr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace flagattr::numerics {

CVec HermitianSpectrum::apply(const CVec& v) const {
    CVec c = adjoint_matvec(eigenvectors, v);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= eigenvalues[i];
    return matvec(eigenvectors, c);
}

ComplexMatrix HermitianSpectrum::block_basis(int b) const {
    const auto [lo, hi] = multiplicity_blocks[b];
    return eigenvectors.block(0, eigenvectors.rows(), lo, hi);
}

namespace {

// Make the entry of largest magnitude real positive; deterministic tie-break
// on the first such entry.
void canonicalize_column_phase(ComplexMatrix& u, std::size_t j) {
    const std::size_t n = u.rows();
    std::size_t best = 0;
    double best_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(u(i, j));
        if (a > best_abs * (1.0 + 1e-12)) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs == 0.0) return;
    const cdbl phase = std::conj(u(best, j)) / best_abs;
    for (std::size_t i = 0; i < n; ++i) u(i, j) *= phase;
}

}  // namespace

HermitianSpectrum hermitian_eigendecompose(const ComplexMatrix& m, double tol) {
    const std::size_t n = m.rows();
    if (m.rows() != m.cols()) throw NotHermitian("matrix is not square");

    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    if (!(dev < tol)) throw NotHermitian("matrix deviates from self-adjointness beyond tolerance");

    // Work on the exactly Hermitian part.
    ComplexMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) b(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        b(i, i) = cdbl{b(i, i).real(), 0.0};
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = b.max_abs();
    const double conv = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    bool converged = scale == 0.0 || n == 1;
    for (int sweep = 0; sweep < kJacobiSweepBudget && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cdbl bpq = b(p, q);
                const double ab = std::abs(bpq);
                if (ab <= conv * 1e-2) continue;

                const cdbl phase = bpq / ab;
                const double app = b(p, p).real();
                const double aqq = b(q, q).real();
                const double zeta = (app - aqq) / (2.0 * ab);
                const double t = (zeta >= 0.0) ? -1.0 / (zeta + std::hypot(1.0, zeta))
                                               : 1.0 / (-zeta + std::hypot(1.0, zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: col_p <- phase*c*col_p - s*col_q ; col_q <- phase*s*col_p + c*col_q
                for (std::size_t r = 0; r < n; ++r) {
                    const cdbl xp = b(r, p), xq = b(r, q);
                    b(r, p) = phase * c * xp - s * xq;
                    b(r, q) = phase * s * xp + c * xq;
                }
                // Rows: row_p <- conj(phase)*c*row_p - s*row_q ; row_q <- conj(phase)*s*row_p + c*row_q
                const cdbl cphase = std::conj(phase);
                for (std::size_t r = 0; r < n; ++r) {
                    const cdbl xp = b(p, r), xq = b(q, r);
                    b(p, r) = cphase * c * xp - s * xq;
                    b(q, r) = cphase * s * xp + c * xq;
                }
                b(p, q) = cdbl{0.0, 0.0};
                b(q, p) = cdbl{0.0, 0.0};
                b(p, p) = cdbl{b(p, p).real(), 0.0};
                b(q, q) = cdbl{b(q, q).real(), 0.0};

                for (std::size_t r = 0; r < n; ++r) {
                    const cdbl xp = v(r, p), xq = v(r, q);
                    v(r, p) = phase * c * xp - s * xq;
                    v(r, q) = phase * s * xp + c * xq;
                }
            }
        }
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(b(p, q)));
        converged = off <= conv;
    }
    if (!converged) throw NoConvergence("Jacobi diagonalization exceeded its sweep budget");

    std::vector<double> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = b(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return lambda[i] > lambda[j]; });

    HermitianSpectrum spec{std::vector<double>(n), ComplexMatrix(n, n), {}};
    for (std::size_t k = 0; k < n; ++k) {
        spec.eigenvalues[k] = lambda[order[k]];
        for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, k) = v(i, order[k]);
        canonicalize_column_phase(spec.eigenvectors, k);
    }

    double lmax = 0.0;
    for (double l : spec.eigenvalues) lmax = std::max(lmax, std::abs(l));
    const double tau_eig = kEigGroupRel * lmax;
    int lo = 0;
    for (int i = 1; i <= static_cast<int>(n); ++i) {
        if (i == static_cast<int>(n) || spec.eigenvalues[lo] - spec.eigenvalues[i] >= tau_eig) {
            spec.multiplicity_blocks.emplace_back(lo, i);
            lo = i;
        }
    }
    return spec;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    const std::size_t r = m.rows(), c = m.cols();
    ComplexMatrix h(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            h(i, r + j) = m(i, j);
            h(r + j, i) = std::conj(m(i, j));
        }
    const HermitianSpectrum s = hermitian_eigendecompose(h, 1e-9 * (1.0 + m.max_abs()) + 1e-12);
    const std::size_t k = std::min(r, c);
    std::vector<double> sv(k);
    for (std::size_t i = 0; i < k; ++i) sv[i] = std::max(0.0, s.eigenvalues[i]);
    return sv;
}

int rank_with_scale(const ComplexMatrix& m, double tol_rel, double scale) {
    if (!(tol_rel > 0.0)) throw Error("rank tolerance must be positive");
    if (m.max_abs() == 0.0) return 0;
    const std::vector<double> sv = singular_values(m);
    if (scale <= 0.0) scale = sv.empty() ? 0.0 : sv[0];
    if (scale == 0.0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > tol_rel * scale) ++r;
    return r;
}

int numerical_rank(const ComplexMatrix& m, double tol_rel) {
    return rank_with_scale(m, tol_rel, 0.0);
}

int checked_rank_with_scale(const ComplexMatrix& m, double tol_rel, double scale) {
    if (!(tol_rel > 0.0)) throw Error("rank tolerance must be positive");
    if (m.max_abs() == 0.0) return 0;
    const std::vector<double> sv = singular_values(m);
    if (scale <= 0.0) scale = sv.empty() ? 0.0 : sv[0];
    if (scale == 0.0) return 0;
    int r = 0;
    for (double s : sv) {
        const double ratio = s / scale;
        if (ratio >= 0.1 * tol_rel && ratio <= 10.0 * tol_rel)
            throw IllConditioned("singular value inside the rank ambiguity band");
        if (s > tol_rel * scale) ++r;
    }
    return r;
}

ComplexMatrix orthonormalize(const ComplexMatrix& m) {
    const std::size_t n = m.rows(), k = m.cols();
    if (k > n) throw RankDeficient("more columns than rows");
    if (numerical_rank(m) < static_cast<int>(k))
        throw RankDeficient("input does not have full column rank");

    ComplexMatrix q(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        CVec vj = m.col(j);
        const double orig = vnorm(vj);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const CVec qi = q.col(i);
                vaxpy(vj, -vdot(qi, vj), qi);
            }
        }
        const double nrm = vnorm(vj);
        if (!(nrm > 1e-12 * orig) || nrm == 0.0)
            throw RankDeficient("column prefix is numerically dependent");
        vscale(vj, 1.0 / nrm);
        q.set_col(j, vj);
    }
    return q;
}

double max_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw SizeMismatch("principal angles need bases of equal shape");
    // residual of b against span(a): its largest singular value is the sine
    // of the largest canonical angle, accurate near zero
    const ComplexMatrix coeff = matmul(a.adjoint(), b);
    ComplexMatrix r(b.rows(), b.cols());
    const ComplexMatrix proj = matmul(a, coeff);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) = b(i, j) - proj(i, j);
    if (r.max_abs() == 0.0) return 0.0;
    const std::vector<double> sv = singular_values(r);
    const double smax = sv.empty() ? 0.0 : sv.front();
    return std::asin(std::min(1.0, smax));
}

}  // namespace flagattr::numerics
