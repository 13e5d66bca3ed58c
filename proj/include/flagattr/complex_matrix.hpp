#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "flagattr/errors.hpp"

namespace flagattr {

using cdbl = std::complex<double>;
using CVec = std::vector<cdbl>;

// Dense complex matrix, row-major.  Dimensions are always positive and
// entries are required to be finite.
class ComplexMatrix {
  public:
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cdbl{0.0, 0.0}) {
        check_dims();
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdbl> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        check_dims();
        if (a_.size() != rows_ * cols_)
            throw Error("entry count does not match dimensions");
        check_finite();
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cdbl& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cdbl& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    CVec col(std::size_t j) const {
        CVec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const CVec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    // Half-open row/column ranges; the block must be non-empty.
    ComplexMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
        ComplexMatrix b(r1 - r0, c1 - c0);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
        return b;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix b(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) b(j, i) = std::conj((*this)(i, j));
        return b;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cdbl& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        for (const cdbl& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

  private:
    void check_dims() const {
        if (rows_ == 0 || cols_ == 0) throw Error("matrix dimensions must be positive");
    }
    void check_finite() const {
        if (!all_finite()) throw Error("matrix entries must be finite");
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<cdbl> a_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw SizeMismatch("matmul: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdbl aik = a(i, k);
            if (aik == cdbl{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CVec matvec(const ComplexMatrix& a, const CVec& v) {
    if (a.cols() != v.size()) throw SizeMismatch("matvec: dimensions differ");
    CVec w(a.rows(), cdbl{0.0, 0.0});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) w[i] += a(i, j) * v[j];
    return w;
}

// A* v without forming the adjoint.
inline CVec adjoint_matvec(const ComplexMatrix& a, const CVec& v) {
    if (a.rows() != v.size()) throw SizeMismatch("adjoint_matvec: dimensions differ");
    CVec w(a.cols(), cdbl{0.0, 0.0});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) w[j] += std::conj(a(i, j)) * v[i];
    return w;
}

inline ComplexMatrix hcat(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) throw SizeMismatch("hcat: row counts differ");
    ComplexMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

// Inner product, conjugate-linear in the first argument.
inline cdbl vdot(const CVec& u, const CVec& v) {
    cdbl s{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

inline double vnorm(const CVec& v) { return std::sqrt(std::abs(vdot(v, v))); }

inline void vscale(CVec& v, cdbl s) {
    for (cdbl& z : v) z *= s;
}

// v += s * u
inline void vaxpy(CVec& v, cdbl s, const CVec& u) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * u[i];
}

}  // namespace flagattr
