#pragma once

#include <vector>

#include "slopelab/zq.hpp"

namespace slopelab {

// Dense matrix over Z_q at working precision. Row-major, value semantics.
class ZqMatrix {
public:
    ZqMatrix() = default;
    ZqMatrix(CtxPtr ctx, int rows, int cols); // zero-filled
    static ZqMatrix identity(const CtxPtr& ctx, int n);

    const CtxPtr& ctx() const { return ctx_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Zq& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Zq& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    ZqMatrix operator+(const ZqMatrix& o) const;
    ZqMatrix operator-(const ZqMatrix& o) const;
    ZqMatrix operator*(const ZqMatrix& o) const;
    ZqMatrix pow(unsigned long e) const; // square matrices

    ZqMatrix sigma(long power = 1) const; // entrywise Frobenius
    ZqMatrix transpose() const;
    ZqMatrix times_pk(long k) const;
    ZqMatrix div_pk_exact(long k) const;
    ZqMatrix submatrix(int r0, int c0, int nrows, int ncols) const;
    ZqMatrix hstack(const ZqMatrix& o) const;

    int min_prec() const; // N for empty matrices

    // Minimum certified valuation over all entries. certified == false when
    // every entry is ≡ 0 at its certified precision (v = that floor).
    Zq::Val min_val() const;

    bool is_zero_mod(long k) const;
    bool rep_equal(const ZqMatrix& o) const;

    // Map entries into another context with the same (p, s) by reinterpreting
    // coordinate representatives mod the target p^N; certified precision is
    // carried along (capped at the target N).
    ZqMatrix rebase(const CtxPtr& target) const;

    // Same, but treat the representatives as exact integers: the result is
    // certified to the full target precision. Only meaningful for matrices
    // built from exact data.
    ZqMatrix rebase_exact(const CtxPtr& target) const;

private:
    CtxPtr ctx_;
    int rows_ = 0, cols_ = 0;
    std::vector<Zq> a_;
};

struct SmithDivisor {
    long v = 0;
    bool finite = true; // false: the pivot block vanished at certified precision
};

// L * A * R = D with L, R invertible over Z_q/p^N; D diagonal with entries
// exactly p^(v_i), valuations ascending, infinite divisors last.
struct SmithForm {
    ZqMatrix L, Linv, R, Rinv, D;
    std::vector<SmithDivisor> divisors;
    long zero_cert = 0; // certification floor for the vanished block (= prec there)
};

SmithForm smith(const ZqMatrix& A);

// Characteristic polynomial det(lambda*I - A), ascending coefficients,
// c[n] = 1. Division-free (Berkowitz), so no certified precision is lost.
std::vector<Zq> charpoly(const ZqMatrix& A);

// Solve K * X = M exactly over Z_q/p^N; throws when no integral solution
// exists at the certified precision.
ZqMatrix solve_exact(const ZqMatrix& K, const ZqMatrix& M);

// Does an X with K * X ≡ M mod p^tol exist?
bool factors_through(const ZqMatrix& M, const ZqMatrix& K, long tol);

} // namespace slopelab
