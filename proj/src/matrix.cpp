#include "slopelab/matrix.hpp"

#include <algorithm>
#include <cassert>

namespace slopelab {

ZqMatrix::ZqMatrix(CtxPtr ctx, int rows, int cols) : ctx_(std::move(ctx)), rows_(rows), cols_(cols) {
    a_.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols), Zq::zero(ctx_));
}

ZqMatrix ZqMatrix::identity(const CtxPtr& ctx, int n) {
    ZqMatrix M(ctx, n, n);
    for (int i = 0; i < n; ++i) M.at(i, i) = Zq::one(ctx);
    return M;
}

ZqMatrix ZqMatrix::operator+(const ZqMatrix& o) const {
    require_same_ctx(ctx_, o.ctx_, "matrix add");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("BadInput", "matrix add: shape mismatch");
    ZqMatrix c(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] + o.a_[i];
    return c;
}

ZqMatrix ZqMatrix::operator-(const ZqMatrix& o) const {
    require_same_ctx(ctx_, o.ctx_, "matrix sub");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("BadInput", "matrix sub: shape mismatch");
    ZqMatrix c(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] - o.a_[i];
    return c;
}

ZqMatrix ZqMatrix::operator*(const ZqMatrix& o) const {
    require_same_ctx(ctx_, o.ctx_, "matrix mul");
    if (cols_ != o.rows_) throw PreconditionError("BadInput", "matrix mul: shape mismatch");
    ZqMatrix c(ctx_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Zq& x = at(i, k);
            if (x.is_zero_rep()) continue;
            for (int j = 0; j < o.cols_; ++j) c.at(i, j) += x * o.at(k, j);
        }
    return c;
}

ZqMatrix ZqMatrix::pow(unsigned long e) const {
    if (rows_ != cols_) throw PreconditionError("BadInput", "matrix pow: not square");
    ZqMatrix r = identity(ctx_, rows_);
    ZqMatrix b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

ZqMatrix ZqMatrix::sigma(long power) const {
    ZqMatrix c(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i].frobenius(power);
    return c;
}

ZqMatrix ZqMatrix::transpose() const {
    ZqMatrix c(ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c.at(j, i) = at(i, j);
    return c;
}

ZqMatrix ZqMatrix::times_pk(long k) const {
    ZqMatrix c(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i].times_pk(k);
    return c;
}

ZqMatrix ZqMatrix::div_pk_exact(long k) const {
    ZqMatrix c(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i].div_pk_exact(k);
    return c;
}

ZqMatrix ZqMatrix::submatrix(int r0, int c0, int nrows, int ncols) const {
    ZqMatrix c(ctx_, nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) c.at(i, j) = at(r0 + i, c0 + j);
    return c;
}

ZqMatrix ZqMatrix::hstack(const ZqMatrix& o) const {
    if (rows_ != o.rows_) throw PreconditionError("BadInput", "hstack: row mismatch");
    ZqMatrix c(ctx_, rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) c.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) c.at(i, cols_ + j) = o.at(i, j);
    }
    return c;
}

int ZqMatrix::min_prec() const {
    int m = ctx_ ? ctx_->N : 0;
    for (const auto& x : a_) m = std::min(m, x.prec());
    return m;
}

Zq::Val ZqMatrix::min_val() const {
    long best = ctx_->N;
    long floor_prec = ctx_->N;
    bool any = false;
    for (const auto& x : a_) {
        auto v = x.val();
        if (v.certified) {
            any = true;
            best = std::min(best, v.v);
        } else {
            floor_prec = std::min(floor_prec, v.v);
        }
    }
    if (!any) return {floor_prec, false};
    if (best >= floor_prec) return {floor_prec, false};
    return {best, true};
}

bool ZqMatrix::is_zero_mod(long k) const {
    return std::all_of(a_.begin(), a_.end(), [&](const Zq& x) { return x.is_zero_mod(k); });
}

bool ZqMatrix::rep_equal(const ZqMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (!a_[i].rep_equal(o.a_[i])) return false;
    return true;
}

ZqMatrix ZqMatrix::rebase(const CtxPtr& target) const {
    if (ctx_->p != target->p || ctx_->s != target->s)
        throw PreconditionError("BadInput", "rebase: incompatible contexts");
    ZqMatrix c(target, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            c.at(i, j) = Zq(target, at(i, j).coords(), std::min(at(i, j).prec(), target->N));
    return c;
}

ZqMatrix ZqMatrix::rebase_exact(const CtxPtr& target) const {
    if (ctx_->p != target->p || ctx_->s != target->s)
        throw PreconditionError("BadInput", "rebase: incompatible contexts");
    ZqMatrix c(target, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c.at(i, j) = Zq(target, at(i, j).coords());
    return c;
}

SmithForm smith(const ZqMatrix& A) {
    const CtxPtr& ctx = A.ctx();
    const int m = A.rows(), n = A.cols();
    SmithForm S;
    S.D = A;
    S.L = ZqMatrix::identity(ctx, m);
    S.Linv = ZqMatrix::identity(ctx, m);
    S.R = ZqMatrix::identity(ctx, n);
    S.Rinv = ZqMatrix::identity(ctx, n);
    S.zero_cert = ctx->N;

    auto rswap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < n; ++j) std::swap(S.D.at(i, j), S.D.at(k, j));
        for (int j = 0; j < m; ++j) std::swap(S.L.at(i, j), S.L.at(k, j));
        for (int j = 0; j < m; ++j) std::swap(S.Linv.at(j, i), S.Linv.at(j, k));
    };
    auto cswap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < m; ++j) std::swap(S.D.at(j, i), S.D.at(j, k));
        for (int j = 0; j < n; ++j) std::swap(S.R.at(j, i), S.R.at(j, k));
        for (int j = 0; j < n; ++j) std::swap(S.Rinv.at(i, j), S.Rinv.at(k, j));
    };
    // row_i -= q * row_t ; Linv col_t += q * col_i
    auto radd = [&](int i, int t, const Zq& q) {
        for (int j = 0; j < n; ++j) S.D.at(i, j) -= q * S.D.at(t, j);
        for (int j = 0; j < m; ++j) S.L.at(i, j) -= q * S.L.at(t, j);
        for (int j = 0; j < m; ++j) S.Linv.at(j, t) += q * S.Linv.at(j, i);
    };
    auto cadd = [&](int i, int t, const Zq& q) {
        for (int j = 0; j < m; ++j) S.D.at(j, i) -= q * S.D.at(j, t);
        for (int j = 0; j < n; ++j) S.R.at(j, i) -= q * S.R.at(j, t);
        for (int j = 0; j < n; ++j) S.Rinv.at(t, j) += q * S.Rinv.at(i, j);
    };
    // row_t *= u ; Linv col_t *= u^{-1}
    auto rscale = [&](int t, const Zq& u, const Zq& uinv) {
        for (int j = 0; j < n; ++j) S.D.at(t, j) = u * S.D.at(t, j);
        for (int j = 0; j < m; ++j) S.L.at(t, j) = u * S.L.at(t, j);
        for (int j = 0; j < m; ++j) S.Linv.at(j, t) = S.Linv.at(j, t) * uinv;
    };

    const int dim = std::min(m, n);
    S.divisors.assign(static_cast<size_t>(dim), SmithDivisor{});
    int t = 0;
    for (; t < dim; ++t) {
        long bestv = 0;
        int bi = -1, bj = -1;
        bool found = false;
        long floor_prec = ctx->N;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                auto v = S.D.at(i, j).val();
                if (v.certified) {
                    if (!found || v.v < bestv) {
                        found = true;
                        bestv = v.v;
                        bi = i;
                        bj = j;
                    }
                } else {
                    floor_prec = std::min(floor_prec, v.v);
                }
            }
        if (!found) {
            S.zero_cert = floor_prec;
            for (int k = t; k < dim; ++k) S.divisors[static_cast<size_t>(k)] = {floor_prec, false};
            break;
        }
        rswap(t, bi);
        cswap(t, bj);
        // normalize pivot to exactly p^v
        Zq unit = S.D.at(t, t).div_pk_exact(bestv);
        Zq uinv = unit.inv();
        rscale(t, uinv, unit);
        S.D.at(t, t) = Zq::one(ctx).times_pk(bestv).with_prec(S.D.at(t, t).prec());
        for (int i = t + 1; i < m; ++i) {
            if (S.D.at(i, t).is_zero_rep()) continue;
            radd(i, t, S.D.at(i, t).div_pk_exact(bestv));
        }
        for (int j = t + 1; j < n; ++j) {
            if (S.D.at(t, j).is_zero_rep()) continue;
            cadd(j, t, S.D.at(t, j).div_pk_exact(bestv));
        }
        S.divisors[static_cast<size_t>(t)] = {bestv, true};
    }
    return S;
}

std::vector<Zq> charpoly(const ZqMatrix& A) {
    if (A.rows() != A.cols()) throw PreconditionError("BadInput", "charpoly: not square");
    const CtxPtr& ctx = A.ctx();
    const int n = A.rows();
    std::vector<Zq> pv = {Zq::one(ctx)};
    for (int r = 0; r < n; ++r) {
        std::vector<Zq> svals;
        svals.reserve(static_cast<size_t>(r));
        if (r > 0) {
            std::vector<Zq> w(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) w[static_cast<size_t>(i)] = A.at(i, r);
            for (int k = 0; k < r; ++k) {
                Zq dot = Zq::zero(ctx);
                for (int i = 0; i < r; ++i) dot += A.at(r, i) * w[static_cast<size_t>(i)];
                svals.push_back(dot);
                if (k + 1 < r) {
                    std::vector<Zq> w2(static_cast<size_t>(r), Zq::zero(ctx));
                    for (int i = 0; i < r; ++i)
                        for (int j = 0; j < r; ++j) w2[static_cast<size_t>(i)] += A.at(i, j) * w[static_cast<size_t>(j)];
                    w = std::move(w2);
                }
            }
        }
        std::vector<Zq> col(static_cast<size_t>(r) + 2, Zq::zero(ctx));
        col[0] = Zq::one(ctx);
        col[1] = -A.at(r, r);
        for (int k = 0; k < r; ++k) col[static_cast<size_t>(k) + 2] = -svals[static_cast<size_t>(k)];
        std::vector<Zq> np(static_cast<size_t>(r) + 2, Zq::zero(ctx));
        for (size_t i = 0; i < np.size(); ++i)
            for (size_t j = 0; j < pv.size() && j <= i; ++j)
                if (i - j < col.size()) np[i] += col[i - j] * pv[j];
        pv = std::move(np);
    }
    std::vector<Zq> c(static_cast<size_t>(n) + 1, Zq::zero(ctx));
    for (int k = 0; k <= n; ++k) c[static_cast<size_t>(n - k)] = pv[static_cast<size_t>(k)];
    return c;
}

ZqMatrix solve_exact(const ZqMatrix& K, const ZqMatrix& M) {
    require_same_ctx(K.ctx(), M.ctx(), "solve_exact");
    if (K.rows() != M.rows()) throw PreconditionError("BadInput", "solve_exact: row mismatch");
    SmithForm S = smith(K);
    ZqMatrix LM = S.L * M;
    const int k = K.cols(), r = K.rows();
    ZqMatrix X(K.ctx(), k, M.cols());
    for (int i = 0; i < std::min(r, k); ++i) {
        const auto& d = S.divisors[static_cast<size_t>(i)];
        for (int j = 0; j < M.cols(); ++j) {
            if (!d.finite) {
                if (!LM.at(i, j).is_zero_rep())
                    throw PreconditionError("NoSolution", "solve_exact: inconsistent system");
                continue;
            }
            X.at(i, j) = LM.at(i, j).div_pk_exact(d.v);
        }
    }
    for (int i = k; i < r; ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (!LM.at(i, j).is_zero_rep())
                throw PreconditionError("NoSolution", "solve_exact: inconsistent system");
    return S.R * X;
}

bool factors_through(const ZqMatrix& M, const ZqMatrix& K, long tol) {
    SmithForm S = smith(K);
    ZqMatrix LM = S.L * M;
    const int k = K.cols(), r = K.rows();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < M.cols(); ++j) {
            // row i of D (Rinv X) = L M reads p^{d_i} y = c, solvable mod p^tol
            // iff c ≡ 0 mod p^min(tol, d_i); rows without a variable need the
            // full tolerance
            long bound = tol;
            if (i < std::min(r, k)) {
                const auto& d = S.divisors[static_cast<size_t>(i)];
                if (d.finite) bound = std::min(tol, d.v);
            }
            if (!LM.at(i, j).is_zero_mod(bound)) return false;
        }
    return true;
}

} // namespace slopelab
