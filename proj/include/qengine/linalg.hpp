// linalg.hpp - small dense complex matrices (n <= 16), LU solves,
// characteristic polynomials and Newton root refinement.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "qengine/errors.hpp"

namespace qengine {

namespace detail {
using std::abs;
using std::isfinite;
using std::real;
using std::imag;
template <class T> auto magnitude(const T& x) { return abs(x); }
template <class T> bool finite_entry(const T& x) { return isfinite(real(x)) && isfinite(imag(x)); }
} // namespace detail

// Real scalar type underlying a complex scalar (double, or the extended type).
template <class T> using real_t = decltype(detail::magnitude(std::declval<T>()));

template <class T>
class BasicMatrix {
public:
    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0))
    {
        if (rows == 0 || cols == 0)
            throw InvalidArgument("matrix dimensions must be positive");
    }
    // entries in row-major order
    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries))
    {
        if (rows == 0 || cols == 0)
            throw InvalidArgument("matrix dimensions must be positive");
        if (a_.size() != rows * cols)
            throw InvalidArgument("entry count does not match dimensions");
        for (const auto& x : a_)
            if (!detail::finite_entry(x))
                throw InvalidArgument("matrix entries must be finite");
    }

    static BasicMatrix identity(std::size_t n)
    {
        BasicMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<T>& entries() const { return a_; }

    BasicMatrix& operator+=(const BasicMatrix& o)
    {
        same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] += o.a_[k];
        return *this;
    }
    BasicMatrix& operator-=(const BasicMatrix& o)
    {
        same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] -= o.a_[k];
        return *this;
    }
    BasicMatrix& operator*=(const T& s)
    {
        for (auto& x : a_)
            x *= s;
        return *this;
    }

    friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
    friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
    friend BasicMatrix operator*(BasicMatrix a, const T& s) { return a *= s; }
    friend BasicMatrix operator*(const T& s, BasicMatrix a) { return a *= s; }

    // Skips zero entries of the left factor; Liouvillians are mostly zeros.
    friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw InvalidArgument("matrix product: inner dimensions differ");
        BasicMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const BasicMatrix& a, const std::vector<T>& x)
    {
        if (a.cols_ != x.size())
            throw InvalidArgument("matrix-vector product: size mismatch");
        std::vector<T> y(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                y[i] += a(i, k) * x[k];
        return y;
    }

    BasicMatrix transpose() const
    {
        BasicMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }
    BasicMatrix conj() const
    {
        using std::conj;
        BasicMatrix t(*this);
        for (auto& x : t.a_)
            x = conj(x);
        return t;
    }
    BasicMatrix adjoint() const { return conj().transpose(); }

    T trace() const
    {
        T s(0);
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
            s += (*this)(i, i);
        return s;
    }

    // max row sum of magnitudes
    real_t<T> norm_inf() const
    {
        real_t<T> best(0);
        for (std::size_t i = 0; i < rows_; ++i) {
            real_t<T> s(0);
            for (std::size_t j = 0; j < cols_; ++j)
                s += detail::magnitude((*this)(i, j));
            if (s > best)
                best = s;
        }
        return best;
    }
    real_t<T> max_abs() const
    {
        real_t<T> best(0);
        for (const auto& x : a_) {
            real_t<T> m = detail::magnitude(x);
            if (m > best)
                best = m;
        }
        return best;
    }

private:
    void same_shape(const BasicMatrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InvalidArgument("matrix shapes differ");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
struct BasicPoly {
    std::vector<T> c; // c[k] multiplies lambda^k, c.back() == 1

    std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

    T operator()(const T& x) const
    {
        T s(0);
        for (std::size_t k = c.size(); k-- > 0;)
            s = s * x + c[k];
        return s;
    }
    T derivative(const T& x) const
    {
        T s(0);
        for (std::size_t k = c.size(); k-- > 1;)
            s = s * x + c[k] * T(static_cast<double>(k));
        return s;
    }
    real_t<T> max_abs() const
    {
        real_t<T> m(0);
        for (const auto& x : c)
            if (detail::magnitude(x) > m)
                m = detail::magnitude(x);
        return m;
    }
};

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using ComplexMatrix = BasicMatrix<cplx>;
using PolyCoeffs = BasicPoly<cplx>;

template <class T>
BasicMatrix<T> kron(const BasicMatrix<T>& a, const BasicMatrix<T>& b)
{
    const std::size_t p = b.rows(), q = b.cols();
    BasicMatrix<T> k(a.rows() * p, a.cols() * q);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const T& aij = a(i, j);
            if (aij == T(0))
                continue;
            for (std::size_t r = 0; r < p; ++r)
                for (std::size_t s = 0; s < q; ++s)
                    k(i * p + r, j * q + s) = aij * b(r, s);
        }
    return k;
}

// Monic det(lambda*I - M) via the Faddeev-LeVerrier recursion.
template <class T>
BasicPoly<T> char_poly(const BasicMatrix<T>& m)
{
    if (!m.square())
        throw InvalidArgument("char_poly needs a square matrix");
    const std::size_t n = m.rows();
    if (n > 16)
        throw InvalidArgument("char_poly supports n <= 16");
    BasicPoly<T> p;
    p.c.assign(n + 1, T(0));
    p.c[n] = T(1);
    BasicMatrix<T> mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        for (std::size_t i = 0; i < n; ++i)
            mk(i, i) += p.c[n - k + 1];
        // tr(M * M_k) without forming the product
        T tr(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const T& mil = m(i, l);
                if (mil == T(0))
                    continue;
                tr += mil * mk(l, i);
            }
        p.c[n - k] = -tr / T(static_cast<double>(k));
    }
    return p;
}

// Damped Newton refinement of the root of p nearest to seed.
// Stops at rounding level of the scalar type; post: |p(r)| <= 1e-12 max|c_k|.
template <class T>
T root_near(const BasicPoly<T>& p, T seed, int max_iter = 50)
{
    using R = real_t<T>;
    using detail::magnitude;
    const R eps = std::numeric_limits<R>::epsilon();
    const R scale = p.max_abs();
    auto rounding = [&](const T& x) {
        R s(0), xp(1), ax = magnitude(x);
        for (const auto& ck : p.c) {
            s += magnitude(ck) * xp;
            xp *= ax;
        }
        return R(16) * eps * s;
    };
    T r = seed;
    T fr = p(r);
    for (int it = 0; it < max_iter; ++it) {
        if (magnitude(fr) <= rounding(r))
            return r;
        T d = p.derivative(r);
        if (d == T(0))
            throw NoConvergence("Newton: vanishing derivative");
        T step = fr / d;
        T next = r - step;
        T fn = p(next);
        for (int damp = 0; damp < 3 && magnitude(fn) > magnitude(fr); ++damp) {
            step /= T(2);
            next = r - step;
            fn = p(next);
        }
        r = next;
        fr = fn;
        if (magnitude(step) <= R(8) * eps * magnitude(r) && magnitude(fr) <= R(1e-12) * scale)
            return r;
    }
    // slow (multiple-root) convergence still meets the residual contract
    if (magnitude(fr) <= R(1e-12) * scale)
        return r;
    throw NoConvergence();
}

// LU with partial pivoting. Throws SingularMatrix when a pivot drops
// below 1e-14 times the largest initial entry.
template <class T>
class LuFactor {
public:
    explicit LuFactor(const BasicMatrix<T>& m) : a_(m), perm_(m.rows())
    {
        using detail::magnitude;
        using R = real_t<T>;
        if (!m.square())
            throw InvalidArgument("solve needs a square matrix");
        const std::size_t n = m.rows();
        for (std::size_t i = 0; i < n; ++i)
            perm_[i] = i;
        const R threshold = R(1e-14) * m.max_abs();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            R best = magnitude(a_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const R v = magnitude(a_(i, k));
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < threshold || best == R(0))
                throw SingularMatrix();
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(a_(k, j), a_(piv, j));
                std::swap(perm_[k], perm_[piv]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const T f = a_(i, k) / a_(k, k);
                a_(i, k) = f;
                if (f == T(0))
                    continue;
                for (std::size_t j = k + 1; j < n; ++j)
                    a_(i, j) -= f * a_(k, j);
            }
        }
    }

    std::vector<T> solve(const std::vector<T>& b) const
    {
        const std::size_t n = a_.rows();
        if (b.size() != n)
            throw InvalidArgument("solve: right-hand side has wrong length");
        std::vector<T> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                x[i] -= a_(i, j) * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j)
                x[i] -= a_(i, j) * x[j];
            x[i] /= a_(i, i);
        }
        return x;
    }

    BasicMatrix<T> solve(const BasicMatrix<T>& b) const
    {
        if (b.rows() != a_.rows())
            throw InvalidArgument("solve: right-hand side has wrong row count");
        BasicMatrix<T> x(b.rows(), b.cols());
        std::vector<T> col(b.rows());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            for (std::size_t i = 0; i < b.rows(); ++i)
                col[i] = b(i, j);
            const std::vector<T> s = solve(col);
            for (std::size_t i = 0; i < b.rows(); ++i)
                x(i, j) = s[i];
        }
        return x;
    }

private:
    BasicMatrix<T> a_;
    std::vector<std::size_t> perm_;
};

template <class T>
std::vector<T> solve(const BasicMatrix<T>& a, const std::vector<T>& b)
{
    if (b.size() != a.rows())
        throw InvalidArgument("solve: right-hand side has wrong length");
    return LuFactor<T>(a).solve(b);
}

template <class T>
BasicMatrix<T> solve(const BasicMatrix<T>& a, const BasicMatrix<T>& b)
{
    if (b.rows() != a.rows())
        throw InvalidArgument("solve: right-hand side has wrong row count");
    return LuFactor<T>(a).solve(b);
}

template <class T>
BasicMatrix<T> inverse(const BasicMatrix<T>& a)
{
    return solve(a, BasicMatrix<T>::identity(a.rows()));
}

// column-stacking vec and its inverse
CVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const CVector& v, std::size_t d);

} // namespace qengine
