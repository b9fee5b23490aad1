#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bsrinf/int_matrix.hpp"

namespace bsrinf {

/// Smith normal form U*A*V = D with unimodular U, V and the canonical
/// divisor chain d_1 | d_2 | ... (nonnegative, zeros last).
struct SnfResult {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    std::vector<Int> divisors;
};

namespace detail {

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int int_gcd(Int a, Int b) {
    a = int_abs(std::move(a));
    b = int_abs(std::move(b));
    while (b != 0) {
        Int r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

namespace detail {

/// Quotient with symmetric remainder: |a - q*b| <= |b|/2.
inline Int nearest_quotient(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r != 0 && 2 * int_abs(r) > int_abs(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
    return q;
}

} // namespace detail

inline SnfResult snf(const IntMatrix& a) {
    if (a.empty()) throw dimension_mismatch("snf of empty matrix");
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(r);
    IntMatrix v = IntMatrix::identity(c);
    const std::size_t steps = r < c ? r : c;

    std::size_t t = 0;
    bool exhausted = false;
    while (t < steps && !exhausted) {
        for (;;) {
            // re-select the global smallest-magnitude nonzero pivot each
            // round; with rounded quotients it at least halves per round,
            // which bounds intermediate entry growth
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (d.at(i, j) != 0 &&
                        (!found || detail::int_abs(d.at(i, j)) < detail::int_abs(d.at(pi, pj)))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) {
                exhausted = true;
                break;
            }
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            bool remainder_left = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = detail::nearest_quotient(d.at(i, t), d.at(t, t));
                if (q != 0) {
                    d.add_row_multiple(i, t, -q);
                    u.add_row_multiple(i, t, -q);
                }
                if (d.at(i, t) != 0) remainder_left = true;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = detail::nearest_quotient(d.at(t, j), d.at(t, t));
                if (q != 0) {
                    d.add_col_multiple(j, t, -q);
                    v.add_col_multiple(j, t, -q);
                }
                if (d.at(t, j) != 0) remainder_left = true;
            }
            if (!remainder_left) break;
        }
        if (exhausted) break;

        // enforce d_t | every remaining entry
        bool redo = false;
        for (std::size_t i = t + 1; i < r && !redo; ++i)
            for (std::size_t j = t + 1; j < c && !redo; ++j)
                if (d.at(i, j) % d.at(t, t) != 0) {
                    d.add_row_multiple(t, i, 1);
                    u.add_row_multiple(t, i, 1);
                    redo = true;
                }
        if (!redo) ++t;
    }

    for (std::size_t t = 0; t < steps; ++t)
        if (d.at(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }

    std::vector<Int> divisors(steps);
    for (std::size_t t = 0; t < steps; ++t) divisors[t] = d.at(t, t);
    return SnfResult{std::move(u), std::move(d), std::move(v), std::move(divisors)};
}

/// The bidiagonal matrix with a on the diagonal, b on the subdiagonal,
/// and the top-left entry replaced by a^k.
inline IntMatrix bidiagonal_matrix(const Int& a, const Int& b, std::size_t n, std::size_t k) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = a;
        if (i + 1 < n) m.at(i + 1, i) = b;
    }
    Int top = 1;
    for (std::size_t i = 0; i < k; ++i) top *= a;
    m.at(0, 0) = top;
    return m;
}

/// Closed-form Smith divisors of bidiagonal_matrix(a,b,n,k) when gcd(a,b)=1:
/// n-1 ones followed by |a|^(n-1+k).
inline std::vector<Int> bidiagonal_snf_closed_form(const Int& a, const Int& b,
                                                   std::size_t n, std::size_t k) {
    if (n < 1 || k < 1) throw invalid_params("bidiagonal closed form needs n >= 1, k >= 1");
    if (detail::int_gcd(a, b) != 1)
        throw non_coprime_input("bidiagonal closed form requires gcd(a,b) = 1");
    std::vector<Int> divisors(n, Int(1));
    Int last = 1;
    const Int aa = detail::int_abs(a);
    for (std::size_t i = 0; i < n - 1 + k; ++i) last *= aa;
    divisors[n - 1] = last;
    return divisors;
}

/// Solve A*x = v over the integers; returns std::nullopt when v is not in
/// the column lattice of A.
inline std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& a,
                                                        const std::vector<Int>& v) {
    if (v.size() != a.rows())
        throw dimension_mismatch("solve_in_lattice vector length mismatch");
    SnfResult s = snf(a);
    // A = U^-1 D V^-1, so A x = v  <=>  D (V^-1 x) = U v
    std::vector<Int> w = s.u.apply(v);
    std::vector<Int> y(a.cols(), Int(0));
    const std::size_t steps = s.divisors.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i < steps && s.divisors[i] != 0) {
            if (w[i] % s.divisors[i] != 0) return std::nullopt;
            y[i] = w[i] / s.divisors[i];
        } else if (w[i] != 0) {
            return std::nullopt;
        }
    }
    return s.v.apply(y);
}

/// Inverse of a unimodular matrix: from U*A*V = I we get A^-1 = V*U.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    if (!m.is_square()) throw not_square("inverse of non-square matrix");
    SnfResult s = snf(m);
    for (const Int& d : s.divisors)
        if (d != 1) throw invalid_params("matrix is not unimodular");
    return s.v * s.u;
}

} // namespace bsrinf
