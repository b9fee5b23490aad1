#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "bsrinf/int_matrix.hpp"
#include "bsrinf/snf.hpp"

namespace bsrinf {

class FinAbGroup;
class AbElement;
class AbHom;
class AbSubgroup;

namespace detail {

struct AbGroupData {
    IntMatrix relation;        // defining c x c matrix, det != 0
    std::vector<Int> factors;  // invariant factors > 1, divisor chain order
    IntMatrix projection;      // rank x c, ambient coords -> invariant coords
    IntMatrix lift;            // c x rank, a section of the projection
    Int order;
    std::size_t ambient_rank;
};

inline bool same_data(const std::shared_ptr<const AbGroupData>& a,
                      const std::shared_ptr<const AbGroupData>& b) {
    if (a == b) return true;
    return a->factors == b->factors && a->relation == b->relation;
}

inline Int lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return a / int_gcd(a, b) * b;
}

inline Int mod_reduce(const Int& x, const Int& f) {
    Int r = x % f;
    if (r < 0) r += f;
    return r;
}

} // namespace detail

/// Element of a finite abelian group, as residues in invariant-factor
/// coordinates: coords[i] in [0, f_i).
class AbElement {
public:
    AbElement() = default;
    const std::vector<Int>& coords() const { return coords_; }
    bool is_zero() const {
        for (const Int& c : coords_)
            if (c != 0) return false;
        return true;
    }
    friend bool operator==(const AbElement& a, const AbElement& b) {
        return detail::same_data(a.parent_, b.parent_) && a.coords_ == b.coords_;
    }
    friend bool operator!=(const AbElement& a, const AbElement& b) { return !(a == b); }
    friend bool operator<(const AbElement& a, const AbElement& b) {
        return a.coords_ < b.coords_;
    }

private:
    friend class FinAbGroup;
    friend class AbHom;
    friend class AbSubgroup;
    friend AbElement add(const AbElement&, const AbElement&);
    friend AbElement neg(const AbElement&);
    friend AbElement sub(const AbElement&, const AbElement&);
    friend AbElement scale(const Int&, const AbElement&);
    friend Int element_order(const AbElement&);

    std::shared_ptr<const detail::AbGroupData> parent_;
    std::vector<Int> coords_;
};

/// Finite abelian group presented as Z^c / Im(rel), held in invariant-factor
/// coordinates. Factors equal to 1 are dropped; the projection matrix
/// absorbs the change of basis. Trivial group = empty factor list.
class FinAbGroup {
public:
    FinAbGroup() = default;

    static FinAbGroup from_relation_matrix(const IntMatrix& rel) {
        if (!rel.is_square()) throw not_square("relation matrix must be square");
        if (rel.empty()) throw dimension_mismatch("relation matrix must be nonempty");
        SnfResult s = snf(rel);
        auto data = std::make_shared<detail::AbGroupData>();
        data->relation = rel;
        data->ambient_rank = rel.rows();
        Int order = 1;
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < s.divisors.size(); ++i) {
            if (s.divisors[i] == 0)
                throw infinite_quotient("relation matrix is singular");
            order *= s.divisors[i];
            if (s.divisors[i] > 1) keep.push_back(i);
        }
        data->order = order;
        const std::size_t c = data->ambient_rank;
        const std::size_t k = keep.size();
        IntMatrix uinv = inverse_unimodular(s.u);
        data->projection = IntMatrix(k, c);
        data->lift = IntMatrix(c, k);
        for (std::size_t t = 0; t < k; ++t) {
            data->factors.push_back(s.divisors[keep[t]]);
            for (std::size_t j = 0; j < c; ++j) data->projection.at(t, j) = s.u.at(keep[t], j);
            for (std::size_t i = 0; i < c; ++i) data->lift.at(i, t) = uinv.at(i, keep[t]);
        }
        FinAbGroup g;
        g.d_ = std::move(data);
        return g;
    }

    static FinAbGroup trivial() {
        return from_relation_matrix(IntMatrix{{Int(1)}});
    }

    /// Z_{f_1} + ... + Z_{f_k} for a given factor list (diagonal relation).
    static FinAbGroup cyclic_product(const std::vector<Int>& factors) {
        if (factors.empty()) return trivial();
        IntMatrix rel(factors.size(), factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) rel.at(i, i) = factors[i];
        return from_relation_matrix(rel);
    }

    const std::vector<Int>& invariant_factors() const { return d_->factors; }
    std::size_t rank() const { return d_->factors.size(); }
    std::size_t ambient_rank() const { return d_->ambient_rank; }
    const Int& order() const { return d_->order; }
    const IntMatrix& projection() const { return d_->projection; }
    const IntMatrix& relation_matrix() const { return d_->relation; }
    bool is_trivial() const { return d_->factors.empty(); }

    bool same_group(const FinAbGroup& o) const { return detail::same_data(d_, o.d_); }

    AbElement zero() const { return element(std::vector<Int>(rank(), Int(0))); }

    AbElement element(std::vector<Int> coords) const {
        if (coords.size() != rank())
            throw dimension_mismatch("element coordinate length mismatch");
        AbElement x;
        x.parent_ = d_;
        x.coords_.resize(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i)
            x.coords_[i] = detail::mod_reduce(coords[i], d_->factors[i]);
        return x;
    }

    /// Invariant-coordinate generator e_i.
    AbElement generator(std::size_t i) const {
        std::vector<Int> c(rank(), Int(0));
        c[i] = 1;
        return element(std::move(c));
    }

    /// Projection of an ambient Z^c vector.
    AbElement from_ambient(const std::vector<Int>& z) const {
        return element(d_->projection.apply(z));
    }

    /// Image of the ambient standard generator e_i.
    AbElement ambient_generator(std::size_t i) const {
        std::vector<Int> z(ambient_rank(), Int(0));
        z[i] = 1;
        return from_ambient(z);
    }

    /// An ambient representative of x.
    std::vector<Int> lift(const AbElement& x) const {
        check_parent(x);
        return d_->lift.apply(x.coords());
    }

    /// All elements in odometer order; the order must fit under cap.
    std::vector<AbElement> all_elements(std::uint64_t cap) const {
        if (d_->order > cap)
            throw bound_exceeded("group too large to enumerate",
                                 d_->order > UINT64_MAX ? UINT64_MAX
                                                        : static_cast<std::uint64_t>(d_->order));
        std::vector<AbElement> out;
        out.reserve(static_cast<std::size_t>(d_->order));
        std::vector<Int> cur(rank(), Int(0));
        for (;;) {
            out.push_back(element(cur));
            std::size_t i = rank();
            while (i > 0) {
                --i;
                cur[i] += 1;
                if (cur[i] < d_->factors[i]) break;
                cur[i] = 0;
                if (i == 0) return out;
            }
            if (rank() == 0) return out;
        }
    }

    void check_parent(const AbElement& x) const {
        if (!detail::same_data(d_, x.parent_))
            throw parent_mismatch("element does not belong to this group");
    }

private:
    friend class AbHom;
    friend class AbSubgroup;
    friend AbSubgroup subgroup_generated(const FinAbGroup&, const std::vector<AbElement>&,
                                         std::uint64_t);
    std::shared_ptr<const detail::AbGroupData> d_;
};

inline AbElement add(const AbElement& x, const AbElement& y) {
    if (!detail::same_data(x.parent_, y.parent_))
        throw parent_mismatch("adding elements of different groups");
    AbElement z;
    z.parent_ = x.parent_;
    z.coords_.resize(x.coords_.size());
    for (std::size_t i = 0; i < x.coords_.size(); ++i)
        z.coords_[i] = detail::mod_reduce(x.coords_[i] + y.coords_[i], x.parent_->factors[i]);
    return z;
}

inline AbElement neg(const AbElement& x) {
    AbElement z;
    z.parent_ = x.parent_;
    z.coords_.resize(x.coords_.size());
    for (std::size_t i = 0; i < x.coords_.size(); ++i)
        z.coords_[i] = detail::mod_reduce(-x.coords_[i], x.parent_->factors[i]);
    return z;
}

inline AbElement sub(const AbElement& x, const AbElement& y) { return add(x, neg(y)); }

inline AbElement scale(const Int& k, const AbElement& x) {
    AbElement z;
    z.parent_ = x.parent_;
    z.coords_.resize(x.coords_.size());
    for (std::size_t i = 0; i < x.coords_.size(); ++i)
        z.coords_[i] = detail::mod_reduce(k * x.coords_[i], x.parent_->factors[i]);
    return z;
}

/// Least k >= 1 with k*x = 0: lcm over coordinates of f_i / gcd(f_i, x_i).
inline Int element_order(const AbElement& x) {
    Int ord = 1;
    for (std::size_t i = 0; i < x.coords_.size(); ++i) {
        const Int& f = x.parent_->factors[i];
        Int o = f / detail::int_gcd(f, x.coords_[i]);
        ord = detail::lcm(ord, o);
    }
    return ord;
}

/// Homomorphism between finite abelian groups in invariant-factor
/// coordinates. Column j is the image of the j-th source generator;
/// well-definedness (f_j^src * col_j = 0 in target) is checked on
/// construction.
class AbHom {
public:
    AbHom() = default;

    static AbHom from_matrix(const FinAbGroup& source, const FinAbGroup& target, IntMatrix m) {
        if (m.rows() != target.rank() || m.cols() != source.rank())
            throw dimension_mismatch("hom matrix shape mismatch");
        AbHom h;
        h.source_ = source;
        h.target_ = target;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) = detail::mod_reduce(m.at(i, j), target.invariant_factors()[i]);
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (std::size_t i = 0; i < m.rows(); ++i) {
                Int v = source.invariant_factors()[j] * m.at(i, j);
                if (v % target.invariant_factors()[i] != 0)
                    throw not_homomorphism("matrix does not define a homomorphism");
            }
        h.matrix_ = std::move(m);
        return h;
    }

    static AbHom identity(const FinAbGroup& g) {
        return from_matrix(g, g, IntMatrix::identity(g.rank()));
    }

    /// Multiplication by mu on every coordinate.
    static AbHom scalar(const FinAbGroup& g, const Int& mu) {
        IntMatrix m(g.rank(), g.rank());
        for (std::size_t i = 0; i < g.rank(); ++i) m.at(i, i) = mu;
        return from_matrix(g, g, std::move(m));
    }

    /// Endomorphism induced by an ambient integer matrix that maps the
    /// relation lattice into itself.
    static AbHom induced_from_ambient(const FinAbGroup& g, const IntMatrix& ambient) {
        if (ambient.rows() != g.ambient_rank() || ambient.cols() != g.ambient_rank())
            throw dimension_mismatch("ambient matrix shape mismatch");
        const IntMatrix& rel = g.relation_matrix();
        IntMatrix image = ambient * rel;
        for (std::size_t j = 0; j < rel.cols(); ++j)
            if (!solve_in_lattice(rel, image.column(j)))
                throw not_homomorphism("ambient matrix does not preserve the relation lattice");
        // column j = projection(ambient * lift(e_j))
        IntMatrix m(g.rank(), g.rank());
        for (std::size_t j = 0; j < g.rank(); ++j) {
            std::vector<Int> lifted = g.lift(g.generator(j));
            AbElement proj = g.from_ambient(ambient.apply(lifted));
            for (std::size_t i = 0; i < g.rank(); ++i) m.at(i, j) = proj.coords()[i];
        }
        return from_matrix(g, g, std::move(m));
    }

    const FinAbGroup& source() const { return source_; }
    const FinAbGroup& target() const { return target_; }
    const IntMatrix& matrix() const { return matrix_; }

    AbElement apply(const AbElement& x) const {
        source_.check_parent(x);
        return target_.element(matrix_.apply(x.coords()));
    }

    friend bool operator==(const AbHom& a, const AbHom& b) {
        return a.source_.same_group(b.source_) && a.target_.same_group(b.target_) &&
               a.matrix_ == b.matrix_;
    }
    friend bool operator!=(const AbHom& a, const AbHom& b) { return !(a == b); }

private:
    FinAbGroup source_;
    FinAbGroup target_;
    IntMatrix matrix_;
};

/// g after h.
inline AbHom compose(const AbHom& g, const AbHom& h) {
    if (!h.target().same_group(g.source()))
        throw parent_mismatch("composition group mismatch");
    return AbHom::from_matrix(h.source(), g.target(), g.matrix() * h.matrix());
}

inline AbHom hom_sub(const AbHom& a, const AbHom& b) {
    if (!a.source().same_group(b.source()) || !a.target().same_group(b.target()))
        throw parent_mismatch("difference of homs between different groups");
    return AbHom::from_matrix(a.source(), a.target(), a.matrix() - b.matrix());
}

/// h^e for an endomorphism, e >= 0, by repeated squaring.
inline AbHom hom_pow(const AbHom& h, std::uint64_t e) {
    if (!h.source().same_group(h.target()))
        throw parent_mismatch("powers need an endomorphism");
    AbHom acc = AbHom::identity(h.source());
    AbHom base = h;
    while (e > 0) {
        if (e & 1) acc = compose(base, acc);
        e >>= 1;
        if (e) base = compose(base, base);
    }
    return acc;
}

/// Subgroup given by generators; order and membership decided through the
/// lifted generator lattice, with closure enumeration as the small-order
/// route.
class AbSubgroup {
public:
    AbSubgroup() = default;

    const FinAbGroup& parent() const { return parent_; }
    const std::vector<AbElement>& generators() const { return gens_; }
    const Int& order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    /// Membership via integer solvability in the lifted lattice.
    bool contains(const AbElement& x) const {
        parent_.check_parent(x);
        if (parent_.rank() == 0) return true;
        return solve_in_lattice(membership_, parent_.lift(x)).has_value();
    }

    /// Closure enumeration (independent of the lattice route).
    std::vector<AbElement> elements(std::uint64_t cap) const {
        std::set<std::vector<Int>> seen;
        std::queue<AbElement> todo;
        AbElement z = parent_.zero();
        seen.insert(z.coords());
        todo.push(z);
        while (!todo.empty()) {
            AbElement cur = todo.front();
            todo.pop();
            for (const AbElement& g : gens_) {
                AbElement nxt = add(cur, g);
                if (seen.insert(nxt.coords()).second) {
                    if (seen.size() > cap)
                        throw bound_exceeded("subgroup closure exceeds cap", cap);
                    todo.push(nxt);
                }
            }
        }
        std::vector<AbElement> out;
        out.reserve(seen.size());
        for (const auto& c : seen) out.push_back(parent_.element(c));
        return out;
    }

    friend AbSubgroup subgroup_generated(const FinAbGroup&, const std::vector<AbElement>&,
                                         std::uint64_t);

private:
    FinAbGroup parent_;
    std::vector<AbElement> gens_;
    Int order_;
    IntMatrix membership_;  // [lifted generators | relation]
};

namespace detail {

/// Index of (L + Im rel) in Z^c where L is spanned by the lifted generators.
inline Int lattice_index(const IntMatrix& membership) {
    SnfResult s = snf(membership);
    Int idx = 1;
    for (const Int& d : s.divisors) idx *= d;
    return idx;
}

} // namespace detail

/// Default closure threshold: below it the subgroup order is computed by
/// closure enumeration, above it by the lattice index. The two routes are
/// cross-checked in the test suite.
inline constexpr std::uint64_t kSubgroupClosureThreshold = 4096;

inline AbSubgroup subgroup_generated(const FinAbGroup& parent,
                                     const std::vector<AbElement>& gens,
                                     std::uint64_t closure_threshold = kSubgroupClosureThreshold) {
    AbSubgroup s;
    s.parent_ = parent;
    for (const AbElement& g : gens) parent.check_parent(g);
    s.gens_ = gens;
    if (parent.rank() == 0) {
        s.order_ = 1;
        s.membership_ = IntMatrix::identity(parent.ambient_rank());
        return s;
    }
    const std::size_t c = parent.ambient_rank();
    IntMatrix m(c, gens.size() + c);
    for (std::size_t j = 0; j < gens.size(); ++j) {
        std::vector<Int> lifted = parent.lift(gens[j]);
        for (std::size_t i = 0; i < c; ++i) m.at(i, j) = lifted[i];
    }
    const IntMatrix& rel = parent.relation_matrix();
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < c; ++i) m.at(i, gens.size() + j) = rel.at(i, j);
    s.membership_ = std::move(m);
    if (parent.order() <= closure_threshold) {
        s.order_ = Int(s.elements(closure_threshold).size());
    } else {
        s.order_ = parent.order() / detail::lattice_index(s.membership_);
    }
    return s;
}

inline bool contains(const AbSubgroup& s, const AbElement& x) { return s.contains(x); }

namespace detail {

/// Index of (columns of H + diag f) in Z^k, all in invariant coordinates.
/// Equals |target / Im h|, since Im h = (L_H + F) / F.
inline Int image_lattice_index(const AbHom& h) {
    const FinAbGroup& tgt = h.target();
    const std::size_t k = tgt.rank();
    const std::size_t ks = h.source().rank();
    IntMatrix m(k, ks + k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < ks; ++j) m.at(i, j) = h.matrix().at(i, j);
        m.at(i, ks + i) = tgt.invariant_factors()[i];
    }
    SnfResult s = snf(m);
    Int idx = 1;
    for (const Int& d : s.divisors) idx *= d;
    return idx;
}

} // namespace detail

/// Surjective, decided by whether the subgroup generated by the column
/// images is the whole target (equivalently bijective, the orders match).
inline bool is_automorphism(const AbHom& h) {
    if (h.source().order() != h.target().order()) return false;
    if (h.target().rank() == 0) return true;
    return detail::image_lattice_index(h) == 1;
}

/// |target / Im(h)|.
inline Int cokernel_order(const AbHom& h) {
    if (h.target().rank() == 0) return 1;
    return detail::image_lattice_index(h);
}

/// Default cap on exhaustive automorphism scans.
inline constexpr std::uint64_t kAutomorphismCandidateCap = 1000000;

/// Number of candidate hom matrices scanned by enumerate_automorphisms:
/// the (i,j) entry ranges over gcd(f_i, f_j) values.
inline Int automorphism_candidate_count(const FinAbGroup& g) {
    Int count = 1;
    const auto& f = g.invariant_factors();
    for (const Int& fi : f)
        for (const Int& fj : f) count *= detail::int_gcd(fi, fj);
    return count;
}

/// Visits every automorphism exactly once, in lexicographic order of the
/// candidate matrix entries (row-major). The visitor returns false to stop.
inline void enumerate_automorphisms(const FinAbGroup& g, std::uint64_t cap,
                                    const std::function<bool(const AbHom&)>& visit) {
    Int count = automorphism_candidate_count(g);
    if (count > cap)
        throw bound_exceeded("automorphism candidate count " + count.str() + " exceeds cap",
                             count > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(count));
    const std::size_t k = g.rank();
    if (k == 0) {
        visit(AbHom::identity(g));
        return;
    }
    const auto& f = g.invariant_factors();
    std::vector<Int> gij(k * k), step(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Int gcd = detail::int_gcd(f[i], f[j]);
            gij[i * k + j] = gcd;
            step[i * k + j] = f[i] / gcd;
        }
    std::vector<Int> idx(k * k, Int(0));
    for (;;) {
        IntMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                m.at(i, j) = detail::mod_reduce(idx[i * k + j] * step[i * k + j], f[i]);
        AbHom h = AbHom::from_matrix(g, g, std::move(m));
        if (is_automorphism(h)) {
            if (!visit(h)) return;
        }
        std::size_t p = k * k;
        for (;;) {
            if (p == 0) return;
            --p;
            idx[p] += 1;
            if (idx[p] < gij[p]) break;
            idx[p] = 0;
        }
    }
}

/// Elements x of the source with h(x) = 0, enumerated deterministically.
inline std::vector<AbElement> kernel_elements(const AbHom& h, std::uint64_t cap) {
    const FinAbGroup& src = h.source();
    const std::size_t ks = src.rank();
    const std::size_t kt = h.target().rank();
    if (ks == 0) return {src.zero()};
    if (kt == 0) return src.all_elements(cap);
    // x in ker  <=>  exists y: M x + diag(f_tgt) y = 0
    IntMatrix m(kt, ks + kt);
    for (std::size_t i = 0; i < kt; ++i) {
        for (std::size_t j = 0; j < ks; ++j) m.at(i, j) = h.matrix().at(i, j);
        m.at(i, ks + i) = h.target().invariant_factors()[i];
    }
    SnfResult s = snf(m);
    std::size_t rank = 0;
    for (const Int& d : s.divisors)
        if (d != 0) ++rank;
    std::vector<AbElement> gens;
    for (std::size_t j = rank; j < ks + kt; ++j) {
        std::vector<Int> coords(ks);
        for (std::size_t i = 0; i < ks; ++i) coords[i] = s.v.at(i, j);
        gens.push_back(src.element(std::move(coords)));
    }
    AbSubgroup ker = subgroup_generated(src, gens, 0u);
    if (ker.order() > cap)
        throw bound_exceeded("kernel too large to enumerate",
                             ker.order() > UINT64_MAX ? UINT64_MAX
                                                      : static_cast<std::uint64_t>(ker.order()));
    return ker.elements(cap);
}

} // namespace bsrinf
