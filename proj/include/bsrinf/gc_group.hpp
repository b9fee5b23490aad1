#pragma once

#include <cstdlib>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bsrinf/abelian.hpp"
#include "bsrinf/checks.hpp"

namespace bsrinf {

/// Parameters of BS(m,n) = <a, b | a^-1 b^m a = b^n>, normalized to
/// 0 < m <= |n|. (m,n) ~ (-m,-n) present the same group, and (m,n) ~ (n,m)
/// via inverting the stable letter.
struct BSParams {
    long long m = 0;
    long long n = 0;
    long long d = 0;  // gcd(m, n)
    bool canonicalized = false;

    static BSParams canonical(long long m, long long n) {
        if (m == 0 || n == 0) throw invalid_params("m and n must be nonzero");
        bool changed = false;
        for (;;) {
            if (m < 0) {
                m = -m;
                n = -n;
                changed = true;
                continue;
            }
            if (m > std::llabs(n)) {
                std::swap(m, n);
                changed = true;
                continue;
            }
            break;
        }
        BSParams p;
        p.m = m;
        p.n = n;
        p.d = std::gcd(m, n < 0 ? -n : n);
        p.canonicalized = changed;
        return p;
    }

    friend bool operator==(const BSParams& a, const BSParams& b) {
        return a.m == b.m && a.n == b.n;
    }
};

/// c x c matrix with n-m on the diagonal and -m on the subdiagonal;
/// column i is the image of the i-th standard generator.
inline IntMatrix phi_matrix(long long m, long long n, std::size_t c) {
    if (c < 1) throw invalid_params("class bound must be >= 1");
    IntMatrix a(c, c);
    for (std::size_t i = 0; i < c; ++i) {
        a.at(i, i) = n - m;
        if (i + 1 < c) a.at(i + 1, i) = -m;
    }
    return a;
}

/// Unit lower bidiagonal c x c matrix; commutes with every phi_matrix.
inline IntMatrix psi_matrix(std::size_t c) {
    if (c < 1) throw invalid_params("class bound must be >= 1");
    IntMatrix a = IntMatrix::identity(c);
    for (std::size_t i = 0; i + 1 < c; ++i) a.at(i + 1, i) = 1;
    return a;
}

namespace detail {

inline std::optional<Int> mod_inverse(const Int& a, const Int& m) {
    // extended euclid on (a mod m, m)
    if (m == 1) return Int(0);
    Int r0 = mod_reduce(a, m), r1 = m;
    Int s0 = 1, s1 = 0;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0 != 1) return std::nullopt;
    return mod_reduce(s0, m);
}

struct GcGroupData {
    BSParams params;
    std::size_t c = 1;
    FinAbGroup torsion;
    AbHom psi;
    AbHom psi_inverse;
    AbElement s;
    std::optional<Int> nu;
};

} // namespace detail

/// The group A_c(m,n) x| <t> with t^-1 a t = psi(a), torsion part of order
/// |n-m|^c. Immutable after construction.
class GcGroup {
public:
    GcGroup() = default;

    const BSParams& params() const { return d_->params; }
    std::size_t class_bound() const { return d_->c; }
    const FinAbGroup& torsion() const { return d_->torsion; }
    const AbHom& psi() const { return d_->psi; }
    const AbHom& psi_inverse() const { return d_->psi_inverse; }
    const AbElement& s() const { return d_->s; }
    const std::optional<Int>& nu() const { return d_->nu; }

    bool same_group(const GcGroup& o) const {
        return d_ == o.d_ ||
               (d_->params == o.d_->params && d_->c == o.d_->c &&
                d_->torsion.same_group(o.d_->torsion));
    }

private:
    friend GcGroup build_gc(const BSParams&, std::size_t);
    std::shared_ptr<const detail::GcGroupData> d_;
};

inline GcGroup build_gc(const BSParams& params, std::size_t c) {
    if (params.m == params.n)
        throw degenerate_params("torsion is infinite when m = n");
    auto data = std::make_shared<detail::GcGroupData>();
    data->params = params;
    data->c = c;
    data->torsion = FinAbGroup::from_relation_matrix(phi_matrix(params.m, params.n, c));
    IntMatrix psi_amb = psi_matrix(c);
    data->psi = AbHom::induced_from_ambient(data->torsion, psi_amb);
    data->psi_inverse = AbHom::induced_from_ambient(data->torsion, inverse_unimodular(psi_amb));
    data->s = data->torsion.ambient_generator(0);
    if (params.d == 1) {
        const Int& order = data->torsion.order();
        auto minv = detail::mod_inverse(Int(params.m), order);
        if (!minv)
            throw degenerate_params("m is not invertible modulo the torsion order");
        data->nu = detail::mod_reduce(*minv * params.n, order);
    }
    GcGroup g;
    g.d_ = std::move(data);

    // construction-time sanity: psi inverts, and psi(m*s) = n*s
    const AbHom& psi = g.psi();
    if (compose(psi, g.psi_inverse()).matrix() != IntMatrix::identity(g.torsion().rank()))
        throw inconsistency("psi_inverse does not invert psi");
    if (psi.apply(scale(params.m, g.s())) != scale(params.n, g.s()))
        throw inconsistency("defining relation psi(m*s) = n*s fails");
    if (g.nu() && psi.apply(g.s()) != scale(*g.nu(), g.s()))
        throw inconsistency("nu does not describe the action of psi on s");
    return g;
}

/// Normal form a * t^k.
struct GcElement {
    AbElement a;
    Int k;

    friend bool operator==(const GcElement& x, const GcElement& y) {
        return x.a == y.a && x.k == y.k;
    }
    friend bool operator!=(const GcElement& x, const GcElement& y) { return !(x == y); }
};

inline GcElement gc_element(const GcGroup& g, const AbElement& a, Int k) {
    g.torsion().check_parent(a);
    return GcElement{a, std::move(k)};
}

inline GcElement gc_identity(const GcGroup& g) { return GcElement{g.torsion().zero(), Int(0)}; }

/// psi^e for any integer exponent, by repeated squaring.
inline AbHom psi_power(const GcGroup& g, const Int& e) {
    if (e >= 0) return hom_pow(g.psi(), static_cast<std::uint64_t>(e));
    return hom_pow(g.psi_inverse(), static_cast<std::uint64_t>(Int(-e)));
}

/// (a1, k1) * (a2, k2) = (a1 + psi^-k1(a2), k1 + k2).
inline GcElement multiply(const GcGroup& g, const GcElement& x, const GcElement& y) {
    g.torsion().check_parent(x.a);
    g.torsion().check_parent(y.a);
    AbHom shift = psi_power(g, -x.k);
    return GcElement{add(x.a, shift.apply(y.a)), x.k + y.k};
}

/// (a, k)^-1 = (-psi^k(a), -k).
inline GcElement inverse(const GcGroup& g, const GcElement& x) {
    g.torsion().check_parent(x.a);
    return GcElement{neg(psi_power(g, x.k).apply(x.a)), -x.k};
}

/// Lower central series below the whole group: gamma_2, ..., gamma_{c+1},
/// where gamma_2 = Im(psi - id) and gamma_{k+1} = (psi - id)(gamma_k).
inline std::vector<AbSubgroup> lower_central_series(const GcGroup& g) {
    const FinAbGroup& a = g.torsion();
    AbHom delta = hom_sub(g.psi(), AbHom::identity(a));
    std::vector<AbSubgroup> series;
    std::vector<AbElement> gens;
    for (std::size_t i = 0; i < a.rank(); ++i) gens.push_back(delta.apply(a.generator(i)));
    for (std::size_t k = 0; k < g.class_bound(); ++k) {
        series.push_back(subgroup_generated(a, gens));
        std::vector<AbElement> next;
        for (const AbElement& x : gens) next.push_back(delta.apply(x));
        gens = std::move(next);
    }
    return series;
}

/// Structural checks for the coprime case: powers of s land in the lower
/// central series, the torsion is generated by s, and each gamma_k is the
/// cyclic subgroup generated by (m-n)^(k-1) * s.
inline CheckList verify_section2_lemmas(const GcGroup& g) {
    const BSParams& p = g.params();
    if (p.d != 1)
        throw precondition_violated("section 2 checks require gcd(m,n) = 1");
    const FinAbGroup& a = g.torsion();
    const std::size_t c = g.class_bound();
    CheckList out;

    std::vector<AbSubgroup> series = lower_central_series(g);

    bool power_ok = true;
    Int mn = Int(p.m) - Int(p.n);
    Int pw = 1;
    for (std::size_t k = 1; k <= c; ++k) {
        pw *= mn;
        if (!series[k - 1].contains(scale(pw, g.s()))) power_ok = false;
    }
    out.add("lemma_2_1", power_ok, "(m-n)^k * s in gamma_{k+1}");

    bool gamma_ok = true;
    pw = 1;
    for (std::size_t k = 2; k <= c; ++k) {
        pw *= mn;
        const AbSubgroup& gk = series[k - 2];
        AbElement gen = scale(pw, g.s());
        AbSubgroup cyc = subgroup_generated(a, {gen});
        if (!(gk.order() == cyc.order() && gk.contains(gen))) gamma_ok = false;
    }
    out.add("lemma_2_3", gamma_ok, "gamma_k = <(m-n)^(k-1) * s>");

    AbSubgroup from_s = subgroup_generated(a, {g.s()});
    out.add("cor_2_4", from_s.order() == a.order(), "torsion generated by s");

    out.add("lemma_3_2",
            g.psi().apply(scale(p.m, g.s())) == scale(p.n, g.s()),
            "defining relation psi(m*s) = n*s");

    out.add("nilpotency", series[c - 1].is_trivial(), "gamma_{c+1} trivial");
    return out;
}

/// Report for the subgroup d*A x| <t> and its identification with the
/// reduced-parameter group.
struct DReductionReport {
    CheckList checks;
    GcGroup reduced;
    Int subgroup_order;
    std::string generator_correspondence;
    bool all_passed() const { return checks.all_passed(); }
};

/// For d = gcd(m,n) > 1: builds d*A_c(m,n), checks it is a psi-invariant
/// cyclic subgroup of order |(n-m)/d|^c, and matches it with G_c(m/d, n/d)
/// through the map e_i' -> d * e_i.
inline DReductionReport d_subgroup_reduction(const GcGroup& g) {
    const BSParams& p = g.params();
    if (p.d <= 1)
        throw precondition_violated("d-subgroup reduction requires gcd(m,n) > 1");
    const FinAbGroup& a = g.torsion();
    const std::size_t c = g.class_bound();

    DReductionReport rep;
    std::vector<AbElement> gens;
    for (std::size_t i = 0; i < a.ambient_rank(); ++i)
        gens.push_back(scale(p.d, a.ambient_generator(i)));
    AbSubgroup sub = subgroup_generated(a, gens);
    rep.subgroup_order = sub.order();

    Int e = (Int(p.n) - Int(p.m)) / p.d;
    if (e < 0) e = -e;
    Int expected = 1;
    for (std::size_t i = 0; i < c; ++i) expected *= e;
    rep.checks.add("subgroup_order", sub.order() == expected,
                   "d*A has order |(n-m)/d|^c = " + expected.str());

    AbSubgroup from_ds = subgroup_generated(a, {scale(p.d, g.s())});
    rep.checks.add("cyclic", from_ds.order() == sub.order(), "d*A generated by d*s alone");

    bool invariant = true;
    for (const AbElement& x : gens)
        if (!sub.contains(g.psi().apply(x))) invariant = false;
    rep.checks.add("psi_invariant", invariant, "psi(d*A) = d*A");

    rep.reduced = build_gc(BSParams::canonical(p.m / p.d, p.n / p.d), c);
    const FinAbGroup& small = rep.reduced.torsion();
    rep.checks.add("reduced_order", small.order() == expected, "reduced torsion order matches");

    // theta: reduced torsion -> parent torsion, e_j' -> d * e_j
    IntMatrix theta_m(a.rank(), small.rank());
    for (std::size_t j = 0; j < small.rank(); ++j) {
        std::vector<Int> z = small.lift(small.generator(j));
        AbElement img = scale(p.d, a.from_ambient(z));
        for (std::size_t i = 0; i < a.rank(); ++i) theta_m.at(i, j) = img.coords()[i];
    }
    AbHom theta = AbHom::from_matrix(small, a, std::move(theta_m));

    bool into = true;
    std::vector<AbElement> theta_images;
    for (std::size_t j = 0; j < small.rank(); ++j) {
        AbElement img = theta.apply(small.generator(j));
        theta_images.push_back(img);
        if (!sub.contains(img)) into = false;
    }
    AbSubgroup image = subgroup_generated(a, theta_images);
    rep.checks.add("injective_onto",
                   into && image.order() == small.order() && image.order() == sub.order(),
                   "theta is a bijection onto d*A");

    bool equivariant = compose(theta, rep.reduced.psi()) == compose(g.psi(), theta);
    rep.checks.add("equivariant", equivariant, "theta matches the two t-actions");

    bool nu_match = true;
    if (rep.reduced.nu()) {
        AbElement ds = theta.apply(rep.reduced.s());
        nu_match = g.psi().apply(ds) == scale(*rep.reduced.nu(), ds);
    }
    rep.checks.add("nu_action", nu_match, "psi on d*s acts as nu of the reduced group");

    rep.generator_correspondence =
        "s' -> " + std::to_string(p.d) + "*s (reduced generator to parent subgroup generator)";
    return rep;
}

} // namespace bsrinf
