#pragma once

#include <atomic>
#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bsrinf/twisted.hpp"

namespace bsrinf {

inline constexpr std::size_t kSweepCMax = 12;
inline constexpr std::size_t kQueryCMax = 20;

enum class DegreeCase {
    n_negative,
    n_eq_minus_m,
    n_eq_m,
    diff_eq_d,
    diff_eq_2d,
    diff_ge_3d,
};

inline const char* to_string(DegreeCase c) {
    switch (c) {
        case DegreeCase::n_negative: return "n_negative";
        case DegreeCase::n_eq_minus_m: return "n_eq_minus_m";
        case DegreeCase::n_eq_m: return "n_eq_m";
        case DegreeCase::diff_eq_d: return "diff_eq_d";
        case DegreeCase::diff_eq_2d: return "diff_eq_2d";
        case DegreeCase::diff_ge_3d: return "diff_ge_3d";
    }
    return "?";
}

enum class DegreeKind { exact, infinite, interval };
enum class DegreeMethod { closed_form, search, both };

inline const char* to_string(DegreeMethod m) {
    switch (m) {
        case DegreeMethod::closed_form: return "closed";
        case DegreeMethod::search: return "search";
        case DegreeMethod::both: return "both";
    }
    return "?";
}

/// Nilpotency degree answer. Exact values and interval bounds are always
/// >= 2; an interval occurs only for d > 1 with n-m = 2d, where the searched
/// quotient threshold refines the upper bound without certifying exactness.
struct DegreeResult {
    BSParams params;
    DegreeKind kind = DegreeKind::exact;
    Int lower = 0;  // exact value, or interval bounds
    Int upper = 0;
    DegreeCase case_label = DegreeCase::n_negative;
    std::optional<int> p;
    DegreeMethod method = DegreeMethod::closed_form;
    std::optional<std::size_t> gc_threshold;  // least c with the quotient property, when searched
};

/// Largest p with 2^p | 2(m/d) + 2.
inline int p_exponent(long long m, long long d) {
    if (d <= 0 || m % d != 0 || m / d < 1)
        throw non_divisor("p exponent needs d | m with m/d >= 1");
    long long v = 2 * (m / d) + 2;
    int p = 0;
    while (v % 2 == 0) {
        v /= 2;
        ++p;
    }
    return p;
}

/// Case table of the degree theorems over canonical parameters.
inline DegreeResult closed_form_degree(const BSParams& params) {
    DegreeResult r;
    r.params = params;
    r.method = DegreeMethod::closed_form;
    const long long m = params.m, n = params.n, d = params.d;
    if (n < 0) {
        if (n == -m) {
            r.kind = DegreeKind::infinite;
            r.case_label = DegreeCase::n_eq_minus_m;
        } else {
            r.kind = DegreeKind::exact;
            r.lower = r.upper = 2;
            r.case_label = DegreeCase::n_negative;
        }
        return r;
    }
    if (n == m) {
        r.kind = DegreeKind::infinite;
        r.case_label = DegreeCase::n_eq_m;
        return r;
    }
    const long long k = (n - m) / d;
    if (k == 1) {
        r.kind = DegreeKind::infinite;
        r.case_label = DegreeCase::diff_eq_d;
        return r;
    }
    if (k == 2) {
        r.case_label = DegreeCase::diff_eq_2d;
        int p = p_exponent(m, d);
        r.p = p;
        if (d == 1) {
            r.kind = DegreeKind::exact;
            r.lower = r.upper = p + 2;
        } else {
            r.kind = DegreeKind::interval;
            r.lower = 2;
            r.upper = p + 2;
        }
        return r;
    }
    r.kind = DegreeKind::exact;
    r.lower = r.upper = 2;
    r.case_label = DegreeCase::diff_ge_3d;
    return r;
}

/// Least c <= c_max whose quotient has the property, if any.
struct SearchOutcome {
    std::optional<std::size_t> found_c;
    std::size_t c_max = 0;
};

inline SearchOutcome search_degree(const BSParams& params, std::size_t c_max,
                                   std::uint64_t aut_cap = kAutomorphismCandidateCap) {
    if (params.m == params.n || params.m == -params.n)
        throw precondition_violated("search needs m != n and m != -n");
    for (std::size_t c = 1; c <= c_max; ++c)
        if (gc_has_rinf(build_gc(params, c), aut_cap).has_rinf) return {c, c_max};
    return {std::nullopt, c_max};
}

/// Closed form and search side by side. A genuine mismatch is an
/// implementation bug, reported by throwing; a search cut short by a
/// resource cap only limits the certified coverage.
struct CrossCheckReport {
    DegreeResult closed;
    bool search_ran = false;
    std::optional<std::size_t> search_found;
    std::size_t search_coverage = 0;  // quotients decided for every c <= this
    bool consistent = false;
    std::string note;
};

inline CrossCheckReport cross_check(const BSParams& params, std::size_t c_max = kQueryCMax,
                                    std::uint64_t aut_cap = kAutomorphismCandidateCap) {
    CrossCheckReport rep;
    rep.closed = closed_form_degree(params);
    if (params.m == params.n || params.m == -params.n) {
        rep.consistent = true;
        rep.note = "closed form only (m = n or m = -n)";
        return rep;
    }
    rep.search_ran = true;
    for (std::size_t c = 1; c <= c_max; ++c) {
        bool verdict;
        try {
            verdict = gc_has_rinf(build_gc(params, c), aut_cap).has_rinf;
        } catch (const bound_exceeded&) {
            rep.note = "search stopped by resource cap at c = " + std::to_string(c);
            break;
        }
        rep.search_coverage = c;
        if (verdict) {
            rep.search_found = c;
            break;
        }
    }

    const DegreeResult& cf = rep.closed;
    bool ok = true;
    std::string why;
    if (cf.kind == DegreeKind::exact && params.d == 1) {
        if (rep.search_found) {
            if (Int(*rep.search_found) != cf.lower) {
                ok = false;
                why = "search found a different degree than the closed form";
            }
        } else if (Int(rep.search_coverage) >= cf.lower) {
            ok = false;
            why = "search covered the closed-form degree without finding it";
        }
    } else if (cf.kind == DegreeKind::infinite) {
        if (rep.search_found) {
            ok = false;
            why = "search found a degree for a closed-form infinite case";
        }
    } else if (cf.kind == DegreeKind::exact) {  // d > 1, value 2
        if (rep.search_found) {
            if (Int(*rep.search_found) != cf.lower) {
                ok = false;
                why = "quotient threshold differs from the exact degree";
            }
        } else if (Int(rep.search_coverage) >= cf.lower) {
            ok = false;
            why = "search covered the exact degree without finding the threshold";
        }
    } else {  // interval, d > 1
        if (rep.search_found) {
            if (Int(*rep.search_found) < cf.lower || Int(*rep.search_found) > cf.upper) {
                ok = false;
                why = "quotient threshold escapes the interval bounds";
            }
        } else if (Int(rep.search_coverage) >= cf.upper) {
            ok = false;
            why = "threshold must exist within the interval upper bound";
        }
    }
    if (!ok) throw inconsistency("cross check failed for BS(" + std::to_string(params.m) + "," +
                                 std::to_string(params.n) + "): " + why);
    rep.consistent = true;
    return rep;
}

/// A degree answer by the requested method; "both" adds the searched
/// threshold to the closed form and cross-checks on the way.
inline DegreeResult degree_query(const BSParams& params, DegreeMethod method,
                                 std::size_t c_max = kQueryCMax,
                                 std::uint64_t aut_cap = kAutomorphismCandidateCap) {
    if (method == DegreeMethod::closed_form) return closed_form_degree(params);
    CrossCheckReport rep = cross_check(params, c_max, aut_cap);
    DegreeResult r = rep.closed;
    r.method = method;
    if (rep.search_found) r.gc_threshold = *rep.search_found;
    return r;
}

/// One sweep row per canonical pair, ordered lexicographically by (m, n).
struct SweepRow {
    DegreeResult degree;
};

inline std::vector<SweepRow> degree_sweep(long long m_max, long long n_max,
                                          std::size_t c_max = kSweepCMax,
                                          std::uint64_t aut_cap = kAutomorphismCandidateCap,
                                          unsigned workers = std::thread::hardware_concurrency()) {
    std::vector<BSParams> cells;
    for (long long m = 1; m <= m_max; ++m)
        for (long long n = -n_max; n <= n_max; ++n) {
            if (n == 0 || m > std::llabs(n)) continue;
            cells.push_back(BSParams::canonical(m, n));
        }
    std::vector<SweepRow> rows(cells.size());
    if (workers == 0) workers = 1;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            DegreeResult r = closed_form_degree(cells[i]);
            if (r.kind == DegreeKind::interval) {
                SearchOutcome s = search_degree(cells[i], c_max, aut_cap);
                if (s.found_c) r.gc_threshold = *s.found_c;
                r.method = DegreeMethod::both;
            }
            rows[i].degree = std::move(r);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers && w + 1 < cells.size(); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

} // namespace bsrinf
