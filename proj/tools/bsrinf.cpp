// Command-line surface: degree queries, quotient inspection, Reidemeister
// numbers, verification suites, and batch sweeps with machine-readable
// output. Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 resource bound exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsrinf/degree.hpp"
#include "bsrinf/verify.hpp"

using json = nlohmann::ordered_json;
using namespace bsrinf;

namespace {

constexpr const char* kSchemaVersion = "1.0.0";

std::uint64_t env_oracle_cap() {
    if (const char* v = std::getenv("BSRINF_ORACLE_CAP")) {
        try {
            return std::stoull(v);
        } catch (...) {
            throw invalid_params("BSRINF_ORACLE_CAP is not a number");
        }
    }
    return kDefaultOracleCap;
}

json record(const std::string& command, json query, json result, long long timing_ms) {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = command;
    r["query"] = std::move(query);
    r["result"] = std::move(result);
    r["timing_ms"] = timing_ms;
    return r;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json params_json(const BSParams& p) {
    json j;
    j["m"] = p.m;
    j["n"] = p.n;
    j["d"] = p.d;
    j["canonicalized"] = p.canonicalized;
    return j;
}

json degree_json(const DegreeResult& r) {
    json j = params_json(r.params);
    j["case"] = to_string(r.case_label);
    switch (r.kind) {
        case DegreeKind::exact:
            j["kind"] = "exact";
            j["degree"] = r.lower.convert_to<long long>();
            break;
        case DegreeKind::infinite:
            j["kind"] = "infinite";
            break;
        case DegreeKind::interval:
            j["kind"] = "interval";
            j["lower"] = r.lower.convert_to<long long>();
            j["upper"] = r.upper.convert_to<long long>();
            break;
    }
    if (r.p) j["p"] = *r.p;
    j["method"] = to_string(r.method);
    if (r.gc_threshold) j["gc_threshold"] = static_cast<long long>(*r.gc_threshold);
    return j;
}

std::string degree_cell(const DegreeResult& r) {
    switch (r.kind) {
        case DegreeKind::exact: return r.lower.str();
        case DegreeKind::infinite: return "inf";
        case DegreeKind::interval: return "[" + r.lower.str() + "," + r.upper.str() + "]";
    }
    return "?";
}

const std::vector<std::string> kTableHeader = {"m",    "n",    "d", "case",
                                               "kind", "degree", "p", "gc_threshold"};

std::vector<std::string> table_row(const DegreeResult& r) {
    return {std::to_string(r.params.m),
            std::to_string(r.params.n),
            std::to_string(r.params.d),
            to_string(r.case_label),
            r.kind == DegreeKind::exact      ? "exact"
            : r.kind == DegreeKind::infinite ? "infinite"
                                             : "interval",
            degree_cell(r),
            r.p ? std::to_string(*r.p) : "",
            r.gc_threshold ? std::to_string(*r.gc_threshold) : ""};
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < kTableHeader.size(); ++i)
        os << (i ? "," : "") << kTableHeader[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string to_markdown(const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << "|";
    for (const auto& h : kTableHeader) os << " " << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < kTableHeader.size(); ++i) os << "---|";
    os << "\n";
    for (const auto& row : rows) {
        os << "|";
        for (const auto& cell : row) os << " " << cell << " |";
        os << "\n";
    }
    return os.str();
}

void write_or_print_payload(const std::string& out_path, const std::string& payload,
                            json& result_summary) {
    if (out_path.empty()) {
        result_summary["table"] = payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw invalid_params("cannot open output file " + out_path);
    f << payload;
    result_summary["out"] = out_path;
}

json checks_json(const CheckList& list) {
    json checks = json::array();
    for (const CheckResult& c : list.checks) {
        json one;
        one["name"] = c.name;
        one["passed"] = c.passed;
        one["detail"] = c.detail;
        checks.push_back(std::move(one));
    }
    return checks;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

int run(int argc, char** argv) {
    CLI::App app{"nilpotent quotients of Baumslag-Solitar groups: degrees, "
                 "Reidemeister numbers, verification suites"};
    app.require_subcommand(1);

    // degree
    long long deg_m = 0, deg_n = 0;
    std::size_t deg_cmax = kQueryCMax;
    std::string deg_method = "both";
    std::string deg_format = "json";
    std::string deg_out;
    std::uint64_t deg_aut_cap = kAutomorphismCandidateCap;
    CLI::App* degree = app.add_subcommand("degree", "nilpotency degree of BS(m,n)");
    degree->add_option("m", deg_m, "first parameter (nonzero)")->required();
    degree->add_option("n", deg_n, "second parameter (nonzero)")->required();
    degree->add_option("--c-max", deg_cmax, "search bound on the class");
    degree->add_option("--method", deg_method, "closed|search|both")
        ->check(CLI::IsMember({"closed", "search", "both"}));
    degree->add_option("--format", deg_format, "json|csv|md")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    degree->add_option("--out", deg_out, "write csv/md/json payload to a file");
    degree->add_option("--aut-cap", deg_aut_cap, "automorphism search cap");

    // quotient
    long long quo_m = 0, quo_n = 0;
    std::size_t quo_c = 1;
    std::uint64_t quo_aut_cap = kAutomorphismCandidateCap;
    CLI::App* quotient = app.add_subcommand("quotient", "structure of one G_c(m,n)");
    quotient->add_option("m", quo_m)->required();
    quotient->add_option("n", quo_n)->required();
    quotient->add_option("c", quo_c, "class bound (>= 1)")->required();
    quotient->add_option("--aut-cap", quo_aut_cap, "automorphism search cap");

    // reidemeister
    long long rei_m = 0, rei_n = 0;
    std::size_t rei_c = 1;
    std::string rei_mu, rei_matrix, rei_beta = "0", rei_eps;
    std::uint64_t rei_oracle_cap = 0;
    CLI::App* reid = app.add_subcommand("reidemeister",
                                        "Reidemeister number of one automorphism of G_c(m,n)");
    reid->add_option("m", rei_m)->required();
    reid->add_option("n", rei_n)->required();
    reid->add_option("c", rei_c)->required();
    CLI::Option* omu = reid->add_option("--mu", rei_mu, "scalar action on s (cyclic torsion)");
    CLI::Option* omx =
        reid->add_option("--matrix", rei_matrix,
                         "action in invariant coordinates, rows separated by ';'");
    omu->excludes(omx);
    reid->add_option("--beta", rei_beta,
                     "translation part: multiple of s with --mu, coordinates with --matrix");
    reid->add_option("--eps", rei_eps, "+1 or -1")->required();
    reid->add_option("--oracle-cap", rei_oracle_cap, "orbit oracle cap (0 = default/env)");

    // verify
    std::string ver_scope;
    VerifyOptions ver_opt;
    std::uint64_t ver_oracle_cap = 0;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("scope", ver_scope, "snf|lemmas|oracle|all")
        ->required()
        ->check(CLI::IsMember({"snf", "lemmas", "oracle", "all"}));
    verify->add_option("--max-n", ver_opt.max_n, "parameter range bound");
    verify->add_option("--max-c", ver_opt.max_c, "class bound");
    verify->add_option("--oracle-cap", ver_oracle_cap, "orbit oracle cap (0 = default/env)");
    verify->add_option("--aut-cap", ver_opt.aut_cap, "automorphism search cap");
    verify->add_option("--random-count", ver_opt.random_count, "random SNF trials");

    // sweep
    long long sw_mmax = 0, sw_nmax = 0;
    std::size_t sw_cmax = kSweepCMax;
    std::string sw_format = "json";
    std::string sw_out;
    std::uint64_t sw_aut_cap = kAutomorphismCandidateCap;
    CLI::App* sweep = app.add_subcommand("sweep", "degree table over all canonical pairs");
    sweep->add_option("m_max", sw_mmax)->required();
    sweep->add_option("n_max", sw_nmax)->required();
    sweep->add_option("--c-max", sw_cmax, "search bound for interval rows");
    sweep->add_option("--format", sw_format, "json|csv|md")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    sweep->add_option("--out", sw_out, "write the table to a file");
    sweep->add_option("--aut-cap", sw_aut_cap, "automorphism search cap");

    CLI11_PARSE(app, argc, argv);
    Timer timer;

    if (*degree) {
        BSParams p = BSParams::canonical(deg_m, deg_n);
        DegreeMethod method = deg_method == "closed"   ? DegreeMethod::closed_form
                              : deg_method == "search" ? DegreeMethod::search
                                                       : DegreeMethod::both;
        DegreeResult r;
        if (method == DegreeMethod::closed_form) {
            r = closed_form_degree(p);
        } else {
            CrossCheckReport rep = cross_check(p, deg_cmax, deg_aut_cap);
            if (rep.search_ran && rep.search_coverage == 0 && !rep.search_found)
                throw bound_exceeded("search could not decide any class under the cap",
                                     deg_aut_cap);
            r = rep.closed;
            r.method = method;
            if (rep.search_found) r.gc_threshold = *rep.search_found;
        }
        json query;
        query["m"] = deg_m;
        query["n"] = deg_n;
        query["c_max"] = deg_cmax;
        query["method"] = deg_method;
        query["format"] = deg_format;
        json result = degree_json(r);
        if (deg_format != "json") {
            std::string payload =
                deg_format == "csv" ? to_csv({table_row(r)}) : to_markdown({table_row(r)});
            write_or_print_payload(deg_out, payload, result);
        } else if (!deg_out.empty()) {
            json file_payload = record("degree", query, result, 0);
            file_payload.erase("timing_ms");
            std::ofstream f(deg_out, std::ios::binary);
            if (!f) throw invalid_params("cannot open output file " + deg_out);
            f << file_payload.dump(2) << "\n";
            result["out"] = deg_out;
        }
        emit(record("degree", query, result, timer.ms()));
        return 0;
    }

    if (*quotient) {
        BSParams p = BSParams::canonical(quo_m, quo_n);
        GcGroup g = build_gc(p, quo_c);
        json query;
        query["m"] = quo_m;
        query["n"] = quo_n;
        query["c"] = quo_c;
        json result = params_json(p);
        result["c"] = quo_c;
        json factors = json::array();
        for (const Int& f : g.torsion().invariant_factors()) factors.push_back(f.str());
        result["torsion_factors"] = std::move(factors);
        result["torsion_order"] = g.torsion().order().str();
        if (g.nu()) result["nu"] = g.nu()->str();
        json gamma = json::array();
        for (const AbSubgroup& s : lower_central_series(g)) gamma.push_back(s.order().str());
        result["gamma_orders"] = std::move(gamma);
        result["rinf"] = gc_has_rinf(g, quo_aut_cap).has_rinf;
        emit(record("quotient", query, result, timer.ms()));
        return 0;
    }

    if (*reid) {
        if (rei_mu.empty() && rei_matrix.empty())
            throw invalid_params("one of --mu or --matrix is required");
        int eps;
        if (rei_eps == "-1")
            eps = -1;
        else if (rei_eps == "+1" || rei_eps == "1")
            eps = 1;
        else
            throw invalid_params("--eps must be +1 or -1");
        std::uint64_t cap = rei_oracle_cap ? rei_oracle_cap : env_oracle_cap();
        BSParams p = BSParams::canonical(rei_m, rei_n);
        GcGroup g = build_gc(p, rei_c);

        json query;
        query["m"] = rei_m;
        query["n"] = rei_n;
        query["c"] = rei_c;
        if (!rei_mu.empty()) query["mu"] = rei_mu;
        if (!rei_matrix.empty()) query["matrix"] = rei_matrix;
        query["beta"] = rei_beta;
        query["epsilon"] = eps;

        json result = params_json(p);
        GcAutomorphism phi;
        try {
            if (!rei_mu.empty()) {
                phi = make_automorphism_mu(g, Int(rei_mu), Int(rei_beta), eps);
            } else {
                std::vector<std::vector<Int>> rows;
                std::istringstream rs(rei_matrix);
                std::string row;
                while (std::getline(rs, row, ';')) {
                    std::vector<Int> r;
                    std::istringstream cs(row);
                    std::string cell;
                    while (std::getline(cs, cell, ',')) r.push_back(Int(cell));
                    rows.push_back(std::move(r));
                }
                IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (rows[i].size() != m.cols())
                        throw invalid_params("ragged --matrix rows");
                    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
                }
                std::vector<Int> beta;
                std::istringstream bs(rei_beta);
                std::string cell;
                while (std::getline(bs, cell, ',')) beta.push_back(Int(cell));
                phi = make_automorphism(g, AbHom::from_matrix(g.torsion(), g.torsion(), m),
                                        g.torsion().element(beta), eps);
            }
        } catch (const not_bijective& e) {
            result["valid"] = false;
            result["error"] = "NotBijective";
            result["message"] = e.what();
            emit(record("reidemeister", query, result, timer.ms()));
            return 2;
        } catch (const not_homomorphism& e) {
            result["valid"] = false;
            result["error"] = "NotHomomorphism";
            result["message"] = e.what();
            emit(record("reidemeister", query, result, timer.ms()));
            return 2;
        }
        result["valid"] = true;
        ReidemeisterNumber fast = reidemeister_number(phi);
        json fast_json;
        fast_json["finite"] = fast.finite;
        if (fast.finite) fast_json["count"] = fast.count.str();
        result["fast"] = std::move(fast_json);
        if (g.torsion().order() <= cap) {
            ReidemeisterNumber oracle = reidemeister_oracle(phi, cap);
            json oracle_json;
            oracle_json["finite"] = oracle.finite;
            if (oracle.finite) oracle_json["count"] = oracle.count.str();
            result["oracle"] = std::move(oracle_json);
            result["agreement"] = fast == oracle;
        } else {
            result["oracle"] = nullptr;
            result["oracle_skipped"] = "torsion order exceeds the oracle cap";
        }
        emit(record("reidemeister", query, result, timer.ms()));
        return 0;
    }

    if (*verify) {
        ver_opt.oracle_cap = ver_oracle_cap ? ver_oracle_cap : env_oracle_cap();
        CheckList list;
        if (ver_scope == "snf")
            list = verify_snf(ver_opt);
        else if (ver_scope == "lemmas")
            list = verify_lemmas(ver_opt);
        else if (ver_scope == "oracle")
            list = verify_oracle(ver_opt);
        else
            list = verify_all(ver_opt);
        json query;
        query["scope"] = ver_scope;
        query["max_n"] = ver_opt.max_n;
        query["max_c"] = ver_opt.max_c;
        query["oracle_cap"] = ver_opt.oracle_cap;
        query["aut_cap"] = ver_opt.aut_cap;
        json result;
        result["checks"] = checks_json(list);
        result["all_passed"] = list.all_passed();
        emit(record("verify", query, result, timer.ms()));
        return list.all_passed() ? 0 : 1;
    }

    if (*sweep) {
        auto rows = degree_sweep(sw_mmax, sw_nmax, sw_cmax, sw_aut_cap);
        json query;
        query["m_max"] = sw_mmax;
        query["n_max"] = sw_nmax;
        query["c_max"] = sw_cmax;
        query["format"] = sw_format;
        json result;
        result["row_count"] = rows.size();
        if (sw_format == "json") {
            json jrows = json::array();
            for (const SweepRow& r : rows) jrows.push_back(degree_json(r.degree));
            if (!sw_out.empty()) {
                json file_payload;
                file_payload["schema_version"] = kSchemaVersion;
                file_payload["command"] = "sweep";
                file_payload["query"] = query;
                file_payload["rows"] = jrows;
                std::ofstream f(sw_out, std::ios::binary);
                if (!f) throw invalid_params("cannot open output file " + sw_out);
                f << file_payload.dump(2) << "\n";
                result["out"] = sw_out;
            } else {
                result["rows"] = std::move(jrows);
            }
        } else {
            std::vector<std::vector<std::string>> table;
            for (const SweepRow& r : rows) table.push_back(table_row(r.degree));
            std::string payload = sw_format == "csv" ? to_csv(table) : to_markdown(table);
            write_or_print_payload(sw_out, payload, result);
        }
        emit(record("sweep", query, result, timer.ms()));
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bound_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const inconsistency& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invalid_params& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
