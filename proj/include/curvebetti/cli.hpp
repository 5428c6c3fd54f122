#pragma once

/**
 * @file cli.hpp
 * @brief The `curvebetti` command-line front end (betti, table, verify).
 *
 * Kept as a header so tests can drive it in-process; tools/curvebetti.cpp is
 * a thin main around run().
 *
 * Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
 * 3 arithmetic error.
 */

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catalog.hpp"
#include "dsl.hpp"
#include "errors.hpp"
#include "pipelines.hpp"
#include "record.hpp"

namespace curvebetti::cli {

enum exit_code : int { ok = 0, verification_failed = 1, usage = 2, arithmetic = 3 };

inline constexpr const char* default_grid_spec = "k=1..4,n=k+1..10";

struct int_range {
    int lo;
    int hi;
};

/// "a..b" or a single integer "a".
inline int_range parse_range(const std::string& text, const std::string& what) {
    static const std::regex re(R"(\s*(-?\d{1,9})\s*(?:\.\.\s*(-?\d{1,9})\s*)?)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw usage_error(what + ": expected an integer or a range a..b, got '" + text + "'");
    const int lo = std::stoi(m[1]);
    const int hi = m[2].matched ? std::stoi(m[2]) : lo;
    if (hi < lo) throw usage_error(what + ": empty range '" + text + "'");
    return {lo, hi};
}

/// "k=a..b,n=c..d" where c may be written relative to k as "k" or "k+j".
inline grid parse_grid(const std::string& text) {
    static const std::regex re(R"(\s*k\s*=\s*(\d{1,4})\s*\.\.\s*(\d{1,4})\s*,\s*n\s*=\s*(?:(k)\s*(?:\+\s*(\d{1,4}))?|(\d{1,4}))\s*\.\.\s*(\d{1,4})\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw usage_error("--grid: expected the form " + std::string(default_grid_spec) + ", got '" + text + "'");
    const int k_lo = std::stoi(m[1]);
    const int k_hi = std::stoi(m[2]);
    const bool relative = m[3].matched;
    const int n_lo = relative ? (m[4].matched ? std::stoi(m[4]) : 0) : std::stoi(m[5]);
    const int n_hi = std::stoi(m[6]);
    return make_grid(k_lo, k_hi, n_lo, n_hi, relative);
}

namespace detail {

struct output_options {
    std::string format = "text";
    std::string color = "auto";
    bool trace = false;
};

inline std::optional<std::vector<trace_entry>> trace_for(const moduli_key& key) {
    // the Kontsevich spaces have no surgery route
    auto p = build_pipeline(key.normalized());
    if (!p) return std::nullopt;
    return to_trace(run_pipeline(*p).trace);
}

inline betti_record record_for_key(const moduli_key& key, bool trace) {
    betti_record r = make_record(key.to_string(), evaluate(key, mode::closed), key);
    if (trace) r.trace = trace_for(key);
    return r;
}

inline void emit_records(const std::vector<betti_record>& records, const output_options& o, bool single,
                         std::ostream& out, bool color) {
    if (o.format == "json") {
        if (single) {
            out << to_json(records.front()).dump() << "\n";
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : records) arr.push_back(to_json(r));
            out << arr.dump(2) << "\n";
        }
    } else if (o.format == "csv") {
        std::size_t width = 0;
        for (const auto& r : records) width = std::max(width, r.q_coefficients.size());
        out << csv_header(width) << "\n";
        for (const auto& r : records) out << csv_row(r, width) << "\n";
    } else {
        for (std::size_t i = 0; i < records.size(); ++i) out << (i ? "\n" : "") << to_text(records[i], color);
    }
}

inline void add_output_options(CLI::App& cmd, output_options& o) {
    cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    cmd.add_option("--color", o.color, "Bold headers in text output")->check(CLI::IsMember({"auto", "never"}));
    cmd.add_flag("--trace", o.trace, "Include the per-step surgery trace");
}

inline compactification comp_from(const std::string& s) {
    auto c = parse_compactification(s);
    if (!c) throw usage_error("--compactification must be one of M, S, H");
    return *c;
}

}  // namespace detail

/// Run the tool on `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, bool out_is_tty = false) {
    CLI::App app{"Betti numbers of compactified spaces of rational curves on Grassmannians", "curvebetti"};
    app.require_subcommand(1);

    // betti
    auto* betti = app.add_subcommand("betti", "Betti numbers of one space");
    std::string space;
    std::optional<int> k, n, d;
    std::string comp_name;
    detail::output_options betti_out;
    auto* space_opt = betti->add_option("--space", space, "Space expression, e.g. \"S(Gr(1,3),3)\"");
    std::vector<CLI::Option*> triple = {betti->add_option("--k", k, "Subspace dimension k"),
                                        betti->add_option("--n", n, "Ambient dimension n"),
                                        betti->add_option("--d", d, "Curve degree d (2 or 3)"),
                                        betti->add_option("--compactification", comp_name, "M, S or H")};
    for (auto* o : triple) space_opt->excludes(o);
    detail::add_output_options(*betti, betti_out);

    // table
    auto* table = app.add_subcommand("table", "Betti numbers over a range of Grassmannians");
    int table_d = 0;
    std::string table_comp, table_k, table_n, table_path;
    detail::output_options table_out;
    table->add_option("--d", table_d, "Curve degree d (2 or 3)")->required();
    table->add_option("--compactification", table_comp, "M, S or H")->required();
    table->add_option("--k", table_k, "k or a range a..b")->required();
    table->add_option("--n", table_n, "n or a range a..b")->required();
    table->add_option("--out", table_path, "Write to this file instead of stdout");
    detail::add_output_options(*table, table_out);

    // verify
    auto* verify = app.add_subcommand("verify", "Run verification suites over a grid of keys");
    std::string suite_name = "all";
    std::string grid_spec = default_grid_spec;
    std::string report_path;
    verify->add_option("--suite", suite_name, "duality, pipeline, special, symmetry or all")
        ->check(CLI::IsMember({"duality", "pipeline", "special", "symmetry", "all"}));
    verify->add_option("--grid", grid_spec, "Grid of keys, e.g. " + std::string(default_grid_spec));
    verify->add_option("--report", report_path, "Also write a JSON report to this file");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    auto use_color = [&](const detail::output_options& o) { return o.color == "auto" && out_is_tty; };

    try {
        catalog_self_check();

        if (*betti) {
            betti_record rec;
            if (space_opt->count() > 0) {
                const auto e = dsl::parse(space);
                const auto key = dsl::as_moduli_key(e);
                rec = make_record(dsl::print(e), dsl::eval(e), key);
                if (betti_out.trace && key) rec.trace = detail::trace_for(*key);
            } else {
                if (!k || !n || !d || comp_name.empty())
                    throw usage_error("betti needs either --space or all of --k, --n, --d, --compactification");
                const moduli_key key{*k, *n, *d, detail::comp_from(comp_name)};
                rec = detail::record_for_key(key, betti_out.trace);
            }
            detail::emit_records({rec}, betti_out, true, out, use_color(betti_out));
            return ok;
        }

        if (*table) {
            const auto comp = detail::comp_from(table_comp);
            const auto kr = parse_range(table_k, "--k");
            const auto nr = parse_range(table_n, "--n");
            std::vector<betti_record> records;
            for (int kk = kr.lo; kk <= kr.hi; ++kk) {
                for (int nn = nr.lo; nn <= nr.hi; ++nn) {
                    const moduli_key key{kk, nn, table_d, comp};
                    try {
                        validate(key);
                    } catch (const invalid_parameters& e) {
                        err << "note: skipped " << e.what() << "\n";
                        continue;
                    }
                    records.push_back(detail::record_for_key(key, table_out.trace));
                }
            }
            if (records.empty()) err << "note: no valid cells in the requested range\n";
            if (table_path.empty()) {
                detail::emit_records(records, table_out, false, out, use_color(table_out));
            } else {
                std::ofstream file(table_path, std::ios::binary);
                if (!file) throw usage_error("cannot open '" + table_path + "' for writing");
                detail::emit_records(records, table_out, false, file, false);
                if (!file.flush()) throw usage_error("failed writing '" + table_path + "'");
            }
            return ok;
        }

        if (*verify) {
            std::set<suite> suites;
            if (suite_name == "all")
                suites = all_suites();
            else
                suites = {*parse_suite(suite_name)};
            const grid g = parse_grid(grid_spec);
            const suite_report rep = verify_suite(g.keys, suites);

            std::string suite_list;
            for (suite s : suites) suite_list += (suite_list.empty() ? "" : ",") + std::string(to_string(s));
            out << "verify " << suite_list << " over " << grid_spec << ": " << g.keys.size() << " keys, "
                << g.skipped.size() + rep.skipped.size() << " skipped by the domain guard\n";
            for (const auto& c : rep.checks)
                if (!c.passed) out << "FAIL " << to_string(c.which) << " " << c.subject << ": " << c.detail << "\n";

            std::map<suite, std::pair<std::size_t, std::size_t>> per_suite;  // checks, failures
            std::map<std::string, std::size_t> families;
            for (const auto& c : rep.checks) {
                auto& [count, failed] = per_suite[c.which];
                ++count;
                failed += c.passed ? 0 : 1;
                if (c.which == suite::special) ++families[c.family];
            }
            for (suite s : suites) {
                const auto [count, failed] = per_suite[s];
                out << "  " << to_string(s) << ": " << count << " checks, " << failed << " failed\n";
            }
            if (suites.count(suite::special)) {
                out << "  special identity families: " << families.size() << "\n";
                for (const auto& [name, count] : families) out << "    " << name << " (" << count << " checks)\n";
            }
            out << rep.checks.size() << " checks, " << rep.failures() << " failures\n";

            if (!report_path.empty()) {
                nlohmann::json j;
                j["grid"] = grid_spec;
                j["suites"] = nlohmann::json::array();
                for (suite s : suites) j["suites"].push_back(to_string(s));
                j["keys"] = g.keys.size();
                std::vector<std::string> skipped = g.skipped;
                skipped.insert(skipped.end(), rep.skipped.begin(), rep.skipped.end());
                j["skipped"] = skipped;
                j["checks"] = nlohmann::json::array();
                for (const auto& c : rep.checks) {
                    nlohmann::json cj{{"suite", to_string(c.which)}, {"subject", c.subject}, {"passed", c.passed},
                                      {"detail", c.detail}};
                    if (c.which == suite::special) cj["family"] = c.family;
                    j["checks"].push_back(std::move(cj));
                }
                j["failures"] = rep.failures();
                std::ofstream file(report_path, std::ios::binary);
                if (!file) throw usage_error("cannot open '" + report_path + "' for writing");
                file << j.dump(2) << "\n";
            }
            return rep.failures() == 0 ? ok : verification_failed;
        }
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const arithmetic_error& e) {
        err << "arithmetic error: " << e.what() << "\n";
        return arithmetic;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return arithmetic;
    }
    return usage;
}

}  // namespace curvebetti::cli
