#pragma once

/**
 * @file record.hpp
 * @brief Serializable Betti-number records (JSON, CSV, text) for the command-line tool.
 *
 * JSON objects are emitted with sorted keys and no volatile fields, so the
 * same input always produces the same bytes.
 */

#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "errors.hpp"
#include "pipelines.hpp"
#include "surgery.hpp"

namespace curvebetti {

/// Narrow an exact coefficient for serialization; values beyond 64 bits are
/// reported rather than truncated.
inline std::int64_t to_int64(const integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw arithmetic_error("coefficient " + v.str() + " does not fit in a signed 64-bit integer");
    return static_cast<std::int64_t>(v);
}

inline std::vector<std::int64_t> to_int64(const int_poly& p) {
    std::vector<std::int64_t> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.push_back(to_int64(c));
    return out;
}

struct trace_entry {
    std::string label;
    step_kind kind;
    std::vector<std::int64_t> correction;
    std::vector<std::int64_t> cumulative;
};

struct betti_record {
    std::string space;
    std::optional<int> k, n, d;
    std::optional<compactification> comp;
    int dim = -1;
    std::int64_t euler = 0;
    std::vector<std::int64_t> q_coefficients;  // index j is b_{2j}
    std::vector<std::int64_t> betti;           // b_0 .. b_{2 dim}, odd entries zero
    bool palindromic = true;
    std::int64_t components = 0;
    std::optional<std::vector<trace_entry>> trace;
};

inline betti_record make_record(std::string space, const poincare_poly& p, std::optional<moduli_key> key = {}) {
    betti_record r;
    r.space = std::move(space);
    if (key) {
        r.k = key->k;
        r.n = key->n;
        r.d = key->d;
        r.comp = key->comp;
    }
    r.dim = p.dim();
    r.q_coefficients = to_int64(p.poly());
    r.euler = to_int64(p.euler());
    r.components = to_int64(p.components());
    r.palindromic = p.is_palindromic();
    r.betti.assign(r.q_coefficients.size() * 2 - (r.q_coefficients.empty() ? 0 : 1), 0);
    for (std::size_t j = 0; j < r.q_coefficients.size(); ++j) r.betti[2 * j] = r.q_coefficients[j];
    return r;
}

inline std::vector<trace_entry> to_trace(const std::vector<trace_record>& steps) {
    std::vector<trace_entry> out;
    for (const auto& s : steps) out.push_back({s.label, s.kind, to_int64(s.correction), to_int64(s.cumulative)});
    return out;
}

inline nlohmann::json to_json(const betti_record& r) {
    using nlohmann::json;
    auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
    json j;
    j["space"] = r.space;
    j["k"] = opt(r.k);
    j["n"] = opt(r.n);
    j["d"] = opt(r.d);
    j["compactification"] = r.comp ? json(to_string(*r.comp)) : json(nullptr);
    j["dim"] = r.dim;
    j["euler"] = r.euler;
    j["q_coefficients"] = r.q_coefficients;
    j["betti"] = r.betti;
    j["palindromic"] = r.palindromic;
    j["components"] = r.components;
    if (r.trace) {
        json steps = json::array();
        for (const auto& t : *r.trace)
            steps.push_back({{"label", t.label},
                             {"kind", to_string(t.kind)},
                             {"correction", t.correction},
                             {"cumulative", t.cumulative}});
        j["trace"] = std::move(steps);
    } else {
        j["trace"] = nullptr;
    }
    return j;
}

/// Header for `n_coeffs` even Betti columns b0, b2, ...
inline std::string csv_header(std::size_t n_coeffs) {
    std::string s = "k,n,d,compactification,dim,euler";
    for (std::size_t j = 0; j < n_coeffs; ++j) s += ",b" + std::to_string(2 * j);
    return s;
}

/// One row, padded with zeros up to `n_coeffs` columns.
inline std::string csv_row(const betti_record& r, std::size_t n_coeffs) {
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    std::string s = opt(r.k) + "," + opt(r.n) + "," + opt(r.d) + "," + (r.comp ? to_string(*r.comp) : "") + "," +
                    std::to_string(r.dim) + "," + std::to_string(r.euler);
    for (std::size_t j = 0; j < n_coeffs; ++j)
        s += "," + std::to_string(j < r.q_coefficients.size() ? r.q_coefficients[j] : 0);
    return s;
}

inline std::string to_text(const betti_record& r, bool color) {
    const char* bold = color ? "\x1b[1m" : "";
    const char* reset = color ? "\x1b[0m" : "";
    const int_poly p(std::vector<integer>(r.q_coefficients.begin(), r.q_coefficients.end()));
    std::ostringstream os;
    os << bold << r.space << reset << "\n";
    os << "  P(q)        " << p << "\n";
    os << "  dim         " << r.dim << "\n";
    os << "  euler       " << r.euler << "\n";
    os << "  components  " << r.components << "\n";
    os << "  palindromic " << (r.palindromic ? "yes" : "no") << "\n";
    os << "  betti      ";
    for (auto b : r.betti) os << " " << b;
    os << "\n";
    if (r.trace) {
        os << "  trace\n";
        for (const auto& t : *r.trace) {
            os << "    " << to_string(t.kind) << " " << t.label << ": cumulative";
            for (auto c : t.cumulative) os << " " << c;
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace curvebetti
