#pragma once

// JSON interchange for matrices, maps, and bipartite states. Entries are
// [re, im] pairs so values round-trip at full double precision, row-major
// so fixtures can be written the way matrices are printed.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "posmap/choi.hpp"
#include "posmap/complex_matrix.hpp"
#include "posmap/entanglement.hpp"
#include "posmap/errors.hpp"

namespace posmap {

using ordered_json = nlohmann::ordered_json;

inline ordered_json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

// Reads a whole file, or stdin when the path is "-".
inline std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline double finite_number(const ordered_json& j, const std::string& path) {
    if (!j.is_number())
        throw ParseError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ParseError(path + ": number is not finite");
    return v;
}

inline std::size_t positive_size(const ordered_json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw ParseError(path + ": expected a positive integer");
    return j.get<std::size_t>();
}

} // namespace detail

// {"rows": n, "cols": m, "entries": [[re, im], ...]} with entries row-major.
// Bipartite operators may carry "dims": [d1, d2] instead of (or alongside)
// rows/cols.
inline Matrix matrix_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object())
        throw ParseError(path + ": expected an object");
    std::size_t rows = 0, cols = 0;
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        if (!d.is_array() || d.size() != 2)
            throw ParseError(path + ".dims: expected [d1, d2]");
        const std::size_t d1 = detail::positive_size(d[0], path + ".dims[0]");
        const std::size_t d2 = detail::positive_size(d[1], path + ".dims[1]");
        rows = cols = d1 * d2;
    }
    if (j.contains("rows"))
        rows = detail::positive_size(j.at("rows"), path + ".rows");
    if (j.contains("cols"))
        cols = detail::positive_size(j.at("cols"), path + ".cols");
    if (rows == 0 || cols == 0)
        throw ParseError(path + ": missing rows/cols (or dims)");
    if (!j.contains("entries"))
        throw ParseError(path + ".entries: missing");
    const auto& e = j.at("entries");
    if (!e.is_array() || e.size() != rows * cols)
        throw ParseError(path + ".entries: expected " + std::to_string(rows * cols) +
                         " [re, im] pairs");
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < e.size(); ++k) {
        const std::string ep = path + ".entries[" + std::to_string(k) + "]";
        const auto& pair = e[k];
        if (!pair.is_array() || pair.size() != 2)
            throw ParseError(ep + ": expected [re, im]");
        m(k / cols, k % cols) = Complex{detail::finite_number(pair[0], ep + "[0]"),
                                        detail::finite_number(pair[1], ep + "[1]")};
    }
    return m;
}

inline ordered_json matrix_to_json(const Matrix& m) {
    ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k)
            entries.push_back({m(i, k).real(), m(i, k).imag()});
    j["entries"] = std::move(entries);
    return j;
}

inline DensityMatrix state_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("dims"))
        throw ParseError(path + ": a state needs \"dims\": [d1, d2]");
    const auto& d = j.at("dims");
    if (!d.is_array() || d.size() != 2)
        throw ParseError(path + ".dims: expected [d1, d2]");
    DensityMatrix s;
    s.d1 = detail::positive_size(d[0], path + ".dims[0]");
    s.d2 = detail::positive_size(d[1], path + ".dims[1]");
    s.rho = matrix_from_json(j, path);
    try {
        validate_state(s);
    } catch (const InvalidState& e) {
        throw ParseError(path + ": " + e.what());
    }
    return s;
}

inline ordered_json state_to_json(const DensityMatrix& s) {
    ordered_json j;
    j["dims"] = {s.d1, s.d2};
    const ordered_json m = matrix_to_json(s.rho);
    j["rows"] = m.at("rows");
    j["cols"] = m.at("cols");
    j["entries"] = m.at("entries");
    return j;
}

// {"dim_in": n, "dim_out": m, "kind": "choi"|"images"|"kraus", "data": ...}
inline MapRep map_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object())
        throw ParseError(path + ": expected an object");
    for (const char* key : {"dim_in", "dim_out", "kind", "data"})
        if (!j.contains(key))
            throw ParseError(path + "." + key + ": missing");
    const std::size_t din = detail::positive_size(j.at("dim_in"), path + ".dim_in");
    const std::size_t dout = detail::positive_size(j.at("dim_out"), path + ".dim_out");
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    const auto& data = j.at("data");
    try {
        if (kind == "choi") {
            MapRep t{din, dout, matrix_from_json(data, path + ".data")};
            validate_map(t);
            return t;
        }
        if (kind == "images") {
            if (!data.is_array() || data.size() != din * din)
                throw ParseError(path + ".data: expected " + std::to_string(din * din) +
                                 " images");
            MapSpec s;
            s.dim_in = din;
            s.dim_out = dout;
            for (std::size_t k = 0; k < data.size(); ++k)
                s.images.push_back(
                    matrix_from_json(data[k], path + ".data[" + std::to_string(k) + "]"));
            return choi_of_map(s);
        }
        if (kind == "kraus") {
            if (!data.is_array() || data.empty())
                throw ParseError(path + ".data: expected a nonempty array of operators");
            KrausSet ks;
            ks.dim_in = din;
            ks.dim_out = dout;
            for (std::size_t k = 0; k < data.size(); ++k)
                ks.ops.push_back(
                    matrix_from_json(data[k], path + ".data[" + std::to_string(k) + "]"));
            return map_from_kraus(ks);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
    throw ParseError(path + ".kind: expected \"choi\", \"images\", or \"kraus\"");
}

inline ordered_json map_to_json(const MapRep& t) {
    ordered_json j;
    j["dim_in"] = t.dim_in;
    j["dim_out"] = t.dim_out;
    j["kind"] = "choi";
    j["data"] = matrix_to_json(t.choi);
    return j;
}

} // namespace posmap
