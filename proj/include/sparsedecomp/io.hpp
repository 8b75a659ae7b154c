// Serialization glue: vectors and matrices to/from JSON and CSV, plus
// the JSON schemas for decompositions, RIP reports, and recovery
// results. Support indices are 1-based on the wire, 0-based in code.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sparsedecomp/decomposition.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/recovery.hpp"
#include "sparsedecomp/rip.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed writing file: " + path);
}

inline json parse_json(const std::string& text, const std::string& context) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(context + ": " + e.what());
    }
}

inline json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

inline Vector vector_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty())
        throw IoError(context + ": expected a nonempty JSON array of numbers");
    std::vector<double> entries;
    entries.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw IoError(context + ": element " + std::to_string(i) + " is not a number");
        entries.push_back(j[i].get<double>());
    }
    return Vector(std::move(entries));
}

inline json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const json& j, const std::string& context) {
    for (const char* field : {"rows", "cols", "data"})
        if (!j.contains(field))
            throw IoError(context + ": missing field '" + field + "'");
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    std::vector<double> data;
    for (std::size_t i = 0; i < j["data"].size(); ++i) {
        if (!j["data"][i].is_number())
            throw IoError(context + ": data element " + std::to_string(i) +
                          " is not a number");
        data.push_back(j["data"][i].get<double>());
    }
    if (data.size() != rows * cols)
        throw IoError(context + ": data length does not equal rows*cols");
    return Matrix(rows, cols, std::move(data));
}

inline Matrix matrix_from_csv(const std::string& text, const std::string& context) {
    std::vector<double> data;
    std::size_t rows = 0, cols = 0;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::size_t count = 0;
        while (std::getline(fields, field, ',')) {
            ++count;
            try {
                std::size_t used = 0;
                const double value = std::stod(field, &used);
                while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
                    ++used;
                if (used != field.size()) throw std::invalid_argument(field);
                data.push_back(value);
            } catch (const std::exception&) {
                throw IoError(context + ": line " + std::to_string(line_no) + ", field " +
                              std::to_string(count) + ": not a number: '" + field + "'");
            }
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw IoError(context + ": line " + std::to_string(line_no) + " has " +
                          std::to_string(count) + " fields, expected " + std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) throw IoError(context + ": no rows");
    return Matrix(rows, cols, std::move(data));
}

inline std::string matrix_to_csv(const Matrix& m) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
    return out.str();
}

// Accepts either format; JSON files start with '{'.
inline Matrix load_matrix_file(const std::string& path) {
    const std::string text = read_file(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return matrix_from_json(parse_json(text, path), path);
    return matrix_from_csv(text, path);
}

inline Vector load_vector_file(const std::string& path) {
    return vector_from_json(parse_json(read_file(path), path), path);
}

inline json support_to_json(const SupportSet& s) {
    json arr = json::array();
    for (int i : s.indices) arr.push_back(i + 1);  // 1-based on the wire
    return arr;
}

inline SupportSet support_from_json(const json& j, const std::string& context) {
    std::vector<int> indices;
    for (const auto& e : j) {
        const int idx = e.get<int>();
        if (idx < 1) throw IoError(context + ": support indices are 1-based");
        indices.push_back(idx - 1);
    }
    return SupportSet(std::move(indices));
}

inline json decomposition_to_json(const Decomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms)
        terms.push_back(json{{"x", t.weight}, {"w", vector_to_json(t.vector)}});
    return json{{"k", d.input.k},
                {"C", d.input.capacity},
                {"v", vector_to_json(d.input.v)},
                {"terms", std::move(terms)}};
}

inline Decomposition decomposition_from_json(const json& j, const std::string& context) {
    for (const char* field : {"k", "C", "v", "terms"})
        if (!j.contains(field))
            throw IoError(context + ": missing field '" + field + "'");
    DecompositionInput input(vector_from_json(j["v"], context + ".v"), j["k"].get<int>(),
                             j["C"].get<double>());
    Decomposition d{std::move(input), {}};
    for (const auto& t : j["terms"])
        d.terms.push_back({t.at("x").get<double>(),
                           vector_from_json(t.at("w"), context + ".terms.w")});
    return d;
}

inline json rip_report_to_json(const RipReport& r) {
    return json{{"k", r.k},
                {"k_prime", r.k_prime},
                {"delta", r.delta},
                {"theta", r.theta},
                {"delta_witness", support_to_json(r.delta_witness)},
                {"theta_witness",
                 json::array({support_to_json(r.theta_witness.first),
                              support_to_json(r.theta_witness.second)})},
                {"condition_value", r.condition_value},
                {"condition_holds", r.condition_holds}};
}

inline json recovery_result_to_json(const RecoveryResult& r) {
    json out{{"beta_hat", vector_to_json(r.beta_hat)},
             {"residual", r.residual},
             {"l1_value", r.l1_value},
             {"lp_status", to_string(r.lp_status)},
             {"lp_iterations", r.lp_iterations}};
    if (r.has_reference) out["exact"] = r.exact;
    return out;
}

}  // namespace sparsedecomp
