#include "json_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace stratnorm::cli {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(where + ": missing field '" + key + "'");
    return j.at(key);
}

std::size_t positive_int(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !j.is_number_integer())
        throw ParseError(where + ": expected a positive integer");
    const long long v = j.get<long long>();
    if (v < 1) throw ParseError(where + ": expected a positive integer");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> dims_list(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array");
    std::vector<std::size_t> out;
    for (const auto& v : j) out.push_back(positive_int(v, where));
    return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ParseError(what + ": matrix must be a nonempty array");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
    if (cols == 0) throw ParseError(what + ": matrix rows must be nonempty arrays");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw ParseError(what + ": ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& cell = row.at(k);
            if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
                !cell.at(1).is_number())
                throw ParseError(what + ": entries must be [re, im] pairs");
            m(i, k) = cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    if (!m.all_finite()) throw ParseError(what + ": non-finite entry");
    return m;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k)
            row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json shape_to_json(const InteractionShape& shape) {
    json s;
    s["r"] = shape.rounds();
    s["in_dims"] = shape.in_dims;
    s["out_dims"] = shape.out_dims;
    return s;
}

nlohmann::json operator_entry(const ComplexMatrix& m, const std::string& role,
                              const std::optional<std::string>& outcome) {
    json e;
    e["role"] = role;
    if (outcome) e["outcome"] = *outcome;
    e["matrix"] = matrix_to_json(m);
    return e;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }

    if (need(j, "schema_version", path).get<std::string>() != "1")
        throw ParseError(path + ": unsupported schema_version (expected \"1\")");

    ProblemFile pf;
    const json& shape = need(j, "shape", path);
    const std::size_t r = positive_int(need(shape, "r", path + ".shape"), path + ".shape.r");
    pf.shape = InteractionShape(dims_list(need(shape, "in_dims", path), path + ".in_dims"),
                                dims_list(need(shape, "out_dims", path), path + ".out_dims"));
    if (pf.shape.rounds() != r)
        throw ParseError(path + ": shape.r does not match the dimension lists");

    if (j.contains("options")) {
        const json& o = j.at("options");
        if (o.contains("tol_gap")) pf.options.tol_gap = o.at("tol_gap").get<double>();
        if (o.contains("tol_feas")) pf.options.tol_feas = o.at("tol_feas").get<double>();
        if (o.contains("max_iter")) pf.options.max_iter = o.at("max_iter").get<int>();
    }

    if (j.contains("operators")) {
        const json& ops = j.at("operators");
        if (!ops.is_object()) throw ParseError(path + ": operators must be an object");
        for (const auto& [name, entry] : ops.items()) {
            LoadedOperator op;
            op.name = name;
            op.role = need(entry, "role", path + ".operators." + name).get<std::string>();
            if (op.role != "hermitian" && op.role != "strategy" && op.role != "costrategy")
                throw ParseError(path + ": operator '" + name + "' has unknown role '" +
                                 op.role + "'");
            if (entry.contains("outcome"))
                op.outcome = entry.at("outcome").get<std::string>();
            op.matrix = matrix_from_json(need(entry, "matrix", path + ".operators." + name),
                                         path + ".operators." + name);
            const std::size_t full = pf.shape.out_total() * pf.shape.in_total();
            if (op.matrix.rows() != full || op.matrix.cols() != full)
                throw ParseError(path + ": operator '" + name + "' is " +
                                 std::to_string(op.matrix.rows()) + "x" +
                                 std::to_string(op.matrix.cols()) + " but the shape needs " +
                                 std::to_string(full));
            pf.operators.push_back(std::move(op));
        }
        // nlohmann objects iterate in sorted key order already; keep explicit
        std::sort(pf.operators.begin(), pf.operators.end(),
                  [](const LoadedOperator& a, const LoadedOperator& b) { return a.name < b.name; });
    }

    if (j.contains("kind")) {
        pf.kind = j.at("kind").get<std::string>();
        pf.memory_dims = dims_list(need(j, "memory_dims", path), path + ".memory_dims");
        const json& maps = need(j, "round_maps", path);
        if (!maps.is_array() || maps.size() != r)
            throw ParseError(path + ": round_maps must list one Choi matrix per round");
        for (std::size_t i = 0; i < maps.size(); ++i)
            pf.round_maps.push_back(
                matrix_from_json(maps.at(i), path + ".round_maps[" + std::to_string(i) + "]"));
        if (j.contains("initial_state"))
            pf.initial_state = matrix_from_json(j.at("initial_state"), path + ".initial_state");
        if (j.contains("measurement")) {
            for (const auto& [label, m] : j.at("measurement").items())
                pf.measurement.emplace(
                    label, matrix_from_json(m, path + ".measurement." + label));
        }
    }
    return pf;
}

OperationalStrategy to_operational_strategy(const ProblemFile& pf) {
    if (!pf.kind || *pf.kind != "operational_strategy")
        throw ParseError("file does not describe an operational strategy");
    const std::size_t r = pf.shape.rounds();
    if (pf.memory_dims.size() != r)
        throw ParseError("operational strategy needs memory_dims Z_1..Z_r");
    OperationalStrategy os;
    os.shape = pf.shape;
    os.memory_dims = pf.memory_dims;
    for (std::size_t i = 1; i <= r; ++i) {
        RoundChannel ch;
        std::vector<Factor> outs = {{InteractionShape::y_label(i), pf.shape.out_dim(i)},
                                    {OperationalStrategy::z_label(i), pf.memory_dims[i - 1]}};
        std::vector<Factor> ins = {{InteractionShape::x_label(i), pf.shape.in_dim(i)}};
        if (i >= 2)
            ins.push_back({OperationalStrategy::z_label(i - 1), pf.memory_dims[i - 2]});
        for (const auto& f : outs) ch.out_labels.push_back(f.label);
        for (const auto& f : ins) ch.in_labels.push_back(f.label);
        std::vector<Factor> fs = outs;
        fs.insert(fs.end(), ins.begin(), ins.end());
        try {
            ch.choi = LabeledOperator(pf.round_maps[i - 1], FactorList(std::move(fs)));
        } catch (const std::invalid_argument& e) {
            throw ParseError("round " + std::to_string(i) + ": " + e.what());
        }
        os.round_maps.push_back(std::move(ch));
    }
    return os;
}

OperationalCoStrategy to_operational_costrategy(const ProblemFile& pf) {
    if (!pf.kind || *pf.kind != "operational_costrategy")
        throw ParseError("file does not describe an operational co-strategy");
    const std::size_t r = pf.shape.rounds();
    if (pf.memory_dims.size() != r + 1)
        throw ParseError("operational co-strategy needs memory_dims W_0..W_r");
    if (!pf.initial_state) throw ParseError("operational co-strategy needs initial_state");
    OperationalCoStrategy oc;
    oc.shape = pf.shape;
    oc.memory_dims = pf.memory_dims;
    try {
        oc.initial_state = LabeledOperator(
            *pf.initial_state,
            FactorList({{InteractionShape::x_label(1), pf.shape.in_dim(1)},
                        {OperationalCoStrategy::w_label(0), pf.memory_dims[0]}}));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("initial_state: ") + e.what());
    }
    for (std::size_t i = 1; i <= r; ++i) {
        RoundChannel ch;
        std::vector<Factor> outs;
        if (i < r) outs.push_back({InteractionShape::x_label(i + 1), pf.shape.in_dim(i + 1)});
        outs.push_back({OperationalCoStrategy::w_label(i), pf.memory_dims[i]});
        const std::vector<Factor> ins = {
            {InteractionShape::y_label(i), pf.shape.out_dim(i)},
            {OperationalCoStrategy::w_label(i - 1), pf.memory_dims[i - 1]}};
        for (const auto& f : outs) ch.out_labels.push_back(f.label);
        for (const auto& f : ins) ch.in_labels.push_back(f.label);
        std::vector<Factor> fs = outs;
        fs.insert(fs.end(), ins.begin(), ins.end());
        try {
            ch.choi = LabeledOperator(pf.round_maps[i - 1], FactorList(std::move(fs)));
        } catch (const std::invalid_argument& e) {
            throw ParseError("round " + std::to_string(i) + ": " + e.what());
        }
        oc.round_maps.push_back(std::move(ch));
    }
    return oc;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void emit(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                escape_string(key, out);
                out += ':';
                emit(value, out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                emit(j.at(i), out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            escape_string(j.get<std::string>(), out);
            break;
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            break;
        }
        case json::value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%" PRId64, j.get<std::int64_t>());
            out += buf;
            break;
        }
        case json::value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%" PRIu64, j.get<std::uint64_t>());
            out += buf;
            break;
        }
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        default:
            out += "null";
    }
}

}  // namespace

std::string dump_deterministic(const json& j) {
    std::string out;
    emit(j, out);
    out += '\n';
    return out;
}

void write_output(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << dump_deterministic(j);
}

}  // namespace stratnorm::cli
