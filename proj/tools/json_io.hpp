#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "stratnorm/norms.hpp"
#include "stratnorm/operational.hpp"

namespace stratnorm::cli {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadedOperator {
    std::string name;
    std::string role;  // "hermitian" | "strategy" | "costrategy"
    std::optional<std::string> outcome;
    ComplexMatrix matrix;
};

/// One parsed problem file (schema version "1"). Plain Choi-operator files
/// carry `operators`; operational files carry `kind`, `memory_dims`,
/// `round_maps` and friends.
struct ProblemFile {
    InteractionShape shape;
    std::vector<LoadedOperator> operators;  // sorted by name
    NormOptions options;

    std::optional<std::string> kind;
    std::vector<std::size_t> memory_dims;
    std::optional<ComplexMatrix> initial_state;
    std::vector<ComplexMatrix> round_maps;
    std::map<std::string, ComplexMatrix> measurement;
};

ProblemFile load_problem(const std::string& path);

OperationalStrategy to_operational_strategy(const ProblemFile& pf);
OperationalCoStrategy to_operational_costrategy(const ProblemFile& pf);

/// Entries as nested row-major arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json shape_to_json(const InteractionShape& shape);

nlohmann::json operator_entry(const ComplexMatrix& m, const std::string& role,
                              const std::optional<std::string>& outcome = std::nullopt);

/// Canonical text form: keys sorted, floating point with 17 significant
/// digits. Byte-identical across runs for identical documents.
std::string dump_deterministic(const nlohmann::json& j);

void write_output(const std::string& path, const nlohmann::json& j);

}  // namespace stratnorm::cli
