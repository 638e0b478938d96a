#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "stratnorm/discrimination.hpp"

using namespace stratnorm;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMath = 2;
constexpr int kExitSolver = 3;

bool log_enabled() {
    const char* v = std::getenv("STRATNORM_LOG");
    return v != nullptr && *v != '\0';
}

void log_line(const std::string& s) {
    if (log_enabled()) std::cerr << "[stratnorm] " << s << "\n";
}

LabeledOperator canonical_operator(const cli::ProblemFile& pf, const cli::LoadedOperator& op) {
    return LabeledOperator(op.matrix, pf.shape.canonical_factors());
}

// The operator a norm-style command acts on: named "X" when present,
// otherwise the unique operator in the file.
const cli::LoadedOperator& pick_subject(const cli::ProblemFile& pf) {
    for (const auto& op : pf.operators)
        if (op.name == "X") return op;
    if (pf.operators.size() == 1) return pf.operators.front();
    throw cli::ParseError("expected an operator named 'X' (or a single operator)");
}

MeasuringStrategy collect_family(const cli::ProblemFile& pf) {
    MeasuringStrategy ms;
    ms.shape = pf.shape;
    bool have_role = false;
    for (const auto& op : pf.operators) {
        if (!op.outcome) continue;
        if (op.role == "hermitian")
            throw cli::ParseError("outcome operators need role strategy or costrategy");
        const Role role = op.role == "strategy" ? Role::strategy : Role::costrategy;
        if (have_role && role != ms.role)
            throw cli::ParseError("outcome operators mix roles");
        ms.role = role;
        have_role = true;
        if (!ms.outcomes.emplace(*op.outcome, canonical_operator(pf, op)).second)
            throw cli::ParseError("duplicate outcome label '" + *op.outcome + "'");
    }
    if (!have_role) throw cli::ParseError("no outcome-labeled operators in the file");
    return ms;
}

json norm_result_json(const cli::ProblemFile& pf, const NormResult& nr) {
    json out;
    out["schema_version"] = "1";
    out["shape"] = cli::shape_to_json(pf.shape);
    out["value"] = nr.value;
    out["gap"] = nr.gap;
    out["cert_p"] = nr.cert_p;
    json res;
    res["primal_inequality"] = nr.residuals.primal_ineq;
    res["dual_inequality"] = nr.residuals.dual_ineq;
    res["saturation"] = nr.saturation_residual;
    res["objective_drift"] = nr.objective_drift;
    out["residuals"] = res;
    const std::string opt_role = role_name(nr.optimizer.role);
    json ops;
    ops["T0"] = cli::operator_entry(nr.optimizer.outcomes.at("0").matrix(), opt_role, "0");
    ops["T1"] = cli::operator_entry(nr.optimizer.outcomes.at("1").matrix(), opt_role, "1");
    ops["certificate_S"] =
        cli::operator_entry(nr.certificate.op.matrix(), role_name(nr.certificate.role));
    out["operators"] = ops;
    return out;
}

struct ValidationOutcome {
    std::string text;
    bool all_accepted = true;
};

ValidationOutcome validate_file(const std::string& path, std::optional<double> tol) {
    const cli::ProblemFile pf = cli::load_problem(path);
    ValidationOutcome out;
    std::ostringstream os;
    os << path << ":\n";

    bool anything = false;
    // measuring families, grouped by role
    for (const Role role : {Role::strategy, Role::costrategy}) {
        MeasuringStrategy ms;
        ms.shape = pf.shape;
        ms.role = role;
        for (const auto& op : pf.operators)
            if (op.outcome && op.role == role_name(role))
                ms.outcomes.emplace(*op.outcome, canonical_operator(pf, op));
        if (ms.outcomes.empty()) continue;
        anything = true;
        const LadderWitness w = validate_measuring(ms, tol);
        os << "  measuring " << role_name(role) << " (" << ms.outcomes.size()
           << " outcomes): " << (w.accepted ? "ACCEPT" : "REJECT") << "\n";
        for (const auto& r : w.residuals)
            os << "    " << r.name << ": " << r.value << "\n";
        out.all_accepted = out.all_accepted && w.accepted;
    }
    // single non-measuring operators
    for (const auto& op : pf.operators) {
        if (op.outcome || op.role == "hermitian") continue;
        anything = true;
        const Role role = op.role == "strategy" ? Role::strategy : Role::costrategy;
        const LadderWitness w =
            role == Role::strategy
                ? validate_strategy(canonical_operator(pf, op), pf.shape, tol)
                : validate_costrategy(canonical_operator(pf, op), pf.shape, tol);
        os << "  " << op.name << " (" << op.role << "): "
           << (w.accepted ? "ACCEPT" : "REJECT") << "\n";
        for (const auto& r : w.residuals)
            os << "    " << r.name << ": " << r.value << "\n";
        out.all_accepted = out.all_accepted && w.accepted;
    }
    if (!anything)
        throw cli::ParseError(path + ": nothing to validate (no strategy/costrategy operators)");
    out.text = os.str();
    return out;
}

int run_validate(const std::vector<std::string>& files, std::optional<double> tol, int jobs) {
    std::vector<ValidationOutcome> results(files.size());
    std::vector<std::string> errors(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= files.size()) return;
            try {
                results[k] = validate_file(files[k], tol);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool parse_failure = false, reject = false;
    for (std::size_t k = 0; k < files.size(); ++k) {
        if (!errors[k].empty()) {
            std::cerr << "error: " << errors[k] << "\n";
            parse_failure = true;
            continue;
        }
        std::cout << results[k].text;
        reject = reject || !results[k].all_accepted;
    }
    if (parse_failure) return kExitUsage;
    return reject ? kExitMath : kExitOk;
}

int run_norm(const std::string& file, bool dual, std::optional<double> tol,
             const std::string& out_path, bool diamond_mode) {
    const cli::ProblemFile pf = cli::load_problem(file);
    if (diamond_mode && pf.shape.rounds() != 1)
        throw cli::ParseError("diamond expects a 1-round shape");
    NormOptions opts = pf.options;
    if (tol) opts.tol_gap = *tol;
    const LabeledOperator x = canonical_operator(pf, pick_subject(pf));
    const NormResult nr =
        dual ? dual_strategy_norm(x, pf.shape, opts) : strategy_norm(x, pf.shape, opts);
    if (nr.status != SolveStatus::optimal) {
        std::cerr << "solver did not reach optimality (status "
                  << (nr.status == SolveStatus::max_iter ? "max_iter" : "failure") << ")\n";
        return kExitSolver;
    }
    log_line("solved in " + std::to_string(nr.iterations) + " iterations");
    std::cout << (diamond_mode ? "diamond norm" : (dual ? "dual strategy norm" : "strategy norm"))
              << " = " << std::setprecision(12) << nr.value << "\n"
              << "gap = " << nr.gap << "\n"
              << "certificate p = " << nr.cert_p << "\n";
    if (!out_path.empty()) cli::write_output(out_path, norm_result_json(pf, nr));
    return kExitOk;
}

int run_max_output(const std::string& file, const std::string& outcome,
                   const std::string& out_path) {
    const cli::ProblemFile pf = cli::load_problem(file);
    const MeasuringStrategy ms = collect_family(pf);
    const LadderWitness w = validate_measuring(ms);
    if (!w.accepted) {
        std::cerr << "measuring strategy invalid: worst residual " << w.worst_value() << " ("
                  << w.worst_name() << ")\n";
        return kExitMath;
    }
    const MaxOutputResult mo = max_output_probability(ms, outcome, pf.options);
    std::cout << "max output probability for '" << outcome << "' = " << std::setprecision(12)
              << mo.value << "\n"
              << "certificate p = " << mo.cert_p << "\n";
    if (!out_path.empty()) {
        json out;
        out["schema_version"] = "1";
        out["shape"] = cli::shape_to_json(pf.shape);
        out["value"] = mo.value;
        out["cert_p"] = mo.cert_p;
        json ops;
        ops["certificate_S"] =
            cli::operator_entry(mo.certificate.op.matrix(), role_name(mo.certificate.role));
        out["operators"] = ops;
        cli::write_output(out_path, out);
    }
    return kExitOk;
}

int run_decompose(const std::string& file, const std::string& out_path) {
    const cli::ProblemFile pf = cli::load_problem(file);
    const LabeledOperator x = canonical_operator(pf, pick_subject(pf));
    const MeasuringStrategy ms = decompose_unit_ball(x, pf.shape, pf.options);
    std::cout << "decomposed into a two-outcome measuring strategy (S0 - S1 = X)\n";
    if (!out_path.empty()) {
        json out;
        out["schema_version"] = "1";
        out["shape"] = cli::shape_to_json(pf.shape);
        json ops;
        ops["S0"] = cli::operator_entry(ms.outcomes.at("0").matrix(), "strategy", "0");
        ops["S1"] = cli::operator_entry(ms.outcomes.at("1").matrix(), "strategy", "1");
        out["operators"] = ops;
        cli::write_output(out_path, out);
    }
    return kExitOk;
}

ConvexStrategySet load_vertex_set(const cli::ProblemFile& pf, const std::string& path) {
    std::vector<StrategyRep> verts;
    for (const auto& op : pf.operators) {
        if (op.role == "hermitian") continue;
        const Role role = op.role == "strategy" ? Role::strategy : Role::costrategy;
        verts.push_back(StrategyRep{canonical_operator(pf, op), pf.shape, role});
    }
    if (verts.empty()) throw cli::ParseError(path + ": no vertex operators");
    return ConvexStrategySet(std::move(verts));
}

int run_discriminate(const std::string& file_a, const std::string& file_b,
                     const std::string& out_path) {
    const cli::ProblemFile pa = cli::load_problem(file_a);
    const cli::ProblemFile pb = cli::load_problem(file_b);
    const ConvexStrategySet a = load_vertex_set(pa, file_a);
    const ConvexStrategySet b = load_vertex_set(pb, file_b);
    const SeparatorResult sep = separator(a, b, pa.options);
    if (sep.degenerate) {
        std::cerr << "degenerate instance: " << sep.note << "\n";
        return kExitMath;
    }
    const MinDistanceResult md = min_distance(a, b, pa.options);
    const double success =
        guessing_game(sep.separator, md.closest_a, md.closest_b);

    std::cout << "minimum distance = " << std::setprecision(12) << sep.distance << "\n";
    std::cout << "weights A =";
    for (double w : sep.weights_a) std::cout << " " << w;
    std::cout << "\nweights B =";
    for (double w : sep.weights_b) std::cout << " " << w;
    std::cout << "\nmargins:\n";
    for (const auto& row : sep.margins) {
        std::cout << " ";
        for (double m : row) std::cout << " " << m;
        std::cout << "\n";
    }
    std::cout << "success probability at the closest pair = " << success << "\n";

    if (!out_path.empty()) {
        json out;
        out["schema_version"] = "1";
        out["shape"] = cli::shape_to_json(pa.shape);
        out["distance"] = sep.distance;
        out["weights_a"] = sep.weights_a;
        out["weights_b"] = sep.weights_b;
        out["margins"] = sep.margins;
        out["success_probability"] = success;
        const std::string role = role_name(sep.separator.role);
        json ops;
        ops["T0"] = cli::operator_entry(sep.separator.outcomes.at("0").matrix(), role, "0");
        ops["T1"] = cli::operator_entry(sep.separator.outcomes.at("1").matrix(), role, "1");
        out["operators"] = ops;
        cli::write_output(out_path, out);
    }
    return kExitOk;
}

int run_simulate(const std::string& strategy_file, const std::string& costrategy_file,
                 bool with_oracle, const std::string& out_path) {
    const cli::ProblemFile ps = cli::load_problem(strategy_file);
    const cli::ProblemFile pc = cli::load_problem(costrategy_file);
    const OperationalStrategy os = cli::to_operational_strategy(ps);
    const OperationalCoStrategy oc = cli::to_operational_costrategy(pc);

    auto meas_or_trivial = [](const cli::ProblemFile& pf, std::size_t dim) {
        if (!pf.measurement.empty()) return pf.measurement;
        std::map<std::string, ComplexMatrix> m;
        m.emplace("0", ComplexMatrix::identity(dim));
        return m;
    };
    const auto am = meas_or_trivial(ps, os.memory_dims.back());
    const auto bm = meas_or_trivial(pc, oc.memory_dims.back());

    const auto sm = operational_to_choi_measuring(os, am);
    const auto tm = operational_to_choi_measuring(oc, bm);
    const auto dist = interaction_probability(sm, tm);

    std::cout << "outcome distribution:\n" << std::setprecision(12);
    for (const auto& [key, p] : dist)
        std::cout << "  (" << key.first << ", " << key.second << ") = " << p << "\n";

    double deviation = 0.0;
    if (with_oracle) {
        const auto sim = simulate_interaction(os, oc, am, bm);
        for (const auto& [key, p] : dist)
            deviation = std::max(deviation, std::abs(p - sim.at(key)));
        std::cout << "max deviation from the operational simulator = " << deviation << "\n";
    }

    if (!out_path.empty()) {
        json out;
        out["schema_version"] = "1";
        out["shape"] = cli::shape_to_json(ps.shape);
        json d;
        for (const auto& [key, p] : dist) d[key.first + "," + key.second] = p;
        out["distribution"] = d;
        if (with_oracle) out["oracle_deviation"] = deviation;
        cli::write_output(out_path, out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategy r-norms, unit-ball decompositions and convex-set discrimination "
                 "for Choi representations of quantum strategies"};
    app.require_subcommand(1);

    std::vector<std::string> validate_files;
    std::optional<double> validate_tol;
    int jobs = 1;
    auto* v = app.add_subcommand("validate", "check (co-)strategy ladder constraints");
    v->add_option("files", validate_files, "problem files")->required()->expected(-1);
    v->add_option("--tol", validate_tol, "override the acceptance tolerance");
    v->add_option("--jobs", jobs, "parallelize over input files");

    std::string norm_file, norm_out;
    bool norm_dual = false;
    std::optional<double> norm_tol;
    auto* n = app.add_subcommand("norm", "strategy r-norm of a Hermitian operator");
    n->add_option("file", norm_file)->required();
    n->add_flag("--dual", norm_dual, "compute the dual norm instead");
    n->add_option("--tol", norm_tol, "duality-gap tolerance");
    n->add_option("--out", norm_out, "write optimizer and certificate JSON here");

    std::string dia_file, dia_out;
    auto* dia = app.add_subcommand("diamond", "diamond norm (one-round special case)");
    dia->add_option("file", dia_file)->required();
    dia->add_option("--out", dia_out);

    std::string mo_file, mo_outcome, mo_out;
    auto* mo = app.add_subcommand("max-output", "maximum forced-outcome probability");
    mo->add_option("file", mo_file)->required();
    mo->add_option("--outcome", mo_outcome, "outcome label")->required();
    mo->add_option("--out", mo_out);

    std::string dec_file, dec_out;
    auto* dec = app.add_subcommand("decompose", "write a unit-ball operator as S0 - S1");
    dec->add_option("file", dec_file)->required();
    dec->add_option("--out", dec_out);

    std::string dis_a, dis_b, dis_out;
    auto* dis = app.add_subcommand("discriminate", "minimum distance and separator for two "
                                                   "convex sets of strategies");
    dis->add_option("fileA", dis_a)->required();
    dis->add_option("fileB", dis_b)->required();
    dis->add_option("--out", dis_out);

    std::string sim_s, sim_c, sim_out;
    bool sim_oracle = false;
    auto* sim = app.add_subcommand("simulate", "outcome distribution of an interaction");
    sim->add_option("strategyFile", sim_s)->required();
    sim->add_option("costrategyFile", sim_c)->required();
    sim->add_flag("--oracle", sim_oracle, "cross-check against the operational simulator");
    sim->add_option("--out", sim_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (v->parsed()) return run_validate(validate_files, validate_tol, jobs);
        if (n->parsed()) return run_norm(norm_file, norm_dual, norm_tol, norm_out, false);
        if (dia->parsed()) return run_norm(dia_file, false, std::nullopt, dia_out, true);
        if (mo->parsed()) return run_max_output(mo_file, mo_outcome, mo_out);
        if (dec->parsed()) return run_decompose(dec_file, dec_out);
        if (dis->parsed()) return run_discriminate(dis_a, dis_b, dis_out);
        if (sim->parsed()) return run_simulate(sim_s, sim_c, sim_oracle, sim_out);
    } catch (const cli::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DecomposeError& e) {
        std::cerr << "error: " << e.what() << " (computed norm " << std::setprecision(12)
                  << e.computed_norm << ")\n";
        return kExitMath;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMath;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
