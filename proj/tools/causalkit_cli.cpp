#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "causalkit/bell.hpp"
#include "causalkit/casebook.hpp"
#include "causalkit/discovery.hpp"
#include "causalkit/faithfulness.hpp"
#include "causalkit/model_io.hpp"

namespace ck = causalkit;

namespace {

struct GlobalOptions {
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "text";
};

ck::CISet parse_ci_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    nlohmann::json root = nlohmann::json::parse(in);
    std::vector<std::string> variables = root.at("variables").get<std::vector<std::string>>();
    ck::CISet generators(variables);
    for (const auto& s : root.at("statements")) {
        auto mask = [&](const char* key) {
            ck::VarSet set = 0;
            if (!s.contains(key)) return set;
            for (const auto& name : s.at(key)) {
                set |= ck::single(generators.index_of(name.get<std::string>()));
            }
            return set;
        };
        generators.insert(mask("x"), mask("y"), mask("z"));
    }
    return generators;
}

std::vector<std::pair<int, int>> parse_order_constraints(const std::vector<std::string>& specs,
                                                         const std::vector<std::string>& vars) {
    auto index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == name) return static_cast<int>(i);
        }
        throw std::runtime_error("unknown variable '" + name + "' in ordering constraint");
    };
    std::vector<std::pair<int, int>> out;
    for (const auto& spec : specs) {
        const auto pos = spec.find('<');
        if (pos == std::string::npos) {
            throw std::runtime_error("ordering constraints look like Before<After");
        }
        out.emplace_back(index_of(spec.substr(0, pos)), index_of(spec.substr(pos + 1)));
    }
    return out;
}

void emit(const GlobalOptions& opts, const std::string& name, const std::string& content) {
    if (opts.out.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::create_directories(opts.out);
    const auto path = std::filesystem::path(opts.out) / name;
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    file << content;
    std::cout << "wrote " << path.string() << "\n";
}

ck::VarSet names_to_set(const ck::Dag& dag, const std::vector<std::string>& names) {
    ck::VarSet set = 0;
    for (const auto& name : names) set |= ck::single(dag.index_of(name));
    return set;
}

std::string ci_to_json(const ck::CISet& set) {
    nlohmann::ordered_json root;
    root["variables"] = set.variables();
    root["statements"] = nlohmann::ordered_json::array();
    for (const auto& s : set) {
        nlohmann::ordered_json entry;
        auto names = [&](ck::VarSet mask) {
            std::vector<std::string> out;
            for (int i : ck::set_indices(mask)) {
                out.push_back(set.variables()[static_cast<std::size_t>(i)]);
            }
            return out;
        };
        entry["x"] = names(s.x);
        entry["y"] = names(s.y);
        entry["z"] = names(s.z);
        root["statements"].push_back(entry);
    }
    return root.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causalkit - exact causal discovery on discrete models"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--tol", global.tol, "floating CI tolerance")->capture_default_str();
    app.add_option("--seed", global.seed, "seed for randomized operations")->capture_default_str();
    app.add_option("--out", global.out, "output directory (default: stdout)");
    app.add_option("--format", global.format, "text|json|dot")
        ->check(CLI::IsMember({"text", "json", "dot"}))
        ->capture_default_str();

    // model show|joint|ci|dot
    auto* model_cmd = app.add_subcommand("model", "inspect a model file");
    model_cmd->fallthrough();
    std::string model_path;
    std::string model_action;
    model_cmd->add_option("action", model_action, "show|joint|ci|dot")
        ->required()
        ->check(CLI::IsMember({"show", "joint", "ci", "dot"}));
    model_cmd->add_option("--in", model_path, "model file")->required();
    std::string ci_scope = "full";
    model_cmd->add_option("--scope", ci_scope, "full|pairs")
        ->check(CLI::IsMember({"full", "pairs"}));

    // discover nolatent|latent|pattern
    auto* discover_cmd = app.add_subcommand("discover", "run discovery on a CI set");
    discover_cmd->fallthrough();
    std::string discover_action;
    std::string ci_path;
    std::vector<std::string> order_specs;
    std::string latent_mode = "pairwise";
    int max_latents = 6;
    discover_cmd->add_option("action", discover_action, "nolatent|latent|pattern")
        ->required()
        ->check(CLI::IsMember({"nolatent", "latent", "pattern"}));
    discover_cmd->add_option("--ci", ci_path, "CI set file (treated as a generating set)")
        ->required();
    discover_cmd->add_option("--order", order_specs, "ordering constraints, e.g. S<T");
    discover_cmd->add_option("--mode", latent_mode, "pairwise|unrestricted")
        ->check(CLI::IsMember({"pairwise", "unrestricted"}));
    discover_cmd->add_option("--max-latents", max_latents, "latent count cap")
        ->capture_default_str();

    // faithfulness classify|perturb
    auto* faith_cmd = app.add_subcommand("faithfulness", "classify independences / perturb");
    faith_cmd->fallthrough();
    std::string faith_action;
    std::string faith_model_path;
    std::vector<std::string> observed_names;
    std::vector<std::string> x_names, y_names, z_names;
    int trials = 200;
    std::string magnitude = "1/10";
    faith_cmd->add_option("action", faith_action, "classify|perturb")
        ->required()
        ->check(CLI::IsMember({"classify", "perturb"}));
    faith_cmd->add_option("--model", faith_model_path, "model file")->required();
    faith_cmd->add_option("--observed", observed_names, "observed variables");
    faith_cmd->add_option("--x", x_names, "statement X side");
    faith_cmd->add_option("--y", y_names, "statement Y side");
    faith_cmd->add_option("--z", z_names, "statement conditioning set");
    faith_cmd->add_option("--trials", trials, "perturbation trials")->capture_default_str();
    faith_cmd->add_option("--magnitude", magnitude, "perturbation magnitude (rational)")
        ->capture_default_str();

    // bell tables|joint|ci|chsh
    auto* bell_cmd = app.add_subcommand("bell", "exact two-qubit experiment distributions");
    bell_cmd->fallthrough();
    std::string bell_action;
    std::string bell_kind = "chsh";
    double bell_p = 0.5;
    bell_cmd->add_option("action", bell_action, "tables|joint|ci|chsh")
        ->required()
        ->check(CLI::IsMember({"tables", "joint", "ci", "chsh"}));
    bell_cmd->add_option("--kind", bell_kind, "epr|chsh")
        ->check(CLI::IsMember({"epr", "chsh"}))
        ->capture_default_str();
    bell_cmd->add_option("--p", bell_p, "state weight")->capture_default_str();

    // case run|list
    auto* case_cmd = app.add_subcommand("case", "run the casebook");
    case_cmd->fallthrough();
    std::string case_action;
    std::vector<std::string> case_args;
    case_cmd->add_option("action", case_action, "run|list")
        ->required()
        ->check(CLI::IsMember({"run", "list"}));
    case_cmd->add_option("names", case_args, "case names (or 'all')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (model_cmd->parsed()) {
            const ck::CausalModel model = ck::load_model(model_path);
            if (model_action == "show") {
                emit(global, "model.json", ck::serialize_model(model));
            } else if (model_action == "joint") {
                emit(global, "joint.txt", ck::joint_from_model(model, global.tol).to_string());
            } else if (model_action == "ci") {
                const auto scope =
                    ci_scope == "full" ? ck::CiScope::full_sets : ck::CiScope::singleton_pairs;
                const ck::CISet found = ck::joint_from_model(model, global.tol).all_ci(scope);
                emit(global, "ci.json",
                     global.format == "json" ? ci_to_json(found) : found.to_string() + "\n");
            } else {
                emit(global, "model.dot", model.dag().to_dot("model"));
            }
        } else if (discover_cmd->parsed()) {
            const ck::CISet generators = parse_ci_file(ci_path);
            const ck::CISet ci = ck::semigraphoid_closure(generators);
            const auto constraints = parse_order_constraints(order_specs, ci.variables());
            if (discover_action == "nolatent") {
                const auto candidates = ck::wermuth_lauritzen(ci, ci.variables(), constraints);
                const auto faithful = ck::filter_faithful(candidates, ci);
                std::ostringstream os;
                os << candidates.size() << " candidate structures, " << faithful.size()
                   << " faithful\n";
                int index = 0;
                for (const auto& dag : candidates) {
                    os << "candidate " << ++index << ":\n" << dag.to_dot("candidate");
                }
                index = 0;
                for (const auto& dag : faithful) {
                    os << "faithful " << ++index << ":\n" << dag.to_dot("faithful");
                }
                emit(global, "nolatent.txt", os.str());
            } else if (discover_action == "latent") {
                const auto mode = latent_mode == "pairwise" ? ck::LatentMode::pairwise
                                                            : ck::LatentMode::unrestricted;
                auto structures =
                    ck::enumerate_latent_structures(ci, ci.variables(), mode, max_latents);
                structures = ck::filter_structures_by_order(structures, constraints);
                std::ostringstream os;
                os << structures.size() << " structures\n";
                int index = 0;
                for (const auto& s : structures) {
                    os << "structure " << ++index << " (d-separations below):\n"
                       << s.to_dot("structure")
                       << ck::dsep_ci_set(s.dag(), s.observed_set()).to_string() << "\n";
                }
                emit(global, "latent.txt", os.str());
            } else {
                const auto pattern = ck::icstar_pattern(ci, ci.variables());
                if (!pattern) {
                    emit(global, "pattern.txt", "no faithful structure\n");
                    return 1;
                }
                emit(global, "pattern.dot", pattern->to_dot("pattern"));
            }
        } else if (faith_cmd->parsed()) {
            const ck::CausalModel model = ck::load_model(faith_model_path);
            if (faith_action == "classify") {
                ck::VarSet observed = observed_names.empty()
                                          ? model.dag().all_vertices()
                                          : names_to_set(model.dag(), observed_names);
                ck::PerturbOptions popts;
                popts.trials = trials;
                popts.magnitude = ck::parse_rational(magnitude);
                popts.seed = global.seed;
                const auto report = ck::classify_independences(model, observed, popts);
                emit(global, "faithfulness.txt",
                     global.format == "json" ? report.to_json() : report.to_text());
            } else {
                if (x_names.empty() || y_names.empty()) {
                    throw std::runtime_error("perturb needs --x and --y");
                }
                const auto s = ck::CIStatement::make(names_to_set(model.dag(), x_names),
                                                     names_to_set(model.dag(), y_names),
                                                     names_to_set(model.dag(), z_names));
                const double survival = ck::perturbation_stability(
                    model, s, trials, ck::parse_rational(magnitude), global.seed);
                std::ostringstream os;
                os << "survival " << survival << " over " << trials << " trials\n";
                emit(global, "perturb.txt", os.str());
            }
        } else if (bell_cmd->parsed()) {
            const auto kind = bell_kind == "epr" ? ck::BellKind::epr : ck::BellKind::chsh;
            const ck::BellSpec spec = ck::preset_spec(kind, bell_p);
            if (bell_action == "tables") {
                std::ostringstream os;
                for (int s = 0; s < 2; ++s) {
                    for (int t = 0; t < 2; ++t) {
                        const auto table = ck::outcome_distribution(spec, s, t);
                        os << "P(A,B | S=" << s << ",T=" << t << "):\n";
                        for (int a = 0; a < 2; ++a) {
                            os << "  " << table[a][0] << " " << table[a][1] << "\n";
                        }
                    }
                }
                emit(global, "tables.txt", os.str());
            } else if (bell_action == "joint") {
                emit(global, "joint.txt", ck::bell_joint(spec, global.tol).to_string());
            } else if (bell_action == "ci") {
                const auto found = ck::bell_joint(spec, global.tol).all_ci(ck::CiScope::full_sets);
                emit(global, "ci.json",
                     global.format == "json" ? ci_to_json(found) : found.to_string() + "\n");
            } else {
                std::ostringstream os;
                os << ck::chsh_value(spec) << "\n";
                emit(global, "chsh.txt", os.str());
            }
        } else if (case_cmd->parsed()) {
            if (case_action == "list") {
                for (const auto& name : ck::case_names()) std::cout << name << "\n";
                return 0;
            }
            std::vector<std::string> names = case_args;
            if (names.empty() || (names.size() == 1 && names[0] == "all")) {
                names = ck::case_names();
            }
            ck::RunOptions opts;
            opts.tolerance = global.tol;
            opts.seed = global.seed;
            bool all_pass = true;
            for (const auto& name : names) {
                const ck::CaseResult result = ck::run_case(name, opts);
                std::cout << result.to_text();
                if (!global.out.empty()) ck::write_artifacts(result, global.out);
                all_pass &= result.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
