#include "causalkit/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace causalkit {

namespace {

using nlohmann::ordered_json;

std::string dump_double(double value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

}  // namespace

std::string serialize_model(const CausalModel& m) {
    const Dag& dag = m.dag();
    ordered_json root;
    root["variables"] = ordered_json::array();
    for (int v = 0; v < dag.vertex_count(); ++v) {
        root["variables"].push_back({{"name", dag.name(v)}, {"cardinality", m.cardinality(v)}});
    }
    root["edges"] = ordered_json::array();
    for (const auto& [parent, child] : dag.edges()) {
        root["edges"].push_back(ordered_json::array({dag.name(parent), dag.name(child)}));
    }
    ordered_json cpts = ordered_json::object();
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const Cpt& c = m.cpt(v);
        ordered_json rows = ordered_json::array();
        const auto parents = c.parents();
        for (std::size_t r = 0; r < c.row_count(); ++r) {
            ordered_json given = ordered_json::object();
            std::size_t rest = r;
            std::vector<int> values(parents.size());
            for (std::size_t i = parents.size(); i-- > 0;) {
                const auto card = static_cast<std::size_t>(c.parent_cardinalities()[i]);
                values[i] = static_cast<int>(rest % card);
                rest /= card;
            }
            for (std::size_t i = 0; i < parents.size(); ++i) {
                given[dag.name(parents[i])] = values[i];
            }
            ordered_json dist = ordered_json::array();
            if (c.mode() == NumericMode::exact) {
                for (const auto& p : c.exact_row(r)) dist.push_back(format_rational(p));
            } else {
                for (double p : c.float_row(r)) dist.push_back(p);
            }
            rows.push_back({{"given", given}, {"dist", dist}});
        }
        cpts[dag.name(v)] = rows;
    }
    root["cpts"] = cpts;
    return root.dump(2) + "\n";
}

CausalModel parse_model(const std::string& json_text) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(ModelIoCode::schema, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("variables") || !root.contains("cpts")) {
        throw ModelIoError(ModelIoCode::schema, "model file needs 'variables' and 'cpts'");
    }

    std::vector<std::string> names;
    std::vector<int> cards;
    for (const auto& v : root["variables"]) {
        if (!v.is_object() || !v.contains("name") || !v.contains("cardinality")) {
            throw ModelIoError(ModelIoCode::schema, "variable entries need 'name' and 'cardinality'");
        }
        names.push_back(v["name"].get<std::string>());
        const int card = v["cardinality"].get<int>();
        if (card < 1) throw ModelIoError(ModelIoCode::schema, "cardinality must be positive");
        cards.push_back(card);
    }
    auto index_of = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return static_cast<int>(i);
        }
        throw ModelIoError(ModelIoCode::unknown_variable, "unknown variable '" + name + "'");
    };

    std::vector<std::pair<int, int>> edges;
    if (root.contains("edges")) {
        for (const auto& e : root["edges"]) {
            if (!e.is_array() || e.size() != 2) {
                throw ModelIoError(ModelIoCode::schema, "edges must be [parent, child] pairs");
            }
            edges.emplace_back(index_of(e[0].get<std::string>()), index_of(e[1].get<std::string>()));
        }
    }
    Dag dag = [&]() {
        try {
            return Dag(names, edges);
        } catch (const std::invalid_argument& e) {
            throw ModelIoError(ModelIoCode::schema, e.what());
        }
    }();

    // Determine the numeric mode from the first dist entry.
    bool any_string = false, any_number = false;
    for (const auto& [var, rows] : root["cpts"].items()) {
        (void)var;
        for (const auto& row : rows) {
            if (!row.contains("dist")) continue;
            for (const auto& entry : row["dist"]) {
                if (entry.is_string()) any_string = true;
                else if (entry.is_number()) any_number = true;
            }
        }
    }
    if (any_string && any_number) {
        throw ModelIoError(ModelIoCode::mixed_mode, "model mixes rational and floating entries");
    }
    const bool exact = !any_number;

    std::vector<Cpt> cpts;
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const std::string& name = dag.name(v);
        if (!root["cpts"].contains(name)) {
            throw ModelIoError(ModelIoCode::schema, "missing CPT for variable '" + name + "'");
        }
        const auto parents = set_indices(dag.parent_set(v));
        std::vector<int> parent_cards;
        std::size_t row_count = 1;
        for (int p : parents) {
            parent_cards.push_back(cards[static_cast<std::size_t>(p)]);
            row_count *= static_cast<std::size_t>(parent_cards.back());
        }

        std::vector<bool> row_seen(row_count, false);
        Cpt::ExactRows exact_rows(row_count);
        Cpt::FloatRows float_rows(row_count);
        for (const auto& row : root["cpts"][name]) {
            if (!row.is_object() || !row.contains("given") || !row.contains("dist")) {
                throw ModelIoError(ModelIoCode::schema,
                                   "CPT rows of '" + name + "' need 'given' and 'dist'");
            }
            // The declared parents must match the DAG parents exactly.
            std::vector<int> values(parents.size(), -1);
            for (const auto& [pname, pvalue] : row["given"].items()) {
                const int p = index_of(pname);
                const auto it = std::find(parents.begin(), parents.end(), p);
                if (it == parents.end()) {
                    throw ModelIoError(ModelIoCode::parent_mismatch,
                                       "CPT of '" + name + "' conditions on '" + pname +
                                           "', which is not a DAG parent");
                }
                values[static_cast<std::size_t>(it - parents.begin())] = pvalue.get<int>();
            }
            for (std::size_t i = 0; i < parents.size(); ++i) {
                if (values[i] < 0) {
                    throw ModelIoError(ModelIoCode::parent_mismatch,
                                       "CPT row of '" + name + "' omits parent '" +
                                           dag.name(parents[i]) + "'");
                }
                if (values[i] >= parent_cards[i]) {
                    throw ModelIoError(ModelIoCode::schema,
                                       "parent value out of range in CPT of '" + name + "'");
                }
            }
            std::size_t r = 0;
            for (std::size_t i = 0; i < parents.size(); ++i) {
                r = r * static_cast<std::size_t>(parent_cards[i]) + static_cast<std::size_t>(values[i]);
            }
            if (row_seen[r]) {
                throw ModelIoError(ModelIoCode::schema, "duplicate CPT row in '" + name + "'");
            }
            row_seen[r] = true;

            const auto& dist = row["dist"];
            if (static_cast<int>(dist.size()) != cards[static_cast<std::size_t>(v)]) {
                throw ModelIoError(ModelIoCode::schema,
                                   "CPT row of '" + name + "' has wrong distribution length");
            }
            if (exact) {
                std::vector<Rational> entries;
                for (const auto& entry : dist) {
                    if (!entry.is_string()) {
                        throw ModelIoError(ModelIoCode::schema,
                                           "rational entries must be strings in '" + name + "'");
                    }
                    try {
                        entries.push_back(parse_rational(entry.get<std::string>()));
                    } catch (const std::invalid_argument& e) {
                        throw ModelIoError(ModelIoCode::malformed_rational,
                                           std::string(e.what()) + " in CPT of '" + name + "'");
                    }
                }
                Rational sum = 0;
                for (const auto& p : entries) sum += p;
                if (sum != 1) {
                    throw ModelIoError(ModelIoCode::row_sum,
                                       "CPT row " + std::to_string(r) + " of '" + name +
                                           "' sums to " + format_rational(sum) + ", not 1");
                }
                exact_rows[r] = std::move(entries);
            } else {
                std::vector<double> entries;
                for (const auto& entry : dist) entries.push_back(entry.get<double>());
                double sum = 0.0;
                for (double p : entries) sum += p;
                if (std::abs(sum - 1.0) > 1e-12) {
                    throw ModelIoError(ModelIoCode::row_sum,
                                       "CPT row " + std::to_string(r) + " of '" + name +
                                           "' sums to " + dump_double(sum) + ", not 1");
                }
                float_rows[r] = std::move(entries);
            }
        }
        for (std::size_t r = 0; r < row_count; ++r) {
            if (!row_seen[r]) {
                throw ModelIoError(ModelIoCode::missing_row,
                                   "CPT of '" + name + "' does not cover every parent assignment");
            }
        }
        try {
            if (exact) {
                cpts.emplace_back(v, parents, cards[static_cast<std::size_t>(v)], parent_cards,
                                  std::move(exact_rows));
            } else {
                cpts.emplace_back(v, parents, cards[static_cast<std::size_t>(v)], parent_cards,
                                  std::move(float_rows));
            }
        } catch (const std::invalid_argument& e) {
            throw ModelIoError(ModelIoCode::schema, e.what());
        }
    }

    try {
        return CausalModel(std::move(dag), std::move(cards), std::move(cpts));
    } catch (const std::invalid_argument& e) {
        throw ModelIoError(ModelIoCode::parent_mismatch, e.what());
    }
}

CausalModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelIoError(ModelIoCode::io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

void save_model(const CausalModel& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ModelIoError(ModelIoCode::io, "cannot write '" + path.string() + "'");
    out << serialize_model(m);
}

}  // namespace causalkit
