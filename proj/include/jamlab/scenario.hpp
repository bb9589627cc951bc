/*
 * scenario.hpp — JSON scenario documents and the canned configurations.
 *
 * A scenario fully describes one experiment: the three events, the primary
 * and jam correlation models, the jam policy, analyzer angles, trial count,
 * seed and thresholds. Parsing is strict: unknown fields are rejected,
 * defaults are applied on read and always echoed back on serialization, so
 * a report shows exactly what ran.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jamlab/correlations.hpp"
#include "jamlab/minkowski.hpp"

namespace jamlab::scenario {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct AnglePair {
    double alpha = 0.0;
    double beta = 0.0;

    friend bool operator==(const AnglePair&, const AnglePair&) = default;
};

struct ChshAngles {
    double alpha1 = 0.0;
    double alpha2 = 1.5707963267948966;
    double beta1 = 0.7853981633974483;
    double beta2 = -0.7853981633974483;

    friend bool operator==(const ChshAngles&, const ChshAngles&) = default;
};

struct ScenarioSpec {
    std::string name = "scenario";
    int dimension = 1;
    minkowski::Event a = minkowski::ev1(0, -1);
    minkowski::Event b = minkowski::ev1(0, 1);
    minkowski::Event j = minkowski::ev1(-1, 0);
    std::optional<minkowski::Event> source;
    correlations::CorrelationModel model = correlations::CorrelationModel::quantum();
    correlations::CorrelationModel jam_model = correlations::CorrelationModel::decorrelate(1.0);
    correlations::JamPolicy policy = correlations::JamPolicy::Never;
    AnglePair angles;
    std::optional<ChshAngles> chsh_angles;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double z_threshold = 5.0;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

namespace detail {

inline std::string line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return std::to_string(line);
}

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || key == k;
        if (!ok) throw ParseError("unknown field '" + key + "' in " + where);
    }
}

inline minkowski::Event parse_event(const json& v, int dimension, const std::string& field) {
    if (!v.is_object()) throw ParseError("field '" + field + "' must be an object");
    reject_unknown(v, "event '" + field + "'", {"t", "x"});
    if (!v.contains("t") || !v.contains("x"))
        throw ParseError("event '" + field + "' needs fields 't' and 'x'");
    minkowski::Event e;
    e.t = v.at("t").get<double>();
    const auto& xs = v.at("x");
    if (!xs.is_array() || static_cast<int>(xs.size()) != dimension)
        throw ParseError("event '" + field + "' needs " + std::to_string(dimension) +
                         " spatial coordinates");
    e.x.dim = dimension;
    for (int i = 0; i < dimension; ++i) e.x[i] = xs.at(static_cast<std::size_t>(i)).get<double>();
    if (!std::isfinite(e.t)) throw ParseError("event '" + field + "' has a non-finite time");
    for (int i = 0; i < dimension; ++i)
        if (!std::isfinite(e.x[i]))
            throw ParseError("event '" + field + "' has a non-finite coordinate");
    return e;
}

inline json event_to_json(const minkowski::Event& e) {
    json xs = json::array();
    for (int i = 0; i < e.dim(); ++i) xs.push_back(e.x[i]);
    return json{{"t", e.t}, {"x", xs}};
}

inline correlations::CorrelationModel parse_model(const json& v, const std::string& field) {
    if (!v.is_object()) throw ParseError("field '" + field + "' must be an object");
    reject_unknown(v, "model '" + field + "'", {"type", "eta"});
    const std::string type = v.at("type").get<std::string>();
    const double eta = v.value("eta", 1.0);
    try {
        if (type == "quantum") {
            if (v.contains("eta")) throw ParseError("model 'quantum' takes no 'eta'");
            return correlations::CorrelationModel::quantum();
        }
        if (type == "decorrelate") return correlations::CorrelationModel::decorrelate(eta);
        if (type == "classicalize") return correlations::CorrelationModel::classicalize(eta);
    } catch (const std::invalid_argument& ex) {
        throw ParseError("field '" + field + "': " + ex.what());
    }
    throw ParseError("unknown model type '" + type + "' in field '" + field + "'");
}

inline json model_to_json(const correlations::CorrelationModel& m) {
    switch (m.kind) {
        case correlations::ModelKind::Quantum: return json{{"type", "quantum"}};
        case correlations::ModelKind::Decorrelate:
            return json{{"type", "decorrelate"}, {"eta", m.eta}};
        case correlations::ModelKind::Classicalize:
            return json{{"type", "classicalize"}, {"eta", m.eta}};
    }
    throw std::logic_error("unreachable");
}

inline correlations::JamPolicy parse_policy(const std::string& s) {
    if (s == "never") return correlations::JamPolicy::Never;
    if (s == "always") return correlations::JamPolicy::Always;
    if (s == "selective_on_alice_plus") return correlations::JamPolicy::SelectiveOnAlicePlus;
    throw ParseError("unknown jam policy '" + s + "'");
}

inline const char* policy_to_string(correlations::JamPolicy p) {
    switch (p) {
        case correlations::JamPolicy::Never: return "never";
        case correlations::JamPolicy::Always: return "always";
        case correlations::JamPolicy::SelectiveOnAlicePlus: return "selective_on_alice_plus";
    }
    throw std::logic_error("unreachable");
}

} // namespace detail

inline ScenarioSpec parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ParseError("scenario parse error at line " + detail::line_of(text, ex.byte) + ": " +
                         ex.what());
    }
    if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
    detail::reject_unknown(doc, "scenario",
                           {"name", "dimension", "events", "model", "jam_model", "policy",
                            "angles", "trials", "seed", "thresholds"});

    ScenarioSpec s;
    try {
        s.name = doc.value("name", std::string("scenario"));
        s.dimension = doc.value("dimension", 1);
        if (s.dimension < 1 || s.dimension > 3)
            throw ParseError("dimension must be 1, 2 or 3");

        if (doc.contains("events")) {
            const auto& ev = doc.at("events");
            detail::reject_unknown(ev, "events", {"a", "b", "j", "source"});
            if (!ev.contains("a") || !ev.contains("b") || !ev.contains("j"))
                throw ParseError("events must define 'a', 'b' and 'j'");
            s.a = detail::parse_event(ev.at("a"), s.dimension, "a");
            s.b = detail::parse_event(ev.at("b"), s.dimension, "b");
            s.j = detail::parse_event(ev.at("j"), s.dimension, "j");
            if (ev.contains("source"))
                s.source = detail::parse_event(ev.at("source"), s.dimension, "source");
        } else {
            if (s.dimension != 1)
                throw ParseError("default events exist only in one spatial dimension");
        }

        if (doc.contains("model")) s.model = detail::parse_model(doc.at("model"), "model");
        if (doc.contains("jam_model"))
            s.jam_model = detail::parse_model(doc.at("jam_model"), "jam_model");
        if (doc.contains("policy")) s.policy = detail::parse_policy(doc.at("policy"));

        if (doc.contains("angles")) {
            const auto& an = doc.at("angles");
            detail::reject_unknown(an, "angles",
                                   {"alpha", "beta", "alpha1", "alpha2", "beta1", "beta2"});
            const bool pair = an.contains("alpha") || an.contains("beta");
            const bool quad = an.contains("alpha1") || an.contains("alpha2") ||
                              an.contains("beta1") || an.contains("beta2");
            if (pair && quad)
                throw ParseError("angles must be a single pair or a CHSH quadruple, not both");
            if (pair) {
                s.angles.alpha = an.value("alpha", 0.0);
                s.angles.beta = an.value("beta", 0.0);
            } else if (quad) {
                ChshAngles c;
                c.alpha1 = an.value("alpha1", c.alpha1);
                c.alpha2 = an.value("alpha2", c.alpha2);
                c.beta1 = an.value("beta1", c.beta1);
                c.beta2 = an.value("beta2", c.beta2);
                s.chsh_angles = c;
            }
            for (double v : {s.angles.alpha, s.angles.beta})
                if (!std::isfinite(v)) throw ParseError("angles must be finite");
            if (s.chsh_angles)
                for (double v : {s.chsh_angles->alpha1, s.chsh_angles->alpha2,
                                 s.chsh_angles->beta1, s.chsh_angles->beta2})
                    if (!std::isfinite(v)) throw ParseError("angles must be finite");
        }

        if (doc.contains("trials")) {
            const auto t = doc.at("trials").get<std::int64_t>();
            if (t < 1) throw ParseError("trials must be at least 1");
            s.trials = static_cast<std::uint64_t>(t);
        }
        s.seed = doc.value("seed", std::uint64_t{1});
        if (doc.contains("thresholds")) {
            const auto& th = doc.at("thresholds");
            detail::reject_unknown(th, "thresholds", {"z"});
            s.z_threshold = th.value("z", 5.0);
            if (!(s.z_threshold > 0.0)) throw ParseError("threshold z must be positive");
        }
    } catch (const json::exception& ex) {
        throw ParseError(std::string("invalid scenario value: ") + ex.what());
    }
    return s;
}

inline json scenario_to_json(const ScenarioSpec& s) {
    json events{{"a", detail::event_to_json(s.a)},
                {"b", detail::event_to_json(s.b)},
                {"j", detail::event_to_json(s.j)}};
    if (s.source) events["source"] = detail::event_to_json(*s.source);

    json angles;
    if (s.chsh_angles) {
        angles = json{{"alpha1", s.chsh_angles->alpha1},
                      {"alpha2", s.chsh_angles->alpha2},
                      {"beta1", s.chsh_angles->beta1},
                      {"beta2", s.chsh_angles->beta2}};
    } else {
        angles = json{{"alpha", s.angles.alpha}, {"beta", s.angles.beta}};
    }

    return json{{"name", s.name},
                {"dimension", s.dimension},
                {"events", events},
                {"model", detail::model_to_json(s.model)},
                {"jam_model", detail::model_to_json(s.jam_model)},
                {"policy", detail::policy_to_string(s.policy)},
                {"angles", angles},
                {"trials", s.trials},
                {"seed", s.seed},
                {"thresholds", json{{"z", s.z_threshold}}}};
}

inline std::string serialize_scenario(const ScenarioSpec& s) { return scenario_to_json(s).dump(2); }

// FNV-1a over the canonical serialization.
inline std::string scenario_hash(const ScenarioSpec& s) {
    const std::string text = serialize_scenario(s);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// Canned configurations. The three geometries: detectors adjacent with the
// jammer far away (forbidden), the jammer reading one detector before a
// distant partner (forbidden; the -selective variant actually jams on
// Alice's + results), and the jammer stationed near the source between the
// detectors (allowed).
inline const std::vector<std::string>& canned_scenario_names() {
    static const std::vector<std::string> names = {
        "fig1a", "fig1b", "fig1c", "fig1d", "fig1d-selective", "fig1e", "fig1f"};
    return names;
}

inline std::string canned_scenario_text(const std::string& name) {
    auto doc = [](const char* nm, const char* a, const char* b, const char* j, const char* src,
                  const char* policy, std::uint64_t trials) {
        std::string s = "{\n";
        s += "  \"name\": \"" + std::string(nm) + "\",\n";
        s += "  \"dimension\": 1,\n";
        s += "  \"events\": {\n";
        s += "    \"a\": " + std::string(a) + ",\n";
        s += "    \"b\": " + std::string(b) + ",\n";
        s += "    \"j\": " + std::string(j);
        if (src) s += ",\n    \"source\": " + std::string(src);
        s += "\n  },\n";
        s += "  \"model\": { \"type\": \"quantum\" },\n";
        s += "  \"jam_model\": { \"type\": \"decorrelate\", \"eta\": 1.0 },\n";
        s += "  \"policy\": \"" + std::string(policy) + "\",\n";
        s += "  \"angles\": { \"alpha\": 0.0, \"beta\": 0.0 },\n";
        s += "  \"trials\": " + std::to_string(trials) + ",\n";
        s += "  \"seed\": 1,\n";
        s += "  \"thresholds\": { \"z\": 5.0 }\n";
        s += "}\n";
        return s;
    };

    // Detectors close together, jammer far to the side.
    if (name == "fig1a" || name == "fig1b")
        return doc(name.c_str(), "{ \"t\": 0.0, \"x\": [-1.0] }", "{ \"t\": 0.0, \"x\": [1.0] }",
                   "{ \"t\": 0.0, \"x\": [10.0] }", nullptr, "always", 100000);
    // Jammer just above one detector, the other far away.
    if (name == "fig1c" || name == "fig1d")
        return doc(name.c_str(), "{ \"t\": 0.0, \"x\": [-1.0] }", "{ \"t\": 0.0, \"x\": [10.0] }",
                   "{ \"t\": 0.5, \"x\": [-1.0] }", nullptr, "always", 100000);
    if (name == "fig1d-selective")
        return doc(name.c_str(), "{ \"t\": 0.0, \"x\": [-1.0] }", "{ \"t\": 0.0, \"x\": [10.0] }",
                   "{ \"t\": 0.5, \"x\": [-1.0] }", nullptr, "selective_on_alice_plus", 10000);
    // Jammer near the source, detectors at opposite ends.
    if (name == "fig1e" || name == "fig1f")
        return doc(name.c_str(), "{ \"t\": 0.0, \"x\": [-1.0] }", "{ \"t\": 0.0, \"x\": [1.0] }",
                   "{ \"t\": -1.0, \"x\": [0.0] }", "{ \"t\": -1.0, \"x\": [0.0] }", "never",
                   100000);
    throw std::invalid_argument("unknown canned scenario '" + name + "'");
}

inline bool is_canned_scenario(const std::string& name) {
    for (const auto& n : canned_scenario_names())
        if (n == name) return true;
    return false;
}

} // namespace jamlab::scenario
