#pragma once

#include <nlohmann/json.hpp>

#include <set>
#include <string>

#include "cfpp/distribution.hpp"

namespace cfpp {

// JSON schema for distributions (documented in the README):
//   {"type": "point_mass",  "x": 1.0}
//   {"type": "normal",      "mu": 0.0, "sigma": 1.0}
//   {"type": "exponential", "rate": 1.0}
//   {"type": "uniform",     "lo": -1.0, "hi": 2.0}
//   {"type": "cauchy",      "location": 0.0, "scale": 1.0}
//   {"type": "two_point",   "x1": -1.0, "p": 0.5, "x2": 1.0}
//   {"type": "lattice",     "step": 1.0, "offsets": [-1, 1], "probs": [0.5, 0.5]}
//   {"type": "mixture",     "weights": [...], "components": [ {...}, ... ]}
//   {"type": "shift_scale", "base": {...}, "shift": 0.0, "scale": 1.0}
// Parsing is strict: unknown or missing keys are errors. Serialization
// round-trips losslessly (shortest round-trip double formatting).

inline nlohmann::json distribution_to_json(const DistributionSpec& spec) {
    using nlohmann::json;
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return json{{"type", "point_mass"}, {"x", d.x}};
            } else if constexpr (std::is_same_v<T, Normal>) {
                return json{{"type", "normal"}, {"mu", d.mu}, {"sigma", d.sigma}};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return json{{"type", "exponential"}, {"rate", d.rate}};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return json{{"type", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                return json{{"type", "cauchy"}, {"location", d.location}, {"scale", d.scale}};
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                return json{{"type", "two_point"}, {"x1", d.x1}, {"p", d.p}, {"x2", d.x2}};
            } else if constexpr (std::is_same_v<T, Lattice>) {
                return json{{"type", "lattice"},
                            {"step", d.step},
                            {"offsets", d.offsets},
                            {"probs", d.probs}};
            } else if constexpr (std::is_same_v<T, Mixture>) {
                json comps = json::array();
                for (const auto& c : d.components) comps.push_back(distribution_to_json(c));
                return json{{"type", "mixture"}, {"weights", d.weights}, {"components", comps}};
            } else {  // ShiftScale
                return json{{"type", "shift_scale"},
                            {"base", distribution_to_json(*d.base)},
                            {"shift", d.shift},
                            {"scale", d.scale}};
            }
        },
        spec.value());
}

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& keys) {
    if (!j.is_object()) throw std::invalid_argument("distribution config must be a JSON object");
    for (const auto& k : keys)
        if (!j.contains(k))
            throw std::invalid_argument("distribution config missing key '" + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (keys.find(it.key()) == keys.end())
            throw std::invalid_argument("distribution config has unknown key '" + it.key() + "'");
}

}  // namespace detail

inline DistributionSpec distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("distribution config must be an object with a 'type' key");
    const std::string type = j.at("type").get<std::string>();
    if (type == "point_mass") {
        detail::require_keys(j, {"type", "x"});
        return DistributionSpec(PointMass{j.at("x").get<double>()});
    }
    if (type == "normal") {
        detail::require_keys(j, {"type", "mu", "sigma"});
        return DistributionSpec(Normal{j.at("mu").get<double>(), j.at("sigma").get<double>()});
    }
    if (type == "exponential") {
        detail::require_keys(j, {"type", "rate"});
        return DistributionSpec(Exponential{j.at("rate").get<double>()});
    }
    if (type == "uniform") {
        detail::require_keys(j, {"type", "lo", "hi"});
        return DistributionSpec(Uniform{j.at("lo").get<double>(), j.at("hi").get<double>()});
    }
    if (type == "cauchy") {
        detail::require_keys(j, {"type", "location", "scale"});
        return DistributionSpec(
            Cauchy{j.at("location").get<double>(), j.at("scale").get<double>()});
    }
    if (type == "two_point") {
        detail::require_keys(j, {"type", "x1", "p", "x2"});
        return DistributionSpec(TwoPoint{j.at("x1").get<double>(), j.at("p").get<double>(),
                                         j.at("x2").get<double>()});
    }
    if (type == "lattice") {
        detail::require_keys(j, {"type", "step", "offsets", "probs"});
        return DistributionSpec(Lattice{j.at("step").get<double>(),
                                        j.at("offsets").get<std::vector<long>>(),
                                        j.at("probs").get<std::vector<double>>()});
    }
    if (type == "mixture") {
        detail::require_keys(j, {"type", "weights", "components"});
        Mixture m;
        m.weights = j.at("weights").get<std::vector<double>>();
        for (const auto& c : j.at("components")) m.components.push_back(distribution_from_json(c));
        return DistributionSpec(std::move(m));
    }
    if (type == "shift_scale") {
        detail::require_keys(j, {"type", "base", "shift", "scale"});
        return DistributionSpec(make_shift_scale(distribution_from_json(j.at("base")),
                                                 j.at("shift").get<double>(),
                                                 j.at("scale").get<double>()));
    }
    throw std::invalid_argument("unknown distribution type '" + type + "'");
}

inline std::string distribution_to_text(const DistributionSpec& spec) {
    return distribution_to_json(spec).dump();
}

inline DistributionSpec parse_distribution_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("distribution config is not valid JSON: ") +
                                    e.what());
    }
    return distribution_from_json(j);
}

}  // namespace cfpp
