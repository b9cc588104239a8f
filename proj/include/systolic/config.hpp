#pragma once

// JSON ingestion for SweepSpec. Every key is optional:
//
//   {
//     "m_values": [5, 500],
//     "n_values": [5, 500],
//     "p_values": [5, 500],
//     "power_per_pe_w": 2.17e-3,
//     "clock_hz": 7e8,
//     "cross_validate_limit": 16,
//     "seed": 5285234718446    (cross-validation matrices)
//   }

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "systolic/sweep.hpp"

namespace systolic {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

namespace detail {

inline Count json_count(const nlohmann::json& v, const std::string& field, bool allow_zero) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(field, allow_zero ? "must be a non-negative integer" : "must be a positive integer");
    }
    const auto value = v.get<Count>();
    if (!allow_zero && value == 0) throw ConfigError(field, "must be a positive integer");
    return value;
}

inline double json_positive(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double value = v.get<double>();
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be a finite number > 0");
    return value;
}

}  // namespace detail

/// `base` supplies defaults for keys the document leaves out.
inline SweepSpec sweep_spec_from_json(const nlohmann::json& doc, SweepSpec base = {}) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    double power = base.cfg.power_per_pe_w();
    double clock = base.cfg.clock_hz();
    for (const auto& [key, value] : doc.items()) {
        if (key == "m_values" || key == "n_values" || key == "p_values") {
            if (!value.is_array() || value.empty()) throw ConfigError(key, "must be a nonempty array");
            std::vector<Count> values;
            for (std::size_t i = 0; i < value.size(); ++i) {
                values.push_back(detail::json_count(value[i], key + "[" + std::to_string(i) + "]", false));
            }
            (key == "m_values" ? base.m_values : key == "n_values" ? base.n_values : base.p_values) = values;
        } else if (key == "power_per_pe_w") {
            power = detail::json_positive(value, key);
        } else if (key == "clock_hz") {
            clock = detail::json_positive(value, key);
        } else if (key == "cross_validate_limit") {
            base.cross_validate_limit = detail::json_count(value, key, true);
        } else if (key == "seed") {
            base.seed = detail::json_count(value, key, true);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    base.cfg = PEConfig(power, clock);
    return base;
}

inline SweepSpec load_sweep_spec(const std::string& path, SweepSpec base = {}) {
    std::ifstream file(path);
    if (!file) throw ConfigError("", "cannot open config " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", "invalid JSON in " + path + ": " + e.what());
    }
    return sweep_spec_from_json(doc, std::move(base));
}

}  // namespace systolic
