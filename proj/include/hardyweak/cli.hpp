// Copyright 2026 The hardyweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Run configuration, report rendering and the `hardyweak run` entry point.
 *
 * A run is described by a JSON config (scenario, parameters, optional
 * sweep, output format/path); command-line flags override file values.
 * Reports are deterministic: the same config always yields the same bytes.
 */

#pragma once

#include "hardyweak/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyweak::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char *kToolName = "hardyweak";
inline constexpr const char *kVersion = "0.1.0";

/// Invalid configuration; `field` names the offending key when known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(message), field_(std::move(field)) {}
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    std::string field_;
};

enum class Scenario { hardy, counterfactual, swap, photonic_weak, pointer, pointer_sweep };
enum class OutputFormat { table, json, csv };

struct Parameters {
    double gamma = 0.0;
    double epsilon = 1.0;
    double sigma = 8.0;
    double phi = kDefaultAnalyzerAngle;
    bool bs2_plus = true;
    bool bs2_minus = true;
    SwapMode swap_mode = SwapMode::coherent;
    std::vector<double> swap_phases = default_swap_calibration();
    MeasuredAxis measured = MeasuredAxis::joint;
    std::size_t grid_points = kDefaultGridPoints;
};

struct Sweep {
    std::string param;
    std::vector<double> values;
};

struct RunConfig {
    Scenario scenario = Scenario::hardy;
    Parameters parameters;
    std::optional<Sweep> sweep;
    OutputFormat output_format = OutputFormat::table;
    std::optional<std::string> output_path;
};

// ---------------------------------------------------------------------------
// Names

namespace detail {

template <typename E> struct NamedValue {
    const char *name;
    E value;
};

inline constexpr NamedValue<Scenario> kScenarioNames[] = {
    {"hardy", Scenario::hardy},
    {"counterfactual", Scenario::counterfactual},
    {"swap", Scenario::swap},
    {"photonic-weak", Scenario::photonic_weak},
    {"pointer", Scenario::pointer},
    {"pointer-sweep", Scenario::pointer_sweep},
};
inline constexpr NamedValue<OutputFormat> kFormatNames[] = {
    {"table", OutputFormat::table},
    {"json", OutputFormat::json},
    {"csv", OutputFormat::csv},
};
inline constexpr NamedValue<SwapMode> kSwapModeNames[] = {
    {"coherent", SwapMode::coherent},
    {"decohered", SwapMode::decohered},
};
inline constexpr NamedValue<MeasuredAxis> kMeasuredNames[] = {
    {"photon-2", MeasuredAxis::photon2},
    {"photon-4", MeasuredAxis::photon4},
    {"joint", MeasuredAxis::joint},
};

template <typename E, std::size_t N>
E lookup(const NamedValue<E> (&table)[N], const std::string &name,
         const std::string &field) {
    for (const auto &entry : table) {
        if (name == entry.name) {
            return entry.value;
        }
    }
    std::string allowed;
    for (const auto &entry : table) {
        allowed += allowed.empty() ? "" : "|";
        allowed += entry.name;
    }
    throw ConfigError(field, "invalid value '" + name + "' for " + field +
                                 " (expected " + allowed + ")");
}

template <typename E, std::size_t N>
const char *name_of(const NamedValue<E> (&table)[N], E value) {
    for (const auto &entry : table) {
        if (entry.value == value) {
            return entry.name;
        }
    }
    return "?";
}

inline const std::vector<std::string> kParameterKeys{
    "gamma", "epsilon", "sigma", "phi", "bs2_plus", "bs2_minus",
    "swap_mode", "swap_phases", "measured", "grid_points"};
inline const std::vector<std::string> kSweepableKeys{"gamma", "epsilon", "sigma",
                                                     "phi", "grid_points"};

inline double require_number(const Json &value, const std::string &field) {
    if (!value.is_number()) {
        throw ConfigError(field, field + " must be a number");
    }
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(field, field + " must be finite");
    }
    return x;
}

inline bool require_bool(const Json &value, const std::string &field) {
    if (!value.is_boolean()) {
        throw ConfigError(field, field + " must be a boolean");
    }
    return value.get<bool>();
}

inline std::string require_string(const Json &value, const std::string &field) {
    if (!value.is_string()) {
        throw ConfigError(field, field + " must be a string");
    }
    return value.get<std::string>();
}

inline std::size_t to_grid_points(double x) {
    if (x != std::floor(x) || x < 0 || x > 1e6) {
        throw ConfigError("grid_points", "grid_points must be a whole number");
    }
    return static_cast<std::size_t>(x);
}

inline void set_numeric(Parameters &p, const std::string &key, double x) {
    if (key == "gamma") {
        p.gamma = x;
    } else if (key == "epsilon") {
        p.epsilon = x;
    } else if (key == "sigma") {
        p.sigma = x;
    } else if (key == "phi") {
        p.phi = x;
    } else if (key == "grid_points") {
        p.grid_points = to_grid_points(x);
    } else {
        throw ConfigError(key, "parameter '" + key + "' cannot be swept");
    }
}

inline void set_parameter(Parameters &p, const std::string &key, const Json &value) {
    if (key == "bs2_plus") {
        p.bs2_plus = require_bool(value, key);
    } else if (key == "bs2_minus") {
        p.bs2_minus = require_bool(value, key);
    } else if (key == "swap_mode") {
        p.swap_mode = lookup(kSwapModeNames, require_string(value, key), key);
    } else if (key == "measured") {
        p.measured = lookup(kMeasuredNames, require_string(value, key), key);
    } else if (key == "swap_phases") {
        if (!value.is_array() || value.size() != 2) {
            throw ConfigError(key, "swap_phases must be an array of two numbers");
        }
        p.swap_phases = {require_number(value[0], key), require_number(value[1], key)};
    } else if (std::find(kParameterKeys.begin(), kParameterKeys.end(), key) !=
               kParameterKeys.end()) {
        set_numeric(p, key, require_number(value, key));
    } else {
        throw ConfigError(key, "unknown parameter '" + key + "'");
    }
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string &text,
                                                       std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace detail

/// Range checks shared by file configs and flag overrides.
inline void validate(const RunConfig &config) {
    const auto &p = config.parameters;
    auto check = [](const Parameters &q) {
        if (!(q.epsilon >= 0.0)) {
            throw ConfigError("epsilon", "epsilon must be >= 0");
        }
        if (!(q.sigma > 0.0)) {
            throw ConfigError("sigma", "sigma must be > 0");
        }
        if (q.grid_points < kMinGridPoints) {
            throw ConfigError("grid_points", "grid_points must be >= 64");
        }
        if (q.swap_phases.size() != 2) {
            throw ConfigError("swap_phases", "swap_phases needs two entries");
        }
    };
    check(p);
    if (config.sweep) {
        const auto &s = *config.sweep;
        if (std::find(detail::kSweepableKeys.begin(), detail::kSweepableKeys.end(),
                      s.param) == detail::kSweepableKeys.end()) {
            throw ConfigError("sweep.param",
                              "parameter '" + s.param + "' cannot be swept");
        }
        if (s.values.empty()) {
            throw ConfigError("sweep.values", "sweep needs at least one value");
        }
        for (double v : s.values) {
            Parameters q = p;
            detail::set_numeric(q, s.param, v);
            try {
                check(q);
            } catch (const ConfigError &e) {
                throw ConfigError("sweep.values", e.what());
            }
        }
        if (config.scenario == Scenario::pointer_sweep) {
            if (s.param != "sigma") {
                throw ConfigError("sweep.param", "pointer-sweep sweeps sigma only");
            }
            for (std::size_t i = 1; i < s.values.size(); ++i) {
                if (!(s.values[i] > s.values[i - 1])) {
                    throw ConfigError("sweep.values",
                                      "sigma values must be ascending");
                }
            }
        }
    }
}

/// Parses a JSON config document and applies defaults.
[[nodiscard]] inline RunConfig parse_config(const std::string &text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
        const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("", "malformed JSON at line " + std::to_string(line) +
                                  ", column " + std::to_string(column));
    }
    if (!doc.is_object()) {
        throw ConfigError("", "config must be a JSON object");
    }
    RunConfig config;
    bool have_scenario = false;
    for (const auto &[key, value] : doc.items()) {
        if (key == "scenario") {
            config.scenario = detail::lookup(detail::kScenarioNames,
                                             detail::require_string(value, key), key);
            have_scenario = true;
        } else if (key == "parameters") {
            if (!value.is_object()) {
                throw ConfigError(key, "parameters must be an object");
            }
            for (const auto &[pkey, pvalue] : value.items()) {
                detail::set_parameter(config.parameters, pkey, pvalue);
            }
        } else if (key == "sweep") {
            if (!value.is_object()) {
                throw ConfigError(key, "sweep must be an object");
            }
            Sweep sweep;
            bool have_param = false;
            bool have_values = false;
            for (const auto &[skey, svalue] : value.items()) {
                if (skey == "param") {
                    sweep.param = detail::require_string(svalue, "sweep.param");
                    have_param = true;
                } else if (skey == "values") {
                    if (!svalue.is_array()) {
                        throw ConfigError("sweep.values", "sweep.values must be an array");
                    }
                    for (const auto &v : svalue) {
                        sweep.values.push_back(detail::require_number(v, "sweep.values"));
                    }
                    have_values = true;
                } else {
                    throw ConfigError("sweep." + skey, "unknown key 'sweep." + skey + "'");
                }
            }
            if (!have_param || !have_values) {
                throw ConfigError("sweep", "sweep needs both param and values");
            }
            config.sweep = std::move(sweep);
        } else if (key == "output_format") {
            config.output_format = detail::lookup(
                detail::kFormatNames, detail::require_string(value, key), key);
        } else if (key == "output_path") {
            config.output_path = detail::require_string(value, key);
        } else {
            throw ConfigError(key, "unknown key '" + key + "'");
        }
    }
    if (!have_scenario) {
        throw ConfigError("scenario", "scenario is required");
    }
    validate(config);
    return config;
}

// ---------------------------------------------------------------------------
// Report building

/// Nearest p/q with q <= 64 within 1e-9, reduced; empty if none.
[[nodiscard]] inline std::optional<std::string> small_rational(double x) {
    for (std::int64_t q = 1; q <= 64; ++q) {
        const double p = std::round(x * static_cast<double>(q));
        if (std::abs(x - p / static_cast<double>(q)) <= 1e-9) {
            auto pi = static_cast<std::int64_t>(p);
            const std::int64_t g = std::gcd(pi < 0 ? -pi : pi, q);
            const std::int64_t num = g == 0 ? pi : pi / g;
            const std::int64_t den = g == 0 ? q : q / g;
            return den == 1 ? std::to_string(num)
                            : std::to_string(num) + "/" + std::to_string(den);
        }
    }
    return std::nullopt;
}

namespace detail {

inline Json complex_json(Amplitude z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json rational_json(double x) {
    auto r = small_rational(x);
    return r ? Json(*r) : Json(nullptr);
}

inline Json amplitudes_json(const StateVector &state) {
    Json out = Json::object();
    for (const auto &[label, amp] : state.amplitudes()) {
        out[state.structure().describe(label)] = complex_json(amp);
    }
    return out;
}

inline Json hardy_report(const Parameters &p) {
    const HardyConfig hc{p.bs2_plus, p.bs2_minus};
    const auto result = run_hardy_gedanken(hc);
    Json probabilities = Json::object();
    auto put = [&](const char *key, double value) {
        probabilities[key] = value;
        probabilities[std::string(key) + "_rational"] = rational_json(value);
    };
    put("p_gamma", result.probabilities.gamma);
    put("p_cc", result.probabilities.cc);
    put("p_cd", result.probabilities.cd);
    put("p_dc", result.probabilities.dc);
    put("p_dd", result.probabilities.dd);
    return Json{{"config", {{"bs2_plus", p.bs2_plus},
                            {"bs2_minus", p.bs2_minus},
                            {"case", hc.case_number()}}},
                {"amplitudes", amplitudes_json(result.state.pruned())},
                {"probabilities", probabilities}};
}

inline Json assignment_json(const CounterfactualAssignment &a) {
    return Json{{"C+(inf)", a.c_plus_removed ? 1 : 0},
                {"C-(inf)", a.c_minus_removed ? 1 : 0},
                {"D+(0)", a.d_plus_present ? 1 : 0},
                {"D-(0)", a.d_minus_present ? 1 : 0}};
}

inline Json counterfactual_report() {
    const auto report = counterfactual_check();
    Json satisfying = Json::array();
    for (const auto &a : report.satisfying) {
        satisfying.push_back(assignment_json(a));
    }
    Json relaxed = Json::array();
    for (const auto &a : report.satisfying_without_coincidence) {
        relaxed.push_back(assignment_json(a));
    }
    Json verdicts = Json::array();
    for (const auto &v : report.verdicts) {
        Json entry = assignment_json(v.assignment);
        Json failed = Json::array();
        for (std::size_t k : v.failed) {
            failed.push_back(report.constraints[k]);
        }
        entry["failed"] = failed;
        verdicts.push_back(entry);
    }
    return Json{{"constraints", report.constraints},
                {"satisfying_assignments", satisfying},
                {"satisfying_without_coincidence", relaxed},
                {"count_without_coincidence", relaxed.size()},
                {"assignments", verdicts}};
}

inline Json swap_report(const Parameters &p) {
    const auto result = run_entanglement_swap(p.swap_mode, p.swap_phases);
    const auto target = hardy_photon_state();
    Json branches = Json::array();
    double overlap_sum = 0.0;
    for (const auto &b : result.branches) {
        overlap_sum += std::norm(inner(target, b.state.state));
        branches.push_back(Json{{"environment", b.environment},
                                {"weight", b.state.weight},
                                {"weight_rational", rational_json(b.state.weight)},
                                {"amplitudes", amplitudes_json(b.state.state)}});
    }
    return Json{{"mode", name_of(kSwapModeNames, p.swap_mode)},
                {"calibration", p.swap_phases},
                {"success_probability", result.success_probability},
                {"success_probability_rational",
                 rational_json(result.success_probability)},
                {"fidelity", overlap_sum / result.success_probability},
                {"branches", branches}};
}

inline Json photonic_weak_report(const Parameters &p) {
    const auto r = run_photonic_weak(p.gamma, p.epsilon, p.phi);
    Json decomposition = Json::array();
    for (const auto &part : r.decomposition) {
        decomposition.push_back(Json{{"label", r.pre.structure().describe(part.label)},
                                     {"weight", part.weight},
                                     {"weak_value", complex_json(part.weak_value)}});
    }
    const auto &o = r.occupations;
    return Json{
        {"gamma", r.gamma},
        {"epsilon", r.epsilon},
        {"phi", r.phi},
        {"overlap", complex_json(r.overlap)},
        {"success_probability", r.success_probability},
        {"success_probability_rational", rational_json(r.success_probability)},
        {"swap_success_probability", r.swap_success_probability},
        {"A2_w", complex_json(r.a2)},
        {"A4_w", complex_json(r.a4)},
        {"A24_w", Json::array({complex_json(r.a24[0]), complex_json(r.a24[1])})},
        {"decomposition", decomposition},
        {"dictionary", {{"O", "V"}, {"NO", "H"}, {"+", "2"}, {"-", "4"}}},
        {"occupations",
         {{"N-_O", complex_json(o.single[0])},
          {"N+_O", complex_json(o.single[1])},
          {"N-_NO", complex_json(o.single[2])},
          {"N+_NO", complex_json(o.single[3])},
          {"N_O,O", complex_json(o.joint[0])},
          {"N_O,NO", complex_json(o.joint[1])},
          {"N_NO,O", complex_json(o.joint[2])},
          {"N_NO,NO", complex_json(o.joint[3])}}},
        {"recombination_residual", r.recombination_residual},
        {"paradox_residual", r.paradox_residual}};
}

inline Json complex_array(const std::vector<Amplitude> &values) {
    Json out = Json::array();
    for (const auto &z : values) {
        out.push_back(complex_json(z));
    }
    return out;
}

inline Json pointer_report(const Parameters &p) {
    const StateVector pre = hardy_photon_state();
    const StateVector post = analyzer_post_selection(p.phi);
    const auto spec = make_pointer_spec(p.gamma, p.epsilon, p.sigma, p.grid_points);
    const auto profile = build_pointer_profile(pre, post, p.measured, spec);
    const auto moments = pointer_moments(profile);
    const auto weak = weak_value(
        arrival_time_operator(arrival_kind_for(p.measured), p.gamma, p.epsilon), pre,
        post);
    std::vector<double> deviation;
    for (std::size_t k = 0; k < moments.mean.size(); ++k) {
        deviation.push_back(std::abs(moments.mean[k] - weak.value[k].real()));
    }
    return Json{{"gamma", p.gamma},
                {"epsilon", p.epsilon},
                {"sigma", p.sigma},
                {"r", profile.weakness_ratio},
                {"measured", name_of(kMeasuredNames, p.measured)},
                {"grid",
                 {{"t_min", spec.grid.t_min},
                  {"t_max", spec.grid.t_max},
                  {"n_points", spec.grid.n_points}}},
                {"success_probability", moments.success_probability},
                {"success_probability_closed_form", profile.success_probability},
                {"mean", moments.mean},
                {"variance", moments.variance},
                {"weak_value", complex_array(weak.value)},
                {"deviation", deviation}};
}

inline const std::vector<double> kDefaultSweepSigmas{1, 2, 4, 8, 16, 32};

inline Json pointer_sweep_report(const RunConfig &config) {
    const auto &p = config.parameters;
    const auto sigmas = config.sweep ? config.sweep->values : kDefaultSweepSigmas;
    const StateVector pre = hardy_photon_state();
    const StateVector post = analyzer_post_selection(p.phi);
    const auto weak = weak_value(
        arrival_time_operator(arrival_kind_for(p.measured), p.gamma, p.epsilon), pre,
        post);
    const auto rows = weak_limit_sweep(pre, post, p.measured, p.gamma, p.epsilon,
                                       sigmas, p.grid_points);
    Json out_rows = Json::array();
    for (const auto &row : rows) {
        out_rows.push_back(Json{{"sigma", row.sigma},
                                {"r", row.weakness_ratio},
                                {"mean", row.mean},
                                {"deviation", row.deviation},
                                {"success_probability", row.success_probability}});
    }
    return Json{{"gamma", p.gamma},
                {"epsilon", p.epsilon},
                {"measured", name_of(kMeasuredNames, p.measured)},
                {"grid_points", p.grid_points},
                {"weak_value", complex_array(weak.value)},
                {"rows", out_rows}};
}

inline Json single_report(Scenario scenario, const Parameters &p, const RunConfig &config) {
    switch (scenario) {
    case Scenario::hardy:
        return hardy_report(p);
    case Scenario::counterfactual:
        return counterfactual_report();
    case Scenario::swap:
        return swap_report(p);
    case Scenario::photonic_weak:
        return photonic_weak_report(p);
    case Scenario::pointer:
        return pointer_report(p);
    case Scenario::pointer_sweep:
        return pointer_sweep_report(config);
    }
    throw std::logic_error("unhandled scenario");
}

inline constexpr double kReportNoiseFloor = 1e-14;

/// Report numbers carry 15 significant digits; magnitudes below the noise
/// floor print as zero.
inline double tidy(double x) {
    if (std::abs(x) < kReportNoiseFloor) {
        return 0.0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline void tidy_numbers(Json &v) {
    if (v.is_number_float()) {
        v = tidy(v.get<double>());
    } else if (v.is_structured()) {
        for (auto &child : v) {
            tidy_numbers(child);
        }
    }
}

} // namespace detail

/// Report payload for a validated config (no metadata).
[[nodiscard]] inline Json execute(const RunConfig &config) {
    Json out{{"scenario", detail::name_of(detail::kScenarioNames, config.scenario)}};
    Json body;
    if (config.sweep && config.scenario != Scenario::pointer_sweep) {
        Json runs = Json::array();
        for (double v : config.sweep->values) {
            Parameters p = config.parameters;
            detail::set_numeric(p, config.sweep->param, v);
            Json run{{config.sweep->param, v}};
            run["report"] = detail::single_report(config.scenario, p, config);
            runs.push_back(run);
        }
        body = Json{{"sweep", {{"param", config.sweep->param},
                               {"values", config.sweep->values}}},
                    {"runs", runs}};
    } else {
        body = detail::single_report(config.scenario, config.parameters, config);
    }
    for (auto &[key, value] : body.items()) {
        out[key] = value;
    }
    detail::tidy_numbers(out);
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

[[nodiscard]] inline std::string format_number(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

namespace detail {

inline bool is_complex(const Json &v) {
    return v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im");
}

inline std::string table_number(double x) {
    if (std::abs(x) < 5e-13) {
        x = 0.0;
    }
    return format_number(x, 12);
}

inline std::string table_value(const Json &v) {
    if (is_complex(v)) {
        const double re = v["re"].get<double>();
        double im = v["im"].get<double>();
        if (std::abs(im) < 5e-13) {
            im = 0.0;
        }
        return table_number(re) + (im < 0 ? "-" : "+") + table_number(std::abs(im)) + "i";
    }
    if (v.is_number_float()) {
        return table_number(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_array()) {
        std::string out = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += (i == 0 ? "" : ", ") + table_value(v[i]);
        }
        return out + ")";
    }
    return v.dump();
}

inline bool is_leaf_for_table(const Json &v) {
    if (is_complex(v) || !v.is_structured()) {
        return true;
    }
    if (v.is_array()) {
        return std::all_of(v.begin(), v.end(), [](const Json &e) {
            return is_complex(e) || !e.is_structured();
        });
    }
    return false;
}

inline void render_table(const Json &v, const std::string &prefix, std::ostream &out) {
    if (is_leaf_for_table(v)) {
        out << prefix << "=" << table_value(v) << "\n";
        return;
    }
    if (v.is_object()) {
        for (const auto &[key, value] : v.items()) {
            render_table(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        render_table(v[i], prefix + "[" + std::to_string(i) + "]", out);
    }
}

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

inline std::string csv_value(const Json &v) {
    if (v.is_number_float()) {
        return format_number(v.get<double>(), 17);
    }
    if (v.is_string()) {
        return csv_field(v.get<std::string>());
    }
    return csv_field(v.dump());
}

inline void flatten(const Json &v, const std::string &prefix,
                    std::vector<std::pair<std::string, std::string>> &out) {
    if (v.is_object()) {
        for (const auto &[key, value] : v.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out.emplace_back(prefix, csv_value(v));
    }
}

inline void render_csv(const Json &report, std::ostream &out) {
    if (report.value("scenario", "") == "pointer-sweep") {
        const auto &rows = report["rows"];
        const std::size_t axes = rows.empty() ? 0 : rows[0]["mean"].size();
        out << "sigma,r";
        for (std::size_t k = 0; k < axes; ++k) {
            out << ",mean_" << k;
        }
        for (std::size_t k = 0; k < axes; ++k) {
            out << ",deviation_" << k;
        }
        out << ",success_probability\n";
        for (const auto &row : rows) {
            out << csv_value(row["sigma"]) << "," << csv_value(row["r"]);
            for (const auto &m : row["mean"]) {
                out << "," << csv_value(m);
            }
            for (const auto &d : row["deviation"]) {
                out << "," << csv_value(d);
            }
            out << "," << csv_value(row["success_probability"]) << "\n";
        }
        return;
    }
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(report, "", cells);
    out << "key,value\n";
    for (const auto &[key, value] : cells) {
        out << csv_field(key) << "," << value << "\n";
    }
}

} // namespace detail

/// Full document: payload plus a metadata header.
[[nodiscard]] inline Json with_metadata(const Json &payload) {
    Json doc{{"metadata", {{"tool", kToolName}, {"version", kVersion}}}};
    for (const auto &[key, value] : payload.items()) {
        doc[key] = value;
    }
    return doc;
}

[[nodiscard]] inline std::string render(const Json &payload, OutputFormat format) {
    std::ostringstream out;
    switch (format) {
    case OutputFormat::json:
        out << with_metadata(payload).dump(2) << "\n";
        break;
    case OutputFormat::table:
        out << "# " << kToolName << " " << kVersion << "\n";
        detail::render_table(payload, "", out);
        break;
    case OutputFormat::csv:
        detail::render_csv(payload, out);
        break;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Entry point

namespace detail {

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config", "cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void diagnose(std::ostream &err, const char *kind, const std::string &field,
                     const std::string &message) {
    Json line{{"error", kind}};
    if (!field.empty()) {
        line["field"] = field;
    }
    line["message"] = message;
    err << line.dump() << "\n";
}

inline Sweep parse_sweep_flag(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("sweep", "--sweep expects <param>=<v1,v2,...>");
    }
    Sweep sweep{text.substr(0, eq), {}};
    std::stringstream values(text.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
            sweep.values.push_back(v);
        } catch (const std::exception &) {
            throw ConfigError("sweep.values", "not a number: '" + item + "'");
        }
    }
    return sweep;
}

} // namespace detail

/**
 * `run --scenario <name> [--config <path>] [flags...]`.
 *
 * Returns 0 on success, 1 on configuration errors, 2 on runtime errors. Each
 * error prints a single JSON line to `err`.
 */
inline int run_cli(const std::vector<std::string> &args, std::ostream &out,
                   std::ostream &err) {
    CLI::App app{"Weak-measurement simulator for interleaved interferometers", kToolName};
    app.require_subcommand(1);
    auto *run = app.add_subcommand("run", "Execute a scenario");

    std::optional<std::string> scenario, config_path, swap_mode, measured, sweep,
        format, out_path;
    std::optional<double> gamma, epsilon, sigma, phi;
    std::optional<std::size_t> grid_points;
    bool bs2_plus = true;
    bool bs2_minus = true;

    run->add_option("--scenario", scenario,
                    "hardy|counterfactual|swap|photonic-weak|pointer|pointer-sweep");
    run->add_option("--config", config_path, "JSON config file");
    run->add_option("--gamma", gamma, "Delay of H photons");
    run->add_option("--epsilon", epsilon, "Delay of V photons");
    run->add_option("--sigma", sigma, "Pointer width");
    run->add_option("--phi", phi, "Analyzer basis angle (radians)");
    auto *plus_flag = run->add_flag("--bs2-plus", bs2_plus,
                                    "Positron's second beamsplitter present");
    auto *minus_flag = run->add_flag("--bs2-minus", bs2_minus,
                                     "Electron's second beamsplitter present");
    run->add_option("--swap-mode", swap_mode, "coherent|decohered");
    run->add_option("--measured", measured, "photon-2|photon-4|joint");
    run->add_option("--grid-points", grid_points, "Pointer grid points per axis");
    run->add_option("--sweep", sweep, "<param>=<v1,v2,...>");
    run->add_option("--format", format, "table|json|csv");
    run->add_option("--out", out_path, "Write the report here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        detail::diagnose(err, "config", "", e.what());
        return 1;
    }

    RunConfig config;
    try {
        if (config_path) {
            config = parse_config(detail::read_file(*config_path));
        } else if (scenario) {
            config = parse_config(Json{{"scenario", *scenario}}.dump());
        } else {
            throw ConfigError("scenario", "scenario is required");
        }
        auto &p = config.parameters;
        if (scenario) {
            config.scenario =
                detail::lookup(detail::kScenarioNames, *scenario, "scenario");
        }
        if (gamma) {
            p.gamma = *gamma;
        }
        if (epsilon) {
            p.epsilon = *epsilon;
        }
        if (sigma) {
            p.sigma = *sigma;
        }
        if (phi) {
            p.phi = *phi;
        }
        if (plus_flag->count() > 0) {
            p.bs2_plus = bs2_plus;
        }
        if (minus_flag->count() > 0) {
            p.bs2_minus = bs2_minus;
        }
        if (swap_mode) {
            p.swap_mode = detail::lookup(detail::kSwapModeNames, *swap_mode, "swap_mode");
        }
        if (measured) {
            p.measured = detail::lookup(detail::kMeasuredNames, *measured, "measured");
        }
        if (grid_points) {
            p.grid_points = *grid_points;
        }
        if (sweep) {
            config.sweep = detail::parse_sweep_flag(*sweep);
        }
        if (format) {
            config.output_format =
                detail::lookup(detail::kFormatNames, *format, "output_format");
        }
        if (out_path) {
            config.output_path = *out_path;
        }
        validate(config);
    } catch (const ConfigError &e) {
        detail::diagnose(err, "config", e.field(), e.what());
        return 1;
    }

    std::string text;
    try {
        text = render(execute(config), config.output_format);
    } catch (const std::exception &e) {
        detail::diagnose(err, "runtime", "", e.what());
        return 2;
    }

    if (config.output_path) {
        std::ofstream file(*config.output_path, std::ios::binary);
        if (!file || !(file << text)) {
            detail::diagnose(err, "runtime", "output_path",
                             "cannot write '" + *config.output_path + "'");
            return 2;
        }
    } else {
        out << text;
    }
    return 0;
}

} // namespace hardyweak::cli
