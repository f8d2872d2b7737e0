#include "wva_app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "wva/error.hpp"

namespace wva::app {

namespace {

// Calls v(path, field) for every configurable leaf, in emission order.
template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
    v("waveguide.half_width", c.waveguide.geometry.half_width);
    v("waveguide.core_index", c.waveguide.geometry.core_index);
    v("waveguide.cladding_index", c.waveguide.geometry.cladding_index);
    v("waveguide.wavelength", c.waveguide.wavelength);
    v("waveguide.thermo.dn1_dT", c.waveguide.thermo.dn1_dT);
    v("waveguide.thermo.dn2_dT", c.waveguide.thermo.dn2_dT);
    v("waveguide.thermo.reference_temperature", c.waveguide.thermo.reference_temperature);
    v("waveguide.thermo.t_min", c.waveguide.t_min);
    v("waveguide.thermo.t_max", c.waveguide.t_max);

    v("grating.length", c.grating.length);
    v("grating.index_amplitude", c.grating.index_amplitude);
    v("grating.method", c.grating.method);
    v("grating.points", c.grating.points);
    v("grating.span_kappa", c.grating.span_kappa);
    v("grating.segments_per_period", c.grating.segments_per_period);
    v("grating.double.centers", c.grating.double_centers);
    v("grating.double.amplitudes", c.grating.double_amplitudes);
    v("grating.double.window_min", c.grating.window_min);
    v("grating.double.window_max", c.grating.window_max);
    v("grating.double.points", c.grating.double_points);

    v("interferometer.kappa", c.interferometer.kappa);
    v("interferometer.readout", c.interferometer.readout);
    v("interferometer.phases", c.interferometer.phases);
    v("interferometer.profile_points", c.interferometer.profile_points);
    v("interferometer.sweep.min", c.interferometer.sweep_min);
    v("interferometer.sweep.max", c.interferometer.sweep_max);
    v("interferometer.sweep.points", c.interferometer.sweep_points);

    v("metrology.detected_power", c.metrology.detected_power);

    v("noise.bias", c.noise.bias);
    v("noise.sigma_walk", c.noise.sigma_walk);
    v("noise.dt", c.noise.dt);
    v("noise.steps", c.noise.steps);
    v("noise.trajectories", c.noise.trajectories);
    v("noise.drift_readout", c.noise.drift_readout);
    v("noise.bias_values", c.noise.bias_values);
    v("noise.bias_phi_max", c.noise.bias_phi_max);
    v("noise.bias_points", c.noise.bias_points);
    v("noise.thermal.delta_L", c.noise.delta_L);
    v("noise.thermal.delta_T", c.noise.delta_T);

    v("output.directory", c.output.directory);
    v("output.formats", c.output.formats);

    v("seed", c.seed);
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    return parts;
}

std::string where(const YAML::Node& node, const std::string& source) {
    const auto mark = node.Mark();
    if (mark.is_null()) return source;
    std::ostringstream out;
    out << source << ":" << mark.line + 1 << ":" << mark.column + 1;
    return out.str();
}

YAML::Node find(const YAML::Node& root, const std::string& path) {
    YAML::Node cur;
    cur.reset(root);
    for (const auto& part : split_path(path)) {
        if (!cur.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
        const YAML::Node next = cur[part];
        if (!next.IsDefined()) return YAML::Node(YAML::NodeType::Undefined);
        cur.reset(next);
    }
    return cur;
}

struct Reader {
    const YAML::Node& root;
    const std::string& source;

    [[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& what) const {
        throw ConfigError(where(node, source) + ": key '" + key + "': " + what);
    }

    template <typename T>
    T scalar(const YAML::Node& node, const std::string& key, const char* type) const {
        if (!node.IsScalar()) fail(node, key, std::string("expected a ") + type);
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, key, std::string("expected a ") + type + ", got '" + node.Scalar() + "'");
        }
    }

    void operator()(const std::string& key, double& field) const {
        const auto node = find(root, key);
        if (node.IsDefined() && !node.IsNull()) field = scalar<double>(node, key, "number");
    }
    void operator()(const std::string& key, std::size_t& field) const {
        const auto node = find(root, key);
        if (!node.IsDefined() || node.IsNull()) return;
        const auto v = scalar<long long>(node, key, "nonnegative integer");
        if (v < 0) fail(node, key, "expected a nonnegative integer");
        field = static_cast<std::size_t>(v);
    }
    void operator()(const std::string& key, std::string& field) const {
        const auto node = find(root, key);
        if (node.IsDefined() && !node.IsNull()) field = scalar<std::string>(node, key, "string");
    }
    template <typename T>
    void read_list(const std::string& key, std::vector<T>& field, const char* type) const {
        const auto node = find(root, key);
        if (!node.IsDefined() || node.IsNull()) return;
        if (!node.IsSequence()) fail(node, key, "expected a list");
        std::vector<T> out;
        for (const auto& item : node) out.push_back(scalar<T>(item, key, type));
        field = std::move(out);
    }
    void operator()(const std::string& key, std::vector<double>& field) const { read_list(key, field, "number"); }
    void operator()(const std::string& key, std::vector<std::string>& field) const {
        read_list(key, field, "string");
    }
};

void collect_leaves(const YAML::Node& node, const std::string& prefix,
                    std::vector<std::pair<std::string, YAML::Node>>& out) {
    if (!node.IsMap()) {
        out.emplace_back(prefix, node);
        return;
    }
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        collect_leaves(kv.second, prefix.empty() ? key : prefix + "." + key, out);
    }
}

void apply_override(YAML::Node& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' must look like key.path=value");
    }
    const auto parts = split_path(assignment.substr(0, eq));
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::Exception& e) {
        throw ConfigError("override '" + assignment + "': " + e.msg);
    }
    YAML::Node cur;
    cur.reset(root);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!cur[parts[i]].IsMap()) cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
        YAML::Node next = cur[parts[i]];
        cur.reset(next);
    }
    cur[parts.back()] = value;
}

template <typename T>
void require(bool ok, const T& message) {
    if (!ok) throw ConfigError(std::string("validation error: ") + message);
}

}  // namespace

void ScenarioConfig::validate() const {
    try {
        waveguide.geometry.validate();
        waveguide.thermo.validate();
    } catch (const wva::Error& e) {
        throw ConfigError(std::string("validation error: ") + e.what());
    }
    require(waveguide.wavelength > 0.0, "waveguide.wavelength must be positive");
    require(waveguide.t_max > waveguide.t_min, "waveguide.thermo.t_max must exceed t_min");

    require(grating.length > 0.0, "grating.length must be positive");
    require(grating.index_amplitude >= 0.0, "grating.index_amplitude must be nonnegative");
    require(grating.method == "fundamental" || grating.method == "thin-layer",
            "grating.method must be fundamental or thin-layer");
    require(grating.points >= 3, "grating.points must be at least 3");
    require(grating.span_kappa > 0.0, "grating.span_kappa must be positive");
    require(grating.segments_per_period >= grating::min_segments_per_period,
            "grating.segments_per_period must be at least 20");
    require(!grating.double_centers.empty() && grating.double_centers.size() <= 2,
            "grating.double.centers needs one or two entries");
    require(grating.double_centers.size() == grating.double_amplitudes.size(),
            "grating.double.amplitudes needs one entry per center");
    for (double a : grating.double_amplitudes) require(a >= 0.0, "grating.double.amplitudes must be nonnegative");
    for (double c : grating.double_centers) require(c > 0.0, "grating.double.centers must be positive");
    require(grating.window_max > grating.window_min && grating.window_min > 0.0,
            "grating.double.window_max must exceed window_min > 0");
    require(grating.double_points >= 3, "grating.double.points must be at least 3");

    require(interferometer.kappa > 0.0 && interferometer.kappa < 1.0, "interferometer.kappa must lie in (0, 1)");
    require(interferometer.readout == "mode-ratio" || interferometer.readout == "displacement",
            "interferometer.readout must be mode-ratio or displacement");
    for (double p : interferometer.phases) require(std::abs(p) < 3.14159, "interferometer.phases must satisfy |phi| < pi");
    require(interferometer.profile_points >= 2, "interferometer.profile_points must be at least 2");
    require(interferometer.sweep_max > interferometer.sweep_min && interferometer.sweep_min > 0.0,
            "interferometer.sweep.max must exceed sweep.min > 0");
    require(interferometer.sweep_points >= 3, "interferometer.sweep.points must be at least 3");

    require(metrology.detected_power > 0.0, "metrology.detected_power must be positive");

    require(std::abs(noise.bias) < 0.5, "noise.bias must satisfy |b| < 0.5");
    require(noise.sigma_walk >= 0.0, "noise.sigma_walk must be nonnegative");
    require(noise.dt > 0.0, "noise.dt must be positive");
    require(noise.steps >= 8, "noise.steps must be at least 8");
    require(noise.trajectories >= 1, "noise.trajectories must be at least 1");
    require(noise.drift_readout == "displacement" || noise.drift_readout == "mode-ratio",
            "noise.drift_readout must be displacement or mode-ratio");
    for (double b : noise.bias_values) require(std::abs(b) < 0.5, "noise.bias_values must satisfy |b| < 0.5");
    require(noise.bias_phi_max > 0.0, "noise.bias_phi_max must be positive");
    require(noise.bias_points >= 2, "noise.bias_points must be at least 2");
    require(noise.delta_L >= 0.0, "noise.thermal.delta_L must be nonnegative");

    require(!output.directory.empty(), "output.directory must not be empty");
    require(!output.formats.empty(), "output.formats must name csv and/or json");
    for (const auto& f : output.formats) require(f == "csv" || f == "json", "output.formats entries must be csv or json");
}

grating::SpectrumMethod ScenarioConfig::single_method() const {
    return grating.method == "thin-layer" ? grating::SpectrumMethod::thin_layer : grating::SpectrumMethod::fundamental;
}

interferometer::ReadoutMethod ScenarioConfig::readout_method() const {
    return interferometer.readout == "displacement" ? interferometer::ReadoutMethod::displacement
                                                    : interferometer::ReadoutMethod::mode_ratio;
}

noise::DriftReadout ScenarioConfig::drift_readout() const {
    return noise.drift_readout == "mode-ratio" ? noise::DriftReadout::mode_ratio : noise::DriftReadout::displacement;
}

noise::BiasModel ScenarioConfig::bias_model() const {
    return noise::BiasModel{noise.bias, noise.sigma_walk, noise.dt, noise.steps, seed};
}

noise::DriftConfig ScenarioConfig::drift_config() const {
    noise::DriftConfig d;
    d.power = metrology.detected_power;
    d.wavelength = waveguide.wavelength;
    d.kappa = interferometer.kappa;
    d.trajectories = noise.trajectories;
    d.readout = drift_readout();
    return d;
}

bool ScenarioConfig::wants(const std::string& format) const {
    for (const auto& f : output.formats) {
        if (f == format) return true;
    }
    return false;
}

ScenarioConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                                 const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": parse error: " << e.msg;
        throw ConfigError(msg.str());
    }
    if (root.IsNull() || !root.IsDefined()) root = YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) throw ConfigError(where(root, source) + ": top level must be a mapping");
    for (const auto& o : overrides) apply_override(root, o);

    std::set<std::string> known;
    ScenarioConfig config;
    visit_fields(config, [&](const std::string& key, auto&) { known.insert(key); });
    std::vector<std::pair<std::string, YAML::Node>> leaves;
    collect_leaves(root, "", leaves);
    for (const auto& [key, node] : leaves) {
        if (key.empty()) continue;
        if (!known.count(key)) throw ConfigError(where(node, source) + ": unknown key '" + key + "'");
    }
    visit_fields(config, Reader{root, source});
    config.validate();
    return config;
}

ScenarioConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), overrides, path);
}

std::string emit_config(const ScenarioConfig& config) {
    YAML::Node root(YAML::NodeType::Map);
    visit_fields(config, [&](const std::string& key, const auto& field) {
        const auto parts = split_path(key);
        YAML::Node cur;
        cur.reset(root);
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!cur[parts[i]].IsMap()) cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
            YAML::Node next = cur[parts[i]];
            cur.reset(next);
        }
        cur[parts.back()] = field;
    });
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << root;
    return std::string(out.c_str()) + "\n";
}

}  // namespace wva::app
