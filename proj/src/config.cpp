#include "qcsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "qcsim/common.hpp"

namespace qcsim {

CoherentWidths coherent_widths(double hbar, double m, double omega) {
    return {std::sqrt(hbar / (2.0 * m * omega)), std::sqrt(hbar * m * omega / 2.0)};
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

ValidatedConfig validate(const SimConfig& config) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const char* msg) {
        if (!ok) errors.emplace_back(msg);
    };

    require(config.hbar > 0.0, "hbar must be positive");
    require(config.mass > 0.0, "mass must be positive");
    require(config.omega > 0.0, "omega must be positive");
    require(config.dt_meas > 0.0, "dt_meas must be positive");
    require(config.dt_classical > 0.0, "dt_classical must be positive");
    require(config.substep_max > 0.0, "substep_max must be positive");
    require(config.t_max > 0.0, "t_max must be positive");
    require(config.ensemble_size >= 1, "ensemble_size must be at least 1");
    require(config.husimi_resolution >= 2, "husimi_resolution must be at least 2");
    require(is_power_of_two(config.grid_points) && config.grid_points >= 64,
            "grid_points must be power of two and at least 64");
    require(config.divergence_threshold > 0.0, "divergence_threshold must be positive");
    require(config.momentum_prefactor >= 1.0, "momentum_prefactor must be at least 1");
    require(config.uncertainty_prefactor >= 1.0, "uncertainty_prefactor must be at least 1");
    require(config.husimi_nsigma > 0.0, "husimi_nsigma must be positive");
    require(std::isfinite(config.x0), "x0 must be finite");
    require(std::isfinite(config.p0), "p0 must be finite");
    require(config.workers >= 0, "workers must be nonnegative");
    validate_potential(config.potential, errors);

    if (!errors.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (i) joined += "; ";
            joined += errors[i];
        }
        throw ConfigError(joined);
    }
    return {config, coherent_widths(config.hbar, config.mass, config.omega)};
}

ValidatedConfig validate(const ValidatedConfig& config) { return validate(config.cfg); }

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for " + key + ": '" + value + "'");
    }
    if (pos != value.size())
        throw ConfigError("invalid numeric value for " + key + ": '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for " + key + ": '" + value + "'");
    }
    if (pos != value.size())
        throw ConfigError("invalid integer value for " + key + ": '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError("invalid boolean value for " + key + ": '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

constexpr const char* kPotentialParamKeys[] = {"k", "g", "lambda", "v0", "w", "a", "b"};

bool is_potential_param(const std::string& key) {
    for (const char* k : kPotentialParamKeys)
        if (key == k) return true;
    return false;
}

}  // namespace

void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "hbar") cfg.hbar = parse_double(key, value);
    else if (key == "mass" || key == "m") cfg.mass = parse_double(key, value);
    else if (key == "omega") cfg.omega = parse_double(key, value);
    else if (key == "dt_meas" || key == "dt") cfg.dt_meas = parse_double(key, value);
    else if (key == "dt_classical") cfg.dt_classical = parse_double(key, value);
    else if (key == "x0") cfg.x0 = parse_double(key, value);
    else if (key == "p0") cfg.p0 = parse_double(key, value);
    else if (key == "ensemble_size") cfg.ensemble_size = static_cast<int>(parse_u64(key, value));
    else if (key == "momentum_prefactor") cfg.momentum_prefactor = parse_double(key, value);
    else if (key == "uncertainty_prefactor") cfg.uncertainty_prefactor = parse_double(key, value);
    else if (key == "divergence_threshold") cfg.divergence_threshold = parse_double(key, value);
    else if (key == "husimi_resolution")
        cfg.husimi_resolution = static_cast<int>(parse_u64(key, value));
    else if (key == "t_max") cfg.t_max = parse_double(key, value);
    else if (key == "base_seed") cfg.base_seed = parse_u64(key, value);
    else if (key == "grid_points") cfg.grid_points = parse_u64(key, value);
    else if (key == "substep_max") cfg.substep_max = parse_double(key, value);
    else if (key == "husimi_nsigma") cfg.husimi_nsigma = parse_double(key, value);
    else if (key == "sample_jitter") cfg.sample_jitter = parse_bool(key, value);
    else if (key == "grid_auto") cfg.grid_auto = parse_bool(key, value);
    else if (key == "measurements") cfg.measurements = parse_bool(key, value);
    else if (key == "strict_errors") cfg.strict_errors = parse_bool(key, value);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_u64(key, value));
    else if (key == "divergence_mode") {
        if (value == "ensemble_rms") cfg.divergence_mode = DivergenceMode::ensemble_rms;
        else if (value == "per_run") cfg.divergence_mode = DivergenceMode::per_run;
        else throw ConfigError("invalid divergence_mode '" + value + "'");
    } else if (key == "potential") {
        cfg.potential = make_potential(value, {});
    } else if (is_potential_param(key)) {
        auto params = potential_params(cfg.potential);
        if (!params.count(key))
            throw ConfigError("potential '" + potential_name(cfg.potential) +
                              "' does not take parameter '" + key + "'");
        params[key] = parse_double(key, value);
        cfg.potential = make_potential(potential_name(cfg.potential), params);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_line(SimConfig& cfg, const std::string& raw, int line_no) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

SimConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());

    // Gather lines first so the potential name is applied before its
    // parameter keys regardless of file order.
    std::vector<std::pair<int, std::string>> plain, name, params;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string key = eq == std::string::npos ? line : trim(line.substr(0, eq));
        if (key == "potential") name.emplace_back(line_no, raw);
        else if (is_potential_param(key)) params.emplace_back(line_no, raw);
        else plain.emplace_back(line_no, raw);
    }

    SimConfig cfg;
    for (const auto& [no, l] : plain) apply_config_line(cfg, l, no);
    for (const auto& [no, l] : name) apply_config_line(cfg, l, no);
    for (const auto& [no, l] : params) apply_config_line(cfg, l, no);
    return cfg;
}

std::string config_to_text(const SimConfig& cfg) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "hbar = " << num(cfg.hbar) << "\n";
    out << "mass = " << num(cfg.mass) << "\n";
    out << "omega = " << num(cfg.omega) << "\n";
    out << "dt_meas = " << num(cfg.dt_meas) << "\n";
    out << "dt_classical = " << num(cfg.dt_classical) << "\n";
    out << "x0 = " << num(cfg.x0) << "\n";
    out << "p0 = " << num(cfg.p0) << "\n";
    out << "potential = " << potential_name(cfg.potential) << "\n";
    for (const auto& [key, val] : potential_params(cfg.potential))
        out << key << " = " << num(val) << "\n";
    out << "ensemble_size = " << cfg.ensemble_size << "\n";
    out << "momentum_prefactor = " << num(cfg.momentum_prefactor) << "\n";
    out << "uncertainty_prefactor = " << num(cfg.uncertainty_prefactor) << "\n";
    out << "divergence_threshold = " << num(cfg.divergence_threshold) << "\n";
    out << "husimi_resolution = " << cfg.husimi_resolution << "\n";
    out << "t_max = " << num(cfg.t_max) << "\n";
    out << "base_seed = " << cfg.base_seed << "\n";
    out << "grid_points = " << cfg.grid_points << "\n";
    out << "substep_max = " << num(cfg.substep_max) << "\n";
    out << "divergence_mode = "
        << (cfg.divergence_mode == DivergenceMode::per_run ? "per_run" : "ensemble_rms") << "\n";
    out << "husimi_nsigma = " << num(cfg.husimi_nsigma) << "\n";
    out << "sample_jitter = " << (cfg.sample_jitter ? "true" : "false") << "\n";
    out << "grid_auto = " << (cfg.grid_auto ? "true" : "false") << "\n";
    out << "measurements = " << (cfg.measurements ? "true" : "false") << "\n";
    out << "strict_errors = " << (cfg.strict_errors ? "true" : "false") << "\n";
    out << "workers = " << cfg.workers << "\n";
    return out.str();
}

}  // namespace qcsim
