// SPDX-License-Identifier: Apache-2.0

#include "bfsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bfsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep)
        parts.push_back("");
    return parts;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw config_error("config: key '" + where + "': " + what);
}

double parse_double(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "inf" || v == "+inf")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            fail(where, "trailing characters in number '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(where, "not a number: '" + v + "'");
    }
}

long parse_int(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    try {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (used != v.size())
            fail(where, "trailing characters in integer '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(where, "not an integer: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    try {
        std::size_t used = 0;
        const unsigned long long d = std::stoull(v, &used);
        if (used != v.size() || v.front() == '-')
            fail(where, "not an unsigned integer: '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(where, "not an unsigned integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    fail(where, "expected true or false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& where, const std::string& raw) {
    std::vector<double> out;
    for (const auto& item : split(raw, ',')) {
        if (item.empty())
            fail(where, "empty list entry");
        out.push_back(parse_double(where, item));
    }
    if (out.empty())
        fail(where, "empty list");
    return out;
}

std::vector<std::pair<double, double>> parse_pair_list(const std::string& where,
                                                       const std::string& raw) {
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split(raw, ';')) {
        if (item.empty())
            fail(where, "empty coordinate pair");
        std::istringstream in(item);
        std::string xs, ys, extra;
        in >> xs >> ys;
        if (ys.empty() || (in >> extra))
            fail(where, "expected 'x y' pair, got '" + item + "'");
        out.emplace_back(parse_double(where, xs), parse_double(where, ys));
    }
    if (out.empty())
        fail(where, "empty pair list");
    return out;
}

/// Raw parse result: section -> key -> value, duplicates rejected.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: line " + std::to_string(lineno) +
                                   ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error("config: line " + std::to_string(lineno) +
                                   ": empty section name");
            raw[section]; // register even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config: line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw config_error("config: key '" + key + "' appears before any [section]");
        if (!raw[section].emplace(key, value).second)
            throw config_error("config: duplicate key '" + section + "." + key + "'");
    }
    return raw;
}

/// Pops known keys from one section; whatever remains is unknown.
class Section {
  public:
    Section(RawConfig& raw, const std::string& name) : name_(name) {
        auto it = raw.find(name);
        if (it != raw.end()) {
            keys_ = std::move(it->second);
            raw.erase(it);
        }
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = keys_.find(key);
        if (it == keys_.end())
            return std::nullopt;
        std::string v = std::move(it->second);
        keys_.erase(it);
        return v;
    }

    std::string where(const std::string& key) const { return name_ + "." + key; }

    void finish() const {
        if (!keys_.empty())
            throw config_error("config: unknown key '" + name_ + "." + keys_.begin()->first +
                               "'");
    }

  private:
    std::string name_;
    std::map<std::string, std::string> keys_;
};

Algorithm parse_algorithm(const std::string& where, const std::string& name) {
    std::string v = trim(name);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "gbf")
        return Algorithm::GBF;
    if (v == "cma")
        return Algorithm::CMA;
    if (v == "music")
        return Algorithm::MUSIC;
    if (v == "oracle")
        return Algorithm::ORACLE;
    fail(where, "unknown algorithm '" + name + "'");
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.elements < 1)
        fail("array.elements", "must be >= 1");
    if (cfg.array_type == ArrayType::Uca && cfg.elements < 2)
        fail("array.elements", "uca requires >= 2 elements");
    if (cfg.spacing_m && !(*cfg.spacing_m > 0.0))
        fail("array.spacing_m", "must be > 0");
    if (cfg.array_type == ArrayType::Custom) {
        if (cfg.custom_positions.empty())
            fail("array.positions", "required for type = custom");
        if (static_cast<int>(cfg.custom_positions.size()) != cfg.elements)
            fail("array.positions", "count does not match array.elements");
        for (const auto& [x, y] : cfg.custom_positions)
            if (!std::isfinite(x) || !std::isfinite(y))
                fail("array.positions", "positions must be finite");
        for (std::size_t i = 0; i < cfg.custom_positions.size(); ++i)
            for (std::size_t j = i + 1; j < cfg.custom_positions.size(); ++j)
                if (cfg.custom_positions[i] == cfg.custom_positions[j])
                    fail("array.positions", "two elements share identical coordinates");
    } else if (!cfg.custom_positions.empty()) {
        fail("array.positions", "only valid for type = custom");
    }

    if (!(cfg.f_c_hz > 0.0) || !std::isfinite(cfg.f_c_hz))
        fail("carrier.f_c_hz", "must be finite and > 0");

    if (!(cfg.imperfection_range_rad >= 0.0))
        fail("imperfection.range_rad", "must be >= 0");
    if (!cfg.fixed_phase_offsets.empty() &&
        static_cast<int>(cfg.fixed_phase_offsets.size()) != cfg.elements)
        fail("imperfection.phase_offsets_rad", "length does not match array.elements");
    if (!cfg.fixed_gain_factors.empty()) {
        if (static_cast<int>(cfg.fixed_gain_factors.size()) != cfg.elements)
            fail("imperfection.gain_factors", "length does not match array.elements");
        for (double g : cfg.fixed_gain_factors)
            if (!(g > 0.0))
                fail("imperfection.gain_factors", "gains must be > 0");
    }
    if (!cfg.fixed_position_jitter.empty() &&
        static_cast<int>(cfg.fixed_position_jitter.size()) != cfg.elements)
        fail("imperfection.position_jitter_m", "length does not match array.elements");

    if (cfg.sps < 1)
        fail("signal.sps", "must be >= 1");
    if (!(cfg.rolloff > 0.0) || cfg.rolloff > 1.0)
        fail("signal.rolloff", "must be in (0, 1]");
    if (cfg.rrc_span_symbols < 2 || cfg.rrc_span_symbols % 2 != 0)
        fail("signal.rrc_span_symbols", "must be a positive even integer");
    if (cfg.frame_symbols < 1)
        fail("signal.frame_symbols", "must be >= 1");
    for (double snr : cfg.snr_db_list)
        if (std::isnan(snr) || (std::isinf(snr) && snr < 0.0))
            fail("signal.snr_db", "values must be finite or inf");

    if (cfg.algorithms.empty())
        fail("beamformer.algorithms", "must list at least one algorithm");
    {
        std::set<Algorithm> seen;
        for (Algorithm a : cfg.algorithms)
            if (!seen.insert(a).second)
                fail("beamformer.algorithms", "duplicate algorithm '" + to_string(a) + "'");
    }
    const bool has_music =
        std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::MUSIC) !=
        cfg.algorithms.end();
    const bool has_cma =
        std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::CMA) !=
        cfg.algorithms.end();
    if (has_music && cfg.elements < 2)
        fail("beamformer.algorithms", "music requires >= 2 elements");
    if (!(cfg.mu_value >= 0.0) || !std::isfinite(cfg.mu_value))
        fail("beamformer.mu", "must be finite and >= 0");
    if (!(cfg.cma_step >= 0.0) || !std::isfinite(cfg.cma_step))
        fail("beamformer.cma_step", "must be finite and >= 0");
    if (!(cfg.music_grid_step_deg > 0.0))
        fail("beamformer.music_grid_step_deg", "must be > 0");
    for (int n : cfg.gradient_samples_list) {
        if (n < 1)
            fail("beamformer.gradient_samples", "values must be >= 1");
        if (n > cfg.frame_samples())
            fail("beamformer.gradient_samples",
                 "value exceeds frame length of " + std::to_string(cfg.frame_samples()) +
                     " samples");
        if (has_cma && n > cfg.frame_symbols)
            fail("beamformer.gradient_samples",
                 "cma consumes one symbol per update; value exceeds frame_symbols = " +
                     std::to_string(cfg.frame_symbols));
    }

    if (cfg.initial_deg && !std::isfinite(*cfg.initial_deg))
        fail("aoa.initial_deg", "must be finite (or 'random')");
    for (double w : cfg.walk_std_deg_list)
        if (!(w >= 0.0) || !std::isfinite(w))
            fail("aoa.walk_std_deg", "values must be finite and >= 0");

    if (!(cfg.pattern_grid_step_deg > 0.0))
        fail("pattern.grid_step_deg", "must be > 0");

    if (cfg.trials < 1)
        fail("mc.trials", "must be >= 1");
    if (cfg.frames < 1)
        fail("mc.frames", "must be >= 1");
}

} // namespace

ArrayGeometry ScenarioConfig::build_geometry() const {
    switch (array_type) {
    case ArrayType::Ula:
        return make_ula(elements, element_spacing());
    case ArrayType::Uca:
        return make_uca(elements, element_spacing());
    case ArrayType::Custom:
        return ArrayGeometry{custom_positions};
    }
    throw std::logic_error("unreachable");
}

ScenarioConfig parse_config(const std::string& text) {
    RawConfig raw = parse_raw(text);
    ScenarioConfig cfg;

    {
        Section s(raw, "array");
        if (auto v = s.take("type")) {
            if (*v == "ula")
                cfg.array_type = ArrayType::Ula;
            else if (*v == "uca")
                cfg.array_type = ArrayType::Uca;
            else if (*v == "custom")
                cfg.array_type = ArrayType::Custom;
            else
                fail(s.where("type"), "expected ula, uca or custom, got '" + *v + "'");
        }
        bool elements_given = false;
        if (auto v = s.take("elements")) {
            cfg.elements = static_cast<int>(parse_int(s.where("elements"), *v));
            elements_given = true;
        }
        if (auto v = s.take("spacing_m"))
            cfg.spacing_m = parse_double(s.where("spacing_m"), *v);
        if (auto v = s.take("positions"))
            cfg.custom_positions = parse_pair_list(s.where("positions"), *v);
        if (cfg.array_type == ArrayType::Custom && !elements_given &&
            !cfg.custom_positions.empty())
            cfg.elements = static_cast<int>(cfg.custom_positions.size());
        s.finish();
    }
    {
        Section s(raw, "carrier");
        if (auto v = s.take("f_c_hz"))
            cfg.f_c_hz = parse_double(s.where("f_c_hz"), *v);
        s.finish();
    }
    {
        Section s(raw, "imperfection");
        if (auto v = s.take("mode")) {
            if (*v == "none")
                cfg.imperfection_mode = ImperfectionMode::None;
            else if (*v == "uniform-phase")
                cfg.imperfection_mode = ImperfectionMode::UniformPhase;
            else
                fail(s.where("mode"), "expected none or uniform-phase, got '" + *v + "'");
        }
        if (auto v = s.take("range_rad"))
            cfg.imperfection_range_rad = parse_double(s.where("range_rad"), *v);
        if (auto v = s.take("phase_offsets_rad"))
            cfg.fixed_phase_offsets = parse_double_list(s.where("phase_offsets_rad"), *v);
        if (auto v = s.take("gain_factors"))
            cfg.fixed_gain_factors = parse_double_list(s.where("gain_factors"), *v);
        if (auto v = s.take("position_jitter_m"))
            cfg.fixed_position_jitter = parse_pair_list(s.where("position_jitter_m"), *v);
        s.finish();
    }
    {
        Section s(raw, "signal");
        if (auto v = s.take("modulation")) {
            if (*v != "qpsk")
                fail(s.where("modulation"), "only qpsk is supported, got '" + *v + "'");
        }
        if (auto v = s.take("sps"))
            cfg.sps = static_cast<int>(parse_int(s.where("sps"), *v));
        if (auto v = s.take("rolloff"))
            cfg.rolloff = parse_double(s.where("rolloff"), *v);
        if (auto v = s.take("rrc_span_symbols"))
            cfg.rrc_span_symbols = static_cast<int>(parse_int(s.where("rrc_span_symbols"), *v));
        if (auto v = s.take("frame_symbols"))
            cfg.frame_symbols = static_cast<int>(parse_int(s.where("frame_symbols"), *v));
        if (auto v = s.take("snr_db"))
            cfg.snr_db_list = parse_double_list(s.where("snr_db"), *v);
        s.finish();
    }
    {
        Section s(raw, "beamformer");
        if (auto v = s.take("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& name : split(*v, ','))
                cfg.algorithms.push_back(parse_algorithm(s.where("algorithms"), name));
        }
        if (auto v = s.take("mu_mode")) {
            if (*v == "auto")
                cfg.mu_auto = true;
            else if (*v == "fixed")
                cfg.mu_auto = false;
            else
                fail(s.where("mu_mode"), "expected auto or fixed, got '" + *v + "'");
        }
        if (auto v = s.take("mu"))
            cfg.mu_value = parse_double(s.where("mu"), *v);
        if (auto v = s.take("gradient_samples")) {
            cfg.gradient_samples_list.clear();
            for (double d : parse_double_list(s.where("gradient_samples"), *v)) {
                if (d != std::floor(d))
                    fail(s.where("gradient_samples"), "values must be integers");
                cfg.gradient_samples_list.push_back(static_cast<int>(d));
            }
        }
        if (auto v = s.take("cma_step"))
            cfg.cma_step = parse_double(s.where("cma_step"), *v);
        if (auto v = s.take("music_grid_step_deg"))
            cfg.music_grid_step_deg = parse_double(s.where("music_grid_step_deg"), *v);
        s.finish();
    }
    {
        Section s(raw, "aoa");
        if (auto v = s.take("initial_deg")) {
            if (*v == "random")
                cfg.initial_deg.reset();
            else
                cfg.initial_deg = parse_double(s.where("initial_deg"), *v);
        }
        if (auto v = s.take("walk_std_deg"))
            cfg.walk_std_deg_list = parse_double_list(s.where("walk_std_deg"), *v);
        s.finish();
    }
    {
        Section s(raw, "pattern");
        if (auto v = s.take("grid_step_deg"))
            cfg.pattern_grid_step_deg = parse_double(s.where("grid_step_deg"), *v);
        if (auto v = s.take("compensate"))
            cfg.pattern_compensate = parse_bool(s.where("compensate"), *v);
        s.finish();
    }
    {
        Section s(raw, "mc");
        if (auto v = s.take("trials"))
            cfg.trials = static_cast<int>(parse_int(s.where("trials"), *v));
        if (auto v = s.take("frames"))
            cfg.frames = static_cast<int>(parse_int(s.where("frames"), *v));
        if (auto v = s.take("master_seed"))
            cfg.master_seed = parse_u64(s.where("master_seed"), *v);
        s.finish();
    }

    if (!raw.empty())
        throw config_error("config: unknown section '[" + raw.begin()->first + "]'");

    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace bfsim
