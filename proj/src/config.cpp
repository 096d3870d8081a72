#include "gkclim/config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "gkclim/errors.hpp"

namespace gkclim {

namespace {

using toml::format_double;

std::vector<double> number_list(const toml::Value& v) {
    std::vector<double> out;
    for (const auto& item : v.as_array()) out.push_back(item.as_number());
    return out;
}

Interval interval_from(const toml::Value& v, const std::string& key) {
    const auto xs = number_list(v);
    if (xs.size() != 2) throw ConfigError(key + " must be a [lower, upper] pair");
    return {xs[0], xs[1]};
}

std::string list(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_double(xs[i]);
    return s + "]";
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

void apply_root(ExperimentConfig& cfg, const std::string& key, const toml::Value& v) {
    if (key == "variant") cfg.variant = parse_variant(v.as_string());
    else if (key == "horizon_years") cfg.horizon_years = v.as_number();
    else if (key == "steps_per_year") cfg.steps_per_year = static_cast<int>(v.as_integer());
    else if (key == "samples") cfg.samples = static_cast<std::size_t>(v.as_integer());
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(v.as_integer());
    else if (key == "save_trajectories") cfg.save_trajectories = v.as_bool();
    else if (key == "workers") cfg.workers = static_cast<unsigned>(v.as_integer());
    else throw ConfigError("unknown top-level key '" + key + "'");
}

void apply_solver(SolverSettings& s, const std::string& key, const toml::Value& v) {
    if (key == "rtol") s.rtol = v.as_number();
    else if (key == "atol") s.atol = v.as_number();
    else if (key == "initial_step") s.initial_step = v.as_number();
    else if (key == "max_step") s.max_step = v.as_number();
    else if (key == "max_steps") s.max_steps = static_cast<std::size_t>(v.as_integer());
    else throw ConfigError("unknown solver key '" + key + "'");
}

void apply_ratio(RatioInit& r, const std::string& key, double v) {
    if (key == "employment") r.employment = v;
    else if (key == "wage_share") r.wage_share = v;
    else if (key == "debt_ratio") r.debt_ratio = v;
    else throw ConfigError("unknown ratio_init key '" + key + "'");
}

void apply_sweep(ExperimentConfig& cfg, const std::map<std::string, toml::Value>& sec) {
    std::vector<std::string> names;
    std::vector<double> lower, upper;
    bool have_axes = false;
    for (const auto& [key, v] : sec) {
        if (key == "parameters") {
            have_axes = true;
            for (const auto& item : v.as_array()) names.push_back(item.as_string());
        } else if (key == "lower") {
            lower = number_list(v);
        } else if (key == "upper") {
            upper = number_list(v);
        } else if (key == "skip") {
            cfg.sobol_skip = static_cast<std::size_t>(v.as_integer());
        } else {
            throw ConfigError("unknown sweep key '" + key + "'");
        }
    }
    if (!have_axes) {
        if (!lower.empty() || !upper.empty())
            throw ConfigError("sweep.lower/upper given without sweep.parameters");
        return;
    }
    if (lower.size() != names.size() || upper.size() != names.size())
        throw ConfigError("sweep.parameters, sweep.lower and sweep.upper must have equal length");
    cfg.sweep_axes.clear();
    for (std::size_t i = 0; i < names.size(); ++i)
        cfg.sweep_axes.push_back({std::string(canonical_param_name(names[i])), lower[i], upper[i]});
}

void apply_basin(BasinSettings& b, const std::string& key, const toml::Value& v) {
    if (key == "resolution") b.resolution = static_cast<int>(v.as_integer());
    else if (key == "markups") b.markups = number_list(v);
    else if (key == "employment") b.employment = interval_from(v, "basin.employment");
    else if (key == "wage_share") b.wage_share = interval_from(v, "basin.wage_share");
    else if (key == "debt_ratio") b.debt_ratio = interval_from(v, "basin.debt_ratio");
    else if (key == "inflation_relaxation") b.inflation_relaxation = v.as_number();
    else if (key == "money_illusion") b.money_illusion = v.as_number();
    else throw ConfigError("unknown basin key '" + key + "'");
}

void apply_mc(MonteCarloSettings& m, const std::string& key, const toml::Value& v) {
    if (key == "horizon_years") m.horizon_years = v.as_number();
    else if (key == "readout_year") m.readout_year = v.as_number();
    else if (key == "employment_threshold") m.employment_threshold = v.as_number();
    else throw ConfigError("unknown monte_carlo key '" + key + "'");
}

const std::set<std::string> kRootKeys{"variant", "horizon_years", "steps_per_year", "samples",
                                      "seed",    "save_trajectories", "workers"};

}  // namespace

void apply_table(ExperimentConfig& cfg, const toml::Table& table) {
    for (const auto& [section, entries] : table) {
        if (section.empty()) {
            for (const auto& [k, v] : entries) apply_root(cfg, k, v);
        } else if (section == "solver") {
            for (const auto& [k, v] : entries) apply_solver(cfg.solver, k, v);
        } else if (section == "params") {
            for (const auto& [k, v] : entries) param_ref(cfg.params, k) = v.as_number();
        } else if (section == "initial") {
            for (const auto& [k, v] : entries) initial_ref(cfg.initial, k) = v.as_number();
        } else if (section == "ratio_init") {
            RatioInit r = cfg.ratio_init.value_or(RatioInit{});
            for (const auto& [k, v] : entries) apply_ratio(r, k, v.as_number());
            cfg.ratio_init = r;
        } else if (section == "sweep") {
            apply_sweep(cfg, entries);
        } else if (section == "basin") {
            for (const auto& [k, v] : entries) apply_basin(cfg.basin, k, v);
        } else if (section == "monte_carlo") {
            for (const auto& [k, v] : entries) apply_mc(cfg.monte_carlo, k, v);
        } else {
            throw ConfigError("unknown config table [" + section + "]");
        }
    }
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    apply_table(cfg, toml::parse_file(path));
    return cfg;
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form name=value");
    const std::string name(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));
    std::string scope, key = name;
    if (const auto dot = name.find('.'); dot != std::string::npos) {
        scope = name.substr(0, dot);
        key = name.substr(dot + 1);
    } else if (!kRootKeys.contains(name)) {
        scope = "params";
    }
    const auto parse_as = [&](const std::string& text) {
        std::istringstream in((scope.empty() ? "" : "[" + scope + "]\n") + key + " = " + text + "\n");
        return toml::parse(in);
    };
    toml::Table table;
    try {
        table = parse_as(value);
    } catch (const ConfigError&) {
        // Bare words such as `variant=full` are read as strings.
        table = parse_as(quote(value));
    }
    apply_table(cfg, table);
}

std::string to_toml(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "variant = " << quote(to_string(cfg.variant)) << "\n";
    out << "horizon_years = " << format_double(cfg.horizon_years) << "\n";
    out << "steps_per_year = " << cfg.steps_per_year << "\n";
    out << "samples = " << cfg.samples << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "save_trajectories = " << (cfg.save_trajectories ? "true" : "false") << "\n";
    out << "workers = " << cfg.workers << "\n";

    out << "\n[solver]\n";
    out << "rtol = " << format_double(cfg.solver.rtol) << "\n";
    out << "atol = " << format_double(cfg.solver.atol) << "\n";
    out << "initial_step = " << format_double(cfg.solver.initial_step) << "\n";
    out << "max_step = " << format_double(cfg.solver.max_step) << "\n";
    out << "max_steps = " << cfg.solver.max_steps << "\n";

    out << "\n[params]\n";
    for (const auto& f : param_fields())
        out << f.name << " = " << format_double(cfg.params.*f.member) << "\n";

    out << "\n[initial]\n";
    for (const auto& f : initial_fields())
        out << f.name << " = " << format_double(cfg.initial.*f.member) << "\n";

    if (cfg.ratio_init) {
        out << "\n[ratio_init]\n";
        out << "employment = " << format_double(cfg.ratio_init->employment) << "\n";
        out << "wage_share = " << format_double(cfg.ratio_init->wage_share) << "\n";
        out << "debt_ratio = " << format_double(cfg.ratio_init->debt_ratio) << "\n";
    }

    out << "\n[sweep]\n";
    std::vector<double> lo, hi;
    out << "parameters = [";
    for (std::size_t i = 0; i < cfg.sweep_axes.size(); ++i) {
        out << (i ? ", " : "") << quote(cfg.sweep_axes[i].parameter);
        lo.push_back(cfg.sweep_axes[i].lower);
        hi.push_back(cfg.sweep_axes[i].upper);
    }
    out << "]\n";
    out << "lower = " << list(lo) << "\n";
    out << "upper = " << list(hi) << "\n";
    out << "skip = " << cfg.sobol_skip << "\n";

    const auto& b = cfg.basin;
    out << "\n[basin]\n";
    out << "resolution = " << b.resolution << "\n";
    out << "markups = " << list(b.markups) << "\n";
    out << "employment = " << list({b.employment.lower, b.employment.upper}) << "\n";
    out << "wage_share = " << list({b.wage_share.lower, b.wage_share.upper}) << "\n";
    out << "debt_ratio = " << list({b.debt_ratio.lower, b.debt_ratio.upper}) << "\n";
    out << "inflation_relaxation = " << format_double(b.inflation_relaxation) << "\n";
    out << "money_illusion = " << format_double(b.money_illusion) << "\n";

    const auto& m = cfg.monte_carlo;
    out << "\n[monte_carlo]\n";
    out << "horizon_years = " << format_double(m.horizon_years) << "\n";
    out << "readout_year = " << format_double(m.readout_year) << "\n";
    out << "employment_threshold = " << format_double(m.employment_threshold) << "\n";
    return out.str();
}

std::string params_json(const ExperimentConfig& cfg, int indent) {
    nlohmann::ordered_json j;
    j["variant"] = to_string(cfg.variant);
    auto& params = j["params"];
    for (const auto& f : param_fields()) params[std::string(f.name)] = cfg.params.*f.member;
    auto& initial = j["initial"];
    for (const auto& f : initial_fields()) initial[std::string(f.name)] = cfg.initial.*f.member;
    if (cfg.ratio_init) {
        j["ratio_init"] = {{"employment", cfg.ratio_init->employment},
                           {"wage_share", cfg.ratio_init->wage_share},
                           {"debt_ratio", cfg.ratio_init->debt_ratio}};
    }
    const auto r = implied_ratios(cfg.initial, cfg.params);
    j["implied_ratios"] = {
        {"employment", r.employment}, {"wage_share", r.wage_share}, {"debt_ratio", r.debt_ratio}};
    return j.dump(indent);
}

void require_valid(const ExperimentConfig& cfg) {
    const auto violations = validate(cfg);
    if (violations.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
    throw ConfigError(msg);
}

}  // namespace gkclim
