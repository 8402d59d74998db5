#include "veeww/sweep/config.hpp"

#include <cmath>
#include <set>

#include "veeww/errors.hpp"

namespace veeww::sweep {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
    if (!object.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (std::string_view a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

double get_number(const json& object, std::string_view key, double fallback) {
    const auto it = object.find(key);
    if (it == object.end()) return fallback;
    if (!it->is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
    return it->get<double>();
}

template <typename Unsigned>
Unsigned get_unsigned(const json& object, std::string_view key, Unsigned fallback) {
    const auto it = object.find(key);
    if (it == object.end()) return fallback;
    if (!it->is_number_unsigned()) {
        throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
    }
    return it->get<Unsigned>();
}

bool get_bool(const json& object, std::string_view key, bool fallback) {
    const auto it = object.find(key);
    if (it == object.end()) return fallback;
    if (!it->is_boolean()) throw ConfigError("'" + std::string(key) + "' must be true or false");
    return it->get<bool>();
}

std::string get_string(const json& object, std::string_view key, const std::string& fallback) {
    const auto it = object.find(key);
    if (it == object.end()) return fallback;
    if (!it->is_string()) throw ConfigError("'" + std::string(key) + "' must be a string");
    return it->get<std::string>();
}

std::string_view to_string(EvolveMethod m) {
    switch (m) {
    case EvolveMethod::modes: return "modes";
    case EvolveMethod::kernel: return "kernel";
    case EvolveMethod::markov: return "markov";
    }
    return "modes";
}

std::string_view to_string(McModel m) {
    return m == McModel::markov ? "markov" : "conditional";
}

std::string_view to_string(markov::Spacing s) {
    return s == markov::Spacing::linear ? "linear" : "log";
}

void parse_grid(const json& j, GridSpec& grid) {
    reject_unknown(j, "grid", {"values", "min", "max", "count", "spacing"});
    if (const auto it = j.find("values"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("grid.values must be an array");
        grid.values.clear();
        for (const auto& v : *it) {
            if (!v.is_number()) throw ConfigError("grid.values must hold numbers");
            grid.values.push_back(v.get<double>());
        }
    }
    grid.min = get_number(j, "min", grid.min);
    grid.max = get_number(j, "max", grid.max);
    grid.count = get_unsigned<std::size_t>(j, "count", grid.count);
    const std::string spacing = get_string(j, "spacing", std::string(to_string(grid.spacing)));
    if (spacing == "linear") grid.spacing = markov::Spacing::linear;
    else if (spacing == "log") grid.spacing = markov::Spacing::log;
    else throw ConfigError("grid.spacing must be 'linear' or 'log'");
}

void parse_bath(const json& j, BathBlock& b) {
    reject_unknown(j, "bath", {"cutoff_over_gamma", "n_modes", "dt_gamma", "t_end_gamma",
                               "omega_over_gamma", "method", "postselect"});
    b.cutoff_over_gamma = get_number(j, "cutoff_over_gamma", b.cutoff_over_gamma);
    b.n_modes = get_unsigned<std::size_t>(j, "n_modes", b.n_modes);
    b.dt_gamma = get_number(j, "dt_gamma", b.dt_gamma);
    b.t_end_gamma = get_number(j, "t_end_gamma", b.t_end_gamma);
    b.omega_over_gamma = get_number(j, "omega_over_gamma", b.omega_over_gamma);
    b.postselect = get_bool(j, "postselect", b.postselect);
    const std::string method = get_string(j, "method", std::string(to_string(b.method)));
    if (method == "modes") b.method = EvolveMethod::modes;
    else if (method == "kernel") b.method = EvolveMethod::kernel;
    else if (method == "markov") b.method = EvolveMethod::markov;
    else throw ConfigError("bath.method must be 'modes', 'kernel' or 'markov'");
}

void parse_mc(const json& j, McBlock& mc) {
    reject_unknown(j, "mc", {"n", "seed", "stream", "model", "bins"});
    mc.n = get_unsigned<std::size_t>(j, "n", mc.n);
    mc.seed = get_unsigned<std::uint64_t>(j, "seed", mc.seed);
    mc.stream = get_unsigned<std::uint64_t>(j, "stream", mc.stream);
    mc.bins = get_unsigned<std::size_t>(j, "bins", mc.bins);
    const std::string model = get_string(j, "model", std::string(to_string(mc.model)));
    if (model == "markov") mc.model = McModel::markov;
    else if (model == "conditional") mc.model = McModel::conditional;
    else throw ConfigError("mc.model must be 'markov' or 'conditional'");
}

void parse_output(const json& j, OutputBlock& out) {
    reject_unknown(j, "output", {"path", "summary_path", "svg_path"});
    out.path = get_string(j, "path", out.path);
    out.summary_path = get_string(j, "summary_path", out.summary_path);
    out.svg_path = get_string(j, "svg_path", out.svg_path);
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::weak_value: return "weak-value";
    case Mode::tau_curve: return "tau-curve";
    case Mode::evolve: return "evolve";
    case Mode::mc: return "mc";
    case Mode::compare: return "compare";
    }
    return "tau-curve";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
    for (Mode m : {Mode::weak_value, Mode::tau_curve, Mode::evolve, Mode::mc, Mode::compare}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

std::vector<double> GridSpec::resolve() const {
    if (!values.empty()) return values;
    try {
        return markov::make_grid(min, max, count, spacing);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

double RunConfig::delta_over_gamma() const {
    if (si) return si->delta / *gamma_si();
    return params ? params->delta_over_gamma : NaturalBlock{}.delta_over_gamma;
}

double RunConfig::epsilon() const {
    if (si) return si->epsilon;
    return params ? params->epsilon : NaturalBlock{}.epsilon;
}

std::optional<double> RunConfig::gamma_si() const {
    if (!si) return std::nullopt;
    return bath::gamma_from_dipole(si->omega, si->eta, si->constants);
}

ModelParams RunConfig::model() const {
    ModelParams p;
    p.delta = delta_over_gamma();
    p.gamma = 1.0;
    p.epsilon = epsilon();
    return p;
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    c.mode = Mode::tau_curve;
    c.form = RateForm::small_epsilon;
    c.grid.max = kHalfPi;
    c.grid.count = 200;
    c.grid.spacing = markov::Spacing::log;
    if (name == "delta-0.1") {
        c.params = NaturalBlock{0.1, 0.2};
        c.grid.min = 0.11;
    } else if (name == "delta-0.01") {
        c.params = NaturalBlock{0.01, 0.0101};
        c.grid.min = 0.0101;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    c.preset = std::string(name);
    return c;
}

std::vector<std::string> preset_names() { return {"delta-0.1", "delta-0.01"}; }

RunConfig parse_config(const json& j) {
    reject_unknown(j, "config", {"mode", "preset", "params", "si", "form", "grid", "bath", "mc",
                                 "output", "workers"});
    RunConfig c;
    if (const auto it = j.find("preset"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("'preset' must be a string");
        c = preset(it->get<std::string>());
    }
    if (const auto it = j.find("mode"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("'mode' must be a string");
        const auto mode = parse_mode(it->get<std::string>());
        if (!mode) throw ConfigError("unknown mode '" + it->get<std::string>() + "'");
        c.mode = *mode;
    }
    if (const auto it = j.find("params"); it != j.end()) {
        reject_unknown(*it, "params", {"delta_over_gamma", "epsilon"});
        NaturalBlock p = c.params.value_or(NaturalBlock{});
        p.delta_over_gamma = get_number(*it, "delta_over_gamma", p.delta_over_gamma);
        p.epsilon = get_number(*it, "epsilon", p.epsilon);
        c.params = p;
    }
    if (const auto it = j.find("si"); it != j.end()) {
        if (j.contains("params")) {
            throw ConfigError("'params' (natural units) and 'si' blocks are mutually exclusive");
        }
        reject_unknown(*it, "si", {"omega", "eta", "delta", "epsilon", "constants"});
        SiBlock si;
        si.omega = get_number(*it, "omega", 0.0);
        si.eta = get_number(*it, "eta", 0.0);
        si.delta = get_number(*it, "delta", 0.0);
        si.epsilon = get_number(*it, "epsilon", si.epsilon);
        if (const auto cit = it->find("constants"); cit != it->end()) {
            reject_unknown(*cit, "si.constants", {"hbar", "epsilon0", "c"});
            si.constants.hbar = get_number(*cit, "hbar", si.constants.hbar);
            si.constants.epsilon0 = get_number(*cit, "epsilon0", si.constants.epsilon0);
            si.constants.c = get_number(*cit, "c", si.constants.c);
        }
        c.si = si;
        c.params.reset();
    }
    if (!c.params && !c.si) c.params = NaturalBlock{};
    if (const auto it = j.find("form"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("'form' must be a string");
        const auto form = parse_rate_form(it->get<std::string>());
        if (!form) throw ConfigError("form must be 'cot' or 'small'");
        c.form = *form;
    }
    if (const auto it = j.find("grid"); it != j.end()) parse_grid(*it, c.grid);
    if (const auto it = j.find("bath"); it != j.end()) parse_bath(*it, c.bath);
    if (const auto it = j.find("mc"); it != j.end()) parse_mc(*it, c.mc);
    if (const auto it = j.find("output"); it != j.end()) parse_output(*it, c.output);
    c.workers = get_unsigned<unsigned>(j, "workers", c.workers);
    validate(c);
    return c;
}

RunConfig parse_config_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["mode"] = std::string(to_string(c.mode));
    if (!c.preset.empty()) j["preset"] = c.preset;
    if (c.si) {
        j["si"] = {{"omega", c.si->omega},
                   {"eta", c.si->eta},
                   {"delta", c.si->delta},
                   {"epsilon", c.si->epsilon},
                   {"constants",
                    {{"hbar", c.si->constants.hbar},
                     {"epsilon0", c.si->constants.epsilon0},
                     {"c", c.si->constants.c}}}};
    } else {
        const NaturalBlock p = c.params.value_or(NaturalBlock{});
        j["params"] = {{"delta_over_gamma", p.delta_over_gamma}, {"epsilon", p.epsilon}};
    }
    j["form"] = std::string(veeww::to_string(c.form));
    json grid = {{"min", c.grid.min},
                 {"max", c.grid.max},
                 {"count", c.grid.count},
                 {"spacing", std::string(to_string(c.grid.spacing))}};
    if (!c.grid.values.empty()) grid["values"] = c.grid.values;
    j["grid"] = grid;
    j["bath"] = {{"cutoff_over_gamma", c.bath.cutoff_over_gamma},
                 {"n_modes", c.bath.n_modes},
                 {"dt_gamma", c.bath.dt_gamma},
                 {"t_end_gamma", c.bath.t_end_gamma},
                 {"omega_over_gamma", c.bath.omega_over_gamma},
                 {"method", std::string(to_string(c.bath.method))},
                 {"postselect", c.bath.postselect}};
    j["mc"] = {{"n", c.mc.n},
               {"seed", c.mc.seed},
               {"stream", c.mc.stream},
               {"model", std::string(to_string(c.mc.model))},
               {"bins", c.mc.bins}};
    j["output"] = {{"path", c.output.path},
                   {"summary_path", c.output.summary_path},
                   {"svg_path", c.output.svg_path}};
    j["workers"] = c.workers;
    return j;
}

void validate(const RunConfig& c) {
    if (c.params && c.si) {
        throw ConfigError("'params' (natural units) and 'si' blocks are mutually exclusive");
    }
    if (c.si) {
        if (!(c.si->omega > 0.0 && c.si->eta > 0.0 && c.si->delta >= 0.0)) {
            throw ConfigError("si block needs omega > 0, eta > 0 and delta >= 0");
        }
        if (!(c.si->constants.hbar > 0.0 && c.si->constants.epsilon0 > 0.0 &&
              c.si->constants.c > 0.0)) {
            throw ConfigError("si.constants must be strictly positive");
        }
    }
    const double ratio = c.delta_over_gamma();
    if (!(ratio >= 0.0 && std::isfinite(ratio))) throw ConfigError("delta/gamma must be >= 0");
    if (!(ratio < 1.0)) {
        throw ConfigError("delta/gamma must be < 1 (elastic regime)");
    }
    const double eps = c.epsilon();
    if (!(eps >= 0.0 && eps <= kHalfPi)) throw ConfigError("epsilon must lie in [0, pi/2]");
    if (c.mode == Mode::tau_curve || c.mode == Mode::compare) {
        if (c.grid.values.empty()) {
            if (c.grid.count == 0) throw ConfigError("grid.count must be positive");
            if (!(c.grid.max >= c.grid.min)) throw ConfigError("grid.max must be >= grid.min");
            if (c.grid.spacing == markov::Spacing::log && !(c.grid.min > 0.0)) {
                throw ConfigError("log spacing requires grid.min > 0");
            }
        }
        for (double e : c.grid.resolve()) {
            if (!(e > 0.0 && e <= kHalfPi)) {
                throw ConfigError("grid values must lie in (0, pi/2]");
            }
        }
    }
    if (c.mode == Mode::evolve || c.mode == Mode::compare) {
        if (!(c.bath.cutoff_over_gamma > 0.0 && c.bath.dt_gamma > 0.0 && c.bath.t_end_gamma > 0.0)) {
            throw ConfigError("bath block needs positive cutoff, dt and t_end");
        }
        if (c.bath.t_end_gamma > 10.0) throw ConfigError("bath.t_end_gamma must be <= 10");
    }
    if (c.mode == Mode::mc || c.mode == Mode::compare) {
        if (c.mc.n < 100) throw ConfigError("mc.n must be at least 100");
        if (c.mc.bins == 0) throw ConfigError("mc.bins must be positive");
    }
}

}  // namespace veeww::sweep
