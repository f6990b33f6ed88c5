// config.hpp — Run configuration: schema, TOML loading, validation, and the
// resolved-config echo embedded in every output file.

#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "omcav/model.hpp"
#include "omcav/numeric.hpp"
#include "omcav/observables.hpp"
#include "omcav/toml.hpp"

namespace omcav {

enum class Observable {
    svne_atom,
    svne_mirror,
    svne_field,
    photon_stats,
    tomogram,
    wigner,
    squeezing,
};

inline const char* observable_name(Observable o) {
    switch (o) {
        case Observable::svne_atom: return "svne_atom";
        case Observable::svne_mirror: return "svne_mirror";
        case Observable::svne_field: return "svne_field";
        case Observable::photon_stats: return "photon_stats";
        case Observable::tomogram: return "tomogram";
        case Observable::wigner: return "wigner";
        case Observable::squeezing: return "squeezing";
    }
    return "?";
}

inline std::optional<Observable> parse_observable(const std::string& s) {
    for (Observable o : {Observable::svne_atom, Observable::svne_mirror, Observable::svne_field,
                         Observable::photon_stats, Observable::tomogram, Observable::wigner,
                         Observable::squeezing})
        if (s == observable_name(o)) return o;
    return std::nullopt;
}

struct SweepSpec {
    enum class Parameter { kappa, phi, alpha };
    Parameter parameter = Parameter::kappa;
    std::vector<double> values;
};

inline const char* sweep_parameter_name(SweepSpec::Parameter p) {
    switch (p) {
        case SweepSpec::Parameter::kappa: return "kappa";
        case SweepSpec::Parameter::phi: return "phi";
        case SweepSpec::Parameter::alpha: return "alpha";
    }
    return "?";
}

struct RunConfig {
    SystemParams params{};
    FieldInitialState field_init = FieldInitialState::coherent({1.0, 0.0});
    double tau_max = 10.0;
    int tau_steps = 1001;
    double epsilon_trunc = 1e-12;
    EntropyBase entropy_base = EntropyBase::nat;
    std::set<Observable> observables = {Observable::svne_atom, Observable::svne_mirror,
                                        Observable::svne_field, Observable::photon_stats};
    std::vector<double> wigner_tau;
    std::vector<double> tomo_tau;
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";

    // Execution and grid controls, not part of the file schema.
    int workers = 0;                // <= 0: hardware concurrency
    int tomo_x_points = 2001;
    int tomo_theta_points = 181;
    double tomo_x_radius = 0.0;     // <= 0: sqrt(2)|alpha| + 6
    double wigner_spacing = 0.05;
    double wigner_radius = 0.0;     // <= 0: |alpha| + 5
};

// ------------------------------- validation ---------------------------------

inline std::vector<std::string> validate_run_config(const RunConfig& cfg) {
    std::vector<std::string> issues;
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) issues.push_back(msg);
    };
    check(cfg.params.omega_m_hz > 0.0, "system.omega_m_hz must be > 0");
    check(cfg.params.g_hz > 0.0, "system.g_hz must be > 0 (defines the time unit)");
    check(cfg.params.omega_hz >= 0.0, "system.omega_hz must be >= 0");
    if (cfg.params.coupling.form == CouplingForm::kappa_deformed)
        check(cfg.params.coupling.kappa >= 0.0 && cfg.params.coupling.kappa <= 1.0,
              "coupling.kappa must lie in [0, 1]");
    check(cfg.tau_max > 0.0, "sim.tau_max must be > 0");
    check(cfg.tau_steps >= 2, "sim.tau_steps must be >= 2");
    check(cfg.epsilon_trunc > 0.0 && cfg.epsilon_trunc < 1.0,
          "sim.epsilon_trunc must lie in (0, 1)");
    if (cfg.field_init.kind == FieldKind::photon_added)
        check(cfg.field_init.added_photons >= 0, "field.m must be >= 0");
    if (cfg.field_init.kind == FieldKind::custom)
        check(!cfg.field_init.amplitudes.empty(), "field.amplitudes must be non-empty");
    for (double t : cfg.wigner_tau)
        check(t >= 0.0 && t <= cfg.tau_max, "outputs.wigner_tau entries must lie in [0, tau_max]");
    for (double t : cfg.tomo_tau)
        check(t >= 0.0 && t <= cfg.tau_max, "outputs.tomo_tau entries must lie in [0, tau_max]");
    if (cfg.sweep) {
        check(!cfg.sweep->values.empty(), "sweep.values must be non-empty");
        switch (cfg.sweep->parameter) {
            case SweepSpec::Parameter::kappa:
                check(cfg.params.coupling.form == CouplingForm::kappa_deformed,
                      "sweep over kappa requires coupling.kind = \"kappa\"");
                for (double v : cfg.sweep->values)
                    check(v >= 0.0 && v <= 1.0, "sweep.values for kappa must lie in [0, 1]");
                break;
            case SweepSpec::Parameter::alpha:
                check(cfg.field_init.kind != FieldKind::custom,
                      "sweep over alpha requires a coherent or photon_added field");
                for (double v : cfg.sweep->values)
                    check(v >= 0.0, "sweep.values for alpha must be >= 0");
                break;
            case SweepSpec::Parameter::phi:
                break;
        }
    }
    return issues;
}

// ------------------------------- TOML loading -------------------------------

namespace detail {

class ConfigReader {
public:
    explicit ConfigReader(const toml::Document& doc) : doc_(doc) {}

    bool has(const std::string& table, const std::string& key) const {
        const auto t = doc_.find(table);
        return t != doc_.end() && t->second.count(key) > 0;
    }
    double number(const std::string& table, const std::string& key, double fallback) {
        if (!has(table, key)) return fallback;
        const auto& v = doc_.at(table).at(key);
        if (!v.is_number()) issues.push_back(table + "." + key + " must be a number");
        return v.is_number() ? v.as_number() : fallback;
    }
    std::string str(const std::string& table, const std::string& key, std::string fallback) {
        if (!has(table, key)) return fallback;
        const auto& v = doc_.at(table).at(key);
        if (!v.is_string()) issues.push_back(table + "." + key + " must be a string");
        return v.is_string() ? v.as_string() : fallback;
    }
    std::vector<double> number_list(const std::string& table, const std::string& key) {
        std::vector<double> out;
        if (!has(table, key)) return out;
        const auto& v = doc_.at(table).at(key);
        if (!v.is_array()) {
            issues.push_back(table + "." + key + " must be an array of numbers");
            return out;
        }
        for (const auto& e : v.as_array()) {
            if (e.is_number())
                out.push_back(e.as_number());
            else
                issues.push_back(table + "." + key + " must contain only numbers");
        }
        return out;
    }

    void note_unknown_keys(const std::string& table, std::initializer_list<const char*> known) {
        const auto t = doc_.find(table);
        if (t == doc_.end()) return;
        for (const auto& [k, v] : t->second) {
            bool ok = false;
            for (const char* name : known)
                if (k == name) ok = true;
            if (!ok) issues.push_back("unknown key " + table + "." + k);
        }
    }

    std::vector<std::string> issues;

private:
    const toml::Document& doc_;
};

} // namespace detail

// Builds a RunConfig from TOML text, collecting every problem found. Throws a
// config_error listing all offending fields.
inline RunConfig parse_run_config(const std::string& toml_text) {
    const toml::Document doc = toml::parse(toml_text);
    detail::ConfigReader rd(doc);
    RunConfig cfg;

    for (const auto& [table, _] : doc) {
        if (table != "system" && table != "coupling" && table != "atom" && table != "field" &&
            table != "sim" && table != "outputs" && table != "sweep")
            rd.issues.push_back("unknown table [" + table + "]");
    }
    rd.note_unknown_keys("system", {"omega_m_hz", "g_hz", "omega_hz", "eff_order"});
    rd.note_unknown_keys("coupling", {"kind", "kappa"});
    rd.note_unknown_keys("atom", {"phi_rad"});
    rd.note_unknown_keys("field", {"kind", "alpha_re", "alpha_im", "m", "amplitudes"});
    rd.note_unknown_keys("sim", {"tau_max", "tau_steps", "epsilon_trunc", "entropy_base"});
    rd.note_unknown_keys("outputs", {"dir", "observables", "wigner_tau", "tomo_tau"});
    rd.note_unknown_keys("sweep", {"parameter", "values"});

    cfg.params.omega_m_hz = rd.number("system", "omega_m_hz", cfg.params.omega_m_hz);
    cfg.params.g_hz = rd.number("system", "g_hz", cfg.params.g_hz);
    cfg.params.omega_hz = rd.number("system", "omega_hz", cfg.params.omega_hz);
    const std::string order = rd.str("system", "eff_order", "first_order");
    if (order == "first_order")
        cfg.params.eff_order = EffOrder::first_order;
    else if (order == "full")
        cfg.params.eff_order = EffOrder::full;
    else
        rd.issues.push_back("system.eff_order must be \"first_order\" or \"full\"");

    const std::string ck = rd.str("coupling", "kind", "constant");
    if (ck == "constant")
        cfg.params.coupling = CouplingKind::constant();
    else if (ck == "sqrt")
        cfg.params.coupling = CouplingKind::sqrt_n();
    else if (ck == "inv_sqrt")
        cfg.params.coupling = CouplingKind::inv_sqrt_n();
    else if (ck == "kappa")
        cfg.params.coupling = CouplingKind::kappa_deformed(rd.number("coupling", "kappa", 0.0));
    else
        rd.issues.push_back("coupling.kind must be one of \"constant\", \"sqrt\", \"inv_sqrt\", \"kappa\"");
    if (ck != "kappa" && rd.has("coupling", "kappa"))
        rd.issues.push_back("coupling.kappa is only meaningful for kind = \"kappa\"");

    cfg.params.phi = rd.number("atom", "phi_rad", cfg.params.phi);

    const std::string fk = rd.str("field", "kind", "coherent");
    const cdouble alpha(rd.number("field", "alpha_re", 1.0), rd.number("field", "alpha_im", 0.0));
    if (fk == "coherent") {
        cfg.field_init = FieldInitialState::coherent(alpha);
    } else if (fk == "photon_added") {
        const double m = rd.number("field", "m", 0.0);
        if (m < 0.0 || m != std::floor(m))
            rd.issues.push_back("field.m must be a nonnegative integer");
        else
            cfg.field_init = FieldInitialState::photon_added(alpha, static_cast<int>(m));
    } else if (fk == "custom") {
        std::vector<cdouble> amps;
        if (rd.has("field", "amplitudes") && doc.at("field").at("amplitudes").is_array()) {
            for (const auto& e : doc.at("field").at("amplitudes").as_array()) {
                if (e.is_number()) {
                    amps.emplace_back(e.as_number(), 0.0);
                } else if (e.is_array() && e.as_array().size() == 2 &&
                           e.as_array()[0].is_number() && e.as_array()[1].is_number()) {
                    amps.emplace_back(e.as_array()[0].as_number(), e.as_array()[1].as_number());
                } else {
                    rd.issues.push_back("field.amplitudes entries must be numbers or [re, im] pairs");
                }
            }
        } else {
            rd.issues.push_back("field.amplitudes is required for kind = \"custom\"");
        }
        cfg.field_init = FieldInitialState::custom(std::move(amps));
    } else {
        rd.issues.push_back("field.kind must be one of \"coherent\", \"photon_added\", \"custom\"");
    }

    cfg.tau_max = rd.number("sim", "tau_max", cfg.tau_max);
    const double steps = rd.number("sim", "tau_steps", cfg.tau_steps);
    if (steps != std::floor(steps))
        rd.issues.push_back("sim.tau_steps must be an integer");
    else
        cfg.tau_steps = static_cast<int>(steps);
    cfg.epsilon_trunc = rd.number("sim", "epsilon_trunc", cfg.epsilon_trunc);
    const std::string base = rd.str("sim", "entropy_base", "nat");
    if (base == "nat")
        cfg.entropy_base = EntropyBase::nat;
    else if (base == "two")
        cfg.entropy_base = EntropyBase::two;
    else
        rd.issues.push_back("sim.entropy_base must be \"nat\" or \"two\"");

    cfg.output_dir = rd.str("outputs", "dir", cfg.output_dir);
    if (rd.has("outputs", "observables")) {
        cfg.observables.clear();
        const auto& v = doc.at("outputs").at("observables");
        if (!v.is_array()) {
            rd.issues.push_back("outputs.observables must be an array of strings");
        } else {
            for (const auto& e : v.as_array()) {
                if (!e.is_string()) {
                    rd.issues.push_back("outputs.observables must contain only strings");
                    continue;
                }
                if (auto o = parse_observable(e.as_string()))
                    cfg.observables.insert(*o);
                else
                    rd.issues.push_back("unknown observable \"" + e.as_string() + "\"");
            }
        }
    }
    cfg.wigner_tau = rd.number_list("outputs", "wigner_tau");
    cfg.tomo_tau = rd.number_list("outputs", "tomo_tau");

    if (doc.count("sweep")) {
        SweepSpec sw;
        const std::string par = rd.str("sweep", "parameter", "");
        if (par == "kappa")
            sw.parameter = SweepSpec::Parameter::kappa;
        else if (par == "phi")
            sw.parameter = SweepSpec::Parameter::phi;
        else if (par == "alpha")
            sw.parameter = SweepSpec::Parameter::alpha;
        else
            rd.issues.push_back("sweep.parameter must be one of \"kappa\", \"phi\", \"alpha\"");
        sw.values = rd.number_list("sweep", "values");
        cfg.sweep = std::move(sw);
    }

    auto semantic = validate_run_config(cfg);
    rd.issues.insert(rd.issues.end(), semantic.begin(), semantic.end());
    if (!rd.issues.empty()) throw config_error(rd.issues);
    return cfg;
}

// ---------------------------------- echo ------------------------------------

// The resolved configuration, as TOML. Written into every output so a result
// file fully identifies the run that produced it.
inline std::string config_echo(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[system]\n";
    os << "omega_m_hz = " << format_g17(cfg.params.omega_m_hz) << "\n";
    os << "g_hz = " << format_g17(cfg.params.g_hz) << "\n";
    os << "omega_hz = " << format_g17(cfg.params.omega_hz) << "\n";
    os << "eff_order = \""
       << (cfg.params.eff_order == EffOrder::first_order ? "first_order" : "full") << "\"\n";
    os << "[coupling]\n";
    switch (cfg.params.coupling.form) {
        case CouplingForm::constant: os << "kind = \"constant\"\n"; break;
        case CouplingForm::sqrt_n: os << "kind = \"sqrt\"\n"; break;
        case CouplingForm::inv_sqrt_n: os << "kind = \"inv_sqrt\"\n"; break;
        case CouplingForm::kappa_deformed:
            os << "kind = \"kappa\"\n";
            os << "kappa = " << format_g17(cfg.params.coupling.kappa) << "\n";
            break;
    }
    os << "[atom]\n";
    os << "phi_rad = " << format_g17(cfg.params.phi) << "\n";
    os << "[field]\n";
    switch (cfg.field_init.kind) {
        case FieldKind::coherent: os << "kind = \"coherent\"\n"; break;
        case FieldKind::photon_added: os << "kind = \"photon_added\"\n"; break;
        case FieldKind::custom: os << "kind = \"custom\"\n"; break;
    }
    if (cfg.field_init.kind != FieldKind::custom) {
        os << "alpha_re = " << format_g17(cfg.field_init.alpha.real()) << "\n";
        os << "alpha_im = " << format_g17(cfg.field_init.alpha.imag()) << "\n";
    }
    if (cfg.field_init.kind == FieldKind::photon_added)
        os << "m = " << cfg.field_init.added_photons << "\n";
    if (cfg.field_init.kind == FieldKind::custom) {
        os << "amplitudes = [";
        for (std::size_t i = 0; i < cfg.field_init.amplitudes.size(); ++i) {
            if (i) os << ", ";
            os << "[" << format_g17(cfg.field_init.amplitudes[i].real()) << ", "
               << format_g17(cfg.field_init.amplitudes[i].imag()) << "]";
        }
        os << "]\n";
    }
    os << "[sim]\n";
    os << "tau_max = " << format_g17(cfg.tau_max) << "\n";
    os << "tau_steps = " << cfg.tau_steps << "\n";
    os << "epsilon_trunc = " << format_g17(cfg.epsilon_trunc) << "\n";
    os << "entropy_base = \"" << (cfg.entropy_base == EntropyBase::nat ? "nat" : "two") << "\"\n";
    os << "[outputs]\n";
    os << "dir = \"" << cfg.output_dir << "\"\n";
    os << "observables = [";
    bool first = true;
    for (Observable o : cfg.observables) {
        if (!first) os << ", ";
        os << "\"" << observable_name(o) << "\"";
        first = false;
    }
    os << "]\n";
    auto list = [&](const char* key, const std::vector<double>& v) {
        os << key << " = [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ", ";
            os << format_g17(v[i]);
        }
        os << "]\n";
    };
    list("wigner_tau", cfg.wigner_tau);
    list("tomo_tau", cfg.tomo_tau);
    if (cfg.sweep) {
        os << "[sweep]\n";
        os << "parameter = \"" << sweep_parameter_name(cfg.sweep->parameter) << "\"\n";
        list("values", cfg.sweep->values);
    }
    return os.str();
}

} // namespace omcav
