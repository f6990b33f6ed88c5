// runner.hpp — Configuration-driven batch evolution: series over a tau grid,
// phase-space dumps at selected instants, parameter sweeps, CSV persistence.

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "omcav/config.hpp"
#include "omcav/evolution.hpp"
#include "omcav/model.hpp"
#include "omcav/observables.hpp"
#include "omcav/tomography.hpp"
#include "omcav/version.hpp"
#include "omcav/wigner.hpp"

namespace omcav {

// ------------------------------ collapse windows ----------------------------

struct CollapseWindow {
    double tau_start = 0.0;
    double tau_end = 0.0;

    double width() const { return tau_end - tau_start; }
};

// Maximal contiguous intervals where |value - level| <= delta.
inline std::vector<CollapseWindow> collapse_windows(const std::vector<double>& series,
                                                    const Eigen::VectorXd& tau_axis,
                                                    double level, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("collapse_windows: delta must be > 0");
    if (static_cast<Eigen::Index>(series.size()) != tau_axis.size())
        throw std::invalid_argument("collapse_windows: series and tau axis sizes mismatch");
    std::vector<CollapseWindow> out;
    std::size_t i = 0;
    while (i < series.size()) {
        if (std::abs(series[i] - level) <= delta) {
            std::size_t j = i;
            while (j + 1 < series.size() && std::abs(series[j + 1] - level) <= delta) ++j;
            out.push_back({tau_axis[static_cast<Eigen::Index>(i)],
                           tau_axis[static_cast<Eigen::Index>(j)]});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

inline double longest_window(const std::vector<CollapseWindow>& ws) {
    double best = 0.0;
    for (const auto& w : ws) best = std::max(best, w.width());
    return best;
}

// ------------------------------ observable series ---------------------------

struct SeriesColumn {
    std::string name;
    std::vector<double> values;
};

struct ObservableSeries {
    Eigen::VectorXd tau;
    std::vector<SeriesColumn> columns;
    std::string provenance;  // resolved config echo
};

struct RunReport {
    int n_max = 0;
    double max_norm_drift = 0.0;
    std::vector<std::string> warnings;
    std::string series_path;
    std::vector<std::string> grid_paths;
    std::string summary_path;
    std::vector<CollapseWindow> collapse;   // svne_atom against the maximal level
    double longest_collapse = 0.0;
    std::optional<double> squeezing_fraction_entropic;
    std::optional<double> squeezing_fraction_quadrature;
    ObservableSeries series;
};

namespace detail {

inline double field_alpha_abs(const RunConfig& cfg, int n_max) {
    if (cfg.field_init.kind == FieldKind::custom)
        return std::sqrt(static_cast<double>(n_max));  // covers the occupied Fock range
    return std::abs(cfg.field_init.alpha);
}

inline int resolve_truncation(const RunConfig& cfg) {
    if (cfg.field_init.kind == FieldKind::custom)
        return std::max<int>(16, static_cast<int>(cfg.field_init.amplitudes.size()) - 1);
    const int m = (cfg.field_init.kind == FieldKind::photon_added) ? cfg.field_init.added_photons : 0;
    return choose_truncation(std::abs(cfg.field_init.alpha), m, cfg.epsilon_trunc);
}

inline std::string value_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Writes text to path, remembering the file for cleanup on later failure.
class OutputTracker {
public:
    explicit OutputTracker(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::string write(const std::string& filename, const std::string& content) {
        const auto path = dir_ / filename;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw io_error("cannot open " + path.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw io_error("failed writing " + path.string());
        written_.push_back(path);
        return path.string();
    }

    void discard_all() noexcept {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

inline std::string provenance_comment(const std::string& echo) {
    std::ostringstream os;
    os << "# omcav " << version << "\n";
    std::istringstream is(echo);
    std::string line;
    while (std::getline(is, line)) os << "# " << line << "\n";
    return os.str();
}

inline std::string series_csv(const ObservableSeries& s) {
    std::ostringstream os;
    os << provenance_comment(s.provenance);
    if (s.columns.empty()) return os.str();
    os << "tau";
    for (const auto& c : s.columns) os << "," << c.name;
    os << "\n";
    for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
        os << format_g17(s.tau[i]);
        for (const auto& c : s.columns) os << "," << format_g17(c.values[static_cast<std::size_t>(i)]);
        os << "\n";
    }
    return os.str();
}

// Matrix CSV with the column axis in the first row and the row axis in the
// first column; the top-left corner cell is 0.
inline std::string matrix_csv(const std::string& provenance, const Eigen::VectorXd& row_axis,
                              const Eigen::VectorXd& col_axis, const Eigen::MatrixXd& values) {
    std::ostringstream os;
    os << provenance_comment(provenance);
    os << "0";
    for (Eigen::Index j = 0; j < col_axis.size(); ++j) os << "," << format_g17(col_axis[j]);
    os << "\n";
    for (Eigen::Index i = 0; i < row_axis.size(); ++i) {
        os << format_g17(row_axis[i]);
        for (Eigen::Index j = 0; j < col_axis.size(); ++j) os << "," << format_g17(values(i, j));
        os << "\n";
    }
    return os.str();
}

struct SeriesLayout {
    bool svne_a = false, svne_m = false, svne_f = false, photon = false, squeeze = false;
};

inline SeriesLayout series_layout(const RunConfig& cfg) {
    SeriesLayout lo;
    lo.svne_a = cfg.observables.count(Observable::svne_atom) > 0;
    lo.svne_m = cfg.observables.count(Observable::svne_mirror) > 0;
    lo.svne_f = cfg.observables.count(Observable::svne_field) > 0;
    lo.photon = cfg.observables.count(Observable::photon_stats) > 0;
    lo.squeeze = cfg.observables.count(Observable::squeezing) > 0;
    return lo;
}

} // namespace detail

// Evolves the configured system over the tau grid and evaluates the requested
// scalar observables. Tau points are independent and processed concurrently.
inline ObservableSeries compute_series(const RunConfig& cfg) {
    const int n_max = detail::resolve_truncation(cfg);
    const Eigen::VectorXcd weights =
        build_initial_weights(cfg.field_init, n_max, cfg.epsilon_trunc);
    const TripartiteState state0 = initial_state(weights, cfg.params.phi);
    const Eigen::VectorXd tau = linspace(0.0, cfg.tau_max, cfg.tau_steps);
    const detail::SeriesLayout lo = detail::series_layout(cfg);

    ObservableSeries out;
    out.tau = tau;
    out.provenance = config_echo(cfg);

    std::vector<std::string> names;
    if (lo.svne_a) names.push_back("svne_atom");
    if (lo.svne_m) names.push_back("svne_mirror");
    if (lo.svne_f) names.push_back("svne_field");
    if (lo.photon) {
        names.push_back("mean_n");
        names.push_back("var_n");
        names.push_back("mandel_q");
        names.push_back("inversion");
    }
    if (lo.squeeze) {
        names.push_back("S_theta0");
        names.push_back("var_X_theta0");
    }
    for (const auto& n : names) out.columns.push_back({n, std::vector<double>(tau.size())});
    if (names.empty()) return out;

    // Quadrature grid for the theta = 0 squeezing columns, shared by all taus.
    Eigen::VectorXd x_axis;
    Eigen::MatrixXd psi;
    if (lo.squeeze) {
        const double radius = (cfg.tomo_x_radius > 0.0)
                                  ? cfg.tomo_x_radius
                                  : std::numbers::sqrt2 * detail::field_alpha_abs(cfg, n_max) + 6.0;
        x_axis = linspace(-radius, radius, cfg.tomo_x_points);
        psi.resize(x_axis.size(), n_max + 1);
        for (Eigen::Index i = 0; i < x_axis.size(); ++i)
            psi.row(i) = hermite_functions(n_max, x_axis[i]).transpose();
    }

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, cfg.tau_steps));

    std::atomic<Eigen::Index> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto column = [&](const std::string& name) -> std::vector<double>& {
        for (auto& c : out.columns)
            if (c.name == name) return c.values;
        throw std::logic_error("compute_series: missing column " + name);
    };

    auto work = [&]() {
        try {
            for (;;) {
                const Eigen::Index i = next.fetch_add(1);
                if (i >= tau.size() || failed.load()) return;
                const TripartiteState st = propagate(state0, tau[i], cfg.params);
                const auto idx = static_cast<std::size_t>(i);
                if (lo.svne_a) column("svne_atom")[idx] = svne(reduced_rho_atom(st), cfg.entropy_base);
                if (lo.svne_m)
                    column("svne_mirror")[idx] = svne(reduced_rho_mirror(st), cfg.entropy_base);
                if (lo.svne_f) column("svne_field")[idx] = svne(reduced_rho_field(st), cfg.entropy_base);
                if (lo.photon) {
                    const PhotonStats ps = photon_stats(st);
                    column("mean_n")[idx] = ps.mean_n;
                    column("var_n")[idx] = ps.var_n;
                    column("mandel_q")[idx] = ps.mandel_q;
                    column("inversion")[idx] = ps.inversion;
                }
                if (lo.squeeze) {
                    const FieldChannels ch = field_channels(st);
                    const Eigen::VectorXd slice = (psi * ch.e0).cwiseAbs2() +
                                                  (psi * ch.g0).cwiseAbs2() +
                                                  (psi * ch.e1).cwiseAbs2();
                    column("S_theta0")[idx] = tomographic_entropy(slice, x_axis);
                    column("var_X_theta0")[idx] = quadrature_variance(slice, x_axis);
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lk(failure_mutex);
            failed.store(true);
            if (failure.empty()) failure = e.what();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failed.load()) throw numerical_error("compute_series: " + failure);
    return out;
}

// Full batch run: series CSV, requested phase-space dumps, summary JSON.
inline RunReport run(const RunConfig& cfg) {
    if (auto issues = validate_run_config(cfg); !issues.empty()) throw config_error(issues);

    RunReport report;
    report.warnings = cfg.params.validate();
    report.n_max = detail::resolve_truncation(cfg);

    const Eigen::VectorXcd weights =
        build_initial_weights(cfg.field_init, report.n_max, cfg.epsilon_trunc);
    const TripartiteState state0 = initial_state(weights, cfg.params.phi);

    report.series = compute_series(cfg);

    // Norm conservation audit over a subsample of the grid.
    const Eigen::VectorXd tau = report.series.tau;
    const Eigen::Index stride = std::max<Eigen::Index>(1, tau.size() / 64);
    for (Eigen::Index i = 0; i < tau.size(); i += stride) {
        const TripartiteState st = propagate(state0, tau[i], cfg.params);
        report.max_norm_drift = std::max(report.max_norm_drift, std::abs(st.norm() - 1.0));
    }

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw io_error("cannot create output directory " + cfg.output_dir);
    detail::OutputTracker files{std::filesystem::path(cfg.output_dir)};

    try {
        report.series_path = files.write("series.csv", detail::series_csv(report.series));

        if (cfg.observables.count(Observable::wigner) > 0) {
            const double radius = (cfg.wigner_radius > 0.0)
                                      ? cfg.wigner_radius
                                      : default_wigner_radius(detail::field_alpha_abs(cfg, report.n_max));
            for (double t : cfg.wigner_tau) {
                const TripartiteState st = propagate(state0, t, cfg.params);
                const WignerGrid g =
                    compute_wigner_grid(st, radius, cfg.wigner_spacing, -1, cfg.workers);
                report.grid_paths.push_back(files.write(
                    "wigner_tau" + detail::value_tag(t) + ".csv",
                    detail::matrix_csv(report.series.provenance, g.alpha1_axis, g.alpha2_axis,
                                       g.values)));
            }
        }
        if (cfg.observables.count(Observable::tomogram) > 0) {
            const Eigen::VectorXd theta = default_tomogram_theta_axis(cfg.tomo_theta_points);
            const double radius = (cfg.tomo_x_radius > 0.0)
                                      ? cfg.tomo_x_radius
                                      : std::numbers::sqrt2 *
                                                detail::field_alpha_abs(cfg, report.n_max) +
                                            6.0;
            const Eigen::VectorXd x_axis = linspace(-radius, radius, cfg.tomo_x_points);
            for (double t : cfg.tomo_tau) {
                const TripartiteState st = propagate(state0, t, cfg.params);
                const Tomogram tg = compute_tomogram(st, theta, x_axis);
                report.grid_paths.push_back(files.write(
                    "tomogram_tau" + detail::value_tag(t) + ".csv",
                    detail::matrix_csv(report.series.provenance, tg.theta_axis, tg.x_axis,
                                       tg.values)));
            }
        }

        // Collapse-window report against the maximal two-level entropy.
        for (const auto& c : report.series.columns) {
            if (c.name != "svne_atom") continue;
            const double level = (cfg.entropy_base == EntropyBase::two) ? 1.0 : std::numbers::ln2;
            report.collapse = collapse_windows(c.values, tau, level, 0.05 * level);
            report.longest_collapse = longest_window(report.collapse);
        }
        for (const auto& c : report.series.columns) {
            if (c.name == "S_theta0") {
                double f = 0.0;
                for (double s : c.values) f += squeezing_flags(s, 1.0).entropic ? 1.0 : 0.0;
                report.squeezing_fraction_entropic = f / static_cast<double>(c.values.size());
            }
            if (c.name == "var_X_theta0") {
                double f = 0.0;
                for (double v : c.values) f += squeezing_flags(1.0, v).quadrature ? 1.0 : 0.0;
                report.squeezing_fraction_quadrature = f / static_cast<double>(c.values.size());
            }
        }

        nlohmann::json j;
        j["version"] = version;
        j["n_max"] = report.n_max;
        j["max_norm_drift"] = report.max_norm_drift;
        j["series"] = report.series_path;
        j["grids"] = report.grid_paths;
        j["warnings"] = report.warnings;
        {
            nlohmann::json w = nlohmann::json::array();
            for (const auto& cw : report.collapse) w.push_back({cw.tau_start, cw.tau_end});
            j["collapse_windows"] = w;
            j["longest_collapse_window"] = report.longest_collapse;
        }
        if (report.squeezing_fraction_entropic)
            j["squeezing_fraction_entropic"] = *report.squeezing_fraction_entropic;
        if (report.squeezing_fraction_quadrature)
            j["squeezing_fraction_quadrature"] = *report.squeezing_fraction_quadrature;
        report.summary_path = files.write("summary.json", j.dump(2) + "\n");
    } catch (const io_error&) {
        files.discard_all();
        throw;
    } catch (const std::exception& e) {
        files.discard_all();
        throw io_error(std::string("run: output failed: ") + e.what());
    }
    return report;
}

// ---------------------------------- sweeps ----------------------------------

struct SweepReport {
    std::vector<RunReport> runs;
    std::string matrix_path;
    std::string summary_path;
    std::string matrix_column;
};

namespace detail {

inline RunConfig specialize(const RunConfig& base, double value) {
    RunConfig cfg = base;
    cfg.sweep.reset();
    switch (base.sweep->parameter) {
        case SweepSpec::Parameter::kappa: cfg.params.coupling.kappa = value; break;
        case SweepSpec::Parameter::phi: cfg.params.phi = value; break;
        case SweepSpec::Parameter::alpha:
            cfg.field_init.alpha = cdouble(value, 0.0);
            break;
    }
    return cfg;
}

} // namespace detail

// One run per sweep value on a shared tau axis. Emits per-value series files
// plus a single matrix of the first requested series column, rows indexed by
// the sweep value. Phase-space dumps are skipped inside sweeps.
inline SweepReport sweep(const RunConfig& cfg) {
    if (auto issues = validate_run_config(cfg); !issues.empty()) throw config_error(issues);
    if (!cfg.sweep) throw config_error("sweep: configuration has no [sweep] table");

    const std::string param = sweep_parameter_name(cfg.sweep->parameter);
    SweepReport report;

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw io_error("cannot create output directory " + cfg.output_dir);
    detail::OutputTracker files{std::filesystem::path(cfg.output_dir)};

    try {
        Eigen::MatrixXd matrix;
        Eigen::VectorXd tau;
        for (std::size_t k = 0; k < cfg.sweep->values.size(); ++k) {
            const double value = cfg.sweep->values[k];
            RunConfig sub = detail::specialize(cfg, value);
            sub.wigner_tau.clear();
            sub.tomo_tau.clear();

            RunReport r;
            r.warnings = sub.params.validate();
            r.n_max = detail::resolve_truncation(sub);
            r.series = compute_series(sub);
            tau = r.series.tau;
            if (!r.series.columns.empty()) {
                if (matrix.size() == 0)
                    matrix.resize(static_cast<Eigen::Index>(cfg.sweep->values.size()), tau.size());
                report.matrix_column = r.series.columns.front().name;
                for (Eigen::Index j = 0; j < tau.size(); ++j)
                    matrix(static_cast<Eigen::Index>(k), j) =
                        r.series.columns.front().values[static_cast<std::size_t>(j)];
            }
            for (const auto& c : r.series.columns) {
                if (c.name != "svne_atom") continue;
                const double level =
                    (sub.entropy_base == EntropyBase::two) ? 1.0 : std::numbers::ln2;
                r.collapse = collapse_windows(c.values, tau, level, 0.05 * level);
                r.longest_collapse = longest_window(r.collapse);
            }
            r.series_path = files.write("series_" + param + detail::value_tag(value) + ".csv",
                                        detail::series_csv(r.series));
            report.runs.push_back(std::move(r));
        }

        if (matrix.size() != 0) {
            Eigen::VectorXd values(static_cast<Eigen::Index>(cfg.sweep->values.size()));
            for (Eigen::Index i = 0; i < values.size(); ++i)
                values[i] = cfg.sweep->values[static_cast<std::size_t>(i)];
            report.matrix_path = files.write(
                "sweep_" + param + ".csv",
                detail::matrix_csv(config_echo(cfg), values, tau, matrix));
        }

        nlohmann::json j;
        j["version"] = version;
        j["parameter"] = param;
        j["values"] = cfg.sweep->values;
        j["matrix"] = report.matrix_path;
        j["matrix_column"] = report.matrix_column;
        nlohmann::json runs = nlohmann::json::array();
        for (std::size_t k = 0; k < report.runs.size(); ++k) {
            nlohmann::json rj;
            rj["value"] = cfg.sweep->values[k];
            rj["series"] = report.runs[k].series_path;
            rj["longest_collapse_window"] = report.runs[k].longest_collapse;
            runs.push_back(rj);
        }
        j["runs"] = runs;
        report.summary_path = files.write("sweep_" + param + "_summary.json", j.dump(2) + "\n");
    } catch (const io_error&) {
        files.discard_all();
        throw;
    } catch (const config_error&) {
        files.discard_all();
        throw;
    } catch (const std::exception& e) {
        files.discard_all();
        throw io_error(std::string("sweep: output failed: ") + e.what());
    }
    return report;
}

} // namespace omcav
