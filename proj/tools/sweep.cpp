#include "sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <json.hpp>
#include <qb/ergotropy.hpp>
#include <qb/errors.hpp>
#include <qb/thermal_ensemble.hpp>

#include "run_config.hpp"
#include "trajectory_run.hpp"

namespace qbcli {

namespace {

using nlohmann::json;
using qb::ConfigError;

// Fixed axis order; points enumerate row-major with the last axis fastest,
// so the aggregate ordering is reproducible for a given grid file.
constexpr const char* kAxisNames[] = {"beta", "gamma", "gamma_z", "m", "n"};

struct Axis {
    std::string name;
    std::vector<double> values;
};

struct Grid {
    RunConfig base;
    std::vector<Axis> axes;
    double gamma_z_times_n = -1.0;  // < 0: not set
    json echo;
};

std::vector<double> parse_axis_values(const json& array, const std::string& name) {
    if (!array.is_array() || array.empty())
        throw ConfigError("axis '" + name + "' must be a non-empty array");
    std::vector<double> values;
    values.reserve(array.size());
    for (const auto& v : array) {
        if (name == "m" || name == "n") {
            if (!v.is_number_integer())
                throw ConfigError("axis '" + name + "' must hold integers");
            values.push_back(static_cast<double>(v.get<long long>()));
        } else {
            if (!v.is_number()) throw ConfigError("axis '" + name + "' must hold numbers");
            values.push_back(v.get<double>());
        }
    }
    return values;
}

Grid load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("grid file '" + path + "' is not valid JSON: " + e.what());
    }

    Grid grid;
    apply_config_json(grid.base, doc, true);
    if (doc.contains("gamma_z_times_n")) {
        if (!doc["gamma_z_times_n"].is_number() || doc["gamma_z_times_n"].get<double>() < 0.0)
            throw ConfigError("gamma_z_times_n must be a number >= 0");
        grid.gamma_z_times_n = doc["gamma_z_times_n"].get<double>();
    }
    if (doc.contains("axes")) {
        const json& axes = doc["axes"];
        if (!axes.is_object()) throw ConfigError("axes must be an object");
        for (const auto& item : axes.items()) {
            bool known = false;
            for (const char* name : kAxisNames) known = known || item.key() == name;
            if (!known)
                throw ConfigError("unknown axis '" + item.key() +
                                  "' (swept parameters: beta, gamma, gamma_z, m, n)");
        }
        for (const char* name : kAxisNames)
            if (axes.contains(name))
                grid.axes.push_back({name, parse_axis_values(axes[name], name)});
    }

    const auto has_axis = [&](const std::string& name) {
        for (const auto& axis : grid.axes)
            if (axis.name == name) return true;
        return false;
    };
    if (grid.gamma_z_times_n >= 0.0 && (has_axis("gamma_z") || grid.base.gamma_z != 0.0))
        throw ConfigError("gamma_z_times_n excludes a gamma_z axis or base value");
    if (std::isnan(grid.base.beta) && !has_axis("beta"))
        throw ConfigError("beta must be set in the grid base or swept as an axis");
    if (grid.base.n_sites < 1 && !has_axis("n"))
        throw ConfigError("n must be set in the grid base or swept as an axis");

    grid.echo = json::parse(config_json(grid.base));
    if (doc.contains("axes")) grid.echo["axes"] = doc["axes"];
    if (grid.gamma_z_times_n >= 0.0) grid.echo["gamma_z_times_n"] = grid.gamma_z_times_n;
    return grid;
}

struct Point {
    RunConfig config;
    long long readout = 0;
    std::vector<double> key;  // one value per axis, grid order
};

std::vector<Point> expand_points(const Grid& grid) {
    std::size_t total = 1;
    for (const auto& axis : grid.axes) total *= axis.values.size();
    std::vector<Point> points;
    points.reserve(total);
    for (std::size_t index = 0; index < total; ++index) {
        Point point;
        point.config = grid.base;
        point.key.resize(grid.axes.size());
        std::size_t rem = index;
        long long readout_axis = -1;
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            const Axis& axis = grid.axes[a];
            const double value = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
            point.key[a] = value;
            if (axis.name == "beta") point.config.beta = value;
            else if (axis.name == "gamma") point.config.gamma = value;
            else if (axis.name == "gamma_z") point.config.gamma_z = value;
            else if (axis.name == "m") readout_axis = static_cast<long long>(value);
            else point.config.n_sites = static_cast<int>(value);
        }
        if (grid.gamma_z_times_n >= 0.0 && point.config.n_sites > 0)
            point.config.gamma_z = grid.gamma_z_times_n / point.config.n_sites;
        point.readout = readout_axis >= 0 ? readout_axis : point.config.n_sites / 2;
        point.config.kicks = std::max(point.readout, std::max(grid.base.kicks, 0LL));
        points.push_back(std::move(point));
    }
    return points;
}

struct Outcome {
    int status = 0;  // 0 ok, 1 config error, 2 numerical error
    std::string message;
    double de = 0.0;
    double dw = 0.0;
    bool has_work = false;
};

std::string point_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%05zu", index);
    return buf;
}

Outcome run_point(const Point& point, const std::filesystem::path& csv_path) {
    Outcome outcome;
    try {
        point.config.validate();
        const TrajectoryData data = run_engine(point.config);
        std::ofstream file(csv_path, std::ios::binary);
        if (!file) throw ConfigError("cannot open output file '" + csv_path.string() + "'");
        write_trajectory_csv(file, point.config, data);
        const auto m = static_cast<std::size_t>(point.readout);
        outcome.de = qb::normalized_energy(data.energy[m], data.energy[0], point.config.n_sites);
        if (!data.work.empty()) {
            outcome.has_work = true;
            outcome.dw = qb::normalized_ergotropy(data.work[m], data.work[0], point.config.n_sites);
        }
    } catch (const ConfigError& e) {
        outcome.status = 1;
        outcome.message = e.what();
    } catch (const qb::NumericalError& e) {
        outcome.status = 2;
        outcome.message = e.what();
    }
    return outcome;
}

}  // namespace

int cmd_sweep(const std::string& grid_path, const std::string& out_dir, int jobs) {
    const Grid grid = load_grid(grid_path);
    const std::vector<Point> points = expand_points(grid);
    std::filesystem::create_directories(out_dir);

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = static_cast<int>(std::min<std::size_t>(jobs, points.size()));

    std::vector<Outcome> outcomes(points.size());
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= points.size()) return;
            outcomes[i] = run_point(points[i], std::filesystem::path(out_dir) /
                                                   (point_stem(i) + ".csv"));
        }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (auto& thread : threads) thread.join();

    std::ofstream aggregate(std::filesystem::path(out_dir) / "aggregate.csv", std::ios::binary);
    if (!aggregate) throw ConfigError("cannot open aggregate.csv in '" + out_dir + "'");
    aggregate << "# " << grid.echo.dump() << "\n";
    aggregate << "point";
    for (const auto& axis : grid.axes) {
        aggregate << ',' << axis.name;
        if (axis.name == "beta") aggregate << ",temperature";
    }
    aggregate << ",m,dE";
    if (grid.base.ergotropy) aggregate << ",dW";
    aggregate << ",status\n";

    int exit_code = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Outcome& outcome = outcomes[i];
        aggregate << point_stem(i);
        for (std::size_t a = 0; a < points[i].key.size(); ++a) {
            aggregate << ',' << format_number(points[i].key[a]);
            if (grid.axes[a].name == "beta")
                aggregate << ',' << format_number(1.0 / points[i].key[a]);
        }
        aggregate << ',' << points[i].readout << ',';
        if (outcome.status == 0) {
            aggregate << format_number(outcome.de);
            if (grid.base.ergotropy) aggregate << ',' << (outcome.has_work ? format_number(outcome.dw) : "");
            aggregate << ",ok\n";
        } else {
            if (grid.base.ergotropy) aggregate << ',';
            aggregate << ',' << (outcome.status == 1 ? "config_error" : "numerical_error") << "\n";
            std::cerr << point_stem(i) << ": "
                      << (outcome.status == 1 ? "config error: " : "numerical error: ")
                      << outcome.message << "\n";
            exit_code = std::max(exit_code, outcome.status);
        }
    }
    if (!aggregate.good()) throw ConfigError("failed writing aggregate.csv in '" + out_dir + "'");
    return exit_code;
}

}  // namespace qbcli
