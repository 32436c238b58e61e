#include "gcp/cli/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "gcp/error.hpp"

namespace gcp::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<std::string_view, Experiment>, 7> kExperiments{{
    {"uniform", Experiment::uniform},
    {"basin", Experiment::basin},
    {"spectrum", Experiment::spectrum},
    {"spatial", Experiment::spatial},
    {"front", Experiment::front},
    {"stationary", Experiment::stationary},
    {"nucleus", Experiment::nucleus},
}};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

// Object at `path` whose keys must all appear in `allowed`.
const json& object_at(const json& parent, const std::string& key, const std::string& path,
                      std::initializer_list<std::string_view> allowed) {
    const json& node = parent.at(key);
    if (!node.is_object()) {
        fail(path, "must be an object");
    }
    for (const auto& [name, value] : node.items()) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            fail(path + "." + name, "unknown key");
        }
    }
    return node;
}

double number(const json& node, const std::string& key, const std::string& path) {
    if (!node.contains(key)) {
        fail(path + "." + key, "required");
    }
    const json& v = node.at(key);
    if (!v.is_number()) {
        fail(path + "." + key, "must be a number");
    }
    return v.get<double>();
}

double number_or(const json& node, const std::string& key, const std::string& path, double fallback) {
    return node.contains(key) ? number(node, key, path) : fallback;
}

int integer(const json& node, const std::string& key, const std::string& path) {
    if (!node.contains(key)) {
        fail(path + "." + key, "required");
    }
    const json& v = node.at(key);
    if (!v.is_number_integer()) {
        fail(path + "." + key, "must be an integer");
    }
    return v.get<int>();
}

int integer_or(const json& node, const std::string& key, const std::string& path, int fallback) {
    return node.contains(key) ? integer(node, key, path) : fallback;
}

std::vector<double> numbers(const json& node, const std::string& key, const std::string& path) {
    if (!node.contains(key) || !node.at(key).is_array()) {
        fail(path + "." + key, "must be an array of numbers");
    }
    std::vector<double> out;
    for (const json& v : node.at(key)) {
        if (!v.is_number()) {
            fail(path + "." + key, "must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::string string_at(const json& node, const std::string& key, const std::string& path) {
    if (!node.contains(key) || !node.at(key).is_string()) {
        fail(path + "." + key, "must be a string");
    }
    return node.at(key).get<std::string>();
}

// Re-raises domain errors from constructors as configuration errors under `path`.
template <class F>
auto build(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
}

Kernel parse_kernel(const json& doc) {
    const json& node = object_at(doc, "kernel", "kernel", {"type", "b", "sigma", "table"});
    const std::string type = string_at(node, "type", "kernel");
    return build("kernel", [&] {
        if (type == "delta") {
            return Kernel::delta();
        }
        if (type == "box") {
            return Kernel::box(number(node, "b", "kernel"));
        }
        if (type == "gaussian") {
            return Kernel::gaussian(number(node, "sigma", "kernel"));
        }
        if (type == "table") {
            const json& table = object_at(node, "table", "kernel.table", {"x", "J"});
            return Kernel::table(numbers(table, "x", "kernel.table"), numbers(table, "J", "kernel.table"));
        }
        fail("kernel.type", "must be one of delta, box, gaussian, table");
    });
}

Grid1D parse_grid(const json& doc) {
    const json& node = object_at(doc, "grid", "grid", {"L", "n"});
    const double length = number(node, "L", "grid");
    const int points = integer(node, "n", "grid");
    if (points < 2) {
        fail("grid.n", "must be >= 2");
    }
    return build("grid", [&] { return Grid1D(length, static_cast<std::size_t>(points)); });
}

spatial::InitialCondition parse_ic(const json& doc) {
    const json& node =
        object_at(doc, "ic", "ic", {"type", "v", "x0", "alpha", "width", "center", "base", "amplitude", "mode", "offset"});
    const std::string type = string_at(node, "type", "ic");
    if (type == "uniform") {
        return spatial::UniformIc{numbers(node, "v", "ic")};
    }
    if (type == "step") {
        return spatial::StepIc{number_or(node, "x0", "ic", 0.0)};
    }
    if (type == "tanh") {
        return spatial::TanhIc{number(node, "alpha", "ic"), number_or(node, "x0", "ic", 0.0)};
    }
    if (type == "plug") {
        return spatial::PlugIc{number(node, "width", "ic"), number_or(node, "center", "ic", 0.0)};
    }
    if (type == "perturbed") {
        return spatial::PerturbedIc{numbers(node, "base", "ic"), number(node, "amplitude", "ic"),
                                    integer_or(node, "mode", "ic", 1), number_or(node, "offset", "ic", 0.0)};
    }
    fail("ic.type", "must be one of uniform, step, tanh, plug, perturbed");
}

void require_section(const json& doc, const char* key, Experiment experiment) {
    if (!doc.contains(key)) {
        fail(key, std::string("required for experiment ") + std::string(to_string(experiment)));
    }
}

}  // namespace

std::string_view to_string(Experiment experiment) noexcept {
    for (const auto& [name, value] : kExperiments) {
        if (value == experiment) {
            return name;
        }
    }
    return "unknown";
}

void apply_overrides(json& document, const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + item + "' is not of the form key=value");
        }
        std::string pointer = "/" + item.substr(0, eq);
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        const std::string text = item.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        try {
            document[json::json_pointer(pointer)] = value;
        } catch (const json::exception& e) {
            throw ConfigError("override '" + item + "': " + e.what());
        }
    }
}

RunConfig parse_config(const json& document) {
    if (!document.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    const json root = json{{"root", document}};
    const json& doc =
        object_at(root, "root", "config", {"experiment", "model", "kernel", "grid", "ic", "numerics", "output"});

    RunConfig config;
    const std::string name = string_at(doc, "experiment", "config");
    const auto found = std::find_if(kExperiments.begin(), kExperiments.end(),
                                    [&](const auto& entry) { return entry.first == name; });
    if (found == kExperiments.end()) {
        fail("experiment", "must be one of uniform, basin, spectrum, spatial, front, stationary, nucleus");
    }
    config.experiment = found->second;
    const Experiment ex = config.experiment;

    require_section(doc, "model", ex);
    const json& model = object_at(doc, "model", "model", {"k", "lambda"});
    const int k = integer_or(model, "k", "model", ex == Experiment::basin ? 2 : 1);
    const double lambda = number(model, "lambda", "model");
    config.model = build("model", [&] { return ModelParams(k, lambda); });
    if (ex == Experiment::basin && k != 2) {
        fail("model.k", "basin maps are defined for k = 2");
    }

    const bool spatial_run = ex == Experiment::spectrum || ex == Experiment::spatial || ex == Experiment::front ||
                             ex == Experiment::stationary || ex == Experiment::nucleus;
    if (spatial_run) {
        require_section(doc, "kernel", ex);
        require_section(doc, "grid", ex);
        config.kernel = parse_kernel(doc);
        config.grid = parse_grid(doc);
        build("kernel", [&] {
            config.grid->require_fits(*config.kernel);
            return 0;
        });
    } else {
        if (doc.contains("kernel")) {
            config.kernel = parse_kernel(doc);
        }
        if (doc.contains("grid")) {
            config.grid = parse_grid(doc);
        }
    }

    const bool needs_ic = ex == Experiment::uniform || ex == Experiment::spatial || ex == Experiment::front ||
                          ex == Experiment::stationary;
    if (needs_ic) {
        require_section(doc, "ic", ex);
    }
    if (doc.contains("ic")) {
        config.ic = parse_ic(doc);
    }

    Numerics& num = config.numerics;
    json numerics = json::object();
    if (doc.contains("numerics")) {
        const json& node = object_at(doc, "numerics", "numerics",
                                     {"dt", "t_end", "snapshot_stride", "tol", "resolution", "n_modes", "max_iter",
                                      "sample_interval", "transient_fraction", "w_lo", "w_hi", "rounds",
                                      "extinct_threshold"});
        numerics = node;
    }
    const std::string np = "numerics";
    const double default_dt = ex == Experiment::uniform ? 1e-3 : 1e-2;
    num.dt = number_or(numerics, "dt", np, default_dt);
    num.t_end = number_or(numerics, "t_end", np, ex == Experiment::nucleus ? 200.0 : 0.0);
    num.snapshot_stride = integer_or(numerics, "snapshot_stride", np, 100);
    num.tol = number_or(numerics, "tol", np, 1e-12);
    num.resolution = integer_or(numerics, "resolution", np, 200);
    num.n_modes = integer_or(numerics, "n_modes", np, 50);
    num.max_iter = integer_or(numerics, "max_iter", np, 10000);
    num.sample_interval = number_or(numerics, "sample_interval", np, 1.0);
    num.transient_fraction = number_or(numerics, "transient_fraction", np, 0.25);
    num.w_lo = number_or(numerics, "w_lo", np, 0.0);
    num.w_hi = number_or(numerics, "w_hi", np, 0.0);
    num.rounds = integer_or(numerics, "rounds", np, 4);
    num.extinct_threshold = number_or(numerics, "extinct_threshold", np, 1e-6);

    if (!(num.dt > 0.0)) fail("numerics.dt", "must be > 0");
    if (num.snapshot_stride < 1) fail("numerics.snapshot_stride", "must be >= 1");
    if (!(num.tol > 0.0)) fail("numerics.tol", "must be > 0");
    if (num.resolution < 2) fail("numerics.resolution", "must be >= 2");
    if (num.n_modes < 0) fail("numerics.n_modes", "must be >= 0");
    if (num.max_iter < 1) fail("numerics.max_iter", "must be >= 1");
    if (!(num.sample_interval > 0.0)) fail("numerics.sample_interval", "must be > 0");
    if (!(num.transient_fraction >= 0.0 && num.transient_fraction < 1.0)) {
        fail("numerics.transient_fraction", "must be in [0, 1)");
    }
    if (num.rounds < 0) fail("numerics.rounds", "must be >= 0");
    if (!(num.extinct_threshold > 0.0)) fail("numerics.extinct_threshold", "must be > 0");
    const bool timed = ex == Experiment::uniform || ex == Experiment::spatial || ex == Experiment::front ||
                       ex == Experiment::nucleus;
    if (timed && !(num.t_end > 0.0)) {
        fail("numerics.t_end", "required and must be > 0");
    }
    if (ex == Experiment::nucleus && !(num.w_hi > num.w_lo && num.w_lo >= 0.0)) {
        fail("numerics.w_lo", "nucleus runs need 0 <= w_lo < w_hi");
    }
    if ((ex == Experiment::basin || ex == Experiment::front || ex == Experiment::stationary ||
         ex == Experiment::nucleus) &&
        !config.model.has_sustaining_state()) {
        fail("model.lambda", "must be > 1 for experiment " + name);
    }

    // Build initial fields and profiles now so validation catches bad data.
    if (config.ic && config.grid && (ex == Experiment::spatial || ex == Experiment::front)) {
        build("ic", [&] { return spatial::make_field(*config.ic, config.model, *config.grid); });
    }
    if (ex == Experiment::stationary) {
        build("ic", [&] { return spatial::make_profile(*config.ic, *config.grid); });
    }
    if (ex == Experiment::uniform) {
        const auto* u = std::get_if<spatial::UniformIc>(&*config.ic);
        if (u == nullptr) {
            fail("ic.type", "uniform runs need a uniform initial condition");
        }
        build("ic", [&] {
            const PopulationState state(u->v);
            require_matching_stages(config.model, state);
            return 0;
        });
    }

    if (!doc.contains("output")) {
        fail("output", "required");
    }
    const json& output = object_at(doc, "output", "output", {"prefix"});
    config.prefix = string_at(output, "prefix", "output");
    if (config.prefix.empty()) {
        fail("output.prefix", "must not be empty");
    }

    config.resolved = doc;
    config.resolved["numerics"] = json{{"dt", num.dt},
                                       {"t_end", num.t_end},
                                       {"snapshot_stride", num.snapshot_stride},
                                       {"tol", num.tol},
                                       {"resolution", num.resolution},
                                       {"n_modes", num.n_modes},
                                       {"max_iter", num.max_iter},
                                       {"sample_interval", num.sample_interval},
                                       {"transient_fraction", num.transient_fraction},
                                       {"w_lo", num.w_lo},
                                       {"w_hi", num.w_hi},
                                       {"rounds", num.rounds},
                                       {"extinct_threshold", num.extinct_threshold}};
    config.resolved["model"]["k"] = k;
    return config;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json document = json::parse(in, nullptr, false);
    if (document.is_discarded()) {
        throw ConfigError("config file " + path.string() + " is not valid JSON");
    }
    apply_overrides(document, overrides);
    return parse_config(document);
}

}  // namespace gcp::cli
