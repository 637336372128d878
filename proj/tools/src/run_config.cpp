#include "betti/cli/run_config.hpp"

#include <fstream>
#include <sstream>

#include "betti/error.hpp"

namespace betti::cli {

std::vector<double> GridSpec::expand() const
{
    std::vector<double> grid;
    if (!values.empty()) {
        grid = values;
    } else {
        if (steps < 1) {
            throw InvalidArgument("--steps must be at least 1");
        }
        if (steps == 1) {
            grid = {t_min};
        } else {
            if (!(t_max > t_min)) {
                throw InvalidArgument("--t-max must exceed --t-min when --steps > 1");
            }
            const double h = (t_max - t_min) / (steps - 1);
            for (int i = 0; i < steps; ++i) {
                grid.push_back(i + 1 == steps ? t_max : t_min + i * h);
            }
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0)) {
            throw InvalidArgument("grid values must be nonnegative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument("grid must be strictly increasing");
        }
    }
    return grid;
}

ManifoldModel RunConfig::manifold_model() const
{
    if (manifold == "circle") {
        return ManifoldModel::circle();
    }
    if (manifold == "sphere" || manifold == "sphere2") {
        return ManifoldModel::sphere2();
    }
    if (manifold == "torus") {
        return ManifoldModel::flat_torus(torus_dim);
    }
    throw InvalidArgument("unknown manifold '" + manifold + "' (expected circle, torus or sphere)");
}

InvariantSpec RunConfig::invariant_spec() const
{
    return InvariantSpec::parse(invariant);
}

std::string to_string(Subcommand s)
{
    switch (s) {
    case Subcommand::Curve:
        return "curve";
    case Subcommand::Oracle:
        return "oracle";
    case Subcommand::Converge:
        return "converge";
    case Subcommand::Selftest:
        return "selftest";
    }
    return {};
}

namespace {

Subcommand parse_subcommand(const std::string& s)
{
    for (auto c : {Subcommand::Curve, Subcommand::Oracle, Subcommand::Converge,
                   Subcommand::Selftest}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw InvalidArgument("unknown subcommand '" + s + "'");
}

} // namespace

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json j;
    j["subcommand"] = to_string(subcommand);
    j["manifold"] = manifold;
    j["torus_dim"] = torus_dim;
    j["complex"] = betti::to_string(complex);
    j["invariant"] = invariant;
    j["n"] = n;
    j["trials"] = trials;
    j["seed"] = seed;
    if (grid.values.empty()) {
        j["grid"] = {{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"steps", grid.steps}};
    } else {
        j["grid"] = {{"values", grid.values}};
    }
    if (!max_dim) {
        j["max_dim"] = "auto";
    } else if (*max_dim == kFullDimension) {
        j["max_dim"] = "full";
    } else {
        j["max_dim"] = *max_dim;
    }
    j["workers"] = workers;
    j["simplex_budget"] = simplex_budget;
    j["output"] = output;
    j["format"] = format == OutputFormat::Json ? "json" : "csv";
    j["t"] = t;
    j["n_values"] = n_values;
    j["target"] = target ? nlohmann::json(*target) : nlohmann::json(nullptr);
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j)
{
    try {
        RunConfig c;
        c.subcommand = parse_subcommand(j.at("subcommand").get<std::string>());
        c.manifold = j.at("manifold").get<std::string>();
        c.torus_dim = j.at("torus_dim").get<int>();
        c.complex = parse_complex_kind(j.at("complex").get<std::string>());
        c.invariant = j.at("invariant").get<std::string>();
        c.n = j.at("n").get<std::size_t>();
        c.trials = j.at("trials").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        const auto& g = j.at("grid");
        if (g.contains("values")) {
            c.grid.values = g.at("values").get<std::vector<double>>();
        } else {
            c.grid.t_min = g.at("t_min").get<double>();
            c.grid.t_max = g.at("t_max").get<double>();
            c.grid.steps = g.at("steps").get<int>();
        }
        const auto& md = j.at("max_dim");
        if (md.is_string()) {
            const auto s = md.get<std::string>();
            if (s == "full") {
                c.max_dim = kFullDimension;
            } else if (s != "auto") {
                throw InvalidArgument("max_dim must be auto, full or an integer");
            }
        } else {
            c.max_dim = md.get<int>();
        }
        c.workers = j.at("workers").get<unsigned>();
        c.simplex_budget = j.at("simplex_budget").get<std::size_t>();
        c.output = j.at("output").get<std::string>();
        c.format = j.at("format").get<std::string>() == "json" ? OutputFormat::Json
                                                                : OutputFormat::Csv;
        c.t = j.at("t").get<double>();
        c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
        if (!j.at("target").is_null()) {
            c.target = j.at("target").get<double>();
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed run config: ") + e.what());
    }
}

std::pair<double, std::string> reference_value(const ManifoldModel& manifold,
                                               const InvariantSpec& invariant)
{
    const int d = manifold.intrinsic_dim();
    if (invariant.kind == InvariantKind::EulerCharacteristic) {
        switch (manifold.kind()) {
        case ManifoldKind::Circle:
            return {0.0, "chi(S^1) = 0"};
        case ManifoldKind::Sphere2:
            return {2.0, "chi(S^2) = 2"};
        case ManifoldKind::FlatTorus:
            return {0.0, "chi(T^" + std::to_string(d) + ") = 0"};
        }
    }
    const int i = invariant.betti_index;
    switch (manifold.kind()) {
    case ManifoldKind::Circle:
        return {i <= 1 ? 1.0 : 0.0, "b" + std::to_string(i) + "(S^1) = " + (i <= 1 ? "1" : "0")};
    case ManifoldKind::Sphere2: {
        const double b = (i == 0 || i == 2) ? 1.0 : 0.0;
        return {b, "b" + std::to_string(i) + "(S^2) = " + (b > 0 ? "1" : "0")};
    }
    case ManifoldKind::FlatTorus: {
        // b_i(T^d) = C(d, i)
        double b = 0.0;
        if (i <= d) {
            b = 1.0;
            for (int k = 1; k <= i; ++k) {
                b = b * (d - k + 1) / k;
            }
        }
        return {b, "b" + std::to_string(i) + "(T^" + std::to_string(d) +
                       ") = C(" + std::to_string(d) + "," + std::to_string(i) + ")"};
    }
    }
    return {0.0, ""};
}

RunConfig load_embedded_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config source " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    constexpr std::string_view marker = "# config: ";
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        if (line.starts_with(marker)) {
            return RunConfig::from_json(nlohmann::json::parse(line.substr(marker.size())));
        }
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(path + " holds no embedded run config");
    }
    return RunConfig::from_json(j.contains("config") ? j.at("config") : j);
}

} // namespace betti::cli
