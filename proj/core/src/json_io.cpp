#include "rlf/json_io.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace rlf {

namespace {

const Json& field(const Json& j, const char* key, std::string_view ctx) {
    if (!j.is_object()) {
        throw ParseError(fmt::format("{}: expected an object", ctx));
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(fmt::format("{}: missing field '{}'", ctx, key));
    }
    return *it;
}

template <typename T>
T get(const Json& j, const char* key, std::string_view ctx) {
    const auto& v = field(j, key, ctx);
    try {
        return v.get<T>();
    } catch (const Json::exception&) {
        throw ParseError(fmt::format("{}: field '{}' has the wrong type", ctx, key));
    }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, std::string_view ctx) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    return get<T>(j, key, ctx);
}

Json header(const char* schema) { return Json{{"schema", schema}, {"schema_version", schema_version}}; }

Vec3 vec3(const Json& j, std::string_view ctx) {
    try {
        const auto v = j.get<std::vector<double>>();
        if (v.size() != 3) {
            throw ParseError(fmt::format("{}: a point needs 3 coordinates", ctx));
        }
        return {v[0], v[1], v[2]};
    } catch (const Json::exception&) {
        throw ParseError(fmt::format("{}: a point must be an array of 3 numbers", ctx));
    }
}

Json path_json(const Polyline3D& p) {
    Json a = Json::array();
    for (const auto& v : p.vertices()) {
        a.push_back({v[0], v[1], v[2]});
    }
    return a;
}

Polyline3D path_from(const Json& j, std::string_view ctx) {
    if (!j.is_array()) {
        throw ParseError(fmt::format("{}: path must be an array of points", ctx));
    }
    std::vector<Vec3> v;
    for (const auto& p : j) {
        v.push_back(vec3(p, ctx));
    }
    try {
        return Polyline3D(std::move(v));
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("{}: {}", ctx, e.what()));
    }
}

SpiralPlane plane_from(const std::string& s, std::string_view ctx) {
    if (s == "xy") {
        return SpiralPlane::XY;
    }
    if (s == "xz") {
        return SpiralPlane::XZ;
    }
    if (s == "yz") {
        return SpiralPlane::YZ;
    }
    throw ParseError(fmt::format("{}: plane must be xy, xz or yz", ctx));
}

Quantity quantity_from(const std::string& s, std::string_view ctx) {
    for (auto q : {Quantity::S11_db, Quantity::S21_db, Quantity::S22_db}) {
        if (s == to_string(q)) {
            return q;
        }
    }
    throw ParseError(fmt::format("{}: unknown quantity '{}'", ctx, s));
}

Sense sense_from(const std::string& s, std::string_view ctx) {
    for (auto q : {Sense::AtMost, Sense::AtLeast, Sense::Equal}) {
        if (s == to_string(q)) {
            return q;
        }
    }
    throw ParseError(fmt::format("{}: sense must be '<=', '>=' or '='", ctx));
}

}  // namespace

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ParseError("invalid JSON", line);
    }
}

void require_schema(const Json& doc, const char* schema) {
    const auto name = get<std::string>(doc, "schema", "document");
    if (name != schema) {
        throw ParseError(fmt::format("expected a '{}' document, found '{}'", schema, name));
    }
    const auto version = get<int>(doc, "schema_version", "document");
    if (version != schema_version) {
        throw ParseError(fmt::format("unsupported {} schema_version {} (supported: {})", schema, version, schema_version));
    }
}

Json to_json(const FrequencyGrid& grid) { return Json{{"points", std::vector<double>(grid.points().begin(), grid.points().end())}}; }

FrequencyGrid grid_from_json(const Json& j) {
    try {
        if (j.contains("points")) {
            return FrequencyGrid(get<std::vector<double>>(j, "points", "grid"));
        }
        const auto start = get<double>(j, "start", "grid");
        const auto stop = get<double>(j, "stop", "grid");
        const auto count = get<std::size_t>(j, "count", "grid");
        return get_or<bool>(j, "log", false, "grid") ? FrequencyGrid::logarithmic(start, stop, count)
                                                     : FrequencyGrid::linear(start, stop, count);
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("grid: {}", e.what()));
    }
}

Json to_json(const NetworkData& n) {
    Json s = Json::array();
    const auto p = static_cast<Eigen::Index>(n.ports());
    for (std::size_t k = 0; k < n.size(); ++k) {
        Json m = Json::array();
        for (Eigen::Index r = 0; r < p; ++r) {
            for (Eigen::Index c = 0; c < p; ++c) {
                m.push_back({n.s(k)(r, c).real(), n.s(k)(r, c).imag()});
            }
        }
        s.push_back(std::move(m));
    }
    return Json{{"frequencies", std::vector<double>(n.grid().points().begin(), n.grid().points().end())},
                {"z0", std::vector<double>(n.z0().begin(), n.z0().end())},
                {"s", std::move(s)}};
}

NetworkData network_from_json(const Json& j) {
    const auto freqs = get<std::vector<double>>(j, "frequencies", "network");
    const auto z0 = get<std::vector<double>>(j, "z0", "network");
    const auto& s = field(j, "s", "network");
    const auto p = static_cast<Eigen::Index>(z0.size());
    if (!s.is_array() || s.size() != freqs.size()) {
        throw ParseError("network: 's' needs one matrix per frequency");
    }
    std::vector<CMatrix> mats;
    for (const auto& m : s) {
        if (!m.is_array() || m.size() != static_cast<std::size_t>(p * p)) {
            throw ParseError(fmt::format("network: each matrix needs {} entries", p * p));
        }
        CMatrix x(p, p);
        for (Eigen::Index e = 0; e < p * p; ++e) {
            const auto& v = m[static_cast<std::size_t>(e)];
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw ParseError("network: entries are [re, im] pairs");
            }
            x(e / p, e % p) = Complex(v[0].get<double>(), v[1].get<double>());
        }
        mats.push_back(std::move(x));
    }
    try {
        return NetworkData(FrequencyGrid(freqs), std::move(mats), z0);
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("network: {}", e.what()));
    }
}

Json to_json(const Netlist& netlist) {
    Json doc = header(netlist_schema);
    doc["name"] = netlist.name();
    Json elements = Json::array();
    for (const auto& e : netlist.elements()) {
        Json j{{"name", e.name}};
        std::visit(
            [&](const auto& k) {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    j["type"] = "R";
                    j["value"] = k.ohms;
                } else if constexpr (std::is_same_v<T, Inductor>) {
                    j["type"] = "L";
                    j["value"] = k.henries;
                    j["winding_sign"] = k.winding_sign;
                    if (k.layout) {
                        j["layout"] = path_json(*k.layout);
                    }
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    j["type"] = "C";
                    j["value"] = k.farads;
                } else if constexpr (std::is_same_v<T, MutualCoupling>) {
                    j["type"] = "K";
                    j["inductors"] = {k.inductor_a, k.inductor_b};
                    j["k"] = k.k;
                } else if constexpr (std::is_same_v<T, TransmissionLine>) {
                    j["type"] = "TL";
                    j["impedance"] = k.impedance;
                    j["electrical_length"] = k.electrical_length;
                    j["reference_hz"] = k.reference_hz;
                } else {
                    j["type"] = "S";
                    j["network"] = to_json(k.data);
                }
            },
            e.kind);
        if (!e.is<MutualCoupling>()) {
            j["nodes"] = e.nodes;
        }
        elements.push_back(std::move(j));
    }
    doc["elements"] = std::move(elements);
    Json ports = Json::array();
    for (const auto& p : netlist.ports()) {
        ports.push_back({{"name", p.name}, {"node", p.node}, {"reference", p.reference}, {"z0", p.z0}});
    }
    doc["ports"] = std::move(ports);
    return doc;
}

Netlist netlist_from_json(const Json& doc) {
    require_schema(doc, netlist_schema);
    Netlist n(get_or<std::string>(doc, "name", "", "netlist"));
    const auto& elements = field(doc, "elements", "netlist");
    if (!elements.is_array()) {
        throw ParseError("netlist: 'elements' must be an array");
    }
    for (const auto& j : elements) {
        const auto name = get<std::string>(j, "name", "element");
        const auto ctx = fmt::format("element '{}'", name);
        const auto type = get<std::string>(j, "type", ctx);
        Element e{name, Resistor{0.0}, {}};
        if (type != "K") {
            e.nodes = get<std::vector<std::string>>(j, "nodes", ctx);
        }
        if (type == "R") {
            e.kind = Resistor{get<double>(j, "value", ctx)};
        } else if (type == "L") {
            Inductor l{get<double>(j, "value", ctx), get_or<int>(j, "winding_sign", 1, ctx), std::nullopt};
            if (j.contains("layout")) {
                l.layout = path_from(j["layout"], ctx);
            }
            e.kind = std::move(l);
        } else if (type == "C") {
            e.kind = Capacitor{get<double>(j, "value", ctx)};
        } else if (type == "K") {
            const auto refs = get<std::vector<std::string>>(j, "inductors", ctx);
            if (refs.size() != 2) {
                throw ParseError(fmt::format("{}: 'inductors' needs two names", ctx));
            }
            e.kind = MutualCoupling{refs[0], refs[1], get<double>(j, "k", ctx)};
        } else if (type == "TL") {
            e.kind = TransmissionLine{get<double>(j, "impedance", ctx), get<double>(j, "electrical_length", ctx),
                                      get<double>(j, "reference_hz", ctx)};
        } else if (type == "S") {
            e.kind = SParamBlock{network_from_json(field(j, "network", ctx))};
        } else {
            throw ParseError(fmt::format("{}: unknown type '{}'", ctx, type));
        }
        n.add_element(std::move(e));
    }
    for (const auto& p : field(doc, "ports", "netlist")) {
        n.add_port(get<std::string>(p, "node", "port"), get_or<std::string>(p, "reference", "gnd", "port"),
                   get_or<double>(p, "z0", 50.0, "port"), get_or<std::string>(p, "name", "", "port"));
    }
    try {
        n.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("netlist: {}", e.what()));
    }
    return n;
}

Json to_json(const MutualMatrix& mm) {
    Json doc = header(mutual_matrix_schema);
    doc["labels"] = mm.labels;
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < mm.m.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(mm.m.cols()));
        for (Eigen::Index c = 0; c < mm.m.cols(); ++c) {
            r[static_cast<std::size_t>(c)] = mm.m(i, c);
        }
        rows.push_back(r);
    }
    doc["m"] = std::move(rows);
    return doc;
}

MutualMatrix mutual_matrix_from_json(const Json& doc) {
    require_schema(doc, mutual_matrix_schema);
    MutualMatrix mm;
    mm.labels = get<std::vector<std::string>>(doc, "labels", "mutual matrix");
    const auto rows = get<std::vector<std::vector<double>>>(doc, "m", "mutual matrix");
    const auto n = static_cast<Eigen::Index>(mm.labels.size());
    if (rows.size() != mm.labels.size()) {
        throw ParseError("mutual matrix: row count does not match labels");
    }
    mm.m.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (r.size() != mm.labels.size()) {
            throw ParseError("mutual matrix: matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            mm.m(i, c) = r[static_cast<std::size_t>(c)];
        }
    }
    try {
        mm.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("mutual matrix: {}", e.what()));
    }
    return mm;
}

Layout layout_from_json(const Json& doc) {
    require_schema(doc, layout_schema);
    Layout layout;
    layout.options.min_distance = get_or<double>(doc, "min_distance", layout.options.min_distance, "layout");
    for (const auto& j : field(doc, "inductors", "layout")) {
        const auto name = get<std::string>(j, "name", "layout entry");
        const auto ctx = fmt::format("layout entry '{}'", name);
        if (j.contains("path")) {
            layout.entries.push_back({name, path_from(j["path"], ctx)});
            continue;
        }
        const auto& s = field(j, "spiral", ctx);
        SpiralParams p;
        p.turns = get_or<double>(s, "turns", p.turns, ctx);
        p.pitch = get_or<double>(s, "pitch", p.pitch, ctx);
        p.outer_dimension = get_or<double>(s, "outer_dimension", p.outer_dimension, ctx);
        p.segments_per_turn = get_or<std::size_t>(s, "segments_per_turn", p.segments_per_turn, ctx);
        if (s.contains("center")) {
            p.center = vec3(s["center"], ctx);
        }
        p.plane = plane_from(get_or<std::string>(s, "plane", "xy", ctx), ctx);
        p.handedness = get_or<int>(s, "handedness", p.handedness, ctx);
        try {
            layout.entries.push_back({name, spiral_path(p)});
        } catch (const InvalidArgument& e) {
            throw ParseError(fmt::format("{}: {}", ctx, e.what()));
        }
    }
    return layout;
}

Json to_json(const Layout& layout) {
    Json doc = header(layout_schema);
    doc["min_distance"] = layout.options.min_distance;
    Json entries = Json::array();
    for (const auto& e : layout.entries) {
        entries.push_back({{"name", e.inductor}, {"path", path_json(e.path)}});
    }
    doc["inductors"] = std::move(entries);
    return doc;
}

ProblemDocument problem_from_json(const Json& doc) {
    require_schema(doc, problem_schema);
    Json inner = field(doc, "netlist", "problem");
    ProblemDocument out{OptimizationProblem{netlist_from_json(inner), {}, {}, grid_from_json(field(doc, "grid", "problem"))},
                        SolverConfig{}};
    for (const auto& j : field(doc, "parameters", "problem")) {
        const auto name = get<std::string>(j, "name", "parameter");
        const auto ctx = fmt::format("parameter '{}'", name);
        out.problem.parameters.push_back({name, get<std::vector<std::string>>(j, "elements", ctx),
                                          get<double>(j, "lower", ctx), get<double>(j, "upper", ctx),
                                          get_or<double>(j, "unit", 1.0, ctx)});
    }
    for (const auto& j : field(doc, "targets", "problem")) {
        const auto band = get<std::vector<double>>(j, "band", "target");
        if (band.size() != 2) {
            throw ParseError("target: 'band' is [lo_hz, hi_hz]");
        }
        out.problem.targets.push_back({Band{band[0], band[1]},
                                       quantity_from(get<std::string>(j, "quantity", "target"), "target"),
                                       get<double>(j, "goal", "target"), get_or<double>(j, "weight", 1.0, "target"),
                                       sense_from(get_or<std::string>(j, "sense", "<=", "target"), "target")});
    }
    if (doc.contains("solver")) {
        const auto& s = doc["solver"];
        auto& c = out.solver;
        c.max_iterations = get_or<std::size_t>(s, "max_iterations", c.max_iterations, "solver");
        c.tolerance = get_or<double>(s, "tolerance", c.tolerance, "solver");
        c.target_tolerance = get_or<double>(s, "target_tolerance", c.target_tolerance, "solver");
        c.restarts = get_or<std::size_t>(s, "restarts", c.restarts, "solver");
        c.seed = get_or<std::uint64_t>(s, "seed", c.seed, "solver");
        c.initial = get_or<std::vector<double>>(s, "initial", {}, "solver");
    }
    try {
        out.problem.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(fmt::format("problem: {}", e.what()));
    }
    return out;
}

Json to_json(const ProblemDocument& d) {
    Json doc = header(problem_schema);
    doc["netlist"] = to_json(d.problem.netlist);
    doc["grid"] = to_json(d.problem.grid);
    Json params = Json::array();
    for (const auto& p : d.problem.parameters) {
        params.push_back({{"name", p.name}, {"elements", p.elements}, {"lower", p.lower}, {"upper", p.upper}, {"unit", p.unit}});
    }
    doc["parameters"] = std::move(params);
    Json targets = Json::array();
    for (const auto& t : d.problem.targets) {
        targets.push_back({{"band", {t.band.lo_hz, t.band.hi_hz}},
                           {"quantity", to_string(t.quantity)},
                           {"goal", t.goal},
                           {"weight", t.weight},
                           {"sense", to_string(t.sense)}});
    }
    doc["targets"] = std::move(targets);
    doc["solver"] = {{"max_iterations", d.solver.max_iterations}, {"tolerance", d.solver.tolerance},
                     {"target_tolerance", d.solver.target_tolerance}, {"restarts", d.solver.restarts},
                     {"seed", d.solver.seed}, {"initial", d.solver.initial}};
    return doc;
}

Json result_to_json(const OptimizationProblem& problem, const SolveResult& result) {
    Json doc = header(result_schema);
    Json params = Json::object();
    for (std::size_t i = 0; i < result.p.size(); ++i) {
        params[problem.parameters[i].name] = result.p[i];
    }
    doc["parameters"] = std::move(params);
    doc["objective"] = result.objective;
    doc["max_residual"] = result.max_residual;
    doc["trace"] = result.trace;
    doc["converged"] = result.converged;
    doc["targets_met"] = result.targets_met;
    doc["status"] = to_string(result.status);
    doc["iterations"] = result.iterations;
    doc["evaluations"] = result.evaluations;
    doc["netlist"] = to_json(problem.apply(result.p));
    return doc;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rlf
