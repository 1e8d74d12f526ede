#include "netlearn/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace netlearn::io {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& what) { throw FormatError(source + ": " + what); }

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t j = 0; j < e.byte && j < text.size(); ++j)
            if (text[j] == '\n') ++line;
        fail(source, "line " + std::to_string(line) + ": " + e.what());
    }
}

const Json& field(const Json& obj, const std::string& key, const std::string& path, const std::string& source) {
    if (!obj.is_object()) fail(source, "'" + path + "' must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, "missing field '" + path + "." + key + "'");
    return *it;
}

double number(const Json& obj, const std::string& key, const std::string& path, const std::string& source) {
    const auto& v = field(obj, key, path, source);
    if (!v.is_number()) fail(source, "field '" + path + "." + key + "' must be a number");
    return v.get<double>();
}

std::string text_field(const Json& obj, const std::string& key, const std::string& path, const std::string& source) {
    const auto& v = field(obj, key, path, source);
    if (!v.is_string()) fail(source, "field '" + path + "." + key + "' must be a string");
    return v.get<std::string>();
}

const Json& array(const Json& obj, const std::string& key, const std::string& source) {
    const auto& v = field(obj, key, "", source);
    if (!v.is_array()) fail(source, "field '" + key + "' must be an array");
    return v;
}

void check_version(const Json& doc, const std::string& source) {
    const double v = number(doc, "format_version", "", source);
    if (v != kFormatVersion)
        fail(source, "unsupported format_version " + format_number(v) + ", expected " + std::to_string(kFormatVersion));
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

DistributionSpec parse_distribution(const Json& d, const std::string& path, const std::string& source) {
    const auto kind = text_field(d, "kind", path, source);
    try {
        if (kind == "uniform") return Uniform{number(d, "a", path, source), number(d, "b", path, source)};
        if (kind == "exponential") return Exponential{number(d, "rate", path, source)};
        if (kind == "point") return PointMass{number(d, "at", path, source)};
        if (kind == "grid") {
            GriddedDensity g{number(d, "t0", path, source), number(d, "dt", path, source), {}};
            const auto& v = field(d, "density", path, source);
            if (!v.is_array()) fail(source, "field '" + path + ".density' must be an array");
            for (const auto& x : v) {
                if (!x.is_number()) fail(source, "field '" + path + ".density' must hold numbers");
                g.density.push_back(x.get<double>());
            }
            return g;
        }
    } catch (const std::invalid_argument& e) {
        fail(source, "field '" + path + "': " + e.what());
    }
    fail(source, "field '" + path + ".kind' has unknown value '" + kind + "'");
}

Json emit_distribution(const DistributionSpec& d) {
    return std::visit(
        [](const auto& law) -> Json {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Uniform>) return Json{{"kind", "uniform"}, {"a", law.a}, {"b", law.b}};
            else if constexpr (std::is_same_v<T, Exponential>) return Json{{"kind", "exponential"}, {"rate", law.rate}};
            else if constexpr (std::is_same_v<T, PointMass>) return Json{{"kind", "point"}, {"at", law.at}};
            else return Json{{"kind", "grid"}, {"t0", law.t0}, {"dt", law.dt}, {"density", law.density}};
        },
        d.law());
}

const char* verdict_name(EpochVerdict v) {
    switch (v) {
        case EpochVerdict::found: return "found";
        case EpochVerdict::error_floor: return "error_floor";
        case EpochVerdict::cap_exceeded: return "cap_exceeded";
        case EpochVerdict::disconnected: return "disconnected";
    }
    return "found";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Topology parse_instance(const std::string& text, const std::string& source) {
    const Json doc = parse_json(text, source);
    check_version(doc, source);
    Topology t;
    std::map<std::string, std::size_t> l_ids;
    std::map<std::string, std::size_t> i_ids;
    const auto& ls = array(doc, "l_nodes", source);
    for (std::size_t j = 0; j < ls.size(); ++j) {
        const std::string path = "l_nodes[" + std::to_string(j) + "]";
        LNode n;
        n.id = text_field(ls[j], "id", path, source);
        n.op_cost = number(ls[j], "op_cost", path, source);
        n.base_compute = parse_distribution(field(ls[j], "compute", path, source), path + ".compute", source);
        n.initial_samples = number(ls[j], "initial_samples", path, source);
        l_ids.emplace(n.id, j);
        t.l_nodes.push_back(std::move(n));
    }
    const auto& is = array(doc, "i_nodes", source);
    for (std::size_t j = 0; j < is.size(); ++j) {
        const std::string path = "i_nodes[" + std::to_string(j) + "]";
        INode n;
        n.id = text_field(is[j], "id", path, source);
        n.op_cost = number(is[j], "op_cost", path, source);
        n.gen_time = parse_distribution(field(is[j], "gen_time", path, source), path + ".gen_time", source);
        n.rate = number(is[j], "rate", path, source);
        i_ids.emplace(n.id, j);
        t.i_nodes.push_back(std::move(n));
    }
    auto lookup = [&](const std::map<std::string, std::size_t>& ids, const std::string& id, const std::string& path) {
        auto it = ids.find(id);
        if (it == ids.end()) fail(source, "field '" + path + "' references unknown node id '" + id + "'");
        return it->second;
    };
    const auto& lle = array(doc, "ll_edges", source);
    for (std::size_t j = 0; j < lle.size(); ++j) {
        const std::string path = "ll_edges[" + std::to_string(j) + "]";
        t.ll_candidates.push_back({lookup(l_ids, text_field(lle[j], "a", path, source), path + ".a"),
                                   lookup(l_ids, text_field(lle[j], "b", path, source), path + ".b"),
                                   number(lle[j], "cost", path, source)});
    }
    const auto& ile = array(doc, "il_edges", source);
    for (std::size_t j = 0; j < ile.size(); ++j) {
        const std::string path = "il_edges[" + std::to_string(j) + "]";
        t.il_candidates.push_back({lookup(i_ids, text_field(ile[j], "i", path, source), path + ".i"),
                                   lookup(l_ids, text_field(ile[j], "l", path, source), path + ".l"),
                                   number(ile[j], "cost", path, source)});
    }
    try {
        validate_topology(t);
    } catch (const TopologyError& e) {
        fail(source, e.what());
    }
    return t;
}

std::string emit_instance(const Topology& t) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    Json ls = Json::array();
    for (const auto& n : t.l_nodes)
        ls.push_back({{"id", n.id},
                      {"op_cost", n.op_cost},
                      {"compute", emit_distribution(n.base_compute)},
                      {"initial_samples", n.initial_samples}});
    Json is = Json::array();
    for (const auto& n : t.i_nodes)
        is.push_back({{"id", n.id}, {"op_cost", n.op_cost}, {"gen_time", emit_distribution(n.gen_time)}, {"rate", n.rate}});
    Json lle = Json::array();
    for (const auto& e : t.ll_candidates)
        lle.push_back({{"a", t.l_nodes[e.a].id}, {"b", t.l_nodes[e.b].id}, {"cost", e.cost}});
    Json ile = Json::array();
    for (const auto& e : t.il_candidates)
        ile.push_back({{"i", t.i_nodes[e.i].id}, {"l", t.l_nodes[e.l].id}, {"cost", e.cost}});
    doc["l_nodes"] = std::move(ls);
    doc["i_nodes"] = std::move(is);
    doc["ll_edges"] = std::move(lle);
    doc["il_edges"] = std::move(ile);
    return doc.dump(2) + "\n";
}

Topology load_instance(const std::string& path) { return parse_instance(read_file(path), path); }

LearningProfile parse_profile(const std::string& text, const std::string& source) {
    const Json doc = parse_json(text, source);
    LearningProfile p;
    p.c1 = number(doc, "c1", "", source);
    p.c2 = number(doc, "c2", "", source);
    p.c3 = number(doc, "c3", "", source);
    if (doc.contains("eps_max")) p.eps_max = number(doc, "eps_max", "", source);
    if (doc.contains("t_max") && !doc["t_max"].is_null()) p.t_max = number(doc, "t_max", "", source);
    try {
        validate_profile(p);
    } catch (const std::invalid_argument& e) {
        fail(source, e.what());
    }
    return p;
}

std::string emit_profile(const LearningProfile& p, std::optional<double> mse) {
    Json doc{{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"eps_max", p.eps_max}, {"t_max", number_or_null(p.t_max)}};
    if (mse) doc["mse"] = *mse;
    return doc.dump(2) + "\n";
}

std::string emit_solution(const Topology& t, const SolutionRecord& r) {
    const auto& res = r.solution ? r.solution->result : r.result;
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["algorithm"] = r.algorithm;
    doc["feasible"] = r.solution.has_value() && r.solution->feasible;
    doc["verdict"] = verdict_name(res.verdict);
    doc["d_L"] = r.solution ? r.solution->d_L : 0;
    doc["epochs"] = res.epochs;
    doc["error"] = number_or_null(res.error);
    doc["time"] = number_or_null(res.time);
    doc["cost"] = number_or_null(res.cost);
    doc["per_epoch_cost"] = res.per_epoch_cost;
    doc["margin"] = number_or_null(res.margin);
    doc["g1"] = number_or_null(res.g1);
    doc["g2"] = number_or_null(res.g2);
    doc["gamma"] = res.gamma;
    Json ll = Json::array();
    Json il = Json::array();
    if (r.solution) {
        for (auto e : r.solution->selection.ll_edges)
            ll.push_back({{"a", t.l_nodes[t.ll_candidates[e].a].id}, {"b", t.l_nodes[t.ll_candidates[e].b].id}});
        for (auto e : r.solution->selection.il_edges)
            il.push_back({{"i", t.i_nodes[t.il_candidates[e].i].id}, {"l", t.l_nodes[t.il_candidates[e].l].id}});
    }
    doc["ll_edges"] = std::move(ll);
    doc["il_edges"] = std::move(il);
    return doc.dump(2) + "\n";
}

Selection parse_solution(const Topology& t, const std::string& text, const std::string& source) {
    const Json doc = parse_json(text, source);
    check_version(doc, source);
    Selection s;
    const double K = number(doc, "epochs", "", source);
    if (!(K >= 1.0) || K != std::floor(K)) fail(source, "field 'epochs' must be a positive integer");
    s.epochs = static_cast<long>(K);
    const auto& ll = array(doc, "ll_edges", source);
    for (std::size_t j = 0; j < ll.size(); ++j) {
        const std::string path = "ll_edges[" + std::to_string(j) + "]";
        const auto a = text_field(ll[j], "a", path, source);
        const auto b = text_field(ll[j], "b", path, source);
        bool found = false;
        for (std::uint32_t e = 0; e < t.ll_candidates.size() && !found; ++e) {
            const auto& x = t.l_nodes[t.ll_candidates[e].a].id;
            const auto& y = t.l_nodes[t.ll_candidates[e].b].id;
            if ((x == a && y == b) || (x == b && y == a)) {
                s.ll_edges.push_back(e);
                found = true;
            }
        }
        if (!found) fail(source, "field '" + path + "' is not a candidate l-l edge: " + a + "-" + b);
    }
    const auto& il = array(doc, "il_edges", source);
    for (std::size_t j = 0; j < il.size(); ++j) {
        const std::string path = "il_edges[" + std::to_string(j) + "]";
        const auto i = text_field(il[j], "i", path, source);
        const auto l = text_field(il[j], "l", path, source);
        bool found = false;
        for (std::uint32_t e = 0; e < t.il_candidates.size() && !found; ++e) {
            if (t.i_nodes[t.il_candidates[e].i].id == i && t.l_nodes[t.il_candidates[e].l].id == l) {
                s.il_edges.push_back(e);
                found = true;
            }
        }
        if (!found) fail(source, "field '" + path + "' is not a candidate i-l edge: " + i + "->" + l);
    }
    std::sort(s.ll_edges.begin(), s.ll_edges.end());
    std::sort(s.il_edges.begin(), s.il_edges.end());
    return s;
}

std::string emit_simstats(const SimStats& s) {
    Json doc;
    doc["reps"] = s.reps;
    doc["seed"] = s.seed;
    doc["shared_draw"] = s.shared_draw;
    doc["total_mean"] = s.total_mean;
    doc["total_stderr"] = s.total_stderr;
    doc["epoch_mean"] = s.epoch_mean;
    doc["epoch_stderr"] = s.epoch_stderr;
    return doc.dump(2) + "\n";
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
    std::string out = "step,d_L,edge_kind,edge_id,cost,g,g1,g2,feasible\n";
    for (const auto& e : trace) {
        out += std::to_string(e.step) + "," + std::to_string(e.d_L) + "," + to_string(e.edge_kind) + "," +
               (e.edge_id >= 0 ? std::to_string(e.edge_id) : std::string()) + "," + format_number(e.cost) + "," +
               format_number(e.g) + "," + format_number(e.g1) + "," + format_number(e.g2) + "," +
               (e.feasible ? "1" : "0") + "\n";
    }
    return out;
}

std::string gantt_csv(const std::vector<GanttEvent>& events) {
    std::string out = "node,kind,epoch,start,end\n";
    for (const auto& e : events)
        out += e.node + "," + std::string(1, e.kind) + "," + std::to_string(e.epoch) + "," + format_number(e.start) +
               "," + format_number(e.end) + "\n";
    return out;
}

std::vector<ProfileObservation> parse_observations(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    std::vector<ProfileObservation> out;
    std::map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv(line);
        if (col.empty()) {
            for (std::size_t j = 0; j < cells.size(); ++j) col[cells[j]] = j;
            for (const char* name : {"X", "K", "gamma", "error"})
                if (!col.count(name)) fail(source, "line " + std::to_string(n) + ": header lacks column '" + name + "'");
            continue;
        }
        if (cells.size() != col.size())
            fail(source, "line " + std::to_string(n) + ": expected " + std::to_string(col.size()) + " fields, got " +
                             std::to_string(cells.size()));
        auto value = [&](const char* name) {
            const auto& c = cells[col[name]];
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != c.size())
                fail(source, "line " + std::to_string(n) + ": field '" + name + "' is not a number: '" + c + "'");
            return v;
        };
        out.push_back({value("X"), value("K"), value("gamma"), value("error")});
    }
    if (col.empty()) fail(source, "empty file");
    return out;
}

std::string observations_csv(const std::vector<ProfileObservation>& obs) {
    std::string out = "X,K,gamma,error\n";
    for (const auto& o : obs)
        out += format_number(o.X) + "," + format_number(o.K) + "," + format_number(o.gamma) + "," +
               format_number(o.error) + "\n";
    return out;
}

}  // namespace netlearn::io
