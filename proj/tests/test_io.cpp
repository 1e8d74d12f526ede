#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "helpers.hpp"
#include "netlearn/io.hpp"

using namespace netlearn;
using namespace testing_support;

namespace {

bool same_law(const DistributionSpec& a, const DistributionSpec& b) {
    return a.law() == b.law();
}

void check_same(const Topology& a, const Topology& b) {
    REQUIRE(a.l_nodes.size() == b.l_nodes.size());
    REQUIRE(a.i_nodes.size() == b.i_nodes.size());
    for (std::size_t l = 0; l < a.l_nodes.size(); ++l) {
        CHECK(a.l_nodes[l].id == b.l_nodes[l].id);
        CHECK(a.l_nodes[l].op_cost == b.l_nodes[l].op_cost);
        CHECK(a.l_nodes[l].initial_samples == b.l_nodes[l].initial_samples);
        CHECK(same_law(a.l_nodes[l].base_compute, b.l_nodes[l].base_compute));
    }
    for (std::size_t i = 0; i < a.i_nodes.size(); ++i) {
        CHECK(a.i_nodes[i].id == b.i_nodes[i].id);
        CHECK(a.i_nodes[i].rate == b.i_nodes[i].rate);
        CHECK(same_law(a.i_nodes[i].gen_time, b.i_nodes[i].gen_time));
    }
    REQUIRE(a.ll_candidates.size() == b.ll_candidates.size());
    for (std::size_t e = 0; e < a.ll_candidates.size(); ++e) {
        CHECK(a.ll_candidates[e].a == b.ll_candidates[e].a);
        CHECK(a.ll_candidates[e].b == b.ll_candidates[e].b);
        CHECK(a.ll_candidates[e].cost == b.ll_candidates[e].cost);
    }
    REQUIRE(a.il_candidates.size() == b.il_candidates.size());
    for (std::size_t e = 0; e < a.il_candidates.size(); ++e) {
        CHECK(a.il_candidates[e].i == b.il_candidates[e].i);
        CHECK(a.il_candidates[e].l == b.il_candidates[e].l);
        CHECK(a.il_candidates[e].cost == b.il_candidates[e].cost);
    }
}

const char* kSmall = R"({
  "format_version": 1,
  "l_nodes": [
    {"id": "a", "op_cost": 0, "compute": {"kind": "exponential", "rate": 1}, "initial_samples": 100},
    {"id": "b", "op_cost": 0, "compute": {"kind": "uniform", "a": 0.5, "b": 1.5}, "initial_samples": 100}
  ],
  "i_nodes": [
    {"id": "s", "op_cost": 0, "gen_time": {"kind": "exponential", "rate": 1}, "rate": 20}
  ],
  "ll_edges": [{"a": "a", "b": "b", "cost": 0.5}],
  "il_edges": [{"i": "s", "l": "b", "cost": 0.25}]
})";

}  // namespace

TEST_CASE("instances round-trip") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto t = random_instance(3 + seed % 4, 2 + seed % 3, seed);
        t.l_nodes[0].base_compute = Uniform{0.1, 0.7};
        t.l_nodes[1].base_compute = GriddedDensity{0.0, 0.5, {0.0, 1.0, 1.0, 0.0}};
        t.i_nodes[0].gen_time = PointMass{0.3};
        t.i_nodes[0].op_cost = 1.0 / 3.0;
        const auto text = io::emit_instance(t);
        const auto back = io::parse_instance(text);
        check_same(t, back);
        CHECK(io::emit_instance(back) == text);
    }
}

TEST_CASE("a hand-written instance parses") {
    const auto t = io::parse_instance(kSmall);
    CHECK(t.l_nodes.size() == 2);
    CHECK(t.il_candidates[0].l == 1);
    CHECK(t.ll_candidates[0].cost == 0.5);
    CHECK(std::get<Uniform>(t.l_nodes[1].base_compute.law()).b == 1.5);
}

TEST_CASE("malformed instances name the problem") {
    auto bad = [](const std::string& from, const std::string& to) {
        std::string s = kSmall;
        const auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"l\": \"b\"", "\"l\": \"zz\""), "inst.json"),
                         doctest::Contains("il_edges[0].l' references unknown node id 'zz'"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"rate\": 20", "\"rate\": \"x\"")),
                         doctest::Contains("i_nodes[0].rate"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"cost\": 0.5", "\"cost\": -0.1")), doctest::Contains("negative"),
                         io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"kind\": \"uniform\"", "\"kind\": \"beta\"")),
                         doctest::Contains("l_nodes[1].compute.kind"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"format_version\": 1", "\"format_version\": 7")),
                         doctest::Contains("format_version"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"op_cost\": 0, \"gen", "\"gen")),
                         doctest::Contains("i_nodes[0].op_cost"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance("{\n  \"format_version\": 1,\n  oops\n}", "x.json"),
                         doctest::Contains("x.json: line 3"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_instance(bad("\"b\": 1.5", "\"b\": 0.2")), doctest::Contains("l_nodes[1].compute"),
                         io::FormatError);
}

TEST_CASE("profiles round-trip with an open deadline") {
    const LearningProfile p{0.6799, 0.4978, 542.1, 0.75};
    const auto text = io::emit_profile(p, 1e-5);
    CHECK(text.find("\"t_max\": null") != std::string::npos);
    CHECK(text.find("\"mse\"") != std::string::npos);
    const auto q = io::parse_profile(text);
    CHECK(q.c1 == p.c1);
    CHECK(q.c2 == p.c2);
    CHECK(q.c3 == p.c3);
    CHECK(q.eps_max == p.eps_max);
    CHECK(std::isinf(q.t_max));
    CHECK_THROWS_AS(io::parse_profile(R"({"c1": 0.1, "c2": -1, "c3": 0})"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_profile(R"({"c1": 0.1, "c3": 0})"), doctest::Contains("c2"), io::FormatError);
}

TEST_CASE("solutions map back onto candidates") {
    const auto t = random_instance(4, 2, 3);
    const LearningProfile p{0.2, 0.3, 50.0, 0.45};
    Solution s;
    s.selection = {{0, 5}, {1, 6}, 12};
    s.result = evaluate(t, s.selection.ll_edges, s.selection.il_edges, p);
    s.selection.epochs = s.result.epochs;
    s.feasible = s.result.feasible;
    const io::SolutionRecord rec{"double-climb", s, s.result};
    const auto text = io::emit_solution(t, rec);
    const auto sel = io::parse_solution(t, text);
    CHECK(sel.ll_edges == s.selection.ll_edges);
    CHECK(sel.il_edges == s.selection.il_edges);
    CHECK(sel.epochs == s.result.epochs);
    CHECK(text.find("\"algorithm\": \"double-climb\"") != std::string::npos);

    auto other = t;
    other.il_candidates.erase(other.il_candidates.begin() + 6);
    CHECK_THROWS_WITH_AS(io::parse_solution(other, text), doctest::Contains("il_edges[1]"), io::FormatError);
}

TEST_CASE("infeasible solutions print non-finite values as null") {
    const auto t = random_instance(3, 1, 1);
    EvaluationResult r;
    r.verdict = EpochVerdict::disconnected;
    r.epochs = 10;
    const auto text = io::emit_solution(t, {"opt-unif", std::nullopt, r});
    CHECK(text.find("\"error\": null") != std::string::npos);
    CHECK(text.find("\"feasible\": false") != std::string::npos);
    CHECK(text.find("\"verdict\": \"disconnected\"") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(2.0) == "2");
    CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::format_number(std::nan("")) == "nan");
}

TEST_CASE("trace and gantt csv") {
    std::vector<TraceEntry> trace{{0, 2, EdgeKind::ll_graph, -1, 3.5, 0.9, 0.9, 2.0, false},
                                  {1, 2, EdgeKind::il, 4, 4.0, 1.1, 1.1, 1.5, true}};
    const auto csv = io::trace_csv(trace);
    CHECK(csv.rfind("step,d_L,edge_kind,edge_id,cost,g,g1,g2,feasible\n", 0) == 0);
    CHECK(csv.find("\n1,2,il,4,4,1.1000000000000001,1.1000000000000001,1.5,1\n") != std::string::npos);
    const auto g = io::gantt_csv({{"L0", 'L', 1, 0.5, 1.25}});
    CHECK(g == "node,kind,epoch,start,end\nL0,L,1,0.5,1.25\n");
}

TEST_CASE("observation csv") {
    const std::vector<ProfileObservation> obs{{100, 4, 2, 0.5}, {200, 8, 2, 0.25}};
    const auto csv = io::observations_csv(obs);
    const auto back = io::parse_observations(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[1].X == 200);
    CHECK(back[1].error == 0.25);
    // columns may come in any order
    const auto swapped = io::parse_observations("error,gamma,K,X\n0.5,2,4,100\n");
    CHECK(swapped[0].X == 100);
    CHECK(swapped[0].K == 4);
    CHECK_THROWS_WITH_AS(io::parse_observations("X,K,gamma\n1,2,3\n", "obs.csv"),
                         doctest::Contains("obs.csv: line 1: header lacks column 'error'"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_observations("X,K,gamma,error\n1,2,3,0.5\n1,2,x,0.5\n"),
                         doctest::Contains("line 3: field 'gamma'"), io::FormatError);
    CHECK_THROWS_WITH_AS(io::parse_observations("X,K,gamma,error\n1,2,3\n"), doctest::Contains("line 2"),
                         io::FormatError);
    CHECK_THROWS_AS(io::parse_observations(""), io::FormatError);
}

TEST_CASE("missing files") {
    CHECK_THROWS_WITH(io::read_file("/nonexistent/instance.json"), doctest::Contains("/nonexistent/instance.json"));
    CHECK_THROWS(io::load_instance("/nonexistent/instance.json"));
}
