#include "mwvcsim/graph.hpp"

#include <doctest.h>

using namespace mwvcsim;

TEST_CASE("parsing the smallest graphs") {
    WeightedGraph g = parse_graph("2 1\n0 1\n1 1\n0 1\n");
    CHECK(g.n == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.weights[0] == Rat(1));
    CHECK(g.weights[1] == Rat(1));
    CHECK(g.adjacency[0] == std::vector<int>{1});

    WeightedGraph iso = parse_graph("1 0\n0 5\n");
    CHECK(iso.n == 1);
    CHECK(iso.edge_count() == 0);
    CHECK(iso.weights[0] == Rat(5));
}

TEST_CASE("comments, blank lines and decimal weights") {
    WeightedGraph g = parse_graph("# a comment\n\n2 1\n0 0.5\n1 3/4   # trailing\n\n0 1\n");
    CHECK(g.weights[0] == Rat(1, 2));
    CHECK(g.weights[1] == Rat(3, 4));
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_graph(text);
        } catch (const GraphParseError& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("nope\n") == 1);
    CHECK(line_of("1 0\n0 0\n") == 2);            // non-positive weight
    CHECK(line_of("1 0\n0 -2\n") == 2);           // negative weight
    CHECK(line_of("2 2\n0 1\n1 1\n0 1\n0 1\n") == 5);  // duplicate edge
    CHECK(line_of("2 1\n0 1\n1 1\n1 1\n") == 4);  // self-loop
    CHECK(line_of("2 1\n0 1\n1 1\n0 2\n") == 4);  // index out of range
    CHECK(line_of("2 1\n0 1\n1 1\n1 0\n") == 4);  // u >= v
    CHECK(line_of("2 1\n0 1\n5 1\n0 1\n") == 3);  // weight index out of range
    CHECK(line_of("2 1\n0 1\n0 2\n0 1\n") == 3);  // duplicate weight line
    CHECK(line_of("2 1\n0 1\n1 1\n") == 3);       // truncated
    CHECK(line_of("1 0\n0 1\nextra\n") == 3);     // trailing line
}

TEST_CASE("emission is canonical and round-trips") {
    WeightedGraph g = parse_graph("2 1\n0 1\n1 1\n0 1\n");
    CHECK(emit_graph(g) == "2 1\n0 1\n1 1\n0 1\n");
    CHECK(emit_graph(parse_graph(emit_graph(g))) == emit_graph(g));

    GeneratorSpec k4;
    k4.family = Family::Complete;
    k4.n = 4;
    WeightedGraph c = generate(k4);
    std::string text = emit_graph(c);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4 + 6);
    CHECK(graphs_equal(parse_graph(text), c));
}

TEST_CASE("generated families match their definitions") {
    GeneratorSpec star;
    star.family = Family::Star;
    star.n = 11;
    WeightedGraph s = generate(star);
    CHECK(s.degree(0) == 10);
    for (int v = 1; v < 11; ++v) CHECK(s.degree(v) == 1);
    CHECK(max_degree(s) == 10);

    GeneratorSpec complete;
    complete.family = Family::Complete;
    complete.n = 5;
    WeightedGraph k5 = generate(complete);
    CHECK(k5.edge_count() == 10);
    CHECK(max_degree(k5) == 4);

    GeneratorSpec er;
    er.family = Family::ErdosRenyi;
    er.n = 6;
    er.edge_probability = Rat(1);
    CHECK(generate(er).edge_count() == 15);
    er.edge_probability = Rat(0);
    CHECK(generate(er).edge_count() == 0);

    GeneratorSpec path;
    path.family = Family::Path;
    path.n = 5;
    CHECK(max_degree(generate(path)) == 2);

    GeneratorSpec cb;
    cb.family = Family::CompleteBipartite;
    cb.n = 7;
    CHECK(generate(cb).edge_count() == 3 * 4);

    GeneratorSpec bd;
    bd.family = Family::RandomBoundedDegree;
    bd.n = 9;
    bd.degree_bound = 3;
    bd.seed = 7;
    CHECK(max_degree(generate(bd)) <= 3);
}

TEST_CASE("generator parameter errors") {
    GeneratorSpec bad;
    bad.family = Family::Star;
    bad.n = 0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad.family = Family::SingleEdge;
    bad.n = 3;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad.family = Family::Cycle;
    bad.n = 2;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad.family = Family::ErdosRenyi;
    bad.n = 3;
    bad.edge_probability = Rat(3, 2);
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("generation is deterministic and always valid") {
    Family families[] = {Family::Path, Family::Cycle, Family::Star, Family::Complete,
                         Family::CompleteBipartite, Family::ErdosRenyi,
                         Family::RandomBoundedDegree};
    int checked = 0;
    for (Family f : families) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            GeneratorSpec spec;
            spec.family = f;
            spec.n = 3 + static_cast<int>(seed) * 2;
            spec.seed = seed * 977 + 13;
            spec.weight_mode = seed % 2 ? WeightMode::UniformInteger : WeightMode::UniformRational;
            WeightedGraph g = generate(spec);
            CHECK(validate(g).empty());
            CHECK(emit_graph(generate(spec)) == emit_graph(g));
            CHECK(graphs_equal(parse_graph(emit_graph(g)), g));
            ++checked;
        }
    }
    CHECK(checked == 35);

    // 100 seeded round-trips through the text format
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorSpec spec;
        spec.family = Family::ErdosRenyi;
        spec.n = 2 + static_cast<int>(seed % 11);
        spec.edge_probability = Rat(seed % 5, 4);
        spec.weight_mode = WeightMode::UniformRational;
        spec.denominator_bound = 50;
        spec.seed = seed;
        WeightedGraph g = generate(spec);
        CHECK(graphs_equal(parse_graph(emit_graph(g)), g));
    }
}

TEST_CASE("validation reports injected corruption") {
    WeightedGraph g = make_graph(3, {Rat(1), Rat(1), Rat(1)}, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(validate(g).empty());

    WeightedGraph zero = g;
    zero.weights[1] = 0;
    auto bad = validate(zero);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("vertex 1") != std::string::npos);

    WeightedGraph asym = g;
    asym.adjacency[0].erase(asym.adjacency[0].begin());  // drop 1 from 0's list
    CHECK(!validate(asym).empty());

    WeightedGraph dup = g;
    dup.edges.push_back({0, 1});
    CHECK(!validate(dup).empty());
}

TEST_CASE("maximum degree") {
    GeneratorSpec star;
    star.family = Family::Star;
    star.n = 11;
    CHECK(max_degree(generate(star)) == 10);
    WeightedGraph edgeless = make_graph(4, {Rat(1), Rat(1), Rat(1), Rat(1)}, {});
    CHECK(max_degree(edgeless) == 0);
    GeneratorSpec path;
    path.family = Family::Path;
    path.n = 5;
    CHECK(max_degree(generate(path)) == 2);
}

TEST_CASE("family names round-trip") {
    for (Family f : {Family::SingleEdge, Family::Path, Family::Cycle, Family::Star,
                     Family::Complete, Family::CompleteBipartite, Family::ErdosRenyi,
                     Family::RandomBoundedDegree})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("nonsense"), std::invalid_argument);
}
