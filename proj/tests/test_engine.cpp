#include "mwvcsim/engine.hpp"

#include "mwvcsim/bounds.hpp"
#include "mwvcsim/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace mwvcsim;

namespace {

WeightedGraph two_vertices(const Rat& w0, const Rat& w1) {
    return make_graph(2, {w0, w1}, {{0, 1}});
}

}  // namespace

TEST_CASE("symmetric single edge, local variant") {
    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Local);
    SimEngine engine(g, p, {}, 100);

    auto r0 = engine.step();
    CHECK(r0.round == 0);
    CHECK(r0.delivered == 0);
    auto r1 = engine.step();
    CHECK(r1.delivered == 2);  // the two requests
    auto r2 = engine.step();
    CHECK(r2.delivered == 2);  // the two budgets
    CHECK(r2.returned == std::vector<int>{0, 1});
    auto r3 = engine.step();
    CHECK(r3.delivered == 2);  // trailing notices
    CHECK(engine.finished());
    CHECK_THROWS_AS(engine.step(), std::logic_error);

    auto rep = engine.report();
    CHECK(rep.cover == std::vector<int>{0, 1});
    CHECK(rep.cover_weight == Rat(2));
    CHECK(rep.iterations == std::vector<int>{1, 1});
    CHECK(rep.rounds_after_activation == std::vector<int>{3, 3});
    CHECK(rep.total_messages == 6);

    CHECK(trace_to_jsonl(engine.trace()) ==
          "{\"round\":1,\"src\":0,\"dst\":1,\"kind\":\"request\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":1,\"src\":1,\"dst\":0,\"kind\":\"request\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":2,\"src\":0,\"dst\":1,\"kind\":\"budget\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":2,\"src\":1,\"dst\":0,\"kind\":\"budget\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":3,\"src\":0,\"dst\":1,\"kind\":\"cover_notice\",\"iter\":0}\n"
          "{\"round\":3,\"src\":1,\"dst\":0,\"kind\":\"cover_notice\",\"iter\":0}\n");
}

TEST_CASE("lopsided single edge, local variant") {
    auto g = two_vertices(Rat(1), Rat(100));
    auto p = make_params(Rat(2), Variant::Local);
    auto [trace, rep] = run_simulation(g, p, {}, 100);

    CHECK(rep.cover == std::vector<int>{0});
    CHECK(rep.cover_weight == Rat(1));
    CHECK(rep.iterations == std::vector<int>{1, 1});
    CHECK(trace.lifecycles[0].status == VertexStatus::InCover);
    CHECK(trace.lifecycles[1].status == VertexStatus::NotInCover);
    CHECK(trace.lifecycles[1].return_round == 3);
    CHECK(rep.rounds_after_activation[1] == 4);  // extra round to learn the notice

    CHECK(trace_to_jsonl(trace) ==
          "{\"round\":1,\"src\":0,\"dst\":1,\"kind\":\"request\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":1,\"src\":1,\"dst\":0,\"kind\":\"request\",\"payload\":\"50\",\"iter\":0}\n"
          "{\"round\":2,\"src\":0,\"dst\":1,\"kind\":\"budget\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":2,\"src\":1,\"dst\":0,\"kind\":\"budget\",\"payload\":\"1/2\",\"iter\":0}\n"
          "{\"round\":3,\"src\":0,\"dst\":1,\"kind\":\"cover_notice\",\"iter\":0}\n");
}

TEST_CASE("symmetric single edge, congest variant") {
    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Congest);
    auto [trace, rep] = run_simulation(g, p, {}, 100);

    CHECK(rep.cover == std::vector<int>{0, 1});
    CHECK(rep.iterations == std::vector<int>{1, 1});
    CHECK(rep.rounds_after_activation == std::vector<int>{4, 4});  // initial weight round
    CHECK(rep.total_messages == 8);
    CHECK(trace.messages[0].kind == MsgKind::InitialWeight);
    CHECK(trace.messages[2].kind == MsgKind::RequestDegree);
    CHECK(trace.messages[2].ivalue == 1);
    CHECK(trace.messages[4].kind == MsgKind::BudgetAccept);
    CHECK(trace.lifecycles[0].final_weight == Rat(1, 2));  // boundary return
}

TEST_CASE("edgeless graphs resolve at once") {
    auto g = make_graph(3, {Rat(1), Rat(2), Rat(3)}, {});
    auto p = make_params(Rat(1), Variant::Local);
    auto [trace, rep] = run_simulation(g, p, {}, 10);
    CHECK(rep.cover.empty());
    CHECK(rep.total_messages == 0);
    CHECK(rep.iterations == std::vector<int>{0, 0, 0});
    for (auto& lc : trace.lifecycles) CHECK(lc.status == VertexStatus::NotInCover);
}

TEST_CASE("message arrival forces activation") {
    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Local);
    Schedule sched{{0, 5}};
    auto [trace, rep] = run_simulation(g, p, sched, 100);
    CHECK(trace.lifecycles[1].activation_round == 1);  // well before round 5
    CHECK(rep.cover == std::vector<int>{0, 1});
    auto check = verify_trace(g, trace);
    CHECK(check.violations.empty());
}

TEST_CASE("staggered starts stay correct") {
    auto g = make_graph(3, {Rat(3), Rat(1), Rat(4)}, {{0, 1}, {1, 2}});
    auto p = make_params(Rat(1, 2), Variant::Local);
    Schedule sched{{4, 0, 2}};
    auto [trace, rep] = run_simulation(g, p, sched, 1000);
    auto check = verify_trace(g, trace);
    CHECK(check.violations.empty());
    CHECK(check.dichotomy_adjusted.empty());
    CHECK(check_cover(g, rep.cover));

    auto pc = make_params(Rat(1, 2), Variant::Congest);
    auto [tc, rc] = run_simulation(g, pc, sched, 1000);
    auto checkc = verify_trace(g, tc);
    CHECK(checkc.violations.empty());
    CHECK(check_cover(g, rc.cover));
}

TEST_CASE("staggered stress across families and offsets") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        GeneratorSpec spec;
        spec.family = trial % 3 == 0 ? Family::Cycle
                      : trial % 3 == 1 ? Family::ErdosRenyi
                                       : Family::CompleteBipartite;
        spec.n = 4 + trial % 8;
        spec.edge_probability = Rat(3, 5);
        spec.weight_mode = WeightMode::UniformInteger;
        spec.seed = trial;
        auto g = generate(spec);
        Schedule sched;
        sched.activation.resize(g.n);
        for (int v = 0; v < g.n; ++v) sched.activation[v] = static_cast<int>(rng() % 6);
        Variant variant = trial % 2 ? Variant::Congest : Variant::Local;
        auto p = make_params(trial % 4 ? Rat(1, 2) : Rat(1, 10), variant);
        auto [trace, rep] = run_simulation(g, p, sched, 100000);
        auto check = verify_trace(g, trace);
        for (auto& v : check.violations) INFO(v);
        CHECK(check.violations.empty());
        CHECK(check.dichotomy_adjusted.empty());
        CHECK(check_cover(g, rep.cover));
    }
}

TEST_CASE("identical configurations yield identical traces") {
    GeneratorSpec spec;
    spec.family = Family::ErdosRenyi;
    spec.n = 9;
    spec.edge_probability = Rat(1, 2);
    spec.weight_mode = WeightMode::UniformInteger;
    spec.seed = 4242;
    auto g = generate(spec);
    for (Variant variant : {Variant::Local, Variant::Congest}) {
        auto p = make_params(Rat(1), variant);
        long long cap = default_round_cap(g, p.epsilon);
        auto [t1, r1] = run_simulation(g, p, {}, cap);
        auto [t2, r2] = run_simulation(g, p, {}, cap);
        CHECK(trace_to_jsonl(t1) == trace_to_jsonl(t2));
        CHECK(r1.cover == r2.cover);
    }
}

TEST_CASE("request order permutation keeps runs correct") {
    GeneratorSpec spec;
    spec.family = Family::Complete;
    spec.n = 6;
    spec.weight_mode = WeightMode::UniformInteger;
    spec.seed = 11;
    auto g = generate(spec);
    for (std::uint64_t order_seed : {1ULL, 2ULL, 3ULL}) {
        auto p = make_params(Rat(1), Variant::Local, order_seed);
        auto [trace, rep] = run_simulation(g, p, {}, default_round_cap(g, p.epsilon));
        auto check = verify_trace(g, trace);
        CHECK(check.violations.empty());
        CHECK(check.dichotomy_nominal.empty());
        CHECK(check_cover(g, rep.cover));
    }
}

TEST_CASE("the round cap flags runaway simulations") {
    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Local);
    SimEngine engine(g, p, {}, 1);
    engine.step();
    engine.step();
    CHECK_THROWS_AS(engine.step(), RoundCapExceeded);
}

TEST_CASE("payload bit accounting") {
    Message notice{MsgKind::CoverNotice, 0, 1, 0, 0, Rat(0), 0};
    CHECK(payload_bits(notice) == 3);
    Message degree{MsgKind::RequestDegree, 0, 1, 0, 0, Rat(0), 7};
    CHECK(payload_bits(degree) == 3 + 3);
    Message accept{MsgKind::BudgetAccept, 0, 1, 0, 0, Rat(0), 0};
    CHECK(payload_bits(accept) == 3);
    Message amount{MsgKind::Request, 0, 1, 0, 0, Rat(1, 2), 0};
    CHECK(payload_bits(amount) == 3 + 1 + 2);
    Message quant{MsgKind::BudgetQuantized, 0, 1, 0, 0, Rat(0), 1};
    CHECK(payload_bits(quant) == 3 + 1);

    Trace empty;
    empty.params = make_params(Rat(2), Variant::Local);
    auto stats = message_stats(empty, 1, 2);
    CHECK(stats.max_payload_bits == 0);
    CHECK(stats.total_messages == 0);
    CHECK(stats.within_cap);

    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Congest);
    auto [trace, rep] = run_simulation(g, p, {}, 100);
    auto s = message_stats(trace, weight_bit_width(g), g.n);
    CHECK(s.cap_bits == 2 * 1 + 2 + 8);
    CHECK(s.within_cap);
    CHECK(s.count_by_kind.at("initial_weight") == 2);
    CHECK(s.count_by_kind.at("budget_accept") == 2);
}

TEST_CASE("engine rejects malformed setups") {
    auto g = two_vertices(Rat(1), Rat(1));
    auto p = make_params(Rat(2), Variant::Local);
    CHECK_THROWS_AS(SimEngine(g, p, Schedule{{0}}, 100), std::invalid_argument);
    CHECK_THROWS_AS(SimEngine(g, p, Schedule{{0, -1}}, 100), std::invalid_argument);
    CHECK_THROWS_AS(SimEngine(g, p, {}, 0), std::invalid_argument);
    WeightedGraph broken = g;
    broken.weights[0] = 0;
    CHECK_THROWS_AS(SimEngine(broken, p, {}, 100), std::invalid_argument);
}
