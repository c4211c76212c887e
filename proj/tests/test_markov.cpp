#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "berkdyn/markov.hpp"

using namespace berkdyn;

namespace {

PuiseuxSeries mono(long num, long den, long cnum, long cden = 1) {
    return PuiseuxSeries::monomial(Coefficient(rat(cnum, cden)), rat(num, den));
}

SkewMap quad() { return SkewMap(4, 2, {mono(4, 1, -1)}); }

BallCover quad_cover() {
    SkewMap f = quad();
    BallCover cover = make_cover(f);
    refine(f, cover);
    refine(f, cover);
    return cover;
}

MarkovGraph manual_graph(const std::vector<std::vector<int>>& adj, long c) {
    MarkovGraph g;
    g.N = 1;
    g.c = c;
    g.vertices.assign(adj.size(), Ball{});
    g.adj = adj;
    g.boundary_b.assign(adj.size(), 1);
    return g;
}

} // namespace

TEST_CASE("graph of the quadratic cover at level 2") {
    SkewMap f = quad();
    BallCover cover = quad_cover();
    CHECK_THROWS_AS(build_graph(f, cover, 1), CriticalInK); // level 0 critical
    MarkovGraph g = build_graph(f, cover, 2);
    REQUIRE(g.size() == 4);
    CHECK(g.c == 2);
    for (int v = 0; v < 4; ++v) {
        int row = 0, col = 0;
        for (int w = 0; w < 4; ++w) {
            row += g.adj[v][w];
            col += g.adj[w][v];
        }
        CHECK(row == 2);
        CHECK(col == 2);
    }
    CHECK(is_primitive(g));
    for (unsigned long b : g.boundary_b) CHECK(b == 1); // integer-slope points

    // rational directions: the Galois quotient is the graph itself
    MarkovGraph q = galois_quotient(g);
    CHECK(q.size() == 4);
    CHECK(q.view == FieldView::OverLaurent);
    CHECK(q.adj == g.adj);
}

TEST_CASE("parry eigenvector, exact") {
    SkewMap f = quad();
    MarkovGraph g = build_graph(f, quad_cover(), 2);
    ParryData p = parry(g);
    Rat quarter = rat(1, 4);
    for (const Rat& m : p.M) CHECK(m == quarter);

    MarkovGraph chain =
        manual_graph({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}, 2);
    ParryData pc = parry(chain);
    Rat third = rat(1, 3);
    for (const Rat& m : pc.M) CHECK(m == third);

    MarkovGraph ident = manual_graph({{1, 0}, {0, 1}}, 1);
    CHECK_THROWS_AS(parry(ident), DegenerateEigenspace);

    MarkovGraph quotient = galois_quotient(g);
    CHECK_THROWS_AS(parry(quotient), input_error); // wrong field view
}

TEST_CASE("cylinder masses") {
    SkewMap f = quad();
    MarkovGraph g = build_graph(f, quad_cover(), 2);
    ParryData p = parry(g);
    Rat m0 = cylinder_mass(g, p, {0});
    CHECK(m0 == rat(1, 4));

    // length-2 masses: edges carry 1/8, non-edges 0, total mass 1
    Rat total(0);
    for (int v = 0; v < 4; ++v)
        for (int w = 0; w < 4; ++w) {
            Rat m = cylinder_mass(g, p, {v, w});
            if (g.adj[v][w])
                CHECK(m == rat(1, 8));
            else
                CHECK(m == 0);
            total += m;
        }
    CHECK(total == 1);

    Rat m3 = cylinder_mass(g, p, {0, 0, 0});
    if (g.adj[0][0]) CHECK(m3 == rat(1, 16));

    CHECK_THROWS_AS(cylinder_mass(g, p, {}), input_error);
    CHECK_THROWS_AS(cylinder_mass(g, p, {7}), UnknownVertex);
}

TEST_CASE("itinerary sampling") {
    SkewMap f = quad();
    MarkovGraph g = build_graph(f, quad_cover(), 2);
    ParryData p = parry(g);

    auto w1 = sample_itinerary(g, p, 64, 2024);
    auto w2 = sample_itinerary(g, p, 64, 2024);
    CHECK(w1 == w2); // reproducible
    CHECK(w1 != sample_itinerary(g, p, 64, 2025));
    for (std::size_t i = 0; i + 1 < w1.size(); ++i)
        CHECK(g.adj[w1[i]][w1[i + 1]] == 1);

    // occupancy of a fixed vertex tracks its stationary mass 1/4
    auto longw = sample_itinerary(g, p, 10000, 7);
    long hits = 0;
    for (int v : longw)
        if (v == 0) ++hits;
    CHECK(hits > 2000);
    CHECK(hits < 3000);
}

TEST_CASE("equidistribution of preimages") {
    SkewMap f = quad();
    MarkovGraph g = build_graph(f, quad_cover(), 2);
    ParryData p = parry(g);
    EquidistReport rep =
        equidistribution_check(f, g, p, mono(1, 1, -1), 3, rat(24));
    CHECK(rep.outside == 0);
    long total = 0;
    for (int v = 0; v < g.size(); ++v) {
        CHECK(rep.counts[v] == 2); // eight preimages split evenly
        CHECK(rep.weights[v] == rat(1, 4));
        CHECK(rep.deviation[v] == 0);
        total += rep.counts[v];
    }
    CHECK(total == 8);
}
