#pragma once

#include <cstdint>
#include <vector>

#include "berkdyn/cover.hpp"
#include "berkdyn/skew.hpp"

namespace berkdyn {

/**
 * Markov coding graph on the level-N cover: vertex v′ receives an edge from
 * v exactly when B_{v′} ⊂ f_⋄(B_v). In the OverL view every column of the
 * adjacency matrix sums to c.
 */
struct MarkovGraph {
    int N = 0;
    long c = 0;
    FieldView view = FieldView::OverL;
    std::vector<Ball> vertices;
    std::vector<std::vector<int>> adj; // adj[v][v'] ∈ {0,1}
    std::vector<unsigned long> boundary_b; // generic multiplicities b(y_v)

    int size() const { return (int)vertices.size(); }
};

struct ParryData {
    std::vector<Rat> M; // A·M = c·M, Σ M_v = 1, all positive
};

MarkovGraph build_graph(const SkewMap& f, const BallCover& cover, int N);

/// Quotient of an OverL graph by Galois conjugation of ball directions.
MarkovGraph galois_quotient(const MarkovGraph& g);

bool is_primitive(const MarkovGraph& g);

/// Exact Parry eigenvector: nullspace of (A − cI), normalized to mass one.
ParryData parry(const MarkovGraph& g);

/// μ([w_0…w_k]) = c^{-k} · Π A_{w_i w_{i+1}} · M_{w_k}.
Rat cylinder_mass(const MarkovGraph& g, const ParryData& p,
                  const std::vector<int>& word);

/// Stationary Markov-chain sample of length `length`, reproducible per seed.
std::vector<int> sample_itinerary(const MarkovGraph& g, const ParryData& p,
                                  int length, std::uint64_t seed);

struct EquidistReport {
    long n = 0;
    std::vector<long> counts;   // preimage counts (with multiplicity) per ball
    std::vector<Rat> weights;   // counts / c^n
    std::vector<Rat> deviation; // weights − M
    long outside = 0;           // preimages in no vertex ball
};

/// Compare the n-th preimage distribution of the rigid point x0 against the
/// Parry masses (weak convergence of the normalized pullbacks).
EquidistReport equidistribution_check(const SkewMap& f, const MarkovGraph& g,
                                      const ParryData& p,
                                      const PuiseuxSeries& x0, int n,
                                      const Rat& precision = Rat(24));

} // namespace berkdyn
