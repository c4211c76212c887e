#include "berkdyn/markov.hpp"

#include <algorithm>
#include <random>

#include "berkdyn/errors.hpp"

namespace berkdyn {

MarkovGraph build_graph(const SkewMap& f, const BallCover& cover, int N) {
    if (N < 1 || cover.depth() < N)
        throw input_error("cover does not reach level " + std::to_string(N));
    for (const auto& b : cover.levels[N - 1].balls)
        if (b.contains_critical)
            throw CriticalInK("level-" + std::to_string(N - 1)
                              + " ball is not critical-free");
    MarkovGraph g;
    g.N = N;
    g.c = f.c();
    g.view = FieldView::OverL;
    g.vertices = cover.levels[N].balls;
    if (g.size() < 2)
        throw NoCover("degenerate single-ball cover has no Markov coding");
    const auto& parents = cover.levels[N].parent;
    const auto& up = cover.levels[N - 1].balls;

    g.adj.assign(g.size(), std::vector<int>(g.size(), 0));
    for (int v = 0; v < g.size(); ++v) {
        const Ball& image = up[parents[v]]; // f_⋄(B_v) maps exactly onto this
        for (int w = 0; w < g.size(); ++w)
            if (ball_contains_series(image, g.vertices[w].direction))
                g.adj[v][w] = 1;
    }

    for (int w = 0; w < g.size(); ++w) {
        long col = 0;
        for (int v = 0; v < g.size(); ++v) col += g.adj[v][w];
        if (col != g.c)
            throw HypothesisFailed("column " + std::to_string(w) + " sums to "
                                   + std::to_string(col) + ", expected c");
    }

    for (const auto& b : g.vertices)
        g.boundary_b.push_back(b.boundary.generic_multiplicity());
    return g;
}

MarkovGraph galois_quotient(const MarkovGraph& g) {
    int n = g.size();
    std::vector<int> group(n, -1);
    int ngroups = 0;
    std::vector<int> rep;
    for (int v = 0; v < n; ++v) {
        if (group[v] >= 0) continue;
        group[v] = ngroups;
        rep.push_back(v);
        auto conj = g.vertices[v].direction.galois_conjugates();
        for (int w = v + 1; w < n; ++w) {
            if (group[w] >= 0) continue;
            for (const auto& c : conj)
                if (c == g.vertices[w].direction) group[w] = ngroups;
        }
        ++ngroups;
    }
    MarkovGraph q;
    q.N = g.N;
    q.c = g.c;
    q.view = FieldView::OverLaurent;
    q.adj.assign(ngroups, std::vector<int>(ngroups, 0));
    for (int i = 0; i < ngroups; ++i) {
        q.vertices.push_back(g.vertices[rep[i]]);
        q.boundary_b.push_back(g.boundary_b[rep[i]]);
    }
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (g.adj[v][w]) q.adj[group[v]][group[w]] = 1;
    return q;
}

bool is_primitive(const MarkovGraph& g) {
    int n = g.size();
    std::vector<std::vector<long>> P(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) P[i][i] = 1;
    for (int step = 0; step < n * n + 1; ++step) {
        bool all = true;
        for (const auto& row : P)
            for (long x : row)
                if (x == 0) all = false;
        if (all) return true;
        std::vector<std::vector<long>> Q(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (!P[i][k]) continue;
                for (int j = 0; j < n; ++j)
                    if (g.adj[k][j]) Q[i][j] = 1; // saturate: occupancy only
            }
        P = std::move(Q);
    }
    return false;
}

ParryData parry(const MarkovGraph& g) {
    if (g.view != FieldView::OverL)
        throw input_error("Parry data is defined on the OverL graph");
    int n = g.size();
    // rows of (A − cI) over the rationals
    std::vector<std::vector<Rat>> R(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) R[i][j] = Rat(g.adj[i][j]);
        R[i][i] -= Rat(g.c);
    }
    // Gaussian elimination with partial structure; track pivot columns
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int p = -1;
        for (int r = row; r < n; ++r)
            if (R[r][col] != 0) { p = r; break; }
        if (p < 0) continue;
        std::swap(R[p], R[row]);
        Rat inv = Rat(1) / R[row][col];
        for (int j = col; j < n; ++j) R[row][j] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == row || R[r][col] == 0) continue;
            Rat factor = R[r][col];
            for (int j = col; j < n; ++j) R[r][j] -= factor * R[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    if (n - row != 1)
        throw DegenerateEigenspace("nullspace of (A - cI) has dimension "
                                   + std::to_string(n - row));
    // the single free column parametrizes the eigenvector
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<Rat> M(n, Rat(0));
    M[free_col] = Rat(1);
    for (int r = 0; r < (int)pivot_col.size(); ++r)
        M[pivot_col[r]] = -R[r][free_col];
    Rat total(0);
    for (const Rat& m : M) total += m;
    if (total == 0) throw DegenerateEigenspace("eigenvector has zero mass");
    for (Rat& m : M) m /= total;
    for (const Rat& m : M)
        if (m <= 0)
            throw DegenerateEigenspace("eigenvector is not strictly positive");
    // exact residual check A·M = c·M
    for (int i = 0; i < n; ++i) {
        Rat s(0);
        for (int j = 0; j < n; ++j)
            if (g.adj[i][j]) s += M[j];
        if (s != Rat(g.c) * M[i])
            throw DegenerateEigenspace("eigen-residual nonzero at row "
                                       + std::to_string(i));
    }
    return {std::move(M)};
}

Rat cylinder_mass(const MarkovGraph& g, const ParryData& p,
                  const std::vector<int>& word) {
    if (word.empty()) throw input_error("cylinder word must be nonempty");
    for (int v : word)
        if (v < 0 || v >= g.size())
            throw UnknownVertex(std::to_string(v));
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (!g.adj[word[i]][word[i + 1]]) return Rat(0);
    Rat mass = p.M[word.back()];
    Rat scale(1, g.c);
    scale.canonicalize();
    for (std::size_t i = 0; i + 1 < word.size(); ++i) mass *= scale;
    return mass;
}

std::vector<int> sample_itinerary(const MarkovGraph& g, const ParryData& p,
                                  int length, std::uint64_t seed) {
    std::vector<int> word;
    if (length <= 0) return word;
    std::mt19937_64 gen(seed);
    auto unit = [&]() -> double {
        return (double)(gen() >> 11) * 0x1.0p-53;
    };
    auto pick = [&](const std::vector<Rat>& probs) {
        double u = unit();
        double acc = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i].get_d();
            if (u < acc) return (int)i;
        }
        return (int)probs.size() - 1;
    };
    word.push_back(pick(p.M));
    while ((int)word.size() < length) {
        int v = word.back();
        std::vector<Rat> probs(g.size(), Rat(0));
        for (int w = 0; w < g.size(); ++w)
            if (g.adj[v][w]) probs[w] = p.M[w] / (Rat(g.c) * p.M[v]);
        word.push_back(pick(probs));
    }
    return word;
}

EquidistReport equidistribution_check(const SkewMap& f, const MarkovGraph& g,
                                      const ParryData& p,
                                      const PuiseuxSeries& x0, int n,
                                      const Rat& precision) {
    EquidistReport rep;
    rep.n = n;
    rep.counts.assign(g.size(), 0);
    std::vector<std::pair<PuiseuxSeries, long>> pts = {{x0, 1}};
    for (int step = 0; step < n; ++step) {
        std::vector<std::pair<PuiseuxSeries, long>> next;
        for (const auto& [phi, m] : pts) {
            auto fib = f.preimages_rigid(phi, precision);
            for (const auto& r : fib.roots)
                next.emplace_back(r.root, m * r.multiplicity);
        }
        pts = std::move(next);
    }
    for (const auto& [phi, m] : pts) {
        bool binned = false;
        for (int v = 0; v < g.size() && !binned; ++v) {
            if (ball_contains_series(g.vertices[v], phi)) {
                rep.counts[v] += m;
                binned = true;
            }
        }
        if (!binned) rep.outside += m;
    }
    Rat total(1);
    for (int i = 0; i < n; ++i) total *= Rat(g.c);
    for (int v = 0; v < g.size(); ++v) {
        Rat w = Rat(rep.counts[v]) / total;
        rep.weights.push_back(w);
        rep.deviation.push_back(w - p.M[v]);
    }
    return rep;
}

} // namespace berkdyn
