#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <thread>

#include "walklab/graph.hpp"

namespace walklab {

/// Connected simple graphs with up to 8 nodes, packed as upper-triangle
/// bitmasks.  Bit k(i, j) for i < j is laid out row by row.
namespace smallgraph {

inline int pair_bit(int n, int i, int j) {
    // i < j assumed
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline bool connected(int n, std::uint32_t mask) {
    std::array<std::uint8_t, 8> adj{};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask >> pair_bit(n, i, j) & 1u) {
                adj[i] |= std::uint8_t(1u << j);
                adj[j] |= std::uint8_t(1u << i);
            }
    std::uint8_t seen = 1;
    for (;;) {
        std::uint8_t grown = seen;
        for (int i = 0; i < n; ++i)
            if (seen >> i & 1u) grown |= adj[i];
        if (grown == seen) break;
        seen = grown;
    }
    return seen == (1u << n) - 1u;
}

inline std::array<int, 8> degrees(int n, std::uint32_t mask) {
    std::array<int, 8> d{};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask >> pair_bit(n, i, j) & 1u) { ++d[i]; ++d[j]; }
    return d;
}

/// Eigenvalues of the adjacency matrix by cyclic Jacobi sweeps, rounded for
/// hashing.
inline std::array<long long, 8> spectrum_key(int n, std::uint32_t mask) {
    double a[8][8] = {};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask >> pair_bit(n, i, j) & 1u) a[i][j] = a[j][i] = 1.0;
    for (int sweep = 0; sweep < 24; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-18) break;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (a[i][j] == 0.0) continue;
                double theta = 0.5 * std::atan2(2.0 * a[i][j], a[j][j] - a[i][i]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < n; ++k) {
                    double x = a[k][i], y = a[k][j];
                    a[k][i] = c * x - s * y;
                    a[k][j] = s * x + c * y;
                }
                for (int k = 0; k < n; ++k) {
                    double x = a[i][k], y = a[j][k];
                    a[i][k] = c * x - s * y;
                    a[j][k] = s * x + c * y;
                }
            }
    }
    std::array<double, 8> ev{};
    for (int i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.begin() + n);
    std::array<long long, 8> key{};
    for (int i = 0; i < n; ++i) key[i] = std::llround(ev[i] * 1e6);
    return key;
}

/// Exact isomorphism test by backtracking over degree-compatible vertex
/// images.
inline bool isomorphic(int n, std::uint32_t a, std::uint32_t b) {
    auto da = degrees(n, a), db = degrees(n, b);
    {
        auto sa = da, sb = db;
        std::sort(sa.begin(), sa.begin() + n);
        std::sort(sb.begin(), sb.begin() + n);
        if (sa != sb) return false;
    }
    std::array<int, 8> image{};
    std::uint32_t used = 0;
    auto adj = [n](std::uint32_t m, int i, int j) {
        if (i == j) return false;
        if (i > j) std::swap(i, j);
        return (m >> pair_bit(n, i, j) & 1u) != 0;
    };
    auto rec = [&](auto&& self, int v) -> bool {
        if (v == n) return true;
        for (int w = 0; w < n; ++w) {
            if (used >> w & 1u) continue;
            if (da[v] != db[w]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (adj(a, u, v) != adj(b, image[u], w)) ok = false;
            if (!ok) continue;
            image[v] = w;
            used |= 1u << w;
            if (self(self, v + 1)) return true;
            used &= ~(1u << w);
        }
        return false;
    };
    return rec(rec, 0);
}

struct EnumerationResult {
    std::vector<std::uint32_t> representatives;  // one mask per isomorphism class
    long long labeled_connected = 0;             // total connected labeled graphs
};

/// All connected graphs on n nodes up to isomorphism.  Candidate classes are
/// bucketed by sorted degree sequence plus adjacency spectrum; every bucket
/// collision is settled by the exact isomorphism test above.
inline EnumerationResult enumerate_connected(int n) {
    if (n < 2 || n > 7) fail(Errc::InvalidSize, "enumeration supports 2..7 nodes");
    int bits = n * (n - 1) / 2;
    EnumerationResult out;
    std::map<std::pair<std::array<int, 8>, std::array<long long, 8>>, std::vector<std::uint32_t>>
        buckets;
    for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
        if (!connected(n, mask)) continue;
        ++out.labeled_connected;
        auto deg = degrees(n, mask);
        std::sort(deg.begin(), deg.begin() + n);
        auto key = std::make_pair(deg, spectrum_key(n, mask));
        auto& bucket = buckets[key];
        bool fresh = true;
        for (std::uint32_t rep : bucket)
            if (isomorphic(n, rep, mask)) { fresh = false; break; }
        if (fresh) {
            bucket.push_back(mask);
            out.representatives.push_back(mask);
        }
    }
    std::sort(out.representatives.begin(), out.representatives.end());
    return out;
}

inline Graph to_graph(int n, std::uint32_t mask) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask >> pair_bit(n, i, j) & 1u) e.emplace_back(i, j);
    return Graph::from_edges(n, std::move(e));
}

/// Order of the automorphism group (brute force over all permutations).
inline long long automorphism_count(int n, std::uint32_t mask) {
    std::array<int, 8> perm{};
    for (int i = 0; i < n; ++i) perm[i] = i;
    long long count = 0;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j) {
                int pi = perm[i], pj = perm[j];
                if (pi > pj) std::swap(pi, pj);
                if (((mask >> pair_bit(n, i, j)) & 1u) != ((mask >> pair_bit(n, pi, pj)) & 1u))
                    ok = false;
            }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.begin() + n));
    return count;
}

}  // namespace smallgraph

/// Thread budget: WALKLAB_THREADS caps the worker count when set.
inline int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("WALKLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

/// Run fn(i) for i in [0, n) on up to max_threads() workers.  Work items
/// must be independent; callers keep determinism by writing results into
/// per-index slots.
template <typename F>
inline void parallel_for(int n, F&& fn) {
    int workers = std::min(max_threads(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace walklab
