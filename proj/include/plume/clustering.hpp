#ifndef PLUME_CLUSTERING_HPP
#define PLUME_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "plume/inversion.hpp"

namespace plume {

/// One per-run source estimate, the element being clustered. Only
/// (x, y, q) participate in the metric; d rides along for the centroid
/// assembly of extended sources.
struct SourceTriple {
    double x = 0.0;
    double y = 0.0;
    double q = 0.0;
    double d = 0.0;
    int run_index = -1;
};

/// Cosine distance 1 - a.b/(|a||b|) over the (x, y, q) components, clamped
/// to its exact range [0, 2]. Conventions: identical vectors -> 0, both
/// zero -> 0, exactly one zero -> 1.
inline double cosine_distance(const SourceTriple& a, const SourceTriple& b) {
    if (a.x == b.x && a.y == b.y && a.q == b.q) return 0.0;
    const double na = std::sqrt(a.x * a.x + a.y * a.y + a.q * a.q);
    const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.q * b.q);
    if (na == 0.0 || nb == 0.0) return 1.0;
    const double dot = a.x * b.x + a.y * b.y + a.q * b.q;
    return std::clamp(1.0 - dot / (na * nb), 0.0, 2.0);
}

/// Per-run bijections from source blocks to cluster labels:
/// labels[r][b] is the cluster of block b of retained run r. Every run
/// contributes exactly one block to each cluster, so all clusters have
/// equal cardinality.
struct ClusterAssignment {
    int cluster_count = 0;
    std::vector<std::vector<int>> labels;
    std::vector<SourceTriple> centroids_used; // centroids the final assignment minimized against
    std::vector<double> within_history;       // total within-cluster distance per iteration
    int iterations = 0;
};

namespace detail {

/// Exhaustive minimum-cost bijection for small i; first minimum in
/// lexicographic order wins, which resolves distance ties toward the
/// lowest cluster label.
inline double best_bijection_exhaustive(const std::vector<double>& cost, int n,
                                        std::vector<int>& out) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (int b = 0; b < n; ++b) c += cost[b * n + perm[b]];
        if (c < best) {
            best = c;
            out = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// O(n^3) Hungarian algorithm (potentials + augmenting rows).
inline double best_bijection_hungarian(const std::vector<double>& cost, int n,
                                       std::vector<int>& out) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    out.assign(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) {
            out[p[j] - 1] = j - 1;
            total += cost[(p[j] - 1) * n + (j - 1)];
        }
    }
    return total;
}

inline double best_bijection(const std::vector<double>& cost, int n, std::vector<int>& out) {
    return n <= 6 ? best_bijection_exhaustive(cost, n, out)
                  : best_bijection_hungarian(cost, n, out);
}

} // namespace detail

/// Extract the clustering elements of a run set: triples[r][b].
inline std::vector<std::vector<SourceTriple>> cluster_elements(const RunSet& rs) {
    std::vector<std::vector<SourceTriple>> out(rs.records.size());
    for (std::size_t r = 0; r < rs.records.size(); ++r) {
        const auto& rec = rs.records[r];
        out[r].reserve(rec.params.sources.size());
        for (const auto& s : rec.params.sources)
            out[r].push_back({s.x, s.y, s.q, s.d, rec.run_index});
    }
    return out;
}

/// Equal-size constrained k-means: each retained run contributes exactly
/// one source block to each of the i clusters. Assignment step: per-run
/// optimal bijection against the current centroids under cosine distance
/// (exhaustive for i <= 6, Hungarian above). Update step: centroids as
/// arithmetic cluster means. Initialized from the best-residual run;
/// terminates on stable assignments, non-decreasing total distance, or
/// after 200 iterations, so the recorded history is monotone.
inline ClusterAssignment constrained_kmeans(const RunSet& rs, int cluster_count,
                                            int max_iterations = 200) {
    if (cluster_count < 1) throw StructuralError("cluster count must be >= 1");
    if (rs.records.empty()) throw StructuralError("empty run set");
    for (const auto& rec : rs.records)
        if (static_cast<int>(rec.params.sources.size()) != cluster_count)
            throw StructuralError("record block count does not match cluster count");

    const auto elements = cluster_elements(rs);
    const int R = static_cast<int>(elements.size());
    const int i = cluster_count;

    // centroids start as the best run's blocks (records are residual-sorted)
    std::vector<SourceTriple> centroids(elements[0].begin(), elements[0].end());

    ClusterAssignment assign;
    assign.cluster_count = i;
    assign.labels.assign(R, std::vector<int>(i, 0));

    std::vector<double> cost(static_cast<std::size_t>(i) * i);
    std::vector<int> perm(i);
    std::vector<std::vector<int>> prev_labels;

    std::vector<SourceTriple> prev_centroids;
    for (int iter = 0; iter < max_iterations; ++iter) {
        double total = 0.0;
        for (int r = 0; r < R; ++r) {
            for (int b = 0; b < i; ++b)
                for (int c = 0; c < i; ++c)
                    cost[b * i + c] = cosine_distance(elements[r][b], centroids[c]);
            total += detail::best_bijection(cost, i, perm);
            assign.labels[r] = perm;
        }
        if (!assign.within_history.empty() && total >= assign.within_history.back()) {
            // no further improvement; keep the previous stable state
            assign.labels = prev_labels;
            assign.centroids_used = prev_centroids;
            break;
        }
        assign.within_history.push_back(total);
        assign.iterations = iter + 1;
        assign.centroids_used = centroids;
        if (assign.labels == prev_labels) break;
        prev_labels = assign.labels;
        prev_centroids = centroids;

        // means over members, accumulated in run order
        std::vector<SourceTriple> next(i);
        for (int r = 0; r < R; ++r)
            for (int b = 0; b < i; ++b) {
                SourceTriple& c = next[assign.labels[r][b]];
                c.x += elements[r][b].x;
                c.y += elements[r][b].y;
                c.q += elements[r][b].q;
                c.d += elements[r][b].d;
            }
        for (auto& c : next) {
            c.x /= R;
            c.y /= R;
            c.q /= R;
            c.d /= R;
        }
        centroids.swap(next);
    }
    return assign;
}

/// Cluster centroids, silhouettes and the run-averaged medium estimate.
struct ClusterSummary {
    int cluster_count = 0;
    std::vector<SourceTriple> centroids; // per-cluster means (run_index = -1)
    MediumParams medium{0.0, 1e-300, 1e-300};
    std::vector<std::vector<double>> element_silhouette; // [run][block]
    double average_silhouette = 0.0;
};

/// Rousseeuw silhouettes under cosine distance. Conventions: i = 1 is
/// defined as a perfect score, singleton clusters score 0, and the
/// 0/0 tie (all points identical) scores 0.
inline ClusterSummary silhouette(const ClusterAssignment& assign, const RunSet& rs) {
    const auto elements = cluster_elements(rs);
    const int R = static_cast<int>(elements.size());
    const int i = assign.cluster_count;
    if (static_cast<int>(assign.labels.size()) != R)
        throw StructuralError("assignment does not match run set");

    ClusterSummary out;
    out.cluster_count = i;
    out.element_silhouette.assign(R, std::vector<double>(i, 0.0));

    // centroids and medium averages
    out.centroids.assign(i, {});
    for (int r = 0; r < R; ++r)
        for (int b = 0; b < i; ++b) {
            SourceTriple& c = out.centroids[assign.labels[r][b]];
            c.x += elements[r][b].x;
            c.y += elements[r][b].y;
            c.q += elements[r][b].q;
            c.d += elements[r][b].d;
        }
    for (auto& c : out.centroids) {
        c.x /= R;
        c.y /= R;
        c.q /= R;
        c.d /= R;
    }
    double u = 0.0, dx = 0.0, dy = 0.0;
    for (const auto& rec : rs.records) {
        u += rec.params.medium.u_x;
        dx += rec.params.medium.D_x;
        dy += rec.params.medium.D_y;
    }
    out.medium = {u / R, dx / R, dy / R};

    if (i == 1) {
        for (auto& row : out.element_silhouette) row.assign(1, 1.0);
        out.average_silhouette = 1.0;
        return out;
    }

    // flatten elements per cluster for the mean-distance sums
    struct Ref {
        int r, b;
    };
    std::vector<std::vector<Ref>> members(i);
    for (int r = 0; r < R; ++r)
        for (int b = 0; b < i; ++b) members[assign.labels[r][b]].push_back({r, b});

    double total = 0.0;
    int count = 0;
    for (int r = 0; r < R; ++r) {
        for (int b = 0; b < i; ++b) {
            const int own = assign.labels[r][b];
            const SourceTriple& e = elements[r][b];
            double s_val = 0.0;
            if (members[own].size() > 1) {
                double a_sum = 0.0;
                for (const Ref& m : members[own]) {
                    if (m.r == r && m.b == b) continue;
                    a_sum += cosine_distance(e, elements[m.r][m.b]);
                }
                const double a = a_sum / (members[own].size() - 1);
                double b_min = std::numeric_limits<double>::infinity();
                for (int c = 0; c < i; ++c) {
                    if (c == own || members[c].empty()) continue;
                    double b_sum = 0.0;
                    for (const Ref& m : members[c])
                        b_sum += cosine_distance(e, elements[m.r][m.b]);
                    b_min = std::min(b_min, b_sum / members[c].size());
                }
                const double denom = std::max(a, b_min);
                s_val = denom == 0.0 ? 0.0 : (b_min - a) / denom;
            }
            out.element_silhouette[r][b] = s_val;
            total += s_val;
            ++count;
        }
    }
    out.average_silhouette = total / count;
    return out;
}

/// Assemble the centroid parameter vector and evaluate its reconstruction
/// error against the observations.
struct CentroidParameters {
    ParameterVector params;
    double o_cent = 0.0;
};

inline CentroidParameters centroid_parameters(const ClusterAssignment& assign, const RunSet& rs,
                                              const ObservationMatrix& obs) {
    const ClusterSummary summary = silhouette(assign, rs);
    CentroidParameters out;
    out.params.spec = rs.spec;
    out.params.medium = summary.medium;
    for (const auto& c : summary.centroids) out.params.sources.push_back({c.x, c.y, c.q, c.d});
    out.o_cent = objective(out.params, obs);
    return out;
}

} // namespace plume

#endif
