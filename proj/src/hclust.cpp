#include "agemap/hclust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "agemap/errors.hpp"

namespace agemap {

namespace {

struct PairPick {
    double dist = std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;  // active slots, i < j

    // total order: distance, then lexicographic slot pair. Slots are merged
    // downward, so a slot index is the smallest leaf of its cluster.
    bool better_than(const PairPick& o) const {
        if (dist != o.dist) return dist < o.dist;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

} // namespace

Dendrogram average_linkage(const DistanceMatrix& d) {
    const std::size_t n = d.values.size();
    Dendrogram dg;
    dg.n_leaves = n;
    dg.doc_ids = d.doc_ids;
    if (n < 2) return dg;

    // working square matrix, Lance-Williams updates in place
    std::vector<double> work(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) work[i * n + j] = d.values(i, j);

    std::vector<bool> active(n, true);
    std::vector<std::uint32_t> sizes(n, 1);
    std::vector<std::int64_t> node_of(n);
    std::iota(node_of.begin(), node_of.end(), std::int64_t{0});

    dg.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        PairPick best;
#pragma omp parallel
        {
            PairPick local;
#pragma omp for schedule(dynamic, 8) nowait
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
                if (!active[i]) continue;
                const double* row = work.data() + i * n;
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (!active[j]) continue;
                    const PairPick cand{row[j], static_cast<std::size_t>(i), j};
                    if (cand.better_than(local)) local = cand;
                }
            }
#pragma omp critical
            if (local.better_than(best)) best = local;
        }

        const std::size_t a = best.i, b = best.j;
        const auto sa = sizes[a], sb = sizes[b];
        Merge m;
        m.left = std::min(node_of[a], node_of[b]);
        m.right = std::max(node_of[a], node_of[b]);
        m.height = best.dist;
        m.size = sa + sb;
        dg.merges.push_back(m);

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) continue;
            const double dk = (static_cast<double>(sa) * work[a * n + k] +
                               static_cast<double>(sb) * work[b * n + k]) /
                              static_cast<double>(sa + sb);
            work[a * n + k] = dk;
            work[k * n + a] = dk;
        }
        active[b] = false;
        sizes[a] = sa + sb;
        node_of[a] = static_cast<std::int64_t>(n + step);
    }
    return dg;
}

DistanceMatrix cophenetic(const Dendrogram& dg) {
    const std::size_t n = dg.n_leaves;
    DistanceMatrix out;
    out.doc_ids = dg.doc_ids;
    out.values = SymMatrix(n);

    // leaf membership per node; every leaf pair is set exactly once, at its
    // lowest common merge
    std::vector<std::vector<std::uint32_t>> members(n + dg.merges.size());
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<std::uint32_t>(i)};

    for (std::size_t t = 0; t < dg.merges.size(); ++t) {
        const auto& m = dg.merges[t];
        const auto& left = members[static_cast<std::size_t>(m.left)];
        const auto& right = members[static_cast<std::size_t>(m.right)];
        const auto nl = static_cast<std::int64_t>(left.size());
#pragma omp parallel for schedule(static) if (left.size() * right.size() > 4096)
        for (std::int64_t li = 0; li < nl; ++li)
            for (const auto b : right) out.values.at(left[li], b) = m.height;

        auto& dst = members[n + t];
        dst.reserve(left.size() + right.size());
        dst.insert(dst.end(), left.begin(), left.end());
        dst.insert(dst.end(), right.begin(), right.end());
    }
    return out;
}

double cophenetic_correlation(const DistanceMatrix& a, const DistanceMatrix& b) {
    if (a.doc_ids != b.doc_ids || a.values.size() != b.values.size())
        throw MismatchedDocs("cophenetic correlation over differing document lists");
    const std::size_t n = a.values.size();

    std::vector<double> xs, ys;
    xs.reserve(n * (n - 1) / 2);
    ys.reserve(n * (n - 1) / 2);
    bool a_const = true, b_const = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            xs.push_back(a.values(i, j));
            ys.push_back(b.values(i, j));
            a_const = a_const && xs.back() == xs.front();
            b_const = b_const && ys.back() == ys.front();
        }
    }
    if (xs.size() < 2 || a_const || b_const)
        throw ZeroVariance("constant off-diagonal matrix in correlation");

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mx, dy = ys[k] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

// type-7 (linear interpolation) quantile of the merge heights
double height_quantile(std::vector<double> hs, double q) {
    if (hs.empty()) return 0.0;
    std::sort(hs.begin(), hs.end());
    const double pos = q * static_cast<double>(hs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= hs.size()) return hs.back();
    const double frac = pos - static_cast<double>(lo);
    return hs[lo] + frac * (hs[lo + 1] - hs[lo]);
}

struct DsuState {
    std::vector<std::size_t> parent;
    explicit DsuState(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
};

struct Branch {
    std::vector<std::uint32_t> leaves;   // ascending
    std::int64_t root_node = -1;         // node id of the branch root
};

// candidate branches of the static cut at h_star, ordered by smallest leaf
std::vector<Branch> static_cut(const Dendrogram& dg, double h_star) {
    const std::size_t n = dg.n_leaves;
    DsuState dsu(n);
    std::vector<std::int64_t> comp_root(n, -1);
    std::vector<std::vector<std::uint32_t>> members(n + dg.merges.size());
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {static_cast<std::uint32_t>(i)};
        comp_root[i] = static_cast<std::int64_t>(i);
    }

    std::vector<char> below(n + dg.merges.size(), 0);
    for (std::size_t i = 0; i < n; ++i) below[i] = 1;
    for (std::size_t t = 0; t < dg.merges.size(); ++t) {
        const auto& m = dg.merges[t];
        const auto node = n + t;
        if (m.height <= h_star && below[static_cast<std::size_t>(m.left)] &&
            below[static_cast<std::size_t>(m.right)]) {
            below[node] = 1;
            auto& dst = members[node];
            auto& l = members[static_cast<std::size_t>(m.left)];
            auto& r = members[static_cast<std::size_t>(m.right)];
            dst.reserve(l.size() + r.size());
            std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(dst));
            const auto ra = dsu.find(dst.front());
            dsu.parent[dsu.find(l.front())] = ra;
            dsu.parent[dsu.find(r.front())] = ra;
            comp_root[ra] = static_cast<std::int64_t>(node);
        }
    }

    std::vector<Branch> branches;
    std::vector<char> seen(n, 0);
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const auto r = dsu.find(leaf);
        if (seen[r]) continue;
        seen[r] = 1;
        Branch b;
        b.root_node = comp_root[r];
        b.leaves = members[static_cast<std::size_t>(b.root_node)];
        branches.push_back(std::move(b));
    }
    return branches;
}

double avg_distance(const DistanceMatrix& d, std::uint32_t leaf,
                    const std::vector<std::uint32_t>& cluster) {
    double sum = 0.0;
    for (const auto m : cluster) sum += d.values(leaf, m);
    return sum / static_cast<double>(cluster.size());
}

// extracts the subtree rooted at `root` as a standalone dendrogram plus the
// matching distance submatrix; sub-leaf order follows ascending leaf ids
std::pair<Dendrogram, DistanceMatrix> extract_subtree(const Dendrogram& dg,
                                                      const DistanceMatrix& d,
                                                      std::int64_t root,
                                                      const std::vector<std::uint32_t>& leaves) {
    const std::size_t n = dg.n_leaves;
    std::vector<std::int64_t> remap(n + dg.merges.size(), -1);
    for (std::size_t k = 0; k < leaves.size(); ++k) remap[leaves[k]] = static_cast<std::int64_t>(k);

    // internal nodes of the subtree, in original merge order
    std::vector<char> in_subtree(n + dg.merges.size(), 0);
    in_subtree[static_cast<std::size_t>(root)] = 1;
    for (std::size_t t = dg.merges.size(); t-- > 0;) {
        const auto node = n + t;
        if (!in_subtree[node]) continue;
        in_subtree[static_cast<std::size_t>(dg.merges[t].left)] = 1;
        in_subtree[static_cast<std::size_t>(dg.merges[t].right)] = 1;
    }

    Dendrogram sub;
    sub.n_leaves = leaves.size();
    sub.doc_ids.reserve(leaves.size());
    for (const auto leaf : leaves) sub.doc_ids.push_back(dg.doc_ids[leaf]);

    for (std::size_t t = 0; t < dg.merges.size(); ++t) {
        const auto node = n + t;
        if (!in_subtree[node]) continue;
        const auto& m = dg.merges[t];
        Merge sm;
        sm.left = std::min(remap[static_cast<std::size_t>(m.left)],
                           remap[static_cast<std::size_t>(m.right)]);
        sm.right = std::max(remap[static_cast<std::size_t>(m.left)],
                            remap[static_cast<std::size_t>(m.right)]);
        sm.height = m.height;
        sm.size = m.size;
        remap[node] = static_cast<std::int64_t>(leaves.size() + sub.merges.size());
        sub.merges.push_back(sm);
    }

    DistanceMatrix subd;
    subd.doc_ids = sub.doc_ids;
    subd.values = SymMatrix(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            subd.values.at(i, j) = d.values(leaves[i], leaves[j]);
    return {std::move(sub), std::move(subd)};
}

// subtree height stats for the deep-split trigger
std::pair<double, double> internal_height_range(const Dendrogram& dg, std::int64_t root) {
    const std::size_t n = dg.n_leaves;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<std::int64_t> stack{root};
    while (!stack.empty()) {
        const auto node = stack.back();
        stack.pop_back();
        if (node < static_cast<std::int64_t>(n)) continue;
        const auto& m = dg.merges[static_cast<std::size_t>(node) - n];
        lo = std::min(lo, m.height);
        hi = std::max(hi, m.height);
        stack.push_back(m.left);
        stack.push_back(m.right);
    }
    return {lo, hi};
}

std::uint32_t node_leaf_count(const Dendrogram& dg, std::int64_t node) {
    return node < static_cast<std::int64_t>(dg.n_leaves)
               ? 1u
               : dg.merges[static_cast<std::size_t>(node) - dg.n_leaves].size;
}

std::vector<std::vector<std::uint32_t>> cut_clusters(const Dendrogram& dg,
                                                     const DistanceMatrix& d,
                                                     const CutParams& params);

// recursion step: returns sub-clusters in original leaf ids, or empty when
// the branch should stay whole
std::vector<std::vector<std::uint32_t>> try_deep_split(const Dendrogram& dg,
                                                       const DistanceMatrix& d,
                                                       const CutParams& params,
                                                       const Branch& branch, double h_star) {
    if (branch.leaves.size() < 2) return {};
    if (branch.leaves.size() == dg.n_leaves) return {};  // would re-cut this very level
    const auto root = branch.root_node;
    const auto [lo, hi] = internal_height_range(dg, root);
    if (!(hi - lo > h_star / 2.0)) return {};
    const auto& rm = dg.merges[static_cast<std::size_t>(root) - dg.n_leaves];
    if (node_leaf_count(dg, rm.left) < params.min_cluster_size ||
        node_leaf_count(dg, rm.right) < params.min_cluster_size)
        return {};

    auto [sub, subd] = extract_subtree(dg, d, root, branch.leaves);
    auto sub_clusters = cut_clusters(sub, subd, params);
    if (sub_clusters.size() < 2) return {};
    for (auto& cluster : sub_clusters)
        for (auto& leaf : cluster) leaf = branch.leaves[leaf];
    return sub_clusters;
}

// full three-phase cut returning member lists (ascending leaves per cluster)
std::vector<std::vector<std::uint32_t>> cut_clusters(const Dendrogram& dg,
                                                     const DistanceMatrix& d,
                                                     const CutParams& params) {
    const std::size_t n = dg.n_leaves;
    if (n == 0) return {};

    std::vector<double> heights;
    heights.reserve(dg.merges.size());
    for (const auto& m : dg.merges) heights.push_back(m.height);
    const double h_star = height_quantile(heights, params.cut_quantile);

    auto branches = static_cut(dg, h_star);

    std::vector<Branch> survivors;
    std::vector<std::uint32_t> loose;  // leaves of dissolved branches
    for (auto& b : branches) {
        if (b.leaves.size() >= params.min_cluster_size)
            survivors.push_back(std::move(b));
        else
            loose.insert(loose.end(), b.leaves.begin(), b.leaves.end());
    }
    if (survivors.empty()) return {};
    std::sort(loose.begin(), loose.end());

    // phase 2: loose leaves join the nearest surviving branch, measured
    // against phase-1 membership so the order of reassignment cannot matter
    std::vector<std::vector<std::uint32_t>> attached(survivors.size());
    for (const auto leaf : loose) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < survivors.size(); ++c) {
            const double ad = avg_distance(d, leaf, survivors[c].leaves);
            if (ad < best_d) {
                best_d = ad;
                best = c;
            }
        }
        attached[best].push_back(leaf);
    }

    std::vector<std::vector<std::uint32_t>> clusters;
    for (std::size_t c = 0; c < survivors.size(); ++c) {
        std::vector<std::vector<std::uint32_t>> parts;
        if (params.deep_split)
            parts = try_deep_split(dg, d, params, survivors[c], h_star);
        if (parts.empty()) {
            auto full = survivors[c].leaves;
            full.insert(full.end(), attached[c].begin(), attached[c].end());
            std::sort(full.begin(), full.end());
            clusters.push_back(std::move(full));
        } else {
            // leaves attached in phase 2 follow the nearest sub-cluster
            for (const auto leaf : attached[c]) {
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t s = 0; s < parts.size(); ++s) {
                    const double ad = avg_distance(d, leaf, parts[s]);
                    if (ad < best_d) {
                        best_d = ad;
                        best = s;
                    }
                }
                parts[best].push_back(leaf);
            }
            for (auto& p : parts) {
                std::sort(p.begin(), p.end());
                clusters.push_back(std::move(p));
            }
        }
    }
    return clusters;
}

} // namespace

Clustering dynamic_cut(const Dendrogram& dg, const DistanceMatrix& d, const CutParams& params) {
    Clustering out;
    out.doc_ids = dg.doc_ids;
    out.labels.assign(dg.n_leaves, 0);

    auto clusters = cut_clusters(dg, d, params);

    // cluster 1 = largest; ties broken by smallest member leaf
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    out.k = static_cast<std::uint32_t>(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (const auto leaf : clusters[c])
            out.labels[leaf] = static_cast<std::uint32_t>(c + 1);
    return out;
}

void write_dendrogram_json(std::ostream& out, const Dendrogram& dg) {
    nlohmann::json merges = nlohmann::json::array();
    for (const auto& m : dg.merges)
        merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height},
                          {"size", m.size}});
    const nlohmann::json j{{"n_leaves", dg.n_leaves}, {"doc_ids", dg.doc_ids},
                           {"merges", std::move(merges)}};
    out << j.dump(2) << '\n';
}

namespace {

void append_newick_name(std::string& out, const std::string& name) {
    const bool plain = !name.empty() &&
                       name.find_first_of(" ,():;'[]\t\n") == std::string::npos;
    if (plain) {
        out += name;
        return;
    }
    out += '\'';
    for (const char c : name) {
        if (c == '\'') out += "''";
        else out += c;
    }
    out += '\'';
}

void append_newick(std::string& out, const Dendrogram& dg, std::int64_t node,
                   double parent_height) {
    const auto n = static_cast<std::int64_t>(dg.n_leaves);
    double own = 0.0;
    if (node < n) {
        append_newick_name(out, dg.doc_ids[static_cast<std::size_t>(node)]);
    } else {
        const auto& m = dg.merges[static_cast<std::size_t>(node - n)];
        own = m.height;
        out += '(';
        append_newick(out, dg, m.left, own);
        out += ',';
        append_newick(out, dg, m.right, own);
        out += ')';
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, ":%.17g", parent_height - own);
    out += buf;
}

} // namespace

void write_dendrogram_newick(std::ostream& out, const Dendrogram& dg) {
    std::string s;
    if (dg.n_leaves == 0) {
        out << ";\n";
        return;
    }
    if (dg.merges.empty()) {
        append_newick_name(s, dg.doc_ids[0]);
        out << s << ";\n";
        return;
    }
    const auto& root = dg.merges.back();
    s += '(';
    append_newick(s, dg, root.left, root.height);
    s += ',';
    append_newick(s, dg, root.right, root.height);
    s += ')';
    out << s << ";\n";
}

} // namespace agemap
