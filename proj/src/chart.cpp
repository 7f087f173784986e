#include "eqdeg/chart.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace eqdeg {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<int> cell_index_of(const Vec& u, double delta) {
    std::vector<int> idx(u.size());
    for (int i = 0; i < u.size(); ++i) idx[i] = int(std::floor(u(i) / delta));
    return idx;
}

// true if u_i / delta sits numerically on a grid plane
bool on_grid_plane(const Vec& u, double delta) {
    for (int i = 0; i < u.size(); ++i) {
        double t = u(i) / delta;
        if (std::abs(t - std::round(t)) < 1e-9) return true;
    }
    return false;
}

} // namespace

Vec ComponentChart::cell_center(const ChartCell& c) const {
    Vec u(k);
    for (int i = 0; i < k; ++i) u(i) = (c.idx[i] + 0.5) * delta;
    return u;
}

Vec ComponentChart::cell_center_ambient(const ChartCell& c) const {
    return q * cell_center(c);
}

int ComponentChart::cell_at(const Vec& u) const {
    std::vector<int> idx = cell_index_of(u, delta);
    auto cmp = [](const ChartCell& c, const std::vector<int>& key) { return c.idx < key; };
    auto it = std::lower_bound(cells.begin(), cells.end(), idx, cmp);
    if (it == cells.end() || it->idx != idx) return -1;
    return int(it - cells.begin());
}

ComponentChart stratum_chart(const FiniteGroup& g, const InvariantDomain& omega,
                             const OrbitTypeTable& table, int entry, double delta,
                             const Tolerances& tol) {
    const OrbitTypeEntry& ent = table.entries[entry];
    const int k = ent.fixed.dim();
    if (k == 0) throw Error("stratum_chart: zero-dimensional stratum has no chart");
    if (!(delta > 0)) throw Error("stratum_chart: delta must be positive");

    ComponentChart chart;
    chart.entry = entry;
    chart.delta = delta;
    chart.k = k;
    chart.q = ent.fixed.q;

    // walls: lattice subspaces whose trace on V^H is a proper subspace
    std::vector<Mat> walls;
    for (const auto& p : table.lattice_projectors)
        if ((p * ent.fixed.proj - ent.fixed.proj).cwiseAbs().maxCoeff() > tol.tol_group)
            walls.push_back(p);

    Box bbox = omega.bounding_box();
    double radius = 0;
    for (const auto& s : bbox.sides)
        radius += std::max(s.lo * s.lo, s.hi * s.hi);
    radius = std::sqrt(radius);

    const double half_diag = delta * std::sqrt(double(k)) / 2.0;
    const int m = int(std::floor(radius / delta));

    std::vector<int> idx(k, -m - 1);
    while (true) {
        Vec u(k);
        for (int i = 0; i < k; ++i) u(i) = (idx[i] + 0.5) * delta;
        Vec x = chart.q * u;

        bool keep = omega.contains(x);
        double clearance = keep ? omega.inward_distance(x) : 0.0;
        if (keep) {
            for (const auto& w : walls) {
                double dist = (x - w * x).norm();
                if (dist <= half_diag) { keep = false; break; }
                clearance = std::min(clearance, dist);
            }
        }
        if (keep) {
            try {
                keep = isotropy_group(g, x, tol.tol_group) == ent.rep;
            } catch (const AmbiguousIsotropy&) {
                keep = false;
            }
        }
        if (keep) {
            ChartCell c;
            c.idx = idx;
            c.clearance = clearance;
            chart.cells.push_back(std::move(c));
        }
        int axis = k - 1; // lexicographic advance, last axis fastest
        while (axis >= 0 && ++idx[axis] > m) idx[axis--] = -m - 1;
        if (axis < 0) break;
    }
    std::sort(chart.cells.begin(), chart.cells.end(),
              [](const ChartCell& a, const ChartCell& b) { return a.idx < b.idx; });

    // the table only holds realized types, so an empty chart means the grid
    // cannot resolve the stratum
    if (chart.cells.empty())
        throw ResolutionTooCoarse("no cells of orbit type " + std::to_string(entry) +
                                  " at delta " + std::to_string(delta) +
                                  "; halve delta and retry");

    // pre-quotient components: flood fill over face-adjacent kept cells
    for (size_t start = 0; start < chart.cells.size(); ++start) {
        if (chart.cells[start].pre >= 0) continue;
        int label = chart.pre_count++;
        std::deque<size_t> queue{start};
        chart.cells[start].pre = label;
        while (!queue.empty()) {
            size_t cur = queue.front();
            queue.pop_front();
            for (int axis = 0; axis < k; ++axis)
                for (int step : {-1, +1}) {
                    std::vector<int> nidx = chart.cells[cur].idx;
                    nidx[axis] += step;
                    auto cmp = [](const ChartCell& c, const std::vector<int>& key) {
                        return c.idx < key;
                    };
                    auto it = std::lower_bound(chart.cells.begin(), chart.cells.end(), nidx, cmp);
                    if (it != chart.cells.end() && it->idx == nidx && it->pre < 0) {
                        it->pre = label;
                        queue.push_back(size_t(it - chart.cells.begin()));
                    }
                }
        }
    }

    // quotient: union cells with their Weyl images
    UnionFind uf(int(chart.cells.size()));
    for (size_t ci = 0; ci < chart.cells.size(); ++ci) {
        Vec u = chart.cell_center(chart.cells[ci]);
        for (size_t r = 1; r < ent.weyl.coset_reps.size(); ++r) {
            Vec v = ent.weyl.action_on_fixed[r] * u;
            if (on_grid_plane(v, delta)) chart.snap_ambiguous = true;
            int target = chart.cell_at(v);
            if (target < 0)
                ++chart.snap_misses;
            else
                uf.unite(int(ci), target);
        }
    }
    // also merge pre-components through the union-find so that labels stay
    // constant on whole components
    std::map<int, int> first_of_pre;
    for (size_t ci = 0; ci < chart.cells.size(); ++ci) {
        auto [it, inserted] = first_of_pre.try_emplace(chart.cells[ci].pre, int(ci));
        if (!inserted) uf.unite(int(ci), it->second);
    }

    std::map<int, int> relabel;
    for (size_t ci = 0; ci < chart.cells.size(); ++ci) {
        int root = uf.find(int(ci));
        auto [it, inserted] = relabel.try_emplace(root, chart.quot_count);
        if (inserted) ++chart.quot_count;
        chart.cells[ci].quot = it->second;
    }

    chart.witness.assign(chart.quot_count, -1);
    std::vector<int> cells_per_comp(chart.quot_count, 0);
    for (size_t ci = 0; ci < chart.cells.size(); ++ci) {
        const ChartCell& c = chart.cells[ci];
        ++cells_per_comp[c.quot];
        int& w = chart.witness[c.quot];
        if (w < 0 || c.clearance > chart.cells[w].clearance) w = int(ci);
    }
    for (int comp = 0; comp < chart.quot_count; ++comp)
        if (cells_per_comp[comp] < 2) {
            std::ostringstream os;
            os << "quotient component " << comp << " of orbit type " << entry << " has "
               << cells_per_comp[comp] << " cell(s) at delta " << delta
               << "; halve delta and retry";
            throw ResolutionTooCoarse(os.str());
        }

    return chart;
}

int component_of(const ComponentChart& chart, const Vec& x) {
    Vec u = chart.to_chart(x);
    if ((x - chart.q * u).norm() > 1e-7 * (1.0 + x.norm()))
        throw OutsideChart("point does not lie on the stratum subspace");
    int pos = chart.cell_at(u);
    if (pos >= 0) return chart.cells[pos].quot;

    // conservative blocking can drop a cell even though the point is interior;
    // accept a unanimous label among nearby kept cells
    for (int ring = 1; ring <= 2; ++ring) {
        std::vector<int> labels;
        std::vector<int> base = cell_index_of(u, chart.delta);
        std::vector<int> off(chart.k, -ring);
        while (true) {
            std::vector<int> nidx(chart.k);
            for (int i = 0; i < chart.k; ++i) nidx[i] = base[i] + off[i];
            auto cmp = [](const ChartCell& c, const std::vector<int>& key) { return c.idx < key; };
            auto it = std::lower_bound(chart.cells.begin(), chart.cells.end(), nidx, cmp);
            if (it != chart.cells.end() && it->idx == nidx) labels.push_back(it->quot);
            int axis = chart.k - 1;
            while (axis >= 0 && ++off[axis] > ring) off[axis--] = -ring;
            if (axis < 0) break;
        }
        if (!labels.empty()) {
            if (std::adjacent_find(labels.begin(), labels.end(), std::not_equal_to<>()) ==
                labels.end())
                return labels.front();
            throw OutsideChart("point falls between quotient components; refine the chart");
        }
    }
    throw OutsideChart("point is outside the charted stratum");
}

} // namespace eqdeg
