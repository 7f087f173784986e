#pragma once

// The degree engine: regular zeros stratum by stratum via Newton iteration
// from chart cells, local signs from stratum Jacobians, per-component sums
// divided exactly by the Weyl order, and the assembled degree vector.
// Independent sampling oracles (sign scan, winding number) live here too.

#include <functional>
#include <map>

#include "eqdeg/context.hpp"
#include "eqdeg/local_map.hpp"

namespace eqdeg {

struct DegreeKey {
    int entry = 0;
    int component = 0;
    auto operator<=>(const DegreeKey&) const = default;
};

/// Finitely supported integer map on (orbit type, quotient component) keys.
class DegreeVector {
public:
    int at(DegreeKey k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? 0 : it->second;
    }
    void set(DegreeKey k, int v) {
        if (v == 0)
            entries_.erase(k);
        else
            entries_[k] = v;
    }
    void add(DegreeKey k, int v) { set(k, at(k) + v); }

    DegreeVector operator+(const DegreeVector& o) const {
        DegreeVector r = *this;
        for (const auto& [k, v] : o.entries_) r.add(k, v);
        return r;
    }
    bool operator==(const DegreeVector& o) const { return entries_ == o.entries_; }

    bool is_zero() const { return entries_.empty(); }
    const std::map<DegreeKey, int>& support() const { return entries_; }

private:
    std::map<DegreeKey, int> entries_;
};

struct Zero {
    Vec point;          // ambient coordinates
    Vec u;              // chart coordinates
    int entry = -1;
    int component = -1;
    int sign = 0;
    int orbit = -1;     // zeros on one Weyl orbit share this id
    Mat stratum_jacobian;
    double det_abs = 0; // regularity margin
};

struct StratumResult {
    int entry = -1;
    std::vector<Zero> zeros;
    std::map<int, int> raw_sums; // component -> sum of signs (covering count)
    std::map<int, int> degrees;  // component -> raw / |WH|
    int discarded_other_stratum = 0;
};

struct DegreeResult {
    DegreeVector vector;
    std::vector<StratumResult> strata;
    std::vector<std::string> warnings;
    bool hypothesis_holds = true;
};

/// Newton from every chart cell center (plus the ball centers of the map's
/// own domain), deduplicated, closed under the Weyl action, classified.
/// Throws DegenerateZero for converged zeros below the regularity floor.
std::vector<Zero> find_stratum_zeros(const EquivariantLocalMap& f, const AnalysisContext& ctx,
                                     int entry, int* discarded = nullptr);

StratumResult stratum_degree(const EquivariantLocalMap& f, const AnalysisContext& ctx,
                             int entry);

DegreeResult equivariant_degree(const EquivariantLocalMap& f, const AnalysisContext& ctx);

/// sgn det A; throws Singular below the regularity floor.
int degree_of_linear(const Mat& a, double eta_reg = 1e-8);

/// Sum of boundary sign changes (sgn g(b) - sgn g(a)) / 2 over intervals.
int oracle_degree_1d(const std::function<double(double)>& g,
                     const std::vector<Interval>& intervals);

/// Winding number of g along a closed polygon, sampled at `steps` points.
/// Each angle increment must stay below pi/2, else StepTooCoarse.
int oracle_degree_2d(const std::function<Vec(const Vec&)>& g, const std::vector<Vec>& polygon,
                     int steps, double eta_loc = 1e-6);

} // namespace eqdeg
