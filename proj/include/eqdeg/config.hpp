#pragma once

// Line-oriented config files with [section] headers and key = value lines.
// Matrix and box entries are exact tokens (integer, decimal, or p/q);
// tolerances are plain doubles.

#include <optional>
#include <string>

#include "eqdeg/otopy.hpp"

namespace eqdeg {

struct AtomSpec {
    int entry = -1;
    int component = -1;
    int sign = +1;
    Rat radius;
    std::vector<Rat> center;
};

struct RunConfig {
    int dim = 0;
    std::vector<RatMat> generators;
    std::vector<std::vector<Rat>> boxes; // flattened lo/hi per axis
    std::vector<std::string> map_exprs;
    std::vector<AtomSpec> map_atoms;
    bool map_empty = false; // "empty = true": the base-point map
    std::vector<std::string> map2_exprs;
    std::vector<AtomSpec> map2_atoms;
    bool map2_empty = false;
    std::vector<std::string> otopy_exprs;
    std::vector<std::tuple<int, int, int>> target; // (entry, component, deg)
    Tolerances tol;

    bool has_map() const { return !map_exprs.empty() || !map_atoms.empty() || map_empty; }
    bool has_map2() const { return !map2_exprs.empty() || !map2_atoms.empty() || map2_empty; }
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Everything assembled: context plus the maps/otopy/target from the config.
struct LoadedProblem {
    RunConfig config;
    std::shared_ptr<const FiniteGroup> group;
    AnalysisContext ctx;
    std::optional<EquivariantLocalMap> map;
    std::optional<EquivariantLocalMap> map2;
    std::optional<Otopy> otopy;
    DegreeVector target;

    /// Locality margin safe for the given map (atom supports cap it).
    double margin_for(const EquivariantLocalMap& f) const;
};

LoadedProblem load_problem(RunConfig config);

/// Rebuild an atom from its serialized fields, revalidating center isotropy,
/// component id and radius invariants against the context.
StandardAtom atom_from_spec(const AnalysisContext& ctx, const AtomSpec& spec);

/// Serialize atoms as config "[map] atom = ..." lines (exact round trip).
std::string serialize_atoms(const AtomList& atoms);

/// Parse the machine block ("#vector" then "H=.. alpha=.. deg=.." lines).
DegreeVector parse_vector_block(const std::string& text);

} // namespace eqdeg
