#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eqdeg/report.hpp"

namespace py = pybind11;
using namespace eqdeg;

namespace {

py::dict vector_dict(const LoadedProblem& p, const DegreeVector& v) {
    py::dict d;
    for (auto [entry, comp] : p.ctx.keys())
        d[py::make_tuple(entry, comp)] = v.at({entry, comp});
    return d;
}

py::dict table_dict(const LoadedProblem& p) {
    py::list types;
    for (size_t e = 0; e < p.ctx.table.entries.size(); ++e) {
        const auto& ent = p.ctx.table.entries[e];
        py::dict t;
        t["id"] = e;
        t["subgroup_order"] = ent.rep.order();
        t["weyl_order"] = ent.weyl.order();
        t["fixed_dim"] = ent.fixed.dim();
        t["components"] =
            p.ctx.charted[e] ? py::cast(p.ctx.charts[e].quot_count) : py::none().cast<py::object>();
        types.append(std::move(t));
    }
    py::dict d;
    d["group_order"] = p.group->order();
    d["dim"] = p.group->dim();
    d["exact"] = p.group->exact();
    d["orbit_types"] = std::move(types);
    d["hypothesis_holds"] = p.ctx.hypothesis.holds;
    d["hypothesis_reason"] = p.ctx.hypothesis.reason;
    d["warnings"] = p.ctx.warnings;
    return d;
}

LoadedProblem load_text(const std::string& config_text) {
    return load_problem(parse_config(config_text));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "equivariant degree toolkit: group analysis, degree vectors, "
              "realization and otopy checks over a C++ core";

    // translators run newest-first, so the base goes in first
    py::register_exception<Error>(m, "EqdegError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DegenerateZero>(m, "DegenerateZeroError");
    py::register_exception<NoRoom>(m, "NoRoomError");
    py::register_exception<NotAnOtopy>(m, "NotAnOtopyError");

    m.def(
        "group_order",
        [](const std::string& config_text) { return load_text(config_text).group->order(); },
        py::arg("config_text"), "order of the group closed from the config generators");

    m.def(
        "analyze",
        [](const std::string& config_text) { return table_dict(load_text(config_text)); },
        py::arg("config_text"),
        "orbit-type table, Weyl orders, component counts and hypothesis status");

    m.def(
        "degree",
        [](const std::string& config_text) {
            LoadedProblem p = load_text(config_text);
            if (!p.map) throw ConfigError("config has no [map] section");
            auto eq = check_equivariance(*p.map, 50, p.ctx.tol.seed, p.ctx.tol.tol_equiv);
            if (!eq.pass) throw Error("map failed the equivariance check");
            auto loc = check_locality(*p.map, p.margin_for(*p.map), p.ctx.tol.eta_loc);
            if (!loc.pass) throw Error("map failed the locality check");
            auto result = equivariant_degree(*p.map, p.ctx);
            py::dict d = table_dict(p);
            d["vector"] = vector_dict(p, result.vector);
            py::list zeros;
            for (const auto& sr : result.strata)
                for (const auto& z : sr.zeros) {
                    py::dict zd;
                    zd["H"] = z.entry;
                    zd["alpha"] = z.component;
                    zd["orbit"] = z.orbit;
                    zd["sign"] = z.sign;
                    std::vector<double> pt(z.point.data(), z.point.data() + z.point.size());
                    zd["point"] = pt;
                    zeros.append(std::move(zd));
                }
            d["zeros"] = std::move(zeros);
            return d;
        },
        py::arg("config_text"), "equivariant degree vector of the config map");

    m.def(
        "realize",
        [](const std::string& config_text) {
            LoadedProblem p = load_text(config_text);
            auto f = realize(p.ctx, p.target);
            AtomList none;
            const AtomList* atoms = f.atoms() ? f.atoms() : &none;
            py::dict d = table_dict(p);
            d["atom_lines"] = serialize_atoms(*atoms);
            d["atom_count"] = atoms->atoms.size();
            auto round_trip = equivariant_degree(f, p.ctx).vector;
            d["round_trip"] = vector_dict(p, round_trip);
            d["round_trip_exact"] = round_trip == p.target;
            return d;
        },
        py::arg("config_text"), "construct an atom map realizing the [target] vector");

    m.def(
        "verify",
        [](const std::string& config_text, bool strict) {
            LoadedProblem p = load_text(config_text);
            auto result = cmd_verify(p, strict, true);
            py::dict d;
            d["exit_code"] = result.exit_code;
            d["report"] = result.text;
            d["pass"] = result.exit_code == 0;
            return d;
        },
        py::arg("config_text"), py::arg("strict") = false,
        "otopy-invariance or additivity verification, as in the CLI");

    m.def(
        "parse_vector_block",
        [](const std::string& text) {
            DegreeVector v = parse_vector_block(text);
            py::dict d;
            for (const auto& [k, val] : v.support()) d[py::make_tuple(k.entry, k.component)] = val;
            return d;
        },
        py::arg("text"), "parse a '#vector' machine block into a dict");
}
