#include "eqdeg/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace eqdeg {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

std::string fmt_vec(const Vec& v) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << fmt(v(i));
    }
    os << ')';
    return os.str();
}

std::string subgroup_str(const Subgroup& h) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < h.members.size(); ++i) {
        if (i) os << ',';
        os << h.members[i];
    }
    os << '}';
    return os.str();
}

void append_table_text(const LoadedProblem& p, std::ostringstream& os) {
    os << "group: order " << p.group->order() << ", dim " << p.group->dim() << ", "
       << (p.group->exact() ? "exact arithmetic" : "floating arithmetic") << "\n";
    os << "orbit types: " << p.ctx.table.entries.size() << "\n";
    for (size_t e = 0; e < p.ctx.table.entries.size(); ++e) {
        const auto& ent = p.ctx.table.entries[e];
        os << "  [" << e << "] |H|=" << ent.rep.order() << " rep=" << subgroup_str(ent.rep)
           << " conjugates=" << ent.conjugates.size() << " |WH|=" << ent.weyl.order()
           << " dimV^H=" << ent.fixed.dim();
        if (p.ctx.charted[e])
            os << " n(H)=" << p.ctx.charts[e].quot_count << " delta=" << fmt(p.ctx.charts[e].delta);
        else
            os << " n(H)=excluded";
        os << "\n";
    }
    if (!p.ctx.table.order_relation.empty()) {
        os << "partial order:";
        for (const auto& [i, j] : p.ctx.table.order_relation) os << " (" << i << ")<=(" << j << ")";
        os << "\n";
    }
    os << "hypothesis: " << (p.ctx.hypothesis.holds ? "holds" : "violated") << " ("
       << p.ctx.hypothesis.reason << ")\n";
}

void append_warnings_text(const std::vector<std::string>& warnings, std::ostringstream& os) {
    if (warnings.empty()) return;
    os << "warnings:\n";
    for (const auto& w : warnings) os << "  ! " << w << "\n";
}

Json table_json(const LoadedProblem& p) {
    Json types = Json::array();
    for (size_t e = 0; e < p.ctx.table.entries.size(); ++e) {
        const auto& ent = p.ctx.table.entries[e];
        Json t;
        t["id"] = e;
        t["subgroup_order"] = ent.rep.order();
        t["representative"] = ent.rep.members;
        t["conjugates"] = ent.conjugates.size();
        t["weyl_order"] = ent.weyl.order();
        t["fixed_dim"] = ent.fixed.dim();
        if (p.ctx.charted[e]) {
            t["components"] = p.ctx.charts[e].quot_count;
            t["delta"] = p.ctx.charts[e].delta;
        } else {
            t["components"] = nullptr;
        }
        types.push_back(std::move(t));
    }
    Json j;
    j["group"] = {{"order", p.group->order()},
                  {"dim", p.group->dim()},
                  {"exact", p.group->exact()}};
    j["orbit_types"] = std::move(types);
    Json rel = Json::array();
    for (const auto& [i, jx] : p.ctx.table.order_relation) rel.push_back({i, jx});
    j["partial_order"] = std::move(rel);
    j["hypothesis"] = {{"holds", p.ctx.hypothesis.holds}, {"reason", p.ctx.hypothesis.reason}};
    j["warnings"] = p.ctx.warnings;
    return j;
}

std::string machine_block(const LoadedProblem& p, const DegreeVector& v) {
    std::ostringstream os;
    os << "#vector\n";
    for (auto [entry, comp] : p.ctx.keys())
        os << "H=" << entry << " alpha=" << comp << " deg=" << v.at({entry, comp}) << "\n";
    return os.str();
}

Json vector_json(const LoadedProblem& p, const DegreeVector& v) {
    Json arr = Json::array();
    for (auto [entry, comp] : p.ctx.keys())
        arr.push_back({{"H", entry}, {"alpha", comp}, {"deg", v.at({entry, comp})}});
    return arr;
}

// validation shared by degree/realize/verify; fills the report and returns
// 0 or the exit code
int validate_map(const LoadedProblem& p, const EquivariantLocalMap& f, const std::string& name,
                 std::ostringstream& os, Json& j) {
    auto eq = check_equivariance(f, 50, p.ctx.tol.seed, p.ctx.tol.tol_equiv);
    auto loc = check_locality(f, p.margin_for(f), p.ctx.tol.eta_loc);
    os << name << ": equivariance " << (eq.pass ? "pass" : "FAIL") << " (max defect "
       << fmt(eq.max_defect) << (eq.exact_checked ? ", exact" : "") << "), locality "
       << (loc.pass ? "pass" : "FAIL") << " (min |f| " << fmt(loc.min_norm) << " on "
       << loc.shell_samples << " shell samples)\n";
    j["validation"][name] = {{"equivariance_pass", eq.pass},
                             {"max_defect", eq.max_defect},
                             {"exact", eq.exact_checked},
                             {"locality_pass", loc.pass},
                             {"min_shell_norm", loc.min_norm}};
    if (!eq.pass) {
        os << "  witness x = " << fmt_vec(eq.witness) << " generator " << eq.witness_gen << "\n";
        return 2;
    }
    if (!loc.pass) {
        if (!loc.offenders.empty())
            os << "  shell point with small value: " << fmt_vec(loc.offenders.front()) << "\n";
        return 2;
    }
    return 0;
}

CommandResult finish(int code, const std::ostringstream& os, const Json& j, bool json) {
    CommandResult r;
    r.exit_code = code;
    r.text = json ? j.dump(2) + "\n" : os.str();
    return r;
}

} // namespace

CommandResult cmd_analyze(const LoadedProblem& p, bool json) {
    std::ostringstream os;
    os << "= analyze =\n";
    append_table_text(p, os);
    append_warnings_text(p.ctx.warnings, os);
    Json j = table_json(p);
    return finish(0, os, j, json);
}

CommandResult cmd_degree(const LoadedProblem& p, bool strict, bool json) {
    std::ostringstream os;
    Json j = table_json(p);
    os << "= degree =\n";
    append_table_text(p, os);

    if (!p.map) {
        os << "error: no [map] section in the config\n";
        j["error"] = "no map";
        return finish(2, os, j, json);
    }
    if (strict && !p.ctx.hypothesis.holds) {
        os << "error: hypothesis violated and --strict set\n";
        j["error"] = "hypothesis violated";
        return finish(4, os, j, json);
    }
    if (int code = validate_map(p, *p.map, "map", os, j)) return finish(code, os, j, json);

    DegreeResult result;
    try {
        result = equivariant_degree(*p.map, p.ctx);
    } catch (const DegenerateZero& e) {
        os << "error: " << e.what() << "\n";
        j["error"] = e.what();
        return finish(3, os, j, json);
    }

    os << "zeros:\n";
    Json zeros = Json::array();
    for (const auto& sr : result.strata) {
        for (const auto& z : sr.zeros) {
            os << "  H=" << z.entry << " alpha=" << z.component << " orbit=" << z.orbit
               << " x=" << fmt_vec(z.point) << " sign=" << (z.sign > 0 ? "+1" : "-1")
               << " |det|=" << fmt(z.det_abs) << "\n";
            zeros.push_back({{"H", z.entry},
                             {"alpha", z.component},
                             {"orbit", z.orbit},
                             {"sign", z.sign},
                             {"det_abs", z.det_abs}});
        }
        if (sr.discarded_other_stratum > 0)
            os << "  (orbit type " << sr.entry << ": " << sr.discarded_other_stratum
               << " converged points belonged to another stratum)\n";
        for (const auto& [comp, raw] : sr.raw_sums)
            os << "  raw sign sum H=" << sr.entry << " alpha=" << comp << ": " << raw
               << " = " << p.ctx.table.entries[size_t(sr.entry)].weyl.order() << " * "
               << sr.degrees.at(comp) << "\n";
    }
    j["zeros"] = std::move(zeros);
    append_warnings_text(result.warnings, os);
    os << machine_block(p, result.vector);
    j["vector"] = vector_json(p, result.vector);
    return finish(0, os, j, json);
}

CommandResult cmd_realize(const LoadedProblem& p, bool strict, bool json) {
    std::ostringstream os;
    Json j = table_json(p);
    os << "= realize =\n";
    append_table_text(p, os);
    if (strict && !p.ctx.hypothesis.holds) {
        os << "error: hypothesis violated and --strict set\n";
        j["error"] = "hypothesis violated";
        return finish(4, os, j, json);
    }

    os << "target:\n" << machine_block(p, p.target);
    EquivariantLocalMap realized = EquivariantLocalMap::empty(p.group);
    try {
        realized = realize(p.ctx, p.target);
    } catch (const NoRoom& e) {
        os << "error: " << e.what() << "\n";
        j["error"] = e.what();
        return finish(2, os, j, json);
    }

    const AtomList* atoms = realized.atoms();
    AtomList empty_list;
    if (!atoms) atoms = &empty_list;
    os << "atoms: " << atoms->atoms.size() << "\n";
    os << serialize_atoms(*atoms);
    j["atoms"] = Json::array();
    for (const auto& a : atoms->atoms) {
        Json aj;
        aj["H"] = a.entry;
        aj["alpha"] = a.component;
        aj["sign"] = a.sign;
        aj["radius"] = a.radius;
        std::vector<std::string> center;
        for (const auto& c : a.center_exact) center.push_back(rat_to_string(c));
        aj["center"] = center;
        j["atoms"].push_back(std::move(aj));
    }

    auto round_trip = equivariant_degree(realized, p.ctx).vector;
    bool match = round_trip == p.target;
    os << "round trip: " << (match ? "exact match" : "MISMATCH") << "\n";
    os << machine_block(p, round_trip);
    j["round_trip_vector"] = vector_json(p, round_trip);
    j["round_trip_exact"] = match;
    return finish(match ? 0 : 1, os, j, json);
}

CommandResult cmd_verify(const LoadedProblem& p, bool strict, bool json) {
    std::ostringstream os;
    Json j = table_json(p);
    os << "= verify =\n";
    append_table_text(p, os);
    if (strict && !p.ctx.hypothesis.holds) {
        os << "error: hypothesis violated and --strict set\n";
        j["error"] = "hypothesis violated";
        return finish(4, os, j, json);
    }

    auto invariance_report = [&](const Otopy& h) -> CommandResult {
        auto rep = verify_otopy_invariance(h, p.ctx, p.ctx.tol.t_samples);
        os << "otopy invariance: " << (rep.pass ? "pass" : "FAIL") << "\n";
        Json rows = Json::array();
        for (const auto& row : rep.rows) {
            os << "  t=" << fmt(row.t) << " [" << row.status << "]";
            for (auto [entry, comp] : p.ctx.keys())
                os << " H=" << entry << ",alpha=" << comp << ",deg="
                   << row.vector.at({entry, comp});
            os << "\n";
            rows.push_back({{"t", row.t},
                            {"status", row.status},
                            {"vector", vector_json(p, row.vector)}});
        }
        if (!rep.note.empty()) os << "  note: " << rep.note << "\n";
        j["otopy_rows"] = std::move(rows);
        j["pass"] = rep.pass;
        return finish(rep.pass ? 0 : 5, os, j, json);
    };

    if (p.otopy) {
        // validate slice locality first, as the construction would
        try {
            for (int i = 0; i < p.ctx.tol.t_samples; ++i) {
                Rat t(i, std::max(1, p.ctx.tol.t_samples - 1));
                auto slice = p.otopy->slice(t);
                auto loc = check_locality(slice, p.margin_for(slice), p.ctx.tol.eta_loc);
                if (!loc.pass) {
                    std::ostringstream msg;
                    msg << "zero set reaches the boundary at t = " << fmt(rat_to_double(t));
                    if (!loc.offenders.empty())
                        msg << " near x = " << fmt_vec(loc.offenders.front());
                    throw NotAnOtopy(msg.str());
                }
            }
        } catch (const NotAnOtopy& e) {
            os << "not an otopy: " << e.what() << "\n";
            j["error"] = e.what();
            j["pass"] = false;
            return finish(5, os, j, json);
        }
        return invariance_report(*p.otopy);
    }

    if (!p.map || !p.map2) {
        os << "error: verify needs [otopy] or both [map] and [map2]\n";
        j["error"] = "missing maps";
        return finish(2, os, j, json);
    }
    if (int code = validate_map(p, *p.map, "map", os, j)) return finish(code, os, j, json);
    if (int code = validate_map(p, *p.map2, "map2", os, j)) return finish(code, os, j, json);

    if (p.map->domain().disjoint_from(p.map2->domain())) {
        auto rep = verify_additivity(*p.map, *p.map2, p.ctx);
        os << "additivity: " << (rep.pass ? "pass" : "FAIL") << "\n";
        os << "deg(f):\n" << machine_block(p, rep.left);
        os << "deg(g):\n" << machine_block(p, rep.right);
        os << "deg(f u g):\n" << machine_block(p, rep.both);
        j["mode"] = "additivity";
        j["deg_f"] = vector_json(p, rep.left);
        j["deg_g"] = vector_json(p, rep.right);
        j["deg_union"] = vector_json(p, rep.both);
        j["pass"] = rep.pass;
        return finish(rep.pass ? 0 : 5, os, j, json);
    }

    j["mode"] = "straight_line";
    try {
        Otopy h = straight_line_otopy(*p.map, *p.map2, p.ctx);
        return invariance_report(h);
    } catch (const NotAnOtopy& e) {
        os << "not an otopy: " << e.what() << "\n";
        j["error"] = e.what();
        j["pass"] = false;
        return finish(5, os, j, json);
    }
}

} // namespace eqdeg
