#include "eqdeg/config.hpp"

#include <fstream>
#include <sstream>

namespace eqdeg {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        if (tok != ";") out.push_back(tok);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse integer " + what + " from '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number " + what + " from '" + s + "'");
    }
}

// "H=0 alpha=1 sign=+1 radius=1/4 center=2,0" style fields
std::map<std::string, std::string> parse_fields(const std::string& s, const std::string& what) {
    std::map<std::string, std::string> fields;
    for (const auto& tok : split_ws(s)) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value fields in " + what + ", got '" + tok + "'");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return fields;
}

AtomSpec parse_atom_line(const std::string& value, int line_no) {
    auto fields = parse_fields(value, "atom line " + std::to_string(line_no));
    for (const char* key : {"H", "alpha", "sign", "radius", "center"})
        if (!fields.count(key))
            throw ConfigError("atom line " + std::to_string(line_no) + " is missing '" +
                              key + "='");
    AtomSpec spec;
    spec.entry = parse_int(fields["H"], "H");
    spec.component = parse_int(fields["alpha"], "alpha");
    spec.sign = parse_int(fields["sign"], "sign");
    spec.radius = rat_from_string(fields["radius"]);
    std::istringstream cs(fields["center"]);
    std::string coord;
    while (std::getline(cs, coord, ',')) spec.center.push_back(rat_from_string(coord));
    return spec;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(line_no));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (section == "group") {
            if (key == "dim") {
                cfg.dim = parse_int(value, "dim");
            } else if (key == "generator") {
                auto toks = split_ws(value);
                int n = cfg.dim;
                if (n == 0) throw ConfigError("set dim before generators");
                if (int(toks.size()) != n * n)
                    throw ConfigError("generator at line " + std::to_string(line_no) +
                                      " needs " + std::to_string(n * n) + " entries");
                RatMat m(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) m(i, j) = rat_from_string(toks[size_t(i) * n + j]);
                cfg.generators.push_back(std::move(m));
            } else {
                throw ConfigError("unknown [group] key '" + key + "'");
            }
        } else if (section == "domain") {
            if (key != "box") throw ConfigError("unknown [domain] key '" + key + "'");
            auto toks = split_ws(value);
            std::vector<Rat> corners;
            for (const auto& t : toks) corners.push_back(rat_from_string(t));
            cfg.boxes.push_back(std::move(corners));
        } else if (section == "map" || section == "map2") {
            auto& exprs = section == "map" ? cfg.map_exprs : cfg.map2_exprs;
            auto& atoms = section == "map" ? cfg.map_atoms : cfg.map2_atoms;
            if (key == "expr")
                exprs.push_back(value);
            else if (key == "atom")
                atoms.push_back(parse_atom_line(value, line_no));
            else if (key == "empty")
                (section == "map" ? cfg.map_empty : cfg.map2_empty) = (value == "true");
            else
                throw ConfigError("unknown [" + section + "] key '" + key + "'");
        } else if (section == "otopy") {
            if (key != "expr") throw ConfigError("unknown [otopy] key '" + key + "'");
            cfg.otopy_exprs.push_back(value);
        } else if (section == "target") {
            if (key != "entry") throw ConfigError("unknown [target] key '" + key + "'");
            auto fields = parse_fields(value, "target line " + std::to_string(line_no));
            for (const char* k : {"H", "alpha", "deg"})
                if (!fields.count(k))
                    throw ConfigError("target line " + std::to_string(line_no) +
                                      " is missing '" + std::string(k) + "='");
            cfg.target.emplace_back(parse_int(fields["H"], "H"),
                                    parse_int(fields["alpha"], "alpha"),
                                    parse_int(fields["deg"], "deg"));
        } else if (section == "options") {
            if (key == "tol_group") cfg.tol.tol_group = parse_double(value, key);
            else if (key == "tol_equiv") cfg.tol.tol_equiv = parse_double(value, key);
            else if (key == "eta_reg") cfg.tol.eta_reg = parse_double(value, key);
            else if (key == "eta_loc") cfg.tol.eta_loc = parse_double(value, key);
            else if (key == "r_dedup") cfg.tol.r_dedup = parse_double(value, key);
            else if (key == "orbit_tol") cfg.tol.orbit_tol = parse_double(value, key);
            else if (key == "delta") cfg.tol.delta = parse_double(value, key);
            else if (key == "margin") cfg.tol.margin = parse_double(value, key);
            else if (key == "seed") cfg.tol.seed = (unsigned long long)std::stoull(value);
            else if (key == "max_group_order") cfg.tol.max_group_order = parse_int(value, key);
            else if (key == "t_samples") cfg.tol.t_samples = parse_int(value, key);
            else throw ConfigError("unknown [options] key '" + key + "'");
        } else if (section.empty()) {
            throw ConfigError("key outside any section at line " + std::to_string(line_no));
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }

    if (cfg.dim <= 0) throw ConfigError("[group] dim must be set and positive");
    if (cfg.generators.empty()) throw ConfigError("[group] needs at least one generator");
    if (cfg.boxes.empty()) throw ConfigError("[domain] needs at least one box");
    for (const auto& b : cfg.boxes)
        if (int(b.size()) != 2 * cfg.dim)
            throw ConfigError("each box needs 2*dim corner entries");
    for (double t : {cfg.tol.tol_group, cfg.tol.tol_equiv, cfg.tol.eta_reg, cfg.tol.eta_loc,
                     cfg.tol.r_dedup, cfg.tol.orbit_tol})
        if (!(t > 0)) throw ConfigError("tolerances must be positive");
    if (cfg.tol.t_samples < 2) throw ConfigError("t_samples must be at least 2");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

StandardAtom atom_from_spec(const AnalysisContext& ctx, const AtomSpec& spec) {
    if (int(spec.center.size()) != ctx.group->dim())
        throw ConfigError("atom center has wrong dimension");
    Vec center(ctx.group->dim());
    for (int i = 0; i < center.size(); ++i) center(i) = rat_to_double(spec.center[size_t(i)]);
    return atom_at(ctx, spec.entry, spec.component, spec.sign, center, spec.center, spec.radius);
}

namespace {

EquivariantLocalMap build_map(const LoadedProblem& p, const std::vector<std::string>& exprs,
                              const std::vector<AtomSpec>& atom_specs, bool empty) {
    if (empty) {
        if (!exprs.empty() || !atom_specs.empty())
            throw ConfigError("an empty map cannot also have expressions or atoms");
        return EquivariantLocalMap::empty(p.group);
    }
    if (!exprs.empty()) {
        if (int(exprs.size()) != p.config.dim)
            throw ConfigError("map needs exactly dim expressions");
        return EquivariantLocalMap::from_expression(
            MapExpression::parse(exprs, p.config.dim, false), p.ctx.domain);
    }
    AtomList atoms;
    for (const auto& spec : atom_specs) atoms.atoms.push_back(atom_from_spec(p.ctx, spec));
    return EquivariantLocalMap::from_atoms(std::move(atoms), p.group);
}

} // namespace

LoadedProblem load_problem(RunConfig config) {
    LoadedProblem p;
    p.config = std::move(config);
    const RunConfig& cfg = p.config;

    std::vector<OrthoMatrix> gens;
    for (const auto& g : cfg.generators) gens.push_back(OrthoMatrix::from_exact(g));
    try {
        p.group = std::make_shared<FiniteGroup>(
            FiniteGroup::close_generators(gens, cfg.tol.max_group_order, cfg.tol.tol_group));
    } catch (const NotOrthogonal&) {
        // decimal approximations of irrational entries: retry in double precision
        std::vector<OrthoMatrix> approx;
        for (const auto& g : cfg.generators) {
            Mat m(cfg.dim, cfg.dim);
            for (int i = 0; i < cfg.dim; ++i)
                for (int j = 0; j < cfg.dim; ++j) m(i, j) = rat_to_double(g(i, j));
            approx.push_back(OrthoMatrix::from_double(std::move(m)));
        }
        p.group = std::make_shared<FiniteGroup>(
            FiniteGroup::close_generators(approx, cfg.tol.max_group_order, cfg.tol.tol_group));
    }

    std::vector<Box> boxes;
    for (const auto& corners : cfg.boxes) {
        Box b;
        for (int i = 0; i < cfg.dim; ++i)
            b.sides.push_back({rat_to_double(corners[size_t(2 * i)]),
                               rat_to_double(corners[size_t(2 * i + 1)])});
        boxes.push_back(std::move(b));
    }
    InvariantDomain omega = InvariantDomain::saturate(boxes, p.group);
    p.ctx = AnalysisContext::build(p.group, std::move(omega), cfg.tol);

    if (cfg.has_map()) p.map = build_map(p, cfg.map_exprs, cfg.map_atoms, cfg.map_empty);
    if (cfg.has_map2()) p.map2 = build_map(p, cfg.map2_exprs, cfg.map2_atoms, cfg.map2_empty);
    if (!cfg.otopy_exprs.empty()) {
        if (int(cfg.otopy_exprs.size()) != cfg.dim)
            throw ConfigError("otopy needs exactly dim expressions");
        MapExpression expr = MapExpression::parse(cfg.otopy_exprs, cfg.dim, true);
        p.otopy = Otopy::from_expression(std::move(expr), p.ctx.domain, p.group);
    }
    for (const auto& [entry, comp, deg] : cfg.target) p.target.add({entry, comp}, deg);
    return p;
}

double LoadedProblem::margin_for(const EquivariantLocalMap& f) const {
    double margin = ctx.margin;
    if (const AtomList* atoms = f.atoms())
        for (const auto& a : atoms->atoms) margin = std::min(margin, 0.45 * a.radius);
    return margin;
}

std::string serialize_atoms(const AtomList& atoms) {
    std::ostringstream os;
    os << "[map]\n";
    for (const auto& a : atoms.atoms) {
        os << "atom = H=" << a.entry << " alpha=" << a.component
           << " sign=" << (a.sign > 0 ? "+1" : "-1") << " radius=";
        // radius is dyadic; print it exactly
        os << rat_to_string(rat_from_double(a.radius)) << " center=";
        for (size_t i = 0; i < a.center_exact.size(); ++i) {
            if (i) os << ',';
            os << rat_to_string(a.center_exact[i]);
        }
        os << '\n';
    }
    return os.str();
}

DegreeVector parse_vector_block(const std::string& text) {
    DegreeVector v;
    std::istringstream in(text);
    std::string line;
    bool in_block = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line == "#vector") {
            in_block = true;
            continue;
        }
        if (!in_block || line.empty()) continue;
        if (line.front() == '#' || line.front() == '=') break;
        auto fields = parse_fields(line, "vector block");
        if (!fields.count("H") || !fields.count("alpha") || !fields.count("deg")) break;
        v.add({parse_int(fields["H"], "H"), parse_int(fields["alpha"], "alpha")},
              parse_int(fields["deg"], "deg"));
    }
    return v;
}

} // namespace eqdeg
