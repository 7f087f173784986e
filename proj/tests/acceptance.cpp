// Acceptance suite: end-to-end checks on the shipped scenarios, one printed
// line per criterion. Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "eqdeg/otopy.hpp"
#include "eqdeg/report.hpp"

using namespace eqdeg;

#ifndef EQDEG_CONFIG_DIR
#define EQDEG_CONFIG_DIR "configs"
#endif

namespace {

int failures = 0;
std::vector<std::pair<int, int>> all_raw_sums; // (raw sum, Weyl order) across the suite

Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

void record(const DegreeResult& result, const AnalysisContext& ctx) {
    for (const auto& sr : result.strata)
        for (const auto& [comp, raw] : sr.raw_sums)
            all_raw_sums.emplace_back(raw, ctx.table.entries[size_t(sr.entry)].weyl.order());
}

DegreeResult degree_recorded(const EquivariantLocalMap& f, const AnalysisContext& ctx) {
    DegreeResult r = equivariant_degree(f, ctx);
    record(r, ctx);
    return r;
}

void run_criterion(int id, const std::string& label, double time_limit_s,
                   const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << " unexpected error: " << e.what();
        ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        ok = false;
        detail << " exceeded time limit " << time_limit_s << "s";
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << label << " (" << secs
              << " s)" << detail.str() << "\n";
    if (!ok) ++failures;
}

LoadedProblem load_scenario(const std::string& name) {
    return load_problem(parse_config_file(std::string(EQDEG_CONFIG_DIR) + "/" + name));
}

DegreeVector single_key_vector(int deg) {
    DegreeVector v;
    v.set({0, 0}, deg);
    return v;
}

// random atom at a free cell of the given key, support disjoint from the
// existing atoms; nullopt when no cell has room
std::optional<StandardAtom> place_atom(const AnalysisContext& ctx, int entry, int comp, int sign,
                                       const std::vector<StandardAtom>& existing,
                                       std::mt19937_64& rng) {
    const ComponentChart& chart = ctx.chart(entry);
    std::vector<int> cells;
    for (size_t c = 0; c < chart.cells.size(); ++c)
        if (chart.cells[c].quot == comp) cells.push_back(int(c));
    std::shuffle(cells.begin(), cells.end(), rng);
    StandardAtom probe = standard_atom(ctx, entry, comp, sign);
    for (int cell : cells) {
        Vec center = chart.cell_center_ambient(chart.cells[size_t(cell)]);
        bool clear = ctx.domain.inward_distance(center) > probe.radius;
        for (const auto& a : existing)
            for (int e = 0; e < ctx.group->order() && clear; ++e)
                if ((ctx.group->mat(e) * center - a.center).norm() <= a.radius + probe.radius)
                    clear = false;
        if (!clear) continue;
        StandardAtom atom = probe;
        atom.center = center;
        atom.center_exact.clear();
        for (int i = 0; i < center.size(); ++i)
            atom.center_exact.push_back(rat_from_double(center(i)));
        return atom;
    }
    return std::nullopt;
}

// equivariant map families used for random straight-line otopies
EquivariantLocalMap family_s2(const AnalysisContext& ctx, double c) {
    std::ostringstream os;
    os << "x1^3 - " << rat_to_string(rat_from_double(c)) << "*x1";
    return EquivariantLocalMap::from_expression(MapExpression::parse({os.str()}, 1, false),
                                                ctx.domain);
}

EquivariantLocalMap family_s3(const AnalysisContext& ctx, double a, double b, double c,
                              double d) {
    auto r = [](double x) { return rat_to_string(rat_from_double(x)); };
    std::ostringstream e1, e2;
    e1 << "(1 + " << r(a) << ")*x1 - 1 - " << r(b) << "*x2^2";
    e2 << "(1 + " << r(c) << ")*x2 + " << r(d) << "*x1*x2";
    return EquivariantLocalMap::from_expression(
        MapExpression::parse({e1.str(), e2.str()}, 2, false), ctx.domain);
}

EquivariantLocalMap family_s4(const AnalysisContext& ctx, double c, double b) {
    auto r = [](double x) { return rat_to_string(rat_from_double(x)); };
    std::ostringstream e1, e2;
    e1 << "x1^5 - 10*x1^3*x2^2 + 5*x1*x2^4 + " << r(b) << "*(x1^3 - 3*x1*x2^2) - " << r(c)
       << "*x1";
    e2 << "5*x1^4*x2 - 10*x1^2*x2^3 + x2^5 + " << r(b) << "*(x2^3 - 3*x1^2*x2) - " << r(c)
       << "*x2";
    return EquivariantLocalMap::from_expression(
        MapExpression::parse({e1.str(), e2.str()}, 2, false), ctx.domain);
}

} // namespace

int main() {
    LoadedProblem s2 = load_scenario("s2.cfg");
    LoadedProblem s3 = load_scenario("s3.cfg");
    LoadedProblem s3b = load_scenario("s3b.cfg");
    LoadedProblem s4 = load_scenario("s4.cfg");
    LoadedProblem s5 = load_scenario("s5.cfg");

    // 1 -------------------------------------------------------------------
    run_criterion(1, "S2 cubic: degree {+1}, matching the 1-d boundary oracle", 1.0,
                  [&](std::ostringstream& out) {
                      auto cmd = cmd_degree(s2, false, false);
                      if (cmd.exit_code != 0) {
                          out << " exit " << cmd.exit_code;
                          return false;
                      }
                      DegreeVector vec = parse_vector_block(cmd.text);
                      auto result = degree_recorded(*s2.map, s2.ctx);
                      // the oracle sees the whole stratum, i.e. |WH| * degree
                      int oracle = oracle_degree_1d(
                          [&](double x) { return s2.map->evaluate(vec1(x))(0); },
                          {{-2.96875, -1.03125}, {1.03125, 2.96875}});
                      out << " vector(H=0,a=0)=" << vec.at({0, 0}) << " oracle=" << oracle;
                      return vec == single_key_vector(1) && result.vector == vec &&
                             oracle == 2 * vec.at({0, 0});
                  });

    // 2 -------------------------------------------------------------------
    run_criterion(2, "S3 mirror square: affine map {+1, 0}; quadratic pair all zero", 5.0,
                  [&](std::ostringstream& out) {
                      auto affine = degree_recorded(*s3.map, s3.ctx);
                      bool ok = affine.vector.at({0, 0}) == 1 && affine.vector.at({1, 0}) == 0 &&
                                affine.vector.support().size() == 1;
                      out << " affine(H=0)=" << affine.vector.at({0, 0})
                          << " affine(H=1)=" << affine.vector.at({1, 0});
                      auto quad = degree_recorded(*s3b.map, s3b.ctx);
                      ok = ok && quad.vector.is_zero();
                      out << " quadratic=" << (quad.vector.is_zero() ? "0" : "nonzero");
                      return ok;
                  });

    // 3 -------------------------------------------------------------------
    run_criterion(3, "S4 quintic: degree {+1} on the single key, two winding step counts agree",
                  5.0, [&](std::ostringstream& out) {
                      auto result = degree_recorded(*s4.map, s4.ctx);
                      bool ok = result.vector == single_key_vector(1) &&
                                s4.ctx.keys().size() == 1;
                      auto g = [&](const Vec& x) { return s4.map->evaluate(x); };
                      int w1 = 0, w2 = 0;
                      for (const auto& sr : result.strata)
                          for (const auto& z : sr.zeros) {
                              std::vector<Vec> square;
                              for (auto [dx, dy] : {std::pair{-0.4, -0.4}, {0.4, -0.4},
                                                    {0.4, 0.4}, {-0.4, 0.4}}) {
                                  Vec corner = z.point;
                                  corner(0) += dx;
                                  corner(1) += dy;
                                  square.push_back(corner);
                              }
                              w1 += oracle_degree_2d(g, square, 500);
                              w2 += oracle_degree_2d(g, square, 1000);
                          }
                      out << " winding sums " << w1 << "/" << w2 << " vs |WH|*deg = "
                          << 4 * result.vector.at({0, 0});
                      return ok && w1 == w2 && w1 == 4 * result.vector.at({0, 0});
                  });

    // 4 -------------------------------------------------------------------
    run_criterion(4, "S5 dihedral ring: 3 orbit types, two mirror classes, |WH|={2,2,8}, "
                     "components stable under refinement",
                  0, [&](std::ostringstream& out) {
                      const auto& entries = s5.ctx.table.entries;
                      bool ok = entries.size() == 3;
                      if (!ok) {
                          out << " types=" << entries.size();
                          return false;
                      }
                      std::vector<int> weyl;
                      for (const auto& e : entries) weyl.push_back(e.weyl.order());
                      std::vector<int> sorted = weyl;
                      std::sort(sorted.begin(), sorted.end());
                      ok = ok && sorted == std::vector<int>{2, 2, 8};
                      ok = ok && entries[0].rep.order() == 2 && entries[1].rep.order() == 2 &&
                           !s5.group->are_conjugate(entries[0].rep, entries[1].rep);
                      // component counts stable at delta/2
                      Tolerances finer = s5.ctx.tol;
                      finer.delta = s5.ctx.base_delta / 2;
                      auto refined = AnalysisContext::build(s5.group, s5.ctx.domain, finer);
                      out << " n(H)=";
                      for (size_t e = 0; e < entries.size(); ++e) {
                          out << s5.ctx.component_count(int(e))
                              << (e + 1 < entries.size() ? "," : "");
                          ok = ok && s5.ctx.component_count(int(e)) ==
                                         refined.component_count(int(e));
                      }
                      return ok;
                  });

    // 5 -------------------------------------------------------------------
    run_criterion(5, "Round trip: 25 random vectors per scenario realize back exactly",
                  120.0, [&](std::ostringstream& out) {
                      std::mt19937_64 rng(2026);
                      std::uniform_int_distribution<int> val(-3, 3);
                      int good = 0, total = 0;
                      for (LoadedProblem* p : {&s2, &s3, &s4}) {
                          for (int trial = 0; trial < 25; ++trial) {
                              DegreeVector target;
                              for (auto [entry, comp] : p->ctx.keys())
                                  target.set({entry, comp}, val(rng));
                              ++total;
                              auto f = realize(p->ctx, target);
                              auto result = degree_recorded(f, p->ctx);
                              if (result.vector == target) ++good;
                          }
                      }
                      out << " " << good << "/" << total;
                      return good == 75 && total == 75;
                  });

    // 6 -------------------------------------------------------------------
    run_criterion(6, "Additivity: 20 random disjoint atom-list pairs per scenario", 120.0,
                  [&](std::ostringstream& out) {
                      std::mt19937_64 rng(1234);
                      std::uniform_int_distribution<int> val(-2, 2);
                      std::uniform_int_distribution<int> coin(0, 1);
                      int good = 0, total = 0;
                      for (LoadedProblem* p : {&s2, &s3, &s4}) {
                          for (int trial = 0; trial < 20; ++trial) {
                              std::vector<StandardAtom> pool;
                              AtomList fa, ga;
                              for (auto [entry, comp] : p->ctx.keys()) {
                                  int na = std::abs(val(rng)), nb = std::abs(val(rng));
                                  for (int i = 0; i < na + nb; ++i) {
                                      int sign = coin(rng) ? +1 : -1;
                                      auto atom =
                                          place_atom(p->ctx, entry, comp, sign, pool, rng);
                                      if (!atom) continue;
                                      pool.push_back(*atom);
                                      (i < na ? fa : ga).atoms.push_back(*atom);
                                  }
                              }
                              auto f = EquivariantLocalMap::from_atoms(fa, p->group);
                              auto g = EquivariantLocalMap::from_atoms(ga, p->group);
                              ++total;
                              auto rep = verify_additivity(f, g, p->ctx);
                              record(equivariant_degree(f, p->ctx), p->ctx);
                              if (rep.pass) ++good;
                          }
                      }
                      out << " " << good << "/" << total;
                      return good == 60 && total == 60;
                  });

    // 7 -------------------------------------------------------------------
    run_criterion(
        7, "Otopy invariance: linearizations at every S2-S4 zero, 10 random lines per scenario",
        0, [&](std::ostringstream& out) {
            int paths = 0;
            // linearization otopies at every regular zero of the scenario maps
            for (LoadedProblem* p : {&s2, &s3, &s3b, &s4}) {
                auto result = equivariant_degree(*p->map, p->ctx);
                for (const auto& sr : result.strata)
                    for (const auto& z : sr.zeros) {
                        auto [atom, path] = linearize(*p->map, z, p->ctx);
                        auto rep = verify_otopy_invariance(path, p->ctx, p->ctx.tol.t_samples);
                        degree_recorded(path.slice(Rat(1)), p->ctx);
                        ++paths;
                        if (!rep.pass) {
                            out << " linearization at orbit type " << z.entry << " failed";
                            return false;
                        }
                    }
            }
            // random straight-line otopies inside equivariant families
            std::mt19937_64 rng(777);
            std::uniform_real_distribution<double> c2(3.5, 4.5), small(-0.15, 0.15),
                c4(14.0, 18.0), b4(-1.0, 1.0);
            for (int trial = 0; trial < 10; ++trial) {
                {
                    auto f = family_s2(s2.ctx, c2(rng));
                    auto g = family_s2(s2.ctx, c2(rng));
                    auto rep = verify_otopy_invariance(straight_line_otopy(f, g, s2.ctx), s2.ctx,
                                                       s2.ctx.tol.t_samples);
                    ++paths;
                    if (!rep.pass) { out << " S2 line " << trial << " failed"; return false; }
                }
                {
                    auto f = family_s3(s3.ctx, small(rng), small(rng), small(rng), small(rng));
                    auto g = family_s3(s3.ctx, small(rng), small(rng), small(rng), small(rng));
                    auto rep = verify_otopy_invariance(straight_line_otopy(f, g, s3.ctx), s3.ctx,
                                                       s3.ctx.tol.t_samples);
                    ++paths;
                    if (!rep.pass) { out << " S3 line " << trial << " failed"; return false; }
                }
                {
                    auto f = family_s4(s4.ctx, c4(rng), b4(rng));
                    auto g = family_s4(s4.ctx, c4(rng), b4(rng));
                    auto rep = verify_otopy_invariance(straight_line_otopy(f, g, s4.ctx), s4.ctx,
                                                       s4.ctx.tol.t_samples);
                    ++paths;
                    if (!rep.pass) { out << " S4 line " << trial << " failed"; return false; }
                }
            }
            out << " " << paths << " otopies constant over 11 slices";
            return true;
        });

    // 8 -------------------------------------------------------------------
    run_criterion(8, "Annihilation: +1/-1 atom pairs cancel exactly for every key", 0,
                  [&](std::ostringstream& out) {
                      std::mt19937_64 rng(55);
                      int keys = 0;
                      for (LoadedProblem* p : {&s2, &s3, &s4}) {
                          for (auto [entry, comp] : p->ctx.keys()) {
                              DegreeVector one;
                              one.set({entry, comp}, 1);
                              auto plus = realize(p->ctx, one);
                              auto neg = place_atom(p->ctx, entry, comp, -1,
                                                    plus.atoms()->atoms, rng);
                              if (!neg) {
                                  out << " no room for the pair at H=" << entry;
                                  return false;
                              }
                              AtomList nl;
                              nl.atoms.push_back(*neg);
                              auto minus = EquivariantLocalMap::from_atoms(nl, p->group);
                              auto u = disjoint_union(plus, minus);
                              auto result = degree_recorded(u, p->ctx);
                              if (!result.vector.is_zero()) {
                                  out << " key H=" << entry << " alpha=" << comp
                                      << " did not cancel";
                                  return false;
                              }
                              ++keys;
                          }
                      }
                      out << " " << keys << " keys cancel";
                      return true;
                  });

    // 9 -------------------------------------------------------------------
    run_criterion(9, "Divisibility: every raw sign sum across the suite divisible by |WH|", 0,
                  [&](std::ostringstream& out) {
                      int violations = 0;
                      for (auto [raw, weyl] : all_raw_sums)
                          if (raw % weyl != 0) ++violations;
                      out << " " << all_raw_sums.size() << " sums checked, " << violations
                          << " violations";
                      return violations == 0;
                  });

    // 10 ------------------------------------------------------------------
    run_criterion(10, "Classical reduction: trivial group, 10 random polynomials match the oracle",
                  0, [&](std::ostringstream& out) {
                      auto trivial = std::make_shared<FiniteGroup>(FiniteGroup::close_generators(
                          {OrthoMatrix::from_exact(RatMat::identity(1))}, 8));
                      Box box;
                      box.sides = {{-2, 2}};
                      auto omega = InvariantDomain::saturate({box}, trivial);
                      auto ctx = AnalysisContext::build(trivial, omega, Tolerances{});
                      if (ctx.keys().size() != 1) {
                          out << " expected a single key";
                          return false;
                      }
                      std::mt19937_64 rng(99);
                      std::uniform_int_distribution<int> nroots(1, 4);
                      std::uniform_int_distribution<int> coin(0, 1);
                      std::uniform_real_distribution<double> root(-1.0, 1.0);
                      for (int trial = 0; trial < 10; ++trial) {
                          int n = nroots(rng);
                          std::vector<double> roots;
                          while (int(roots.size()) < n) {
                              double r = root(rng);
                              bool clear = true;
                              for (double s : roots)
                                  if (std::abs(r - s) < 0.3) clear = false;
                              if (clear) roots.push_back(r);
                          }
                          std::ostringstream expr;
                          expr << (coin(rng) ? "" : "-") << "1";
                          for (double r : roots)
                              expr << "*(x1 - " << rat_to_string(rat_from_double(r)) << ")";
                          MapExpression body = MapExpression::parse({expr.str()}, 1, false);
                          auto f = EquivariantLocalMap::from_expression(body, omega);
                          auto result = degree_recorded(f, ctx);
                          // the oracle evaluates on the closed boundary, past the
                          // open-domain gate
                          int oracle = oracle_degree_1d(
                              [&](double x) { return body.eval(vec1(x))(0); }, {{-2, 2}});
                          if (result.vector.at({0, 0}) != oracle ||
                              result.vector.support().size() > 1) {
                              out << " trial " << trial << ": vector "
                                  << result.vector.at({0, 0}) << " vs oracle " << oracle;
                              return false;
                          }
                      }
                      out << " 10/10 match";
                      return true;
                  });

    // 11 ------------------------------------------------------------------
    run_criterion(11, "Jacobians: symbolic vs central differences, 100 points per scenario map",
                  0, [&](std::ostringstream& out) {
                      std::mt19937_64 rng(4242);
                      const double h = 1e-6;
                      for (LoadedProblem* p : {&s2, &s3, &s3b, &s4}) {
                          DomainSampler sampler(p->ctx.domain, 4242);
                          int checked = 0;
                          double worst = 0;
                          while (checked < 100) {
                              Vec x = sampler.next();
                              Mat j = p->map->jacobian(x);
                              for (int c = 0; c < x.size(); ++c) {
                                  Vec xp = x, xm = x;
                                  xp(c) += h;
                                  xm(c) -= h;
                                  Vec fd;
                                  try {
                                      fd = (p->map->evaluate(xp) - p->map->evaluate(xm)) /
                                           (2 * h);
                                  } catch (const OutsideDomain&) {
                                      continue;
                                  }
                                  for (int r = 0; r < x.size(); ++r) {
                                      double rel = std::abs(fd(r) - j(r, c)) /
                                                   std::max(1.0, std::abs(j(r, c)));
                                      worst = std::max(worst, rel);
                                  }
                              }
                              ++checked;
                          }
                          if (worst > 1e-5) {
                              out << " worst relative error " << worst;
                              return false;
                          }
                          (void)rng;
                      }
                      out << " all within 1e-5";
                      return true;
                  });

    std::cout << "acceptance: " << (11 - failures) << "/11 passed\n";
    return failures;
}
