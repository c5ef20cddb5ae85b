// netprune: run a distance problem on a point file and print a JSON report.
//
//   netprune kth-dist --k 10 --eps 0.1 points.txt
//   netprune gen tight-pairs --n 1000 --d 2 --seed 3 -o pairs.txt
//   netprune oracle mst-kth-edge --k 1 points.txt
//
// Exit codes: 0 ok, 2 usage, 3 bad input, 4 infeasible, 5 contract violation.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netprune/netprune.hpp"
#include "netprune/oracle.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace netprune;

struct Args {
  std::string file = "-";
  std::uint64_t k = 1;
  std::uint64_t m = 1;
  double eps = 0.1;
  std::string family = "points";
  double alpha = 1.0;
  std::uint32_t colors_min = 1;
  std::vector<std::string> ineq;
  std::uint64_t seed = 1;
  bool hp = false;
  bool trace = false;
  bool shortest = false;
  std::size_t cap = 2000;
};

using Family = std::variant<AtLeastPoints, WeightAtLeast, ColorCoverage, ContainsFlagged, LinearInequalities>;

// "c1,c2,...>=b"
LinearInequalities::Constraint parse_inequality(const std::string& text) {
  const auto pos = text.find(">=");
  if (pos == std::string::npos) throw InputError("inequality must look like c1,c2,...>=b: " + text);
  LinearInequalities::Constraint c;
  std::string lhs = text.substr(0, pos);
  std::size_t start = 0;
  while (start <= lhs.size()) {
    const auto comma = lhs.find(',', start);
    const auto tok = lhs.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    c.coefficients.push_back(detail::parse_number(tok, 0));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  c.bound = detail::parse_number(text.substr(pos + 2), 0);
  return c;
}

Family make_family(const Args& a, const PointFile& file) {
  if (a.family == "points") return AtLeastPoints{a.k};
  if (a.family == "weight") return WeightAtLeast{a.alpha};
  if (a.family == "colors") {
    if (!file.has(ColumnRole::Color)) throw InputError("family colors needs a color column");
    return ColorCoverage{a.colors_min};
  }
  if (a.family == "flagged") {
    if (!file.has(ColumnRole::Flag)) throw InputError("family flagged needs a flag column");
    return ContainsFlagged{};
  }
  if (a.family == "linear") {
    std::size_t attrs = 0;
    for (auto r : file.roles) attrs += r == ColumnRole::Attr ? 1 : 0;
    std::vector<LinearInequalities::Constraint> rows;
    for (const auto& s : a.ineq) rows.push_back(parse_inequality(s));
    if (rows.empty()) throw InputError("family linear needs at least one --ineq");
    return LinearInequalities(attrs, std::move(rows));
  }
  throw InputError("unknown family: " + a.family);
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json trace_json(const std::vector<TraceStep>& steps) {
  json out = json::array();
  for (const auto& s : steps) {
    out.push_back({{"nu", s.nu},
                   {"at_nu", to_string(s.at_nu.kind)},
                   {"at_scaled", to_string(s.at_scaled.kind)},
                   {"action", to_string(s.action)},
                   {"size_before", s.size_before},
                   {"size_after", s.size_after}});
  }
  return out;
}

void put_solution(json& report, const Solution& s, const Args& a) {
  report["value"] = s.value;
  if (s.zero) {
    report["interval"] = json::array({0.0, 0.0});
    report["note"] = "zero screen: the optimum is 0";
  } else {
    report["interval"] = interval_json(s.interval);
  }
  report["zero"] = s.zero;
  report["iterations"] = s.iterations;
  report["net_iterations"] = s.nets;
  report["prune_iterations"] = s.prunes;
  if (a.trace) report["trace"] = trace_json(s.trace);
}

SolveOptions solve_options(const Args& a, const PointSet& rows) {
  SolveOptions o;
  o.seed = a.seed;
  o.eps = a.eps;
  o.keep_trace = a.trace;
  if (a.hp) o.radius_sampler = make_hp_sampler(rows.size());
  return o;
}

using Runner = std::function<void(const Args&, const PointFile&, json&)>;

std::map<std::string, Runner> problem_runners() {
  std::map<std::string, Runner> r;
  r["kcenter"] = [](const Args& a, const PointFile& f, json& out) {
    const auto s = kcenter_2approx(f.rows, a.k, solve_options(a, f.rows));
    put_solution(out, s.run, a);
    json centers = json::array();
    for (std::size_t i = 0; i < s.centers.size(); ++i) {
      const auto p = s.centers.point(i);
      centers.push_back(std::vector<double>(p.begin(), p.end()));
    }
    out["centers"] = centers;
  };
  r["kth-dist"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, solve_kth_distance(f.rows, a.k, solve_options(a, f.rows)), a);
  };
  r["kth-mnn"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, solve_kth_mnn(f.rows, a.k, a.m, solve_options(a, f.rows)), a);
  };
  r["knn-exact"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, exact_kth_nn(f.rows, a.k, solve_options(a, f.rows)), a);
  };
  r["furthest-nn"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, furthest_nn(f.rows, solve_options(a, f.rows)), a);
  };
  r["closest-pair"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, closest_pair(f.rows, solve_options(a, f.rows)), a);
  };
  r["mst-kth-edge"] = [](const Args& a, const PointFile& f, json& out) {
    put_solution(out, solve_mst_kth_edge(f.rows, a.k, a.shortest, solve_options(a, f.rows)), a);
  };
  r["nonzero-dist"] = [](const Args& a, const PointFile& f, json& out) {
    std::size_t iterations = 0;
    const double v = smallest_nonzero_distance(f.rows, a.seed, &iterations);
    out["value"] = v;
    out["interval"] = json::array({v, v});
    out["iterations"] = iterations;
  };
  r["min-ball"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit([&](const auto& fam) { put_solution(out, solve_min_ball(f.rows, f.attributes, fam, solve_options(a, f.rows)), a); },
               make_family(a, f));
  };
  r["min-component"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          put_solution(out, solve_min_component(f.rows, f.attributes, fam, solve_options(a, f.rows)), a);
        },
        make_family(a, f));
  };
  r["connected-cluster"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          put_solution(out, solve_connected_cluster(f.rows, f.attributes, fam, solve_options(a, f.rows)), a);
        },
        make_family(a, f));
  };
  r["minmax-cluster"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          const auto s = solve_minmax_cluster(f.rows, f.attributes, fam, solve_options(a, f.rows));
          put_solution(out, s.run, a);
          out["clusters"] = s.clustering.centers.size();
        },
        make_family(a, f));
  };
  return r;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) throw InputError("oracle cap exceeded: " + std::to_string(n) + " > " + std::to_string(cap));
}

template <class F>
std::vector<typename F::Sketch> merged_sketches(const F& family, const PointFile& f, PointSet& locations) {
  const MergeResult merged = merge_duplicates(f.rows);
  locations = merged.locations;
  return location_sketches(family, f.rows, merged, std::span<const PointAttributes>(f.attributes));
}

std::map<std::string, Runner> oracle_runners() {
  std::map<std::string, Runner> r;
  r["kcenter"] = [](const Args& a, const PointFile& f, json& out) {
    const PointSet p = merge_duplicates(f.rows).locations;
    check_cap(p.size(), std::min<std::size_t>(a.cap, 40));
    out["value"] = oracle::kcenter(p, a.k);
  };
  r["kth-dist"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::kth_distance(f.rows, a.k);
  };
  r["kth-mnn"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::kth_mnn(f.rows, a.k, a.m);
  };
  r["knn-exact"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::kth_nn(f.rows, a.k);
  };
  r["furthest-nn"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::kth_nn(f.rows, f.rows.total_weight());
  };
  r["closest-pair"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::closest_pair(f.rows);
  };
  r["mst-kth-edge"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::mst_kth_edge(f.rows, a.k, a.shortest);
  };
  r["nonzero-dist"] = [](const Args& a, const PointFile& f, json& out) {
    check_cap(f.rows.size(), a.cap);
    out["value"] = oracle::smallest_nonzero_distance(f.rows);
  };
  r["min-ball"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          PointSet p(f.rows.dimension());
          const auto sk = merged_sketches(fam, f, p);
          check_cap(p.size(), std::min<std::size_t>(a.cap, 60));
          out["value"] = oracle::min_ball(p, std::span(sk), fam);
        },
        make_family(a, f));
  };
  r["min-component"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          PointSet p(f.rows.dimension());
          const auto sk = merged_sketches(fam, f, p);
          check_cap(p.size(), a.cap);
          out["value"] = oracle::min_component(p, std::span(sk), fam);
        },
        make_family(a, f));
  };
  r["connected-cluster"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          PointSet p(f.rows.dimension());
          const auto sk = merged_sketches(fam, f, p);
          check_cap(p.size(), a.cap);
          out["value"] = oracle::connected_cluster(p, std::span(sk), fam);
        },
        make_family(a, f));
  };
  r["minmax-cluster"] = [](const Args& a, const PointFile& f, json& out) {
    std::visit(
        [&](const auto& fam) {
          PointSet p(f.rows.dimension());
          const auto sk = merged_sketches(fam, f, p);
          check_cap(p.size(), std::min(a.cap, oracle::kMaxPartitionPoints));
          out["value"] = oracle::minmax_cluster(p, std::span(sk), fam);
        },
        make_family(a, f));
  };
  return r;
}

void add_problem_flags(CLI::App* sub, Args& a) {
  sub->add_option("file", a.file, "point file, - for stdin")->capture_default_str();
  sub->add_option("--k", a.k, "rank, cluster count or point threshold")->capture_default_str();
  sub->add_option("--m", a.m, "neighbor order for kth-mnn")->capture_default_str();
  sub->add_option("--eps", a.eps, "target accuracy")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--family", a.family, "points | weight | colors | flagged | linear")->capture_default_str();
  sub->add_option("--alpha", a.alpha, "weight threshold for family weight")->capture_default_str();
  sub->add_option("--colors-min", a.colors_min, "distinct colors for family colors")->capture_default_str();
  sub->add_option("--ineq", a.ineq, "constraint c1,c2,...>=b for family linear (repeatable)")
      ->take_all()
      ->expected(1)
      ->allow_extra_args(false);
  sub->add_option("--seed", a.seed, "random seed")->capture_default_str();
  sub->add_flag("--hp", a.hp, "sample radii with the high-probability routine");
  sub->add_flag("--trace", a.trace, "include the driver trace");
  sub->add_flag("--shortest", a.shortest, "mst-kth-edge: count from the shortest edge");
}

void emit(const json& report) { std::cout << report.dump(2) << '\n'; }

json base_report(const std::string& name, const Args& a, const PointFile& f) {
  json report;
  report["schema"] = 1;
  report["problem"] = name;
  report["parameters"] = {{"k", a.k},         {"m", a.m},          {"eps", a.eps},
                          {"family", a.family}, {"alpha", a.alpha}, {"colors_min", a.colors_min},
                          {"hp", a.hp},       {"shortest", a.shortest}};
  report["points"] = f.rows.size();
  report["dimension"] = f.rows.dimension();
  report["seed"] = a.seed;
  return report;
}

int run(int argc, char** argv) {
  CLI::App app{"Distance problems on point sets via net-and-prune"};
  app.require_subcommand(1);

  Args args;
  const auto problems = problem_runners();
  const auto oracles = oracle_runners();
  std::string chosen;

  for (const auto& [name, runner] : problems) {
    auto* sub = app.add_subcommand(name, "solve " + name);
    add_problem_flags(sub, args);
    sub->callback([&, name = name] { chosen = name; });
  }

  auto* oracle = app.add_subcommand("oracle", "brute-force reference answers");
  oracle->require_subcommand(1);
  std::string oracle_name;
  for (const auto& [name, runner] : oracles) {
    auto* sub = oracle->add_subcommand(name, "exact " + name);
    add_problem_flags(sub, args);
    sub->add_option("--cap", args.cap, "largest accepted input")->capture_default_str();
    sub->callback([&, name = name] { oracle_name = name; });
  }

  std::string dist_name;
  std::size_t gen_n = 100;
  std::size_t gen_d = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "write a synthetic point file");
  gen->add_option("distribution", dist_name, "uniform-box | gaussian-mixture | tight-pairs | lattice | multiset-duplicates")
      ->required();
  gen->add_option("--n", gen_n, "number of points")->capture_default_str();
  gen->add_option("--d", gen_d, "dimension")->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "output path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (gen->parsed()) {
    PointFile f;
    f.rows = generate_points(parse_distribution(dist_name), gen_n, gen_d, gen_seed);
    f.roles.assign(gen_d, ColumnRole::Coord);
    f.attributes.resize(f.rows.size());
    if (gen_out == "-") {
      write_point_file(std::cout, f);
    } else {
      std::ofstream os(gen_out);
      if (!os) throw InputError("cannot write " + gen_out);
      write_point_file(os, f);
    }
    return 0;
  }

  const bool is_oracle = oracle->parsed();
  const std::string name = is_oracle ? oracle_name : chosen;
  const PointFile file = read_point_file(args.file);
  json report = base_report(name, args, file);
  report["mode"] = is_oracle ? "oracle" : "solve";
  const auto start = std::chrono::steady_clock::now();
  (is_oracle ? oracles : problems).at(name)(args, file, report);
  const auto stop = std::chrono::steady_clock::now();
  report["wall_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
  emit(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const netprune::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const netprune::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 4;
  } catch (const netprune::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
}
