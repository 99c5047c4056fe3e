#include "ivfs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "ivfs/error.hpp"
#include "ivfs/eval.hpp"
#include "ivfs/persistence.hpp"
#include "ivfs/report.hpp"
#include "ivfs/synthetic.hpp"

namespace ivfs::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct DataFlags {
  std::string input;
  std::string label_column;
  bool no_standardize = false;
};

struct SelectionFlags {
  std::size_t k = 1000;
  std::string dtilde = "0.3";
  std::string ntilde;
  std::optional<std::size_t> ntilde_cap;
  std::size_t d0 = 10;
  std::string score = "linf";
  std::string normalization = "own";
};

struct TopoFlags {
  double alpha_max = 0.5;
  double epsilon = 0.1;
  bool include_dim0 = false;
};

const CLI::Validator kExtent(
    [](std::string& s) -> std::string {
      try {
        Extent::parse(s);
      } catch (const Error& e) {
        return e.what();
      }
      return {};
    },
    "COUNT|FRACTION", "extent");

const CLI::Validator kUnitInterval(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (const std::exception&) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v <= 1.0)) return "value must lie in (0, 1]";
      return {};
    },
    "(0,1]", "unit");

void add_data_flags(CLI::App* app, DataFlags& f, bool input_required = true) {
  auto* in = app->add_option("--input", f.input, "CSV data file");
  if (input_required) in->required();
  app->add_option("--label-column", f.label_column, "Label column name (or 0-based index)");
  app->add_flag("--no-standardize", f.no_standardize, "Use raw values instead of z-scores");
}

void add_selection_flags(CLI::App* app, SelectionFlags& f) {
  app->add_option("--k", f.k, "Number of random subsets")->check(CLI::PositiveNumber);
  app->add_option("--dtilde", f.dtilde, "Features per subset (count, or fraction of d)")->check(kExtent);
  app->add_option("--ntilde", f.ntilde, "Samples per subset (count, or fraction of n)")->check(kExtent);
  app->add_option("--ntilde-cap", f.ntilde_cap, "Upper bound on samples per subset")->check(CLI::Range(2, 1 << 30));
  app->add_option("--d0", f.d0, "Number of features to select")->check(CLI::PositiveNumber);
  app->add_option("--score", f.score, "Subset score")->check(CLI::IsMember({"linf", "l1", "l2", "knn_error"}));
  app->add_option("--normalization", f.normalization, "Scale of D_F: own max or the full matrix max")
      ->check(CLI::IsMember({"own", "reference"}));
}

void add_topo_flags(CLI::App* app, TopoFlags& f) {
  app->add_option("--alpha-max", f.alpha_max, "Rips filtration cutoff")->check(kUnitInterval);
  app->add_option("--epsilon", f.epsilon, "Minimum bar lifetime kept")->check(CLI::NonNegativeNumber);
  app->add_flag("--include-dim0", f.include_dim0, "Also compare dimension-0 diagrams");
}

struct Dataset {
  std::optional<DataMatrix> matrix;
  std::optional<LabelVector> labels;
  std::string source;
};

Dataset load(const DataFlags& f) {
  std::optional<LabelColumn> column;
  if (!f.label_column.empty()) column = LabelColumn{f.label_column};
  auto loaded = load_csv(f.input, column);
  Dataset d;
  d.matrix = f.no_standardize ? std::move(loaded.matrix) : standardize(loaded.matrix);
  d.labels = std::move(loaded.labels);
  d.source = f.input;
  return d;
}

IvfsConfig make_config(const SelectionFlags& f, std::uint64_t seed, std::size_t n, std::size_t d) {
  IvfsConfig c = IvfsConfig::defaults(n, d);
  c.k = f.k;
  c.d_tilde = Extent::parse(f.dtilde).resolve(d);
  if (!f.ntilde.empty()) {
    const auto e = Extent::parse(f.ntilde);
    c.n_tilde = e.resolve(n);
    if (e.value < 1.0) c.n_tilde = std::max<std::size_t>(c.n_tilde, 2);
  }
  if (f.ntilde_cap) c.n_tilde = std::min(c.n_tilde, *f.ntilde_cap);
  c.d0 = f.d0;
  c.score = parse_score_kind(f.score);
  c.seed = seed;
  c.validate(n, d);
  return c;
}

RunOptions run_options(const SelectionFlags& f, int threads) {
  RunOptions o;
  o.parallelism = Parallelism{Execution::Parallel, threads};
  o.normalization = f.normalization == "reference" ? SubsetNormalization::ReferenceMax : SubsetNormalization::OwnMax;
  return o;
}

TopoOptions topo_options(const TopoFlags& f, int threads) {
  TopoOptions o;
  o.alpha_max = f.alpha_max;
  o.epsilon = f.epsilon;
  o.include_dim0 = f.include_dim0;
  o.parallelism = Parallelism{Execution::Parallel, threads};
  return o;
}

fs::path prepare_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return fs::path(dir) / name;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

void write_manifest(const fs::path& output, const std::string& command, const Json& config,
                    const std::string& input, std::uint64_t seed, const std::string& started, Json extra = {}) {
  Json m;
  m["command"] = command;
  m["tool_version"] = report::kToolVersion;
  m["input_path"] = input;
  m["output_paths"] = Json::array({output.string()});
  m["seed"] = seed;
  m["config"] = config;
  m["started"] = started;
  m["finished"] = report::utc_now();
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_text(fs::path(output.string() + ".manifest.json"), m.dump(2) + "\n");
}

std::vector<std::size_t> read_ranking_file(const std::string& path, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ranking " + path);
  return report::read_ranking(in, d);
}

std::vector<std::size_t> choose_features(const std::vector<std::size_t>& ranked, std::optional<std::size_t> d0) {
  if (ranked.empty()) throw InvalidSelection("ranking file lists no features");
  const std::size_t count = d0.value_or(ranked.size());
  if (count > ranked.size()) {
    throw InvalidSelection("d0 = " + std::to_string(count) + " but the ranking lists only " +
                           std::to_string(ranked.size()) + " features");
  }
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count)};
}

template <class T>
std::vector<T> parse_list(const std::vector<std::string>& items, T (*parse)(const std::string&)) {
  std::vector<T> out;
  for (const auto& s : items) out.push_back(parse(s));
  return out;
}

std::size_t parse_count(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("not a count: " + s);
  }
  if (used != s.size() || v == 0) throw InvalidParameter("not a positive count: " + s);
  return static_cast<std::size_t>(v);
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

Json topo_json(const TopoOptions& t) {
  return {{"alpha_max", t.alpha_max}, {"epsilon", t.epsilon}, {"include_dim0", t.include_dim0}};
}

}  // namespace

std::vector<std::string> config_file_args(const std::string& path, const std::vector<std::string>& explicit_args) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::set<std::string> given;
  for (const auto& a : explicit_args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  }
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) continue;
    if (given.count(key)) continue;
    out.push_back("--" + key);
    if (eq != std::string::npos) {
      const std::string value = trim(line.substr(eq + 1));
      if (value == "true") continue;
      if (value == "false") {
        out.pop_back();
        continue;
      }
      out.push_back(value);
    }
  }
  return out;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-subset inclusion-value feature selection with topology-preserving scores", "ivfs"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", report::kToolVersion);

  std::uint64_t seed = 0;
  int threads = 0;
  std::string output_dir = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--threads", threads, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
    sub->add_option("--output-dir", output_dir, "Directory for output files");
    sub->add_option("--config", "Flat key = value file supplying any flag");
  };

  DataFlags data;
  SelectionFlags sel;
  TopoFlags topo;

  auto* select = app.add_subcommand("select", "Rank features and write the ranking file");
  add_data_flags(select, data);
  add_selection_flags(select, sel);
  add_common(select);

  std::string ranking_path;
  std::string external_path;
  std::optional<std::size_t> eval_d0;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a feature ranking against the full data");
  add_data_flags(evaluate, data);
  add_topo_flags(evaluate, topo);
  add_common(evaluate);
  auto* rank_opt = evaluate->add_option("--ranking", ranking_path, "Ranking file written by select");
  auto* ext_opt = evaluate->add_option("--external-ranking", external_path, "Ranking produced by another method");
  rank_opt->excludes(ext_opt);
  evaluate->add_option("--d0", eval_d0, "Evaluate the top d0 features (default: all listed)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> grid_k{"1000"}, grid_dt{"0.1", "0.3", "0.5"}, grid_nt{"0.1", "0.3"}, grid_d0{"10"},
      grid_score{"linf"};
  std::size_t repeat = 1;
  std::optional<std::size_t> grid_cap;
  auto* bench = app.add_subcommand("benchmark", "Evaluate a parameter grid and write plot data (CSV)");
  add_data_flags(bench, data, false);
  add_topo_flags(bench, topo);
  add_common(bench);
  bench->add_option("--k", grid_k, "Subset counts")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--dtilde", grid_dt, "Features per subset")->delimiter(',')->check(kExtent);
  bench->add_option("--ntilde", grid_nt, "Samples per subset")->delimiter(',')->check(kExtent);
  bench->add_option("--ntilde-cap", grid_cap, "Upper bound on samples per subset")->check(CLI::Range(2, 1 << 30));
  bench->add_option("--d0", grid_d0, "Selected feature counts")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--score", grid_score, "Scores")->delimiter(',')
      ->check(CLI::IsMember({"linf", "l1", "l2", "knn_error"}));
  bench->add_option("--repeat", repeat, "Repetitions per cell (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);

  std::size_t repetitions = 5;
  auto* stability = app.add_subcommand("stability", "Bootstrap stability of the selection");
  add_data_flags(stability, data);
  add_selection_flags(stability, sel);
  add_common(stability);
  stability->add_option("--repeat,--repetitions", repetitions, "Bootstrap repetitions")->check(CLI::PositiveNumber);

  std::optional<std::size_t> diag_d0;
  auto* diagram = app.add_subcommand("diagram", "Write the Rips persistence diagram of the data");
  add_data_flags(diagram, data);
  add_topo_flags(diagram, topo);
  add_common(diagram);
  diagram->add_option("--ranking,--external-ranking", ranking_path, "Restrict to the top features of a ranking");
  diagram->add_option("--d0", diag_d0, "Number of ranked features to keep")->check(CLI::PositiveNumber);

  // Expand --config files; explicit flags override file entries.
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      std::vector<std::string> rest(args.begin() + static_cast<std::ptrdiff_t>(i) + 2, args.end());
      std::vector<std::string> head(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<std::string> explicit_args = head;
      explicit_args.insert(explicit_args.end(), rest.begin(), rest.end());
      std::vector<std::string> from_file;
      try {
        from_file = config_file_args(args[i + 1], explicit_args);
      } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      head.insert(head.end(), from_file.begin(), from_file.end());
      head.insert(head.end(), rest.begin(), rest.end());
      args = std::move(head);
      break;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << report::kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  const std::string started = report::utc_now();
  try {
    if (*select) {
      const auto ds = load(data);
      const auto& x = *ds.matrix;
      const auto config = make_config(sel, seed, x.rows(), x.cols());
      const auto t0 = std::chrono::steady_clock::now();
      const auto result = run_ivfs(x, config, ds.labels ? &*ds.labels : nullptr, run_options(sel, threads));
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

      std::ostringstream ranking;
      report::write_ranking(ranking, result.ranking);
      const auto path = prepare_output(output_dir, "ranking.txt");
      write_text(path, ranking.str());
      Json cfg = report::to_json(config);
      cfg["normalization"] = sel.normalization;
      cfg["standardized"] = !data.no_standardize;
      write_manifest(path, "select", cfg, ds.source, seed, started,
                     {{"selected", result.ranking.selected},
                      {"never_evaluated", result.board.never_evaluated()},
                      {"wall_time_seconds", elapsed.count()}});
      out << "selected " << config.d0 << " features: " << join(result.ranking.selected) << "\n";
      out << "ranking written to " << path.string() << "\n";
      return kExitOk;
    }

    if (*evaluate) {
      if (ranking_path.empty() && external_path.empty()) {
        err << "error: evaluate needs --ranking or --external-ranking\n" << evaluate->help();
        return kExitUsage;
      }
      const auto ds = load(data);
      const auto& x = *ds.matrix;
      const bool external = !external_path.empty();
      const auto& rpath = external ? external_path : ranking_path;
      const auto selected = choose_features(read_ranking_file(rpath, x.cols()), eval_d0);
      const auto topo_opts = topo_options(topo, threads);
      auto rep = evaluate_selection(x, ds.labels ? &*ds.labels : nullptr, selected, seed, topo_opts);
      rep.source = external ? "external" : "ivfs";

      Json doc;
      doc["config"] = topo_json(topo_opts);
      doc["config"]["seed"] = seed;
      doc["config"]["d0"] = selected.size();
      doc["config"]["standardized"] = !data.no_standardize;
      doc["selected"] = selected;
      doc["report"] = report::to_json(rep);
      const auto path = prepare_output(output_dir, "report.json");
      write_text(path, doc.dump(2) + "\n");
      write_manifest(path, "evaluate", doc["config"], ds.source, seed, started, {{"ranking_path", rpath}});
      out << doc["report"].dump(2) << "\n";
      return kExitOk;
    }

    if (*bench) {
      Dataset ds;
      if (data.input.empty()) {
        auto fx = synthetic::informative_noise({}, seed);
        ds.matrix = std::move(fx.matrix);
        ds.labels = std::move(fx.labels);
        ds.source = "synthetic:informative_noise";
      } else {
        ds = load(data);
      }
      const auto& x = *ds.matrix;
      GridSpec grid;
      grid.ks = parse_list<std::size_t>(grid_k, parse_count);
      grid.d_tildes = parse_list<Extent>(grid_dt, Extent::parse);
      grid.n_tildes = parse_list<Extent>(grid_nt, Extent::parse);
      grid.d0s = parse_list<std::size_t>(grid_d0, parse_count);
      grid.scores.clear();
      for (const auto& s : grid_score) grid.scores.push_back(parse_score_kind(s));
      grid.n_tilde_cap = grid_cap;
      grid.repeat = repeat;
      if (grid.cell_count() == 0) {
        err << "error: empty parameter grid\n" << bench->help();
        return kExitUsage;
      }
      const auto topo_opts = topo_options(topo, threads);
      RunOptions ropt;
      ropt.parallelism = Parallelism{Execution::Parallel, threads};
      const auto cells = run_grid(x, ds.labels ? &*ds.labels : nullptr, grid, seed, topo_opts, ropt);

      std::ostringstream csv;
      report::write_grid_csv(csv, cells);
      const auto path = prepare_output(output_dir, "grid.csv");
      write_text(path, csv.str());
      const auto best = best_per_metric(cells);
      Json best_json{{"w11", best.w11}, {"w_inf", best.w_inf}, {"l1", best.l1},
                     {"l2", best.l2},   {"linf", best.linf}};
      if (best.knn_accuracy) best_json["knn_accuracy"] = *best.knn_accuracy;
      Json cfg = topo_json(topo_opts);
      cfg["k"] = grid_k;
      cfg["dtilde"] = grid_dt;
      cfg["ntilde"] = grid_nt;
      cfg["d0"] = grid_d0;
      cfg["score"] = grid_score;
      cfg["repeat"] = repeat;
      write_manifest(path, "benchmark", cfg, ds.source, seed, started,
                     {{"cells", cells.size()}, {"best_cell_per_metric", best_json}});
      out << "wrote " << cells.size() << " grid cells to " << path.string() << "\n";
      return kExitOk;
    }

    if (*stability) {
      const auto ds = load(data);
      const auto& x = *ds.matrix;
      const auto config = make_config(sel, seed, x.rows(), x.cols());
      const auto result = bootstrap_stability(x, config, repetitions, seed, ds.labels ? &*ds.labels : nullptr,
                                              run_options(sel, threads));
      std::ostringstream csv;
      report::write_stability_csv(csv, config, result);
      const auto path = prepare_output(output_dir, "stability.csv");
      write_text(path, csv.str());
      write_manifest(path, "stability", report::to_json(config), ds.source, seed, started,
                     {{"result", report::to_json(result)}});
      out << "mean differing_count over " << repetitions << " repetitions: " << result.mean << "\n";
      return kExitOk;
    }

    if (*diagram) {
      const auto ds = load(data);
      const auto& x = *ds.matrix;
      Selection selection;
      if (!ranking_path.empty()) {
        auto chosen = choose_features(read_ranking_file(ranking_path, x.cols()), diag_d0);
        selection.features = FeatureSubset::from_unsorted(std::move(chosen), x.cols());
      }
      const auto topo_opts = topo_options(topo, threads);
      const auto dm = distance_matrix(x, selection, topo_opts.parallelism);
      const auto filt = build_filtration(dm, topo_opts.alpha_max);
      auto diag = threshold_diagram(rips_persistence(filt), topo_opts.epsilon);
      if (!topo_opts.include_dim0) diag = diag.of_dim(1);
      std::ostringstream text;
      write_diagram(text, diag);
      const auto path = prepare_output(output_dir, "diagram.txt");
      write_text(path, text.str());
      write_manifest(path, "diagram", topo_json(topo_opts), ds.source, seed, started, {{"bars", diag.size()}});
      out << "wrote " << diag.size() << " bars to " << path.string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ivfs::cli
