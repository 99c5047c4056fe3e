#include "ivfs/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ivfs/error.hpp"

namespace ivfs::report {
namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct MetricColumn {
  const char* name;
  double (*get)(const EvalReport&);
};

constexpr MetricColumn kMetrics[] = {
    {"w11", [](const EvalReport& r) { return r.w11; }},
    {"w_inf", [](const EvalReport& r) { return r.w_inf; }},
    {"l1", [](const EvalReport& r) { return r.l1; }},
    {"l1_per_n2_x100", [](const EvalReport& r) { return r.l1_per_n2_x100; }},
    {"l2", [](const EvalReport& r) { return r.l2; }},
    {"linf", [](const EvalReport& r) { return r.linf; }},
};

void write_config_fields(std::ostream& out, const IvfsConfig& c) {
  out << c.k << ',' << c.d_tilde << ',' << c.n_tilde << ',' << c.d0 << ',' << to_string(c.score) << ',' << c.seed;
}

}  // namespace

nlohmann::ordered_json to_json(const IvfsConfig& config) {
  return {{"k", config.k},          {"d_tilde", config.d_tilde},
          {"n_tilde", config.n_tilde}, {"d0", config.d0},
          {"score", std::string(to_string(config.score))}, {"seed", config.seed}};
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["source"] = report.source;
  j["d0_used"] = report.d0_used;
  j["knn_accuracy"] = report.knn_accuracy ? nlohmann::ordered_json(*report.knn_accuracy) : nullptr;
  j["w11"] = report.w11;
  j["w_inf"] = report.w_inf;
  j["l1"] = report.l1;
  j["l1_per_n2_x100"] = report.l1_per_n2_x100;
  j["l2"] = report.l2;
  j["linf"] = report.linf;
  j["wall_time_seconds"] = report.wall_time_seconds;
  return j;
}

nlohmann::ordered_json to_json(const StabilityResult& result) {
  return {{"repetitions", result.repetitions},
          {"differing_counts", result.differing_counts},
          {"mean_differing_count", result.mean},
          {"reference_selection", result.reference_selection}};
}

void write_ranking(std::ostream& out, const FeatureRanking& ranking) {
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const std::size_t f = ranking.order[r];
    out << (r + 1) << ' ' << f << ' ' << fmt(ranking.scores[f]) << ' ' << ranking.counts[f] << '\n';
  }
}

std::vector<std::size_t> read_ranking(std::istream& in, std::size_t feature_count) {
  std::vector<std::size_t> features;
  std::set<std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 1 && tokens.size() != 4) {
      throw ParseError("ranking line must hold 1 or 4 fields", line_no);
    }
    const std::string& token = tokens.size() == 1 ? tokens[0] : tokens[1];
    std::size_t f = 0;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(token, &used);
      if (used != token.size() || token.front() == '-') throw std::invalid_argument(token);
      f = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ParseError("invalid feature index '" + token + "'", line_no);
    }
    if (f >= feature_count) {
      throw InvalidSelection("ranking names feature " + std::to_string(f) + " but the data has " +
                             std::to_string(feature_count) + " features");
    }
    if (!seen.insert(f).second) throw InvalidSelection("ranking lists feature " + std::to_string(f) + " twice");
    features.push_back(f);
  }
  return features;
}

void write_grid_csv(std::ostream& out, std::span<const GridCell> cells) {
  const bool per_seed = !cells.empty() && cells.front().repetitions.size() > 1;
  const bool has_knn = !cells.empty() && cells.front().report.knn_accuracy.has_value();
  out << "k,d_tilde,n_tilde,d0,score,seed";
  if (has_knn) out << ",knn_accuracy";
  for (const auto& m : kMetrics) out << ',' << m.name;
  out << ",wall_time_seconds";
  if (per_seed) {
    for (const auto& seed : cells.front().seeds) {
      if (has_knn) out << ",knn_accuracy_s" << seed;
      for (const auto& m : kMetrics) out << ',' << m.name << "_s" << seed;
    }
  }
  out << '\n';
  for (const auto& cell : cells) {
    write_config_fields(out, cell.config);
    if (has_knn) out << ',' << fmt(cell.report.knn_accuracy.value_or(0.0));
    for (const auto& m : kMetrics) out << ',' << fmt(m.get(cell.report));
    out << ',' << fmt(cell.report.wall_time_seconds);
    if (per_seed) {
      for (const auto& rep : cell.repetitions) {
        if (has_knn) out << ',' << fmt(rep.knn_accuracy.value_or(0.0));
        for (const auto& m : kMetrics) out << ',' << fmt(m.get(rep));
      }
    }
    out << '\n';
  }
}

void write_stability_csv(std::ostream& out, const IvfsConfig& config, const StabilityResult& result) {
  out << "k,d_tilde,n_tilde,d0,score,seed,repetitions,differing_count";
  for (std::size_t r = 0; r < result.differing_counts.size(); ++r) out << ",differing_r" << (r + 1);
  out << '\n';
  write_config_fields(out, config);
  out << ',' << result.repetitions << ',' << fmt(result.mean);
  for (std::size_t c : result.differing_counts) out << ',' << c;
  out << '\n';
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace ivfs::report
