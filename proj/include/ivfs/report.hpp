#ifndef IVFS_REPORT_HPP
#define IVFS_REPORT_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivfs/engine.hpp"
#include "ivfs/eval.hpp"

namespace ivfs::report {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::ordered_json to_json(const IvfsConfig& config);
nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const StabilityResult& result);

/// One line per feature in rank order: "rank feature_index score count",
/// rank starting at 1, score with 17 significant digits ("-inf" when never evaluated).
void write_ranking(std::ostream& out, const FeatureRanking& ranking);

/// Feature indices in rank order. Accepts the four-column ranking format or
/// one feature index per line; '#' starts a comment. Throws ParseError on
/// malformed lines and InvalidSelection on duplicates or indices >= feature_count.
std::vector<std::size_t> read_ranking(std::istream& in, std::size_t feature_count);

/// One row per grid cell: config fields, averaged metrics, then one column per
/// metric and repetition seed ("<metric>_s<seed>") when repeat > 1.
void write_grid_csv(std::ostream& out, std::span<const GridCell> cells);

/// Config fields, mean differing count, then one column per repetition.
void write_stability_csv(std::ostream& out, const IvfsConfig& config, const StabilityResult& result);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_now();

}  // namespace ivfs::report

#endif  // IVFS_REPORT_HPP
