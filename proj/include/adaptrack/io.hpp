#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adaptrack/controller.hpp"
#include "adaptrack/database.hpp"
#include "adaptrack/metrics.hpp"
#include "adaptrack/synth.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

/// Shortest stable float formatting used by every writer: %.9g. Parsing a
/// written value and formatting it again reproduces the same bytes.
std::string fmt_g9(double v);

struct LoadResult {
  SceneSequence sequence;
  std::vector<std::string> warnings;
};

/// Loads a sequence from its manifest. Missing appearance files fall back to
/// neutral appearance with a warning; malformed rows and invariant violations
/// throw with the file name and line number.
LoadResult read_sequence(const std::filesystem::path& manifest_path);

/// Writes manifest, geometry CSVs and appearance sidecars under out_dir.
/// Returns the manifest path.
std::filesystem::path write_sequence(const SceneSequence& seq,
                                     const std::filesystem::path& out_dir);

/// Geometry rows grouped into tracks; accepts 6 or 7 column rows.
std::vector<Track> read_tracks_csv(const std::filesystem::path& path);
void write_tracks_csv(std::span<const Track> tracks,
                      const std::filesystem::path& path);

LearnedDatabase read_db(const std::filesystem::path& path);
void write_db(const LearnedDatabase& db, const std::filesystem::path& path);

ScenarioSpec read_scenario(const std::filesystem::path& path);
void write_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

void write_control_log_csv(std::span<const ControlRecord> log,
                           const std::filesystem::path& path);
void write_scores_csv(std::span<const QualityScores> scores,
                      const std::filesystem::path& path);
void write_summary_json(const ControlSummary& summary,
                        const std::filesystem::path& path);

std::string report_table(const MetricsReport& rep);
std::string report_csv_row(const MetricsReport& rep);
std::string report_json(const MetricsReport& rep);

}  // namespace adaptrack
