// adaptrack command line: scenario synthesis, offline learning, tracking with
// and without the online controller, and evaluation against ground truth.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adaptrack/controller.hpp"
#include "adaptrack/database.hpp"
#include "adaptrack/io.hpp"
#include "adaptrack/metrics.hpp"
#include "adaptrack/synth.hpp"
#include "adaptrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace adaptrack;

namespace {

constexpr const char* kFormatNotes = R"(File formats:
  manifest        JSON: {"name", "width", "height", "fps", "detections": csv,
                  "appearance": jsonl, "ground_truth": csv, "gt_appearance": jsonl}
  geometry csv    one row per box: frame,id,x,y,w,h,conf
                  (id -1 for detections, >= 1 for ground truth; conf optional)
  appearance      JSON lines keyed by (frame, det_index):
                  {"frame", "det_index", "hist": [..], "cov": [6 upper-triangle],
                   "dom": [[bin, weight] x3], "contrast"}
  tracks csv      frame,id,x,y,w,h (accepted anywhere a ground-truth csv is)
  learned db      versioned JSON with context code-books and descriptor weights
  control log     frame,alarm,cluster_id,w1..w5; cluster_id -1 none,
                  -2 unmatched window (marked for offline learning)
)";

Weights5 parse_weights(const std::string& csv) {
  Weights5 w;
  std::stringstream ss(csv);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 5) throw CLI::ValidationError("--w", "expected 5 comma-separated weights");
    w[i++] = std::stod(item);
  }
  if (i != 5) throw CLI::ValidationError("--w", "expected 5 comma-separated weights");
  return w;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "adaptrack: appearance-based multi-object tracking with offline-learned, "
      "online-adapted parameters"};
  app.footer(kFormatNotes);
  app.require_subcommand(1);

  // ---- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic scene (detections + ground truth) from a "
               "scenario JSON or a named preset");
  std::string synth_spec, synth_out = ".", synth_preset;
  std::uint64_t synth_seed = 0;
  bool synth_seed_set = false;
  synth->add_option("spec", synth_spec,
                    "scenario JSON (full spec or {\"preset\", \"seed\"})");
  synth->add_option("--preset", synth_preset,
                    "preset name instead of a spec file; one of: "
                    "appearance-stable/size-noisy, size-stable/appearance-noisy, "
                    "crowded-crossing, two-regime-benchmark");
  synth->add_option("-o,--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "override the scenario seed")
      ->each([&](const std::string&) { synth_seed_set = true; });

  // ---- learn ----------------------------------------------------------
  auto* learn = app.add_subcommand(
      "learn", "Offline phase: segment annotated sequences into context chunks, "
               "learn descriptor weights per chunk, cluster contexts, emit the "
               "learned database");
  std::vector<std::string> learn_manifests;
  std::string learn_out;
  LearnConfig learn_cfg;
  learn->add_option("manifests", learn_manifests, "sequence manifests with ground truth")
      ->required()
      ->expected(-1);
  learn->add_option("-o,--out", learn_out, "learned database JSON")->required();
  learn->add_option("--qt-diameter", learn_cfg.qt_diameter,
                    "QT clustering diameter (default 0.3)");
  learn->add_option("--rounds", learn_cfg.boost.rounds, "Adaboost rounds (default 50)");
  learn->add_option("--seed", learn_cfg.seed, "negative-pair sampling seed");
  learn->add_option("--temporal-window", learn_cfg.temporal_window,
                    "pairing window in frames (default 10)");
  learn->add_option("--negative-ratio", learn_cfg.negative_ratio,
                    "negative:positive cap (default 3)");

  // ---- track ----------------------------------------------------------
  auto* track = app.add_subcommand("track", "Run the tracker with fixed weights");
  std::string track_manifest, track_out, track_w;
  double track_gate = 0.3;
  int track_window = TrackerParams::kDefaultTemporalWindow;
  track->add_option("manifest", track_manifest, "sequence manifest")->required();
  track->add_option("-o,--out", track_out, "output tracks CSV")->required();
  track->add_option("--w", track_w, "five descriptor weights w1,w2,w3,w4,w5 "
                                    "(shape ratio, area, histogram, covariance, "
                                    "dominant color); default uniform");
  track->add_option("--gate", track_gate, "association score gate (default 0.3)");
  track->add_option("--temporal-window", track_window,
                    "lost-track revival window in frames (default 10)");

  // ---- control --------------------------------------------------------
  auto* control = app.add_subcommand(
      "control", "Run the tracker under the online controller: evaluate quality "
                 "each frame, on alarms match the recent context against the "
                 "learned database and retune the weights");
  std::string ctl_manifest, ctl_db, ctl_out, ctl_log, ctl_summary, ctl_scores, ctl_w;
  ControllerConfig ctl_cfg;
  double ctl_gate = 0.3;
  int ctl_window = TrackerParams::kDefaultTemporalWindow;
  control->add_option("manifest", ctl_manifest, "sequence manifest")->required();
  control->add_option("--db", ctl_db, "learned database JSON")->required();
  control->add_option("-o,--out", ctl_out, "output tracks CSV")->required();
  control->add_option("--log", ctl_log, "per-frame control log CSV");
  control->add_option("--summary", ctl_summary, "exit summary JSON");
  control->add_option("--scores", ctl_scores, "per-object quality scores CSV");
  control->add_option("--w", ctl_w, "initial weights (default uniform)");
  control->add_option("--th1", ctl_cfg.th1, "alarm threshold on I and E (default 0.2)");
  control->add_option("--th2", ctl_cfg.th2, "alarm threshold on dE (default 0.15)");
  control->add_option("--th3", ctl_cfg.th3, "context match threshold (default 0.5)");
  control->add_option("--n", ctl_cfg.window_n, "context window frames (default 50)");
  control->add_option("--cooldown", ctl_cfg.cooldown,
                      "min frames between parameter changes (default 50)");
  control->add_option("--gate", ctl_gate, "association score gate (default 0.3)");
  control->add_option("--temporal-window", ctl_window,
                      "lost-track revival window in frames (default 10)");

  // ---- evaluate -------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score tracks against a manifest's ground truth (MT/PT/ML and "
                  "CLEAR MOT)");
  std::string eval_tracks, eval_manifest, eval_json;
  double eval_iou = 0.5;
  bool eval_csv = false;
  evaluate->add_option("tracks", eval_tracks, "tracks CSV")->required();
  evaluate->add_option("manifest", eval_manifest, "sequence manifest with ground truth")
      ->required();
  evaluate->add_option("--iou", eval_iou, "match threshold (default 0.5)");
  evaluate->add_flag("--csv", eval_csv, "machine-readable row instead of the table");
  evaluate->add_option("-o,--json", eval_json, "also write the report as JSON");

  // ---- inspect-db -----------------------------------------------------
  auto* inspect = app.add_subcommand("inspect-db", "Summarize a learned database");
  std::string inspect_path;
  inspect->add_option("db", inspect_path, "learned database JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      ScenarioSpec spec;
      if (!synth_preset.empty())
        spec = make_preset(synth_preset, synth_seed_set ? synth_seed : 1);
      else if (!synth_spec.empty())
        spec = read_scenario(synth_spec);
      else
        throw std::runtime_error("synth: give a scenario JSON or --preset");
      if (synth_seed_set) spec.seed = synth_seed;
      const SceneSequence seq = generate(spec);
      const fs::path manifest = write_sequence(seq, synth_out);
      std::cout << manifest.string() << '\n';
      return 0;
    }

    if (learn->parsed()) {
      std::vector<std::pair<std::string, SceneSequence>> training;
      for (const std::string& m : learn_manifests) {
        LoadResult r = read_sequence(m);
        print_warnings(r.warnings);
        training.emplace_back(m, std::move(r.sequence));
      }
      LearnReport report;
      const LearnedDatabase db = build_database(training, learn_cfg, &report);
      print_warnings(report.warnings);
      write_db(db, learn_out);
      std::cout << "chunks used: " << report.chunks_used << "/" << report.chunks_total
                << ", clusters: " << db.clusters.size() << '\n';
      return 0;
    }

    if (track->parsed()) {
      LoadResult r = read_sequence(track_manifest);
      print_warnings(r.warnings);
      const TrackerParams params(
          track_w.empty() ? Weights5(Weights5::Constant(0.2)) : parse_weights(track_w),
          track_window);
      TrackerConfig cfg;
      cfg.gate = track_gate;
      const std::vector<Track> tracks = run_tracker(r.sequence, params, cfg);
      write_tracks_csv(tracks, track_out);
      std::cout << tracks.size() << " tracks\n";
      return 0;
    }

    if (control->parsed()) {
      LoadResult r = read_sequence(ctl_manifest);
      print_warnings(r.warnings);
      const LearnedDatabase db = read_db(ctl_db);
      const TrackerParams initial(
          ctl_w.empty() ? Weights5(Weights5::Constant(0.2)) : parse_weights(ctl_w),
          ctl_window);
      ctl_cfg.tracker.gate = ctl_gate;
      const ControlledRun run = run_controlled(r.sequence, initial, db, ctl_cfg,
                                               !ctl_scores.empty());
      write_tracks_csv(run.tracks, ctl_out);
      if (!ctl_log.empty()) write_control_log_csv(run.log, ctl_log);
      if (!ctl_summary.empty()) write_summary_json(run.summary, ctl_summary);
      if (!ctl_scores.empty()) write_scores_csv(run.scores, ctl_scores);
      std::cout << run.tracks.size() << " tracks, " << run.summary.alarms
                << " alarms, " << run.summary.tuning_events << " tuning events, "
                << run.summary.unmatched_windows << " unmatched windows\n";
      return 0;
    }

    if (evaluate->parsed()) {
      LoadResult r = read_sequence(eval_manifest);
      print_warnings(r.warnings);
      if (!r.sequence.ground_truth.has_value() || r.sequence.ground_truth->empty())
        throw std::runtime_error("evaluate: manifest has no ground truth");
      const std::vector<Track> tracks = read_tracks_csv(eval_tracks);
      const MetricsReport rep =
          evaluate_tracks(*r.sequence.ground_truth, tracks, eval_iou);
      std::cout << (eval_csv ? report_csv_row(rep) : report_table(rep));
      if (!eval_json.empty()) {
        std::ofstream out(eval_json);
        out << report_json(rep);
      }
      return 0;
    }

    if (inspect->parsed()) {
      const LearnedDatabase db = read_db(inspect_path);
      std::cout << "version " << db.version << ", " << db.clusters.size()
                << " clusters, qt_diameter " << db.config.qt_diameter << ", rounds "
                << db.config.boost.rounds << ", seed " << db.config.seed << "\n";
      for (const ClusterEntry& c : db.clusters) {
        std::cout << "cluster " << c.id << ": frames " << c.signature.frame_count
                  << ", w = [";
        for (int k = 0; k < 5; ++k)
          std::cout << (k ? ", " : "") << fmt_g9(c.params.w()[k]);
        std::cout << "], chunks:";
        for (const ChunkProvenance& p : c.provenance)
          std::cout << ' ' << p.video << "[" << p.start << ".." << p.end << "]";
        std::cout << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
