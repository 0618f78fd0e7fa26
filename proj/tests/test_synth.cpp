#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "adaptrack/database.hpp"
#include "adaptrack/io.hpp"
#include "adaptrack/metrics.hpp"
#include "adaptrack/quality.hpp"
#include "adaptrack/synth.hpp"
#include "adaptrack/tracker.hpp"

using namespace adaptrack;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool same_dir_bytes(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  for (const std::string& n : names) {
    if (!fs::exists(b / n)) return false;
    if (slurp(a / n) != slurp(b / n)) return false;
  }
  return true;
}

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "adaptrack_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("generation is deterministic: byte-identical files across runs") {
  const ScenarioSpec spec = make_two_regime_scenario(77);
  const fs::path d1 = tmp_dir("det1"), d2 = tmp_dir("det2");
  write_sequence(generate(spec), d1);
  write_sequence(generate(spec), d2);
  CHECK(same_dir_bytes(d1, d2));
}

TEST_CASE("zero noise makes detections equal ground truth") {
  ScenarioSpec spec = make_preset("appearance-stable/size-noisy", 3);
  for (RegimeSpec& r : spec.regimes) {
    r.appearance_noise = 0;
    r.size_noise = 0;
    r.miss_rate = 0;
    r.jitter = 0;
    r.contrast_noise = 0;
  }
  const SceneSequence seq = generate(spec);
  for (int f = 0; f < seq.frame_count(); ++f) {
    std::size_t gt_count = 0;
    for (const Track& t : *seq.ground_truth) {
      const Detection* g = t.at_frame(f);
      if (g == nullptr) continue;
      ++gt_count;
      bool found = false;
      for (const Detection& d : seq.detections_by_frame[f]) {
        if (d.bbox.x == g->bbox.x && d.bbox.y == g->bbox.y && d.bbox.w == g->bbox.w &&
            d.bbox.h == g->bbox.h && d.confidence == 1.0)
          found = true;
      }
      CHECK(found);
    }
    CHECK(seq.detections_by_frame[f].size() == gt_count);
  }

  // a noiseless scene is tracked perfectly with any sane weights
  const std::vector<Track> out = run_tracker(seq, TrackerParams{});
  const MetricsReport rep = evaluate_tracks(*seq.ground_truth, out, 0.5);
  CHECK(rep.mt == doctest::Approx(100.0));
  CHECK(rep.id_switches == 0);
}

TEST_CASE("miss rate one erases all detections") {
  ScenarioSpec spec = make_preset("appearance-stable/size-noisy", 3);
  for (RegimeSpec& r : spec.regimes) r.miss_rate = 1.0;
  const SceneSequence seq = generate(spec);
  for (const auto& frame : seq.detections_by_frame) CHECK(frame.empty());
  CHECK_FALSE(seq.ground_truth->empty());
}

TEST_CASE("preset library") {
  CHECK(preset_names().size() >= 3);
  for (const std::string& name : preset_names()) {
    const ScenarioSpec spec = make_preset(name, 11);
    CHECK(spec.duration > 0);
    CHECK_FALSE(spec.objects.empty());
  }
  CHECK_THROWS_AS(make_preset("no-such-preset", 1), std::invalid_argument);
}

TEST_CASE("ground-truth tracks are valid") {
  const SceneSequence seq = generate(make_two_regime_scenario(5));
  REQUIRE(seq.ground_truth.has_value());
  for (const Track& t : *seq.ground_truth) {
    CHECK_FALSE(t.empty());
    CHECK(t.id >= 1);
    int prev = -1;
    for (const auto& [f, d] : t.observations) {
      CHECK(f > prev);
      prev = f;
      CHECK(f < seq.frame_count());
      CHECK(d.bbox.w > 0);
      CHECK(d.bbox.h > 0);
      CHECK(d.bbox.x >= -1e-9);
      CHECK(d.bbox.right() <= seq.frame_width + 1e-9);
      CHECK(std::abs(d.appearance.histogram.sum() - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("crossing scenes contain a heavy occlusion frame") {
  const SceneSequence seq = generate(make_preset("crowded-crossing", 21));
  bool heavy = false;
  for (const Track& a : *seq.ground_truth) {
    for (const Track& b : *seq.ground_truth) {
      if (a.id >= b.id) continue;
      for (const auto& [f, da] : a.observations) {
        const Detection* db = b.at_frame(f);
        if (db != nullptr && occlusion_pair(da.bbox, db->bbox) >= 0.5) heavy = true;
      }
    }
  }
  CHECK(heavy);
}

TEST_CASE("invalid scenarios are rejected") {
  ScenarioSpec spec = make_preset("crowded-crossing", 1);
  spec.regimes[0].miss_rate = 1.5;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);

  spec = make_preset("crowded-crossing", 1);
  spec.regimes[0].end = spec.duration - 2;  // no longer tiles
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);

  spec = make_preset("crowded-crossing", 1);
  spec.objects[0].waypoints.push_back({spec.duration + 5, 10, 10});
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("learned weights go to appearance descriptors on the stable-appearance preset") {
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("a", generate(make_preset("appearance-stable/size-noisy", 41)));
  const LearnedDatabase db = build_database(training, LearnConfig{});
  REQUIRE(db.clusters.size() >= 1);
  const Weights5& w = db.clusters[0].params.w();
  CHECK(w[2] + w[4] >= 0.5);  // histogram + dominant color
}

TEST_CASE("learned weights go to geometry descriptors on the stable-size preset") {
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("b", generate(make_preset("size-stable/appearance-noisy", 41)));
  const LearnedDatabase db = build_database(training, LearnConfig{});
  REQUIRE(db.clusters.size() >= 1);
  const Weights5& w = db.clusters[0].params.w();
  CHECK(w[0] + w[1] >= 0.5);  // shape ratio + area
}

TEST_CASE("emitted files round-trip through ingestion unchanged") {
  const SceneSequence seq = generate(make_preset("size-stable/appearance-noisy", 13));
  const fs::path d1 = tmp_dir("rt1"), d2 = tmp_dir("rt2");
  const fs::path manifest = write_sequence(seq, d1);
  const LoadResult loaded = read_sequence(manifest);
  CHECK(loaded.warnings.empty());
  write_sequence(loaded.sequence, d2);
  CHECK(same_dir_bytes(d1, d2));
}
