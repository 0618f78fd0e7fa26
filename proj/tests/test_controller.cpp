#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "adaptrack/controller.hpp"
#include "adaptrack/synth.hpp"

using namespace adaptrack;

namespace {

ContextSignature sig_of(std::initializer_list<double> levels) {
  std::vector<FeatureVec> frames;
  for (double v : levels) frames.push_back(FeatureVec::Constant(v));
  return window_signature(frames, 0.1);
}

LearnedDatabase db_with(std::vector<std::pair<ContextSignature, Weights5>> entries) {
  LearnedDatabase db;
  int id = 0;
  for (auto& [sig, w] : entries) {
    ClusterEntry e;
    e.id = id++;
    e.signature = sig;
    e.signature.window.clear();
    e.params = TrackerParams(w, 10);
    db.clusters.push_back(std::move(e));
  }
  return db;
}

Eigen::VectorXd spiky(int bin) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(16);
  h[bin] = 1.0;
  return h;
}

Detection make_det(int frame, double cx, double cy, int color) {
  Detection d;
  d.frame = frame;
  d.bbox = {cx - 5, cy - 5, 10, 10};
  d.appearance.histogram = spiky(color);
  d.appearance.covariance = Eigen::Matrix3d::Identity();
  d.appearance.dominant_colors = dominant_colors_from_histogram(d.appearance.histogram);
  d.appearance.contrast = 0.6;
  return d;
}

// Two objects converge and exchange appearances at the meeting frame; with
// histogram-heavy weights the tracker follows the colors, so both track ids
// reverse direction there. The turn spike plus the meeting-frame interaction
// raises a deterministic alarm shortly after.
std::vector<std::vector<Detection>> swap_scene(int frames, int meet) {
  std::vector<std::vector<Detection>> scene(frames);
  for (int f = 0; f < frames; ++f) {
    const double xa = 20.0 + 3.0 * f;
    const double xb = 20.0 + 3.0 * (2 * meet - f);
    const int color_a = f < meet ? 0 : 9;
    const int color_b = f < meet ? 9 : 0;
    scene[f].push_back(make_det(f, xa, 40, color_a));
    scene[f].push_back(make_det(f, xb, 40, color_b));
  }
  return scene;
}

TrackerParams hist_params() {
  Weights5 w;
  w << 0, 0, 1, 0, 0;
  return TrackerParams(w, 10);
}

}  // namespace

TEST_CASE("match_cluster picks the minimum distance under th3") {
  // window drawn from level 0.5; cluster 0 covers 3 of 5 frames, cluster 1
  // covers 2 of 5 -> distances 0.4 and 0.6
  std::vector<FeatureVec> frames;
  const double levels[5] = {0.05, 0.27, 0.49, 0.71, 0.93};
  for (double v : levels) frames.push_back(FeatureVec::Constant(v));
  const ContextSignature window = window_signature(frames, 0.1);

  LearnedDatabase db = db_with({{sig_of({0.05, 0.27, 0.49}), Weights5::Constant(0.2)},
                                {sig_of({0.05, 0.27}), Weights5::Constant(0.2)}});
  CHECK(context_distance(window, db.clusters[0].signature) == doctest::Approx(0.4));
  CHECK(context_distance(window, db.clusters[1].signature) == doctest::Approx(0.6));

  const ClusterEntry* hit = match_cluster(window, db, 0.5);
  REQUIRE(hit != nullptr);
  CHECK(hit->id == 0);

  // all distances at or above th3 -> none
  CHECK(match_cluster(window, db, 0.4) == nullptr);

  // exact signature match -> distance zero wins
  db.clusters.push_back({2, sig_of({0.05, 0.27, 0.49, 0.71, 0.93}), hist_params(), {}});
  db.clusters.back().signature.window.clear();
  const ClusterEntry* exact = match_cluster(window, db, 0.5);
  REQUIRE(exact != nullptr);
  CHECK(exact->id == 2);

  const LearnedDatabase empty;
  CHECK(match_cluster(window, empty, 0.5) == nullptr);
}

TEST_CASE("match_cluster agrees with an exhaustive scan") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<FeatureVec> wf;
    for (int i = 0; i < 8; ++i) {
      FeatureVec v;
      for (int f = 0; f < 6; ++f) v[f] = u(rng);
      wf.push_back(v);
    }
    const ContextSignature window = window_signature(wf, 0.1);

    LearnedDatabase db;
    const int clusters = 1 + static_cast<int>(u(rng) * 6);
    for (int c = 0; c < clusters; ++c) {
      std::vector<FeatureVec> cf;
      const int n = 1 + static_cast<int>(u(rng) * 6);
      for (int i = 0; i < n; ++i) {
        FeatureVec v;
        for (int f = 0; f < 6; ++f) v[f] = u(rng);
        cf.push_back(v);
      }
      ClusterEntry e;
      e.id = c;
      e.signature = window_signature(cf, 0.1);
      e.signature.window.clear();
      e.params = TrackerParams(Weights5::Constant(0.2), 10);
      db.clusters.push_back(std::move(e));
    }
    const double th3 = 0.2 + 0.6 * u(rng);

    const ClusterEntry* got = match_cluster(window, db, th3);

    const ClusterEntry* want = nullptr;
    double best = th3;
    for (const ClusterEntry& c : db.clusters) {
      const double d = context_distance(window, c.signature);
      if (d < best) {
        best = d;
        want = &c;
      }
    }
    CHECK(got == want);
  }
}

TEST_CASE("quiet scene: no alarms, parameters never change") {
  LearnedDatabase db = db_with({{sig_of({0.5}), Weights5(Weights5::Constant(0.2))}});
  Weights5 w0;
  w0 << 0, 0, 1, 0, 0;
  Controller ctl(320, 240, TrackerParams(w0, 10), &db, ControllerConfig{});
  for (int f = 0; f < 60; ++f) {
    std::vector<Detection> dets{make_det(f, 30.0 + f, 40, 0),
                                make_det(f, 280.0 - f, 200, 9)};
    const ControlRecord rec = ctl.step(f, dets);
    CHECK(rec.alarm == false);
    CHECK(rec.tuned == false);
    CHECK(rec.weights == w0);
  }
  CHECK(ctl.summary().tuning_events == 0);
  CHECK(ctl.summary().unmatched_windows == 0);
}

TEST_CASE("appearance swap raises an alarm; empty database marks the window") {
  const auto scene = swap_scene(30, 12);
  LearnedDatabase empty;
  Controller ctl(320, 240, hist_params(), &empty, ControllerConfig{});
  int alarms = 0, marked = 0;
  for (int f = 0; f < static_cast<int>(scene.size()); ++f) {
    const ControlRecord rec = ctl.step(f, scene[f]);
    alarms += rec.alarm ? 1 : 0;
    marked += rec.marked ? 1 : 0;
    CHECK(rec.tuned == false);
  }
  CHECK(alarms >= 1);
  CHECK(marked >= 1);
  CHECK(ctl.summary().unmatched_windows == marked);
}

TEST_CASE("alarm with a matching cluster retunes the tracker") {
  const auto scene = swap_scene(30, 12);

  // cluster matching the scene's own context, carrying different weights
  std::vector<FeatureVec> feats;
  for (const auto& dets : scene)
    feats.push_back(frame_features(dets, 320, 240, 1.5));
  ContextSignature cluster_sig = window_signature(feats, 0.1);
  cluster_sig.window.clear();
  Weights5 area_hot;
  area_hot << 0, 1, 0, 0, 0;
  LearnedDatabase db;
  db.clusters.push_back({0, cluster_sig, TrackerParams(area_hot, 10), {}});

  Controller ctl(320, 240, hist_params(), &db, ControllerConfig{});
  int tuned_at = -1;
  for (int f = 0; f < static_cast<int>(scene.size()); ++f) {
    const ControlRecord rec = ctl.step(f, scene[f]);
    if (rec.tuned && tuned_at < 0) {
      tuned_at = f;
      CHECK(rec.cluster_id == 0);
    }
    // parameters may change only on alarm frames with a match
    if (f > 0 && !rec.alarm) CHECK(rec.weights == ctl.log()[f - 1].weights);
  }
  REQUIRE(tuned_at >= 12);
  CHECK(ctl.tracker().params().w() == area_hot);
  CHECK(ctl.summary().tuning_events == 1);
}

TEST_CASE("cooldown spaces out parameter changes") {
  // two co-moving objects in adjacent lanes; color swaps at frames 12 and 40
  // make the tracks jump lanes, spiking speed and turn while interaction stays
  // high. The second alarm falls inside the cooldown.
  const int frames = 50;
  std::vector<std::vector<Detection>> scene(frames);
  for (int f = 0; f < frames; ++f) {
    const bool swapped = (f >= 12 && f < 40) ? true : false;
    const int top_color = swapped ? 9 : 0;
    scene[f].push_back(make_det(f, 20.0 + 3.0 * f, 40, top_color));
    scene[f].push_back(make_det(f, 20.0 + 3.0 * f, 52, 9 - top_color));
  }

  std::vector<FeatureVec> feats;
  for (const auto& dets : scene)
    feats.push_back(frame_features(dets, 320, 240, 1.5));
  ContextSignature cluster_sig = window_signature(feats, 0.1);
  cluster_sig.window.clear();
  Weights5 still_color;
  still_color << 0, 0, 0.5, 0, 0.5;  // different params, still color-driven
  LearnedDatabase db;
  db.clusters.push_back({0, cluster_sig, TrackerParams(still_color, 10), {}});

  ControllerConfig cfg;
  cfg.cooldown = 100;  // longer than the scene
  Controller ctl(320, 240, hist_params(), &db, cfg);
  int tunes = 0, suppressed_alarms = 0;
  std::vector<int> alarm_frames;
  for (int f = 0; f < frames; ++f) {
    const ControlRecord rec = ctl.step(f, scene[f]);
    tunes += rec.tuned ? 1 : 0;
    if (rec.alarm) alarm_frames.push_back(f);
    if (rec.alarm && !rec.attempted) ++suppressed_alarms;
  }
  CHECK(tunes == 1);
  REQUIRE(alarm_frames.size() >= 2);
  CHECK(alarm_frames.front() == 12);
  CHECK(suppressed_alarms >= 1);  // the frame-40 alarm fell inside the cooldown
}

TEST_CASE("controlled run with matching parameters equals the plain tracker") {
  const SceneSequence seq = generate(make_preset("crowded-crossing", 5));
  const TrackerParams params(Weights5(Weights5::Constant(0.2)), 10);

  LearnedDatabase db = db_with({{sig_of({0.2, 0.5, 0.8}), params.w()},
                                {sig_of({0.1}), params.w()}});
  const std::vector<Track> plain = run_tracker(seq, params);
  const ControlledRun controlled = run_controlled(seq, params, db, ControllerConfig{});

  REQUIRE(plain.size() == controlled.tracks.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(plain[i].id == controlled.tracks[i].id);
    REQUIRE(plain[i].observations.size() == controlled.tracks[i].observations.size());
    auto it = controlled.tracks[i].observations.begin();
    for (const auto& [f, d] : plain[i].observations) {
      CHECK(it->first == f);
      CHECK(it->second.bbox.x == d.bbox.x);
      CHECK(it->second.bbox.w == d.bbox.w);
      ++it;
    }
  }
}
