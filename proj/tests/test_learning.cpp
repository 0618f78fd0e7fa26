#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "adaptrack/adaboost.hpp"
#include "adaptrack/database.hpp"
#include "adaptrack/qt_cluster.hpp"

using namespace adaptrack;

namespace {

Detection det(int frame, double x, double y, double w = 10, double h = 10) {
  Detection d;
  d.frame = frame;
  d.bbox = {x, y, w, h};
  d.appearance = Appearance::neutral();
  return d;
}

Track track_of(int id, std::initializer_list<Detection> dets) {
  Track t;
  t.id = id;
  for (const Detection& d : dets) t.observations.emplace(d.frame, d);
  return t;
}

// detections mirroring the ground truth, frame-grouped
std::vector<std::vector<Detection>> mirror(std::span<const Track> gt) {
  int frames = 0;
  for (const Track& t : gt) frames = std::max(frames, t.last_frame() + 1);
  std::vector<std::vector<Detection>> by_frame(frames);
  for (const Track& t : gt)
    for (const auto& [f, d] : t.observations) by_frame[f].push_back(d);
  return by_frame;
}

int count_label(const std::vector<LabeledPair>& pairs, int label) {
  int n = 0;
  for (const auto& p : pairs) n += p.label == label ? 1 : 0;
  return n;
}

// pairs with prescribed similarity structure: all descriptors equal except a
// chosen one that separates labels
LabeledPair synthetic_pair(int informative, bool positive, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Detection a = det(0, 0, 0), b = det(1, 0, 0);
  // shape/area identical by default (sim 1), histogram/cov/dom identical too
  switch (informative) {
    case 0:  // shape ratio separates
      b.bbox.h = positive ? a.bbox.h : a.bbox.h * 3.0;
      break;
    case 1:  // area separates, keep the ratio fixed
      if (!positive) {
        b.bbox.w = a.bbox.w * 2.0;
        b.bbox.h = a.bbox.h * 2.0;
      }
      break;
    case 2: {  // histogram separates
      if (!positive) {
        b.appearance.histogram.setZero();
        b.appearance.histogram[0] = 1.0;
        a.appearance.histogram.setZero();
        a.appearance.histogram[8] = 1.0;
      }
      // dominant colors kept identical so only the histogram is informative
      a.appearance.dominant_colors = Appearance::neutral().dominant_colors;
      b.appearance.dominant_colors = Appearance::neutral().dominant_colors;
      break;
    }
    case 3:  // covariance separates
      if (!positive) b.appearance.covariance = Eigen::Matrix3d::Identity() * 4.0;
      break;
    case 4:  // dominant color separates
      if (!positive) {
        a.appearance.dominant_colors = {{0, 0.5}, {1, 0.3}, {2, 0.2}};
        b.appearance.dominant_colors = {{9, 0.5}, {10, 0.3}, {11, 0.2}};
      }
      break;
  }
  // a pinch of uninformative variation elsewhere
  a.bbox.x = u(rng) * 50;
  b.bbox.x = u(rng) * 50;
  return {a, b, positive ? +1 : -1};
}

}  // namespace

TEST_CASE("make_pairs: one track, two close observations") {
  std::vector<Track> gt{track_of(1, {det(0, 10, 10), det(1, 12, 10)})};
  const auto pairs = make_pairs(gt, mirror(gt), 10, 1);
  CHECK(count_label(pairs, +1) == 1);
  CHECK(count_label(pairs, -1) == 0);
}

TEST_CASE("make_pairs: two parallel tracks of length two") {
  std::vector<Track> gt{track_of(1, {det(0, 10, 10), det(1, 12, 10)}),
                        track_of(2, {det(0, 80, 80), det(1, 82, 80)})};
  const auto pairs = make_pairs(gt, mirror(gt), 10, 1);
  CHECK(count_label(pairs, +1) == 2);
  // enumeration oracle: cross-id candidates = 2x2 = 4, under the 3x cap of 6
  CHECK(count_label(pairs, -1) == 4);
}

TEST_CASE("make_pairs: observations outside the window make no pair") {
  std::vector<Track> gt{track_of(1, {det(0, 10, 10), det(20, 12, 10)})};
  const auto pairs = make_pairs(gt, mirror(gt), 10, 1);
  CHECK(pairs.empty());
}

TEST_CASE("make_pairs caps negatives at the ratio") {
  std::vector<Track> gt;
  for (int id = 1; id <= 4; ++id) {
    Track t;
    t.id = id;
    for (int f = 0; f < 30; ++f)
      t.observations.emplace(f, det(f, id * 40.0, 10.0 + f));
    gt.push_back(std::move(t));
  }
  const auto pairs = make_pairs(gt, mirror(gt), 10, 1, 3.0);
  const int pos = count_label(pairs, +1);
  const int neg = count_label(pairs, -1);
  CHECK(pos == 4 * 29);
  CHECK(neg == 3 * pos);  // far more candidates exist, the cap binds
}

TEST_CASE("make_pairs is deterministic in the seed") {
  std::vector<Track> gt;
  for (int id = 1; id <= 3; ++id) {
    Track t;
    t.id = id;
    for (int f = 0; f < 20; ++f)
      t.observations.emplace(f, det(f, id * 50.0, 10.0 + 2 * f));
    gt.push_back(std::move(t));
  }
  const auto dets = mirror(gt);
  const auto p1 = make_pairs(gt, dets, 10, 99);
  const auto p2 = make_pairs(gt, dets, 10, 99);
  REQUIRE(p1.size() == p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].label == p2[i].label);
    CHECK(p1[i].a.frame == p2[i].a.frame);
    CHECK(p1[i].a.bbox.x == p2[i].a.bbox.x);
  }
}

TEST_CASE("adaboost gives the informative descriptor nearly all the weight") {
  std::mt19937_64 rng(21);
  for (int informative = 0; informative < 5; ++informative) {
    std::vector<LabeledPair> pairs;
    for (int i = 0; i < 60; ++i) {
      pairs.push_back(synthetic_pair(informative, true, rng));
      pairs.push_back(synthetic_pair(informative, false, rng));
    }
    const BoostResult res = adaboost_weights(pairs, BoostConfig{});
    CHECK(res.weights[informative] >= 0.9);
    CHECK(res.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((res.weights.array() >= 0.0).all());
    for (std::size_t r = 1; r < res.round_errors.size(); ++r)
      CHECK(res.round_errors[r] <= res.round_errors[r - 1] + 1e-12);
  }
}

TEST_CASE("adaboost requires both labels") {
  std::mt19937_64 rng(22);
  std::vector<LabeledPair> pairs;
  for (int i = 0; i < 10; ++i) pairs.push_back(synthetic_pair(2, true, rng));
  CHECK_THROWS_AS(adaboost_weights(pairs, BoostConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(adaboost_weights({}, BoostConfig{}), std::invalid_argument);
}

TEST_CASE("the paper's weight profile is a valid parameter vector") {
  Weights5 w;
  w << 0, 0, 0.72, 0, 0.28;
  const TrackerParams p(w, 10);
  CHECK(p.w()[2] == doctest::Approx(0.72));
  CHECK(p.w()[4] == doctest::Approx(0.28));
  CHECK(std::abs(p.w().sum() - 1.0) <= 1e-6);
}

TEST_CASE("qt clustering: identical points form one cluster") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
  const auto clusters = qt_cluster(d, 0.3);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].size() == 5);
}

TEST_CASE("qt clustering: single point is a singleton") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(1, 1);
  const auto clusters = qt_cluster(d, 0.3);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0] == std::vector<int>{0});
}

TEST_CASE("qt clustering recovers planted groups with an outlier") {
  // groups {0,1,2} and {3,4,5}, outlier 6; intra 0.1, inter 0.6
  const int n = 7;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 0.6);
  auto set_group = [&](std::initializer_list<int> g) {
    for (int i : g)
      for (int j : g) d(i, j) = i == j ? 0.0 : 0.1;
  };
  set_group({0, 1, 2});
  set_group({3, 4, 5});
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;

  const auto clusters = qt_cluster(d, 0.3);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[0] == std::vector<int>{0, 1, 2});
  CHECK(clusters[1] == std::vector<int>{3, 4, 5});
  CHECK(clusters[2] == std::vector<int>{6});

  // brute-force oracle: the largest subset with diameter <= 0.3 has size 3
  int best = 0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    double diam = 0.0;
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1 << i))) continue;
      ++size;
      for (int j = i + 1; j < n; ++j)
        if (mask & (1 << j)) diam = std::max(diam, d(i, j));
    }
    if (diam <= 0.3) best = std::max(best, size);
  }
  CHECK(best == static_cast<int>(clusters[0].size()));
}

TEST_CASE("qt clustering partitions and respects the diameter") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(u(rng) * 10);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
    const double diameter = 0.4;
    const auto clusters = qt_cluster(d, diameter);

    std::vector<int> seen(n, 0);
    for (const auto& c : clusters) {
      for (int i : c) seen[i] += 1;
      for (int i : c)
        for (int j : c) CHECK(d(i, j) <= diameter + 1e-12);
    }
    for (int i = 0; i < n; ++i) CHECK(seen[i] == 1);
  }
}

TEST_CASE("cluster params blend by chunk length") {
  Weights5 w1, w2;
  w1 << 1, 0, 0, 0, 0;
  w2 << 0, 1, 0, 0, 0;
  const TrackerParams p1(w1, 10), p2(w2, 10);

  const std::vector<std::pair<TrackerParams, int>> single{{p1, 100}};
  CHECK(cluster_params(single).w()[0] == doctest::Approx(1.0));

  const std::vector<std::pair<TrackerParams, int>> equal{{p1, 100}, {p2, 100}};
  const TrackerParams mixed = cluster_params(equal);
  CHECK(mixed.w()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mixed.w()[1] == doctest::Approx(0.5).epsilon(1e-12));

  const std::vector<std::pair<TrackerParams, int>> weighted{{p1, 100}, {p2, 300}};
  const TrackerParams blended = cluster_params(weighted);
  CHECK(blended.w()[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(blended.w()[1] == doctest::Approx(0.75).epsilon(1e-12));

  // idempotence on identical members
  const std::vector<std::pair<TrackerParams, int>> same{{p1, 50}, {p1, 200}};
  CHECK(cluster_params(same).w()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cluster_params({}), std::invalid_argument);
}
