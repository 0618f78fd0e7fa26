#include "adaptrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace adaptrack {

void ScenarioSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("scenario: bad frame size");
  if (duration <= 0) throw std::invalid_argument("scenario: non-positive duration");
  if (fps <= 0) throw std::invalid_argument("scenario: non-positive fps");

  if (regimes.empty()) throw std::invalid_argument("scenario: no regimes");
  int expect = 0;
  for (const RegimeSpec& r : regimes) {
    if (r.start != expect)
      throw std::invalid_argument("scenario: regimes must tile the duration");
    if (r.end < r.start) throw std::invalid_argument("scenario: regime end before start");
    for (double rate : {r.appearance_noise, r.size_noise, r.miss_rate, r.jitter,
                        r.contrast_noise}) {
      if (rate < 0.0 || rate > 1.0)
        throw std::invalid_argument("scenario: regime rates must be in [0,1]");
    }
    expect = r.end + 1;
  }
  if (expect != duration)
    throw std::invalid_argument("scenario: regimes must tile the duration");

  for (const ObjectSpec& o : objects) {
    if (o.waypoints.empty()) throw std::invalid_argument("scenario: object without waypoints");
    if (o.width <= 0 || o.height <= 0)
      throw std::invalid_argument("scenario: non-positive object size");
    if (o.contrast < 0.0 || o.contrast > 1.0)
      throw std::invalid_argument("scenario: contrast out of range");
    int prev = -1;
    for (const Waypoint& wp : o.waypoints) {
      if (wp.frame < 0 || wp.frame >= duration)
        throw std::invalid_argument("scenario: waypoint outside the duration");
      if (wp.frame <= prev && prev >= 0)
        throw std::invalid_argument("scenario: waypoint frames must ascend");
      prev = wp.frame;
    }
    if (o.histogram.size() < 2 || std::abs(o.histogram.sum() - 1.0) > 1e-6)
      throw std::invalid_argument("scenario: histogram must sum to 1");
  }
}

namespace {

std::pair<double, double> position_at(const ObjectSpec& o, int frame) {
  const auto& wp = o.waypoints;
  if (frame <= wp.front().frame) return {wp.front().x, wp.front().y};
  if (frame >= wp.back().frame) return {wp.back().x, wp.back().y};
  for (std::size_t k = 0; k + 1 < wp.size(); ++k) {
    if (frame > wp[k + 1].frame) continue;
    const double span = wp[k + 1].frame - wp[k].frame;
    const double t = (frame - wp[k].frame) / span;
    return {wp[k].x + t * (wp[k + 1].x - wp[k].x),
            wp[k].y + t * (wp[k + 1].y - wp[k].y)};
  }
  return {wp.back().x, wp.back().y};
}

BBox centered_box(double cx, double cy, double w, double h, int W, int H) {
  w = std::min(w, static_cast<double>(W));
  h = std::min(h, static_cast<double>(H));
  double x = cx - 0.5 * w;
  double y = cy - 0.5 * h;
  x = std::clamp(x, 0.0, W - w);
  y = std::clamp(y, 0.0, H - h);
  return {x, y, w, h};
}

// Spiky random histogram: squared exponential draws concentrate mass on a few
// bins, so two independent samples intersect weakly.
Eigen::VectorXd random_histogram(std::mt19937_64& rng, Eigen::Index bins) {
  std::exponential_distribution<double> exp1(1.0);
  Eigen::VectorXd h(bins);
  for (Eigen::Index i = 0; i < bins; ++i) {
    const double e = exp1(rng);
    h[i] = e * e + 1e-9;
  }
  h /= h.sum();
  return h;
}

Eigen::Matrix3d psd_project(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (m + m.transpose()));
  Eigen::Vector3d ev = es.eigenvalues().cwiseMax(1e-9);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Appearance observe_appearance(const ObjectSpec& o, const RegimeSpec& reg,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double a = reg.appearance_noise;

  Appearance app;
  const Eigen::VectorXd noise = random_histogram(rng, o.histogram.size());
  app.histogram = (1.0 - a) * o.histogram + a * noise;
  app.dominant_colors = dominant_colors_from_histogram(app.histogram);

  Eigen::Matrix3d sym;
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) sym(r, c) = sym(c, r) = 0.4 * gauss(rng);
  app.covariance = psd_project(o.covariance + a * sym);

  app.contrast = std::clamp(o.contrast + reg.contrast_noise * gauss(rng), 0.0, 1.0);
  return app;
}

}  // namespace

SceneSequence generate(const ScenarioSpec& spec) {
  spec.validate();

  SceneSequence seq;
  seq.name = spec.name;
  seq.frame_width = spec.width;
  seq.frame_height = spec.height;
  seq.fps = spec.fps;
  seq.detections_by_frame.resize(spec.duration);

  std::vector<Track> gt(spec.objects.size());
  for (std::size_t i = 0; i < spec.objects.size(); ++i)
    gt[i].id = static_cast<int>(i) + 1;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::size_t regime_idx = 0;
  for (int frame = 0; frame < spec.duration; ++frame) {
    while (spec.regimes[regime_idx].end < frame) ++regime_idx;
    const RegimeSpec& reg = spec.regimes[regime_idx];

    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const ObjectSpec& obj = spec.objects[i];
      if (frame < obj.waypoints.front().frame || frame > obj.waypoints.back().frame)
        continue;

      const auto [cx, cy] = position_at(obj, frame);
      const Appearance app = observe_appearance(obj, reg, rng);

      Detection gd;
      gd.frame = frame;
      gd.bbox = centered_box(cx, cy, obj.width, obj.height, spec.width, spec.height);
      gd.confidence = 1.0;
      gd.appearance = app;
      gt[i].observations.emplace(frame, gd);

      // detector noise; draws happen before the miss gate so the stream shape
      // stays fixed per object-frame
      const double jx = gauss(rng) * reg.jitter * gd.bbox.diagonal();
      const double jy = gauss(rng) * reg.jitter * gd.bbox.diagonal();
      const double sw = 1.0 + gauss(rng) * reg.size_noise;
      const double sh = 1.0 + gauss(rng) * reg.size_noise;
      const double conf_dip = std::abs(gauss(rng)) * (reg.jitter + 0.5 * reg.size_noise);
      const bool missed = unif(rng) < reg.miss_rate;
      if (missed) continue;

      Detection det;
      det.frame = frame;
      det.bbox = centered_box(cx + jx, cy + jy, std::max(2.0, obj.width * sw),
                              std::max(2.0, obj.height * sh), spec.width, spec.height);
      det.confidence = std::clamp(1.0 - conf_dip, 0.5, 1.0);
      det.appearance = app;
      seq.detections_by_frame[frame].push_back(std::move(det));
    }
  }

  std::vector<Track> nonempty;
  for (Track& t : gt)
    if (!t.empty()) nonempty.push_back(std::move(t));
  seq.ground_truth = std::move(nonempty);
  return seq;
}

namespace {

constexpr int kBins = kDefaultHistogramBins;

// Spiky two-bin histogram drawing from bins outside `used`, so objects that
// may interact keep disjoint color support.
Eigen::VectorXd spiky_histogram(std::mt19937_64& rng, std::vector<int>& used) {
  std::uniform_int_distribution<int> pick(0, kBins - 1);
  auto fresh = [&]() {
    int b = pick(rng);
    while (std::find(used.begin(), used.end(), b) != used.end()) b = (b + 1) % kBins;
    used.push_back(b);
    return b;
  };
  const int b1 = fresh();
  const int b2 = fresh();
  Eigen::VectorXd h = Eigen::VectorXd::Constant(kBins, 0.06 / (kBins - 2));
  h[b1] = 0.0;
  h[b2] = 0.0;
  h[b1] += 0.62 + 0.06 / (kBins - 2);
  h[b2] += 0.32 + 0.06 / (kBins - 2);
  return h / h.sum();
}

Eigen::Matrix3d base_covariance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity() * (1.0 + 0.1 * unif(rng));
  const double off = 0.05 * unif(rng);
  m(0, 1) = m(1, 0) = off;
  return m;
}

struct SceneBuilder {
  ScenarioSpec spec;
  std::mt19937_64 rng;
  std::vector<int> used_bins;

  SceneBuilder(std::string name, int duration, std::uint64_t seed) : rng(seed) {
    spec.name = std::move(name);
    spec.duration = duration;
    spec.seed = seed;
  }

  double unif(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  // Interacting objects must keep disjoint dominant bins; callers reserve the
  // bins a whole group needs so the pool never resets mid-pair.
  void reserve_bins(int objects) {
    if (used_bins.size() + 2 * static_cast<std::size_t>(objects) >
        static_cast<std::size_t>(kBins))
      used_bins.clear();
  }

  ObjectSpec object(double w, double h, double contrast) {
    ObjectSpec o;
    o.width = w;
    o.height = h;
    o.histogram = spiky_histogram(rng, used_bins);
    o.covariance = base_covariance(rng);
    o.contrast = std::clamp(contrast, 0.05, 0.95);
    return o;
  }

  // Two objects crossing at cross_frame with a small vertical offset; the
  // first runs left-to-right at constant height.
  void add_crossing_pair(int enter, int life, bool equal_sizes,
                         double contrast_lo, double contrast_hi,
                         int cross_frame = -1) {
    reserve_bins(2);
    const double W = spec.width, H = spec.height;
    const int exit = std::min(enter + life, spec.duration - 1);
    const int tc = cross_frame > enter && cross_frame < exit
                       ? cross_frame
                       : (enter + exit) / 2;
    const double y = unif(60.0, H - 60.0);

    double w1, h1, w2, h2;
    if (equal_sizes) {
      w1 = unif(24.0, 28.0);
      h1 = unif(34.0, 40.0);
      w2 = w1 + 1.5;
      h2 = h1 + 1.5;
    } else {
      w1 = unif(22.0, 26.0);
      h1 = unif(30.0, 34.0);
      w2 = unif(40.0, 46.0);
      h2 = unif(56.0, 64.0);
    }

    ObjectSpec o1 = object(w1, h1, unif(contrast_lo, contrast_hi));
    const double xl = 30.0, xr = W - 30.0;
    auto x1_at = [&](int t) {
      return xl + (xr - xl) * (t - enter) / static_cast<double>(exit - enter);
    };
    o1.waypoints = {{enter, x1_at(enter), y}, {exit, x1_at(exit), y}};

    ObjectSpec o2 = object(w2, h2, unif(contrast_lo, contrast_hi));
    const double xc = x1_at(tc);
    const double approach = std::clamp(xc + 2.6 * (tc - enter), 40.0, W - 25.0);
    const double depart = std::clamp(xc - 2.6 * (exit - tc), 25.0, W - 40.0);
    o2.waypoints = {{enter, approach, y + 18.0},
                    {tc, xc, y + 12.0},
                    {exit, depart, y + 7.0}};

    spec.objects.push_back(std::move(o1));
    spec.objects.push_back(std::move(o2));
  }

  // Box size for one rung of the scene-global area ladder. Areas grow by 4/3
  // per rung with a fixed aspect, keeping every concurrent object resolvable
  // by the area descriptor alone.
  static std::pair<double, double> ladder_size(int rung) {
    const double area = 1600.0 * std::pow(4.0 / 3.0, rung);
    const double aspect = 1.6;  // h / w, shared so shape stays uninformative
    return {std::sqrt(area / aspect), std::sqrt(area * aspect)};
  }

  // A lone object strolling a reserved top lane for the whole interval; keeps
  // every frame populated so context books never absorb empty-frame zeros.
  void add_wanderer(int enter, int exit, double w, double h, double contrast_lo,
                    double contrast_hi) {
    reserve_bins(1);
    const double W = spec.width;
    ObjectSpec o = object(w, h, unif(contrast_lo, contrast_hi));
    const double y = 26.0;
    const bool rightward = unif(0.0, 1.0) < 0.5;
    const double x0 = rightward ? 20.0 + 0.5 * w : W - 20.0 - 0.5 * w;
    const double x1 = rightward ? W - 20.0 - 0.5 * w : 20.0 + 0.5 * w;
    o.waypoints = {{enter, x0, y}, {exit, x1, y}};
    spec.objects.push_back(std::move(o));
  }

  // Three co-moving objects with constant partial overlap, ladder sizes.
  void add_convoy(int enter, int life, const int rungs[3], double contrast_lo,
                  double contrast_hi) {
    reserve_bins(3);
    const double W = spec.width, H = spec.height;
    const int exit = std::min(enter + life, spec.duration - 1);
    const double y = unif(80.0, H - 80.0);
    const bool rightward = unif(0.0, 1.0) < 0.5;
    const double travel = std::min(150.0, W - 160.0);
    const double x0 = rightward ? 60.0 : W - 60.0;
    const double x1 = rightward ? x0 + travel : x0 - travel;

    const double drift = unif(-8.0, 8.0);
    double off = 0.0;
    double prev_w = 0.0;
    for (int m = 0; m < 3; ++m) {
      const auto [w, h] = ladder_size(rungs[m]);
      if (m > 0) off += 0.5 * (prev_w + w) - 0.35 * std::min(prev_w, w);
      prev_w = w;
      ObjectSpec o = object(w, h, unif(contrast_lo, contrast_hi));
      const double o_off = rightward ? off : -off;
      o.waypoints = {{enter, x0 + o_off, y}, {exit, x1 + o_off, y + drift}};
      spec.objects.push_back(std::move(o));
    }
  }

  // Crossing pair with ladder sizes (regime B style).
  void add_ladder_pair(int enter, int life, int rung_a, int rung_b,
                       double contrast_lo, double contrast_hi) {
    reserve_bins(2);
    const double W = spec.width, H = spec.height;
    const int exit = std::min(enter + life, spec.duration - 1);
    const int tc = (enter + exit) / 2;
    const double y = unif(80.0, H - 80.0);
    const auto [w1, h1] = ladder_size(rung_a);
    const auto [w2, h2] = ladder_size(rung_b);

    ObjectSpec o1 = object(w1, h1, unif(contrast_lo, contrast_hi));
    const double xl = 40.0, xr = W - 40.0;
    auto x1_at = [&](int t) {
      return xl + (xr - xl) * (t - enter) / static_cast<double>(exit - enter);
    };
    o1.waypoints = {{enter, x1_at(enter), y}, {exit, x1_at(exit), y}};

    ObjectSpec o2 = object(w2, h2, unif(contrast_lo, contrast_hi));
    const double xc = x1_at(tc);
    const double approach = std::clamp(xc + 2.4 * (tc - enter), 50.0, W - 35.0);
    const double depart = std::clamp(xc - 2.4 * (exit - tc), 35.0, W - 50.0);
    o2.waypoints = {{enter, approach, y + 20.0},
                    {tc, xc, y + 13.0},
                    {exit, depart, y + 8.0}};

    spec.objects.push_back(std::move(o1));
    spec.objects.push_back(std::move(o2));
  }
};

// appearance-stable/size-noisy: stable distinct colors, confusable noisy boxes
RegimeSpec regime_appearance_stable(int start, int end) {
  RegimeSpec r;
  r.start = start;
  r.end = end;
  r.appearance_noise = 0.04;
  r.size_noise = 0.2;
  r.miss_rate = 0.02;
  r.jitter = 0.04;
  r.contrast_noise = 0.015;
  return r;
}

// size-stable/appearance-noisy: scrambled colors, exactly stable boxes. Exact
// sizes mean stale fragments of one object tie exactly on the area score, so
// the assignment's deterministic rank preference retires duplicates quickly.
RegimeSpec regime_size_stable(int start, int end) {
  RegimeSpec r;
  r.start = start;
  r.end = end;
  r.appearance_noise = 0.93;
  r.size_noise = 0.0;
  r.miss_rate = 0.02;
  r.jitter = 0.02;
  r.contrast_noise = 0.15;
  return r;
}

constexpr double kContrastALo = 0.82, kContrastAHi = 0.88;
constexpr double kContrastBLo = 0.25, kContrastBHi = 0.65;

void populate_appearance_stable(SceneBuilder& b, int start, int end) {
  b.add_wanderer(start, end, 26, 38, kContrastALo, kContrastAHi);
  const int span = end - start + 1;
  const int life = 92;
  const int step = std::max(46, (span - life - 14) / 4);
  for (int k = 0; k < 5; ++k) {
    const int enter = start + 12 + k * step + static_cast<int>(b.unif(-5.0, 5.0));
    if (enter + life > end - 4) break;
    b.add_crossing_pair(enter, life, /*equal_sizes=*/true, kContrastALo, kContrastAHi);
  }
}

// One stationary population spanning the whole interval: a convoy, a crossing
// pair and a wanderer, every object on its own ladder rung. No churn keeps
// the context features (and so the learned code-books) compact.
void populate_size_stable(SceneBuilder& b, int start, int end) {
  b.add_wanderer(start, end, 18, 26, kContrastBLo, kContrastBHi);
  const int span = end - start;
  const int convoy_rungs[3] = {0, 2, 4};
  b.add_convoy(start, span, convoy_rungs, kContrastBLo, kContrastBHi);
  b.add_ladder_pair(start, span, 1, 5, kContrastBLo, kContrastBHi);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"appearance-stable/size-noisy", "size-stable/appearance-noisy",
          "crowded-crossing", "two-regime-benchmark"};
}

ScenarioSpec make_preset(const std::string& name, std::uint64_t seed) {
  if (name == "appearance-stable/size-noisy") {
    SceneBuilder b("appearance-stable-size-noisy", 300, seed);
    b.spec.regimes = {regime_appearance_stable(0, 299)};
    populate_appearance_stable(b, 0, 299);
    b.spec.validate();
    return b.spec;
  }
  if (name == "size-stable/appearance-noisy") {
    SceneBuilder b("size-stable-appearance-noisy", 300, seed);
    b.spec.regimes = {regime_size_stable(0, 299)};
    populate_size_stable(b, 0, 299);
    b.spec.validate();
    return b.spec;
  }
  if (name == "crowded-crossing") {
    SceneBuilder b("crowded-crossing", 300, seed);
    RegimeSpec r;
    r.start = 0;
    r.end = 299;
    r.appearance_noise = 0.15;
    r.size_noise = 0.06;
    r.miss_rate = 0.03;
    r.jitter = 0.03;
    r.contrast_noise = 0.05;
    b.spec.regimes = {r};
    const int rungs[3] = {0, 2, 4};
    b.add_convoy(10, 270, rungs, 0.4, 0.8);
    b.add_crossing_pair(20, 120, true, 0.4, 0.8);
    b.add_ladder_pair(90, 130, 1, 5, 0.4, 0.8);
    b.add_crossing_pair(160, 120, true, 0.4, 0.8);
    b.spec.validate();
    return b.spec;
  }
  if (name == "two-regime-benchmark") return make_two_regime_scenario(seed);
  throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

ScenarioSpec make_two_regime_scenario(std::uint64_t seed, int frames_per_regime) {
  const int n = frames_per_regime;
  SceneBuilder b("two-regime-benchmark", 2 * n, seed);
  b.spec.regimes = {regime_appearance_stable(0, n - 1),
                    regime_size_stable(n, 2 * n - 1)};
  // the same populations the single-regime presets train on, back to back
  populate_appearance_stable(b, 0, n - 1);
  populate_size_stable(b, n, 2 * n - 1);
  b.spec.validate();
  return b.spec;
}

}  // namespace adaptrack
