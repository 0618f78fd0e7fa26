#include "adaptrack/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace adaptrack {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(const fs::path& file, std::size_t line, const std::string& what) {
  throw std::runtime_error(file.filename().string() + ":" + std::to_string(line) +
                           ": " + what);
}

[[noreturn]] void fail(const fs::path& file, const std::string& what) {
  throw std::runtime_error(file.filename().string() + ": " + what);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    fail(file, line, "malformed number '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const fs::path& file, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    fail(file, line, "malformed integer '" + s + "'");
  return v;
}

std::string read_trimmed_line(std::istream& in, bool& ok) {
  std::string line;
  ok = static_cast<bool>(std::getline(in, line));
  if (ok && !line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

struct GeomRow {
  std::size_t line = 0;
  int frame = 0;
  int id = 0;
  BBox bbox;
  double conf = 1.0;
};

std::vector<GeomRow> read_geometry_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::vector<GeomRow> rows;
  std::size_t lineno = 0;
  bool ok = true;
  while (true) {
    const std::string line = read_trimmed_line(in, ok);
    if (!ok) break;
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6 && f.size() != 7)
      fail(path, lineno, "expected 6 or 7 fields, got " + std::to_string(f.size()));
    GeomRow r;
    r.line = lineno;
    r.frame = static_cast<int>(parse_int(f[0], path, lineno));
    r.id = static_cast<int>(parse_int(f[1], path, lineno));
    r.bbox = {parse_double(f[2], path, lineno), parse_double(f[3], path, lineno),
              parse_double(f[4], path, lineno), parse_double(f[5], path, lineno)};
    r.conf = f.size() == 7 ? parse_double(f[6], path, lineno) : 1.0;
    if (r.frame < 0) fail(path, lineno, "negative frame index");
    if (!(r.bbox.w > 0.0) || !(r.bbox.h > 0.0))
      fail(path, lineno, "box width and height must be positive");
    if (r.conf < 0.0 || r.conf > 1.0)
      fail(path, lineno, "confidence outside [0,1]");
    rows.push_back(r);
  }
  return rows;
}

Eigen::Matrix3d covariance_from_upper(const std::array<double, 6>& u) {
  Eigen::Matrix3d m;
  m << u[0], u[1], u[2], u[1], u[3], u[4], u[2], u[4], u[5];
  return m;
}

std::array<double, 6> upper_from_covariance(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)};
}

void validate_appearance(const Appearance& a, const fs::path& file, std::size_t line) {
  if (a.histogram.size() < 1) fail(file, line, "empty histogram");
  if ((a.histogram.array() < 0.0).any())
    fail(file, line, "negative histogram bin");
  if (std::abs(a.histogram.sum() - 1.0) > 1e-6)
    fail(file, line, "histogram does not sum to 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a.covariance);
  if (es.eigenvalues().minCoeff() < -1e-7)
    fail(file, line, "covariance not positive semidefinite");
  double dom_sum = 0.0;
  for (const DominantColor& d : a.dominant_colors) {
    if (d.index < 0 || d.index >= a.histogram.size())
      fail(file, line, "dominant color index out of range");
    if (d.weight < 0.0) fail(file, line, "negative dominant color weight");
    dom_sum += d.weight;
  }
  if (!a.dominant_colors.empty() && std::abs(dom_sum - 1.0) > 1e-6)
    fail(file, line, "dominant color weights do not sum to 1");
  if (a.contrast < 0.0 || a.contrast > 1.0)
    fail(file, line, "contrast outside [0,1]");
}

using AppearanceMap = std::map<std::pair<int, int>, Appearance>;

AppearanceMap read_appearance_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  AppearanceMap out;
  std::size_t lineno = 0;
  bool ok = true;
  while (true) {
    const std::string line = read_trimmed_line(in, ok);
    if (!ok) break;
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(path, lineno, std::string("bad JSON: ") + e.what());
    }
    try {
      const int frame = j.at("frame").get<int>();
      const int det_index = j.at("det_index").get<int>();
      Appearance a;
      const auto& hist = j.at("hist");
      a.histogram.resize(static_cast<Eigen::Index>(hist.size()));
      for (std::size_t i = 0; i < hist.size(); ++i)
        a.histogram[static_cast<Eigen::Index>(i)] = hist[i].get<double>();
      const auto& cov = j.at("cov");
      if (cov.size() != 6) fail(path, lineno, "cov must have 6 entries");
      std::array<double, 6> u{};
      for (std::size_t i = 0; i < 6; ++i) u[i] = cov[i].get<double>();
      a.covariance = covariance_from_upper(u);
      for (const auto& d : j.at("dom")) {
        if (d.size() != 2) fail(path, lineno, "dom entries must be [index, weight]");
        a.dominant_colors.push_back({d[0].get<int>(), d[1].get<double>()});
      }
      a.contrast = j.at("contrast").get<double>();
      validate_appearance(a, path, lineno);
      if (!out.emplace(std::make_pair(frame, det_index), std::move(a)).second)
        fail(path, lineno, "duplicate (frame, det_index) record");
    } catch (const json::exception& e) {
      fail(path, lineno, std::string("bad appearance record: ") + e.what());
    }
  }
  return out;
}

void write_appearance_record(std::ofstream& out, int frame, int det_index,
                             const Appearance& a) {
  out << "{\"frame\":" << frame << ",\"det_index\":" << det_index << ",\"hist\":[";
  for (Eigen::Index i = 0; i < a.histogram.size(); ++i) {
    if (i) out << ',';
    out << fmt_g9(a.histogram[i]);
  }
  out << "],\"cov\":[";
  const auto u = upper_from_covariance(a.covariance);
  for (std::size_t i = 0; i < 6; ++i) {
    if (i) out << ',';
    out << fmt_g9(u[i]);
  }
  out << "],\"dom\":[";
  for (std::size_t i = 0; i < a.dominant_colors.size(); ++i) {
    if (i) out << ',';
    out << '[' << a.dominant_colors[i].index << ','
        << fmt_g9(a.dominant_colors[i].weight) << ']';
  }
  out << "],\"contrast\":" << fmt_g9(a.contrast) << "}\n";
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '-';
  return out.empty() ? "sequence" : out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

}  // namespace

LoadResult read_sequence(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) fail(manifest_path, "cannot open manifest");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    fail(manifest_path, std::string("bad JSON: ") + e.what());
  }

  LoadResult res;
  SceneSequence& seq = res.sequence;
  try {
    seq.name = m.value("name", std::string{});
    seq.frame_width = m.at("width").get<int>();
    seq.frame_height = m.at("height").get<int>();
    seq.fps = m.at("fps").get<double>();
  } catch (const json::exception& e) {
    fail(manifest_path, std::string("bad manifest: ") + e.what());
  }
  if (seq.frame_width <= 0 || seq.frame_height <= 0)
    fail(manifest_path, "frame dimensions must be positive");
  if (seq.fps <= 0.0) fail(manifest_path, "fps must be positive");

  const fs::path dir = manifest_path.parent_path();
  auto resolve = [&](const std::string& rel) { return dir / rel; };

  std::vector<GeomRow> det_rows, gt_rows;
  if (m.contains("detections"))
    det_rows = read_geometry_csv(resolve(m["detections"].get<std::string>()));
  else
    res.warnings.push_back("manifest lists no detections file");
  if (m.contains("ground_truth"))
    gt_rows = read_geometry_csv(resolve(m["ground_truth"].get<std::string>()));

  int frames = m.value("frames", 0);
  for (const GeomRow& r : det_rows) frames = std::max(frames, r.frame + 1);
  for (const GeomRow& r : gt_rows) frames = std::max(frames, r.frame + 1);
  seq.detections_by_frame.resize(frames);

  auto check_bounds = [&](const GeomRow& r, const fs::path& file) {
    if (r.bbox.x < -1e-6 || r.bbox.y < -1e-6 ||
        r.bbox.right() > seq.frame_width + 1e-6 ||
        r.bbox.bottom() > seq.frame_height + 1e-6)
      fail(file, r.line, "box outside frame bounds");
  };

  // appearance sidecars; absent files fall back to neutral
  AppearanceMap det_app, gt_app;
  bool have_det_app = false, have_gt_app = false;
  if (m.contains("appearance") &&
      fs::exists(resolve(m["appearance"].get<std::string>()))) {
    det_app = read_appearance_jsonl(resolve(m["appearance"].get<std::string>()));
    have_det_app = true;
  } else if (!det_rows.empty()) {
    res.warnings.push_back(
        "no appearance sidecar for detections, using neutral appearance");
  }
  if (m.contains("ground_truth")) {
    if (m.contains("gt_appearance") &&
        fs::exists(resolve(m["gt_appearance"].get<std::string>()))) {
      gt_app = read_appearance_jsonl(resolve(m["gt_appearance"].get<std::string>()));
      have_gt_app = true;
    } else if (!gt_rows.empty()) {
      res.warnings.push_back(
          "no appearance sidecar for ground truth, using neutral appearance");
    }
  }

  const fs::path det_file =
      m.contains("detections") ? resolve(m["detections"].get<std::string>()) : "";
  std::vector<int> det_index_in_frame(frames, 0);
  int missing_records = 0;
  for (const GeomRow& r : det_rows) {
    check_bounds(r, det_file);
    Detection d;
    d.frame = r.frame;
    d.bbox = r.bbox;
    d.confidence = r.conf;
    const int idx = det_index_in_frame[r.frame]++;
    if (have_det_app) {
      auto it = det_app.find({r.frame, idx});
      if (it != det_app.end()) {
        d.appearance = it->second;
      } else {
        d.appearance = Appearance::neutral();
        ++missing_records;
      }
    } else {
      d.appearance = Appearance::neutral();
    }
    seq.detections_by_frame[r.frame].push_back(std::move(d));
  }
  if (missing_records > 0)
    res.warnings.push_back(std::to_string(missing_records) +
                           " detections missing appearance records, using neutral");

  if (m.contains("ground_truth")) {
    const fs::path gt_file = resolve(m["ground_truth"].get<std::string>());
    std::map<int, Track> by_id;
    std::map<int, int> gt_index_in_frame;
    int gt_missing = 0;
    for (const GeomRow& r : gt_rows) {
      check_bounds(r, gt_file);
      if (r.id < 1) fail(gt_file, r.line, "ground-truth id must be >= 1");
      Detection d;
      d.frame = r.frame;
      d.bbox = r.bbox;
      d.confidence = r.conf;
      const int idx = gt_index_in_frame[r.frame]++;
      if (have_gt_app) {
        auto it = gt_app.find({r.frame, idx});
        if (it != gt_app.end()) {
          d.appearance = it->second;
        } else {
          d.appearance = Appearance::neutral();
          ++gt_missing;
        }
      } else {
        d.appearance = Appearance::neutral();
      }
      Track& t = by_id[r.id];
      t.id = r.id;
      if (!t.observations.emplace(r.frame, std::move(d)).second)
        fail(gt_file, r.line, "duplicate observation for id " + std::to_string(r.id));
    }
    if (gt_missing > 0)
      res.warnings.push_back(std::to_string(gt_missing) +
                             " ground-truth boxes missing appearance records");
    std::vector<Track> gt;
    gt.reserve(by_id.size());
    for (auto& [id, t] : by_id) gt.push_back(std::move(t));
    seq.ground_truth = std::move(gt);
  }

  return res;
}

fs::path write_sequence(const SceneSequence& seq, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::string base = sanitize(seq.name);
  const std::string det_csv = base + "_det.csv";
  const std::string det_app = base + "_det_app.jsonl";
  const std::string gt_csv = base + "_gt.csv";
  const std::string gt_app = base + "_gt_app.jsonl";

  {
    std::ofstream csv = open_out(out_dir / det_csv);
    std::ofstream app = open_out(out_dir / det_app);
    for (int f = 0; f < seq.frame_count(); ++f) {
      int idx = 0;
      for (const Detection& d : seq.detections_by_frame[f]) {
        csv << f << ",-1," << fmt_g9(d.bbox.x) << ',' << fmt_g9(d.bbox.y) << ','
            << fmt_g9(d.bbox.w) << ',' << fmt_g9(d.bbox.h) << ','
            << fmt_g9(d.confidence) << '\n';
        write_appearance_record(app, f, idx++, d.appearance);
      }
    }
  }

  const bool has_gt = seq.ground_truth.has_value() && !seq.ground_truth->empty();
  if (has_gt) {
    std::ofstream csv = open_out(out_dir / gt_csv);
    std::ofstream app = open_out(out_dir / gt_app);
    // frame-major so per-frame det_index matches the sidecar key
    int frames = seq.frame_count();
    for (const Track& t : *seq.ground_truth)
      frames = std::max(frames, t.last_frame() + 1);
    for (int f = 0; f < frames; ++f) {
      int idx = 0;
      for (const Track& t : *seq.ground_truth) {
        const Detection* d = t.at_frame(f);
        if (d == nullptr) continue;
        csv << f << ',' << t.id << ',' << fmt_g9(d->bbox.x) << ','
            << fmt_g9(d->bbox.y) << ',' << fmt_g9(d->bbox.w) << ','
            << fmt_g9(d->bbox.h) << ',' << fmt_g9(d->confidence) << '\n';
        write_appearance_record(app, f, idx++, d->appearance);
      }
    }
  }

  const fs::path manifest = out_dir / (base + "_manifest.json");
  std::ofstream out = open_out(manifest);
  out << "{\n";
  out << "\"name\": \"" << json_escape(seq.name) << "\",\n";
  out << "\"width\": " << seq.frame_width << ",\n";
  out << "\"height\": " << seq.frame_height << ",\n";
  out << "\"frames\": " << seq.frame_count() << ",\n";
  out << "\"fps\": " << fmt_g9(seq.fps) << ",\n";
  out << "\"detections\": \"" << json_escape(det_csv) << "\",\n";
  out << "\"appearance\": \"" << json_escape(det_app) << "\"";
  if (has_gt) {
    out << ",\n\"ground_truth\": \"" << json_escape(gt_csv) << "\",\n";
    out << "\"gt_appearance\": \"" << json_escape(gt_app) << "\"";
  }
  out << "\n}\n";
  return manifest;
}

std::vector<Track> read_tracks_csv(const fs::path& path) {
  const std::vector<GeomRow> rows = read_geometry_csv(path);
  std::map<int, Track> by_id;
  for (const GeomRow& r : rows) {
    if (r.id < 1) fail(path, r.line, "track id must be >= 1");
    Detection d;
    d.frame = r.frame;
    d.bbox = r.bbox;
    d.confidence = r.conf;
    d.appearance = Appearance::neutral();
    Track& t = by_id[r.id];
    t.id = r.id;
    if (!t.observations.emplace(r.frame, std::move(d)).second)
      fail(path, r.line, "duplicate observation for id " + std::to_string(r.id));
  }
  std::vector<Track> tracks;
  tracks.reserve(by_id.size());
  for (auto& [id, t] : by_id) tracks.push_back(std::move(t));
  return tracks;
}

void write_tracks_csv(std::span<const Track> tracks, const fs::path& path) {
  std::ofstream out = open_out(path);
  std::vector<const Track*> sorted;
  sorted.reserve(tracks.size());
  for (const Track& t : tracks) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Track* a, const Track* b) { return a->id < b->id; });
  for (const Track* t : sorted) {
    for (const auto& [frame, d] : t->observations) {
      out << frame << ',' << t->id << ',' << fmt_g9(d.bbox.x) << ','
          << fmt_g9(d.bbox.y) << ',' << fmt_g9(d.bbox.w) << ',' << fmt_g9(d.bbox.h)
          << '\n';
    }
  }
}

namespace {

void write_signature(std::ostream& out, const ContextSignature& sig) {
  out << "{\"books\":[";
  for (int f = 0; f < 6; ++f) {
    if (f) out << ',';
    out << '[';
    for (std::size_t w = 0; w < sig.books[f].size(); ++w) {
      if (w) out << ',';
      const CodeWord& word = sig.books[f][w];
      out << "{\"c\":" << fmt_g9(word.center) << ",\"r\":" << fmt_g9(word.radius)
          << ",\"n\":" << word.count << '}';
    }
    out << ']';
  }
  out << "],\"frames\":" << sig.frame_count << '}';
}

ContextSignature read_signature(const json& j, const fs::path& path) {
  ContextSignature sig;
  const auto& books = j.at("books");
  if (books.size() != 6) fail(path, "signature must have 6 books");
  for (std::size_t f = 0; f < 6; ++f) {
    for (const auto& w : books[f]) {
      sig.books[f].push_back(
          {w.at("c").get<double>(), w.at("r").get<double>(), w.at("n").get<long>()});
    }
  }
  sig.frame_count = j.at("frames").get<long>();
  return sig;
}

}  // namespace

LearnedDatabase read_db(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path, std::string("bad JSON: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != 1)
      fail(path, "unsupported learned-db version " + std::to_string(version));

    LearnedDatabase db;
    db.version = version;
    const json& c = j.at("config");
    db.config.context.codeword_radius = c.at("codeword_radius").get<double>();
    db.config.context.min_chunk_len = c.at("min_chunk_len").get<int>();
    db.config.context.break_patience = c.at("break_patience").get<int>();
    db.config.context.match_quorum = c.at("match_quorum").get<int>();
    db.config.context.neighbor_alpha = c.at("neighbor_alpha").get<double>();
    db.config.boost.rounds = c.at("rounds").get<int>();
    db.config.boost.threshold_grid = c.at("threshold_grid").get<int>();
    db.config.boost.error_clamp = c.at("error_clamp").get<double>();
    db.config.boost.similarity.covariance_scale = c.at("covariance_scale").get<double>();
    db.config.qt_diameter = c.at("qt_diameter").get<double>();
    db.config.temporal_window = c.at("temporal_window").get<int>();
    db.config.negative_ratio = c.at("negative_ratio").get<double>();
    db.config.seed = c.at("seed").get<std::uint64_t>();

    for (const json& cl : j.at("clusters")) {
      ClusterEntry e;
      e.id = cl.at("id").get<int>();
      e.signature = read_signature(cl.at("signature"), path);
      const auto& w = cl.at("w");
      if (w.size() != 5) fail(path, "cluster weight vector must have 5 entries");
      Weights5 wv;
      for (int k = 0; k < 5; ++k) wv[k] = w[k].get<double>();
      e.params = TrackerParams(wv, db.config.temporal_window);
      for (const json& p : cl.at("provenance")) {
        e.provenance.push_back({p.at("video").get<std::string>(),
                                p.at("start").get<int>(), p.at("end").get<int>(),
                                p.at("length").get<int>()});
      }
      db.clusters.push_back(std::move(e));
    }
    return db;
  } catch (const json::exception& e) {
    fail(path, std::string("bad learned-db: ") + e.what());
  }
}

void write_db(const LearnedDatabase& db, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "{\n\"version\": " << db.version << ",\n";
  const LearnConfig& c = db.config;
  out << "\"config\": {\"codeword_radius\": " << fmt_g9(c.context.codeword_radius)
      << ", \"min_chunk_len\": " << c.context.min_chunk_len
      << ", \"break_patience\": " << c.context.break_patience
      << ", \"match_quorum\": " << c.context.match_quorum
      << ", \"neighbor_alpha\": " << fmt_g9(c.context.neighbor_alpha)
      << ", \"rounds\": " << c.boost.rounds
      << ", \"threshold_grid\": " << c.boost.threshold_grid
      << ", \"error_clamp\": " << fmt_g9(c.boost.error_clamp)
      << ", \"covariance_scale\": " << fmt_g9(c.boost.similarity.covariance_scale)
      << ", \"qt_diameter\": " << fmt_g9(c.qt_diameter)
      << ", \"temporal_window\": " << c.temporal_window
      << ", \"negative_ratio\": " << fmt_g9(c.negative_ratio)
      << ", \"seed\": " << c.seed << "},\n";
  out << "\"clusters\": [";
  for (std::size_t i = 0; i < db.clusters.size(); ++i) {
    const ClusterEntry& e = db.clusters[i];
    out << (i ? ",\n" : "\n");
    out << "{\"id\": " << e.id << ", \"signature\": ";
    write_signature(out, e.signature);
    out << ", \"w\": [";
    for (int k = 0; k < 5; ++k) {
      if (k) out << ',';
      out << fmt_g9(e.params.w()[k]);
    }
    out << "], \"provenance\": [";
    for (std::size_t p = 0; p < e.provenance.size(); ++p) {
      const ChunkProvenance& pr = e.provenance[p];
      if (p) out << ',';
      out << "{\"video\": \"" << json_escape(pr.video) << "\", \"start\": " << pr.start
          << ", \"end\": " << pr.end << ", \"length\": " << pr.length << '}';
    }
    out << "]}";
  }
  out << "\n]\n}\n";
}

ScenarioSpec read_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path, std::string("bad JSON: ") + e.what());
  }
  try {
    if (j.contains("preset"))
      return make_preset(j.at("preset").get<std::string>(),
                         j.value("seed", std::uint64_t{1}));

    ScenarioSpec s;
    s.name = j.value("name", std::string("scene"));
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.duration = j.at("duration").get<int>();
    s.fps = j.value("fps", 25.0);
    s.seed = j.value("seed", std::uint64_t{1});
    for (const json& r : j.at("regimes")) {
      RegimeSpec reg;
      reg.start = r.at("start").get<int>();
      reg.end = r.at("end").get<int>();
      reg.appearance_noise = r.value("appearance_noise", 0.0);
      reg.size_noise = r.value("size_noise", 0.0);
      reg.miss_rate = r.value("miss_rate", 0.0);
      reg.jitter = r.value("jitter", 0.0);
      reg.contrast_noise = r.value("contrast_noise", 0.0);
      s.regimes.push_back(reg);
    }
    for (const json& o : j.at("objects")) {
      ObjectSpec obj;
      for (const auto& wp : o.at("waypoints")) {
        if (wp.size() != 3) fail(path, "waypoints must be [frame, x, y]");
        obj.waypoints.push_back(
            {wp[0].get<int>(), wp[1].get<double>(), wp[2].get<double>()});
      }
      obj.width = o.at("width").get<double>();
      obj.height = o.at("height").get<double>();
      obj.contrast = o.at("contrast").get<double>();
      const auto& hist = o.at("histogram");
      obj.histogram.resize(static_cast<Eigen::Index>(hist.size()));
      for (std::size_t i = 0; i < hist.size(); ++i)
        obj.histogram[static_cast<Eigen::Index>(i)] = hist[i].get<double>();
      const auto& cov = o.at("covariance");
      if (cov.size() != 6) fail(path, "covariance must have 6 entries");
      std::array<double, 6> u{};
      for (std::size_t i = 0; i < 6; ++i) u[i] = cov[i].get<double>();
      obj.covariance = covariance_from_upper(u);
      s.objects.push_back(std::move(obj));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    fail(path, std::string("bad scenario: ") + e.what());
  }
}

void write_scenario(const ScenarioSpec& s, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "{\n\"name\": \"" << json_escape(s.name) << "\",\n";
  out << "\"width\": " << s.width << ",\n\"height\": " << s.height << ",\n";
  out << "\"duration\": " << s.duration << ",\n\"fps\": " << fmt_g9(s.fps) << ",\n";
  out << "\"seed\": " << s.seed << ",\n";
  out << "\"regimes\": [";
  for (std::size_t i = 0; i < s.regimes.size(); ++i) {
    const RegimeSpec& r = s.regimes[i];
    if (i) out << ',';
    out << "\n{\"start\": " << r.start << ", \"end\": " << r.end
        << ", \"appearance_noise\": " << fmt_g9(r.appearance_noise)
        << ", \"size_noise\": " << fmt_g9(r.size_noise)
        << ", \"miss_rate\": " << fmt_g9(r.miss_rate)
        << ", \"jitter\": " << fmt_g9(r.jitter)
        << ", \"contrast_noise\": " << fmt_g9(r.contrast_noise) << '}';
  }
  out << "\n],\n\"objects\": [";
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const ObjectSpec& o = s.objects[i];
    if (i) out << ',';
    out << "\n{\"waypoints\": [";
    for (std::size_t w = 0; w < o.waypoints.size(); ++w) {
      if (w) out << ',';
      out << '[' << o.waypoints[w].frame << ',' << fmt_g9(o.waypoints[w].x) << ','
          << fmt_g9(o.waypoints[w].y) << ']';
    }
    out << "], \"width\": " << fmt_g9(o.width) << ", \"height\": " << fmt_g9(o.height)
        << ", \"contrast\": " << fmt_g9(o.contrast) << ", \"histogram\": [";
    for (Eigen::Index k = 0; k < o.histogram.size(); ++k) {
      if (k) out << ',';
      out << fmt_g9(o.histogram[k]);
    }
    out << "], \"covariance\": [";
    const auto u = upper_from_covariance(o.covariance);
    for (std::size_t k = 0; k < 6; ++k) {
      if (k) out << ',';
      out << fmt_g9(u[k]);
    }
    out << "]}";
  }
  out << "\n]\n}\n";
}

void write_control_log_csv(std::span<const ControlRecord> log, const fs::path& path) {
  std::ofstream out = open_out(path);
  // cluster_id: matched cluster, -2 attempted-but-unmatched (marked), -1 otherwise
  out << "frame,alarm,cluster_id,w1,w2,w3,w4,w5\n";
  for (const ControlRecord& r : log) {
    const int cid = r.cluster_id >= 0 ? r.cluster_id : (r.marked ? -2 : -1);
    out << r.frame << ',' << (r.alarm ? 1 : 0) << ',' << cid;
    for (int k = 0; k < 5; ++k) out << ',' << fmt_g9(r.weights[k]);
    out << '\n';
  }
}

void write_scores_csv(std::span<const QualityScores> scores, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "frame,id,d,occ_prev,occ_now,I,E\n";
  for (const QualityScores& q : scores) {
    out << q.frame << ',' << q.track_id << ',' << fmt_g9(q.density) << ','
        << fmt_g9(q.occlusion_prev) << ',' << fmt_g9(q.occlusion_now) << ','
        << fmt_g9(q.interaction) << ',' << fmt_g9(q.error) << '\n';
  }
}

void write_summary_json(const ControlSummary& s, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "{\"frames\": " << s.frames << ", \"alarms\": " << s.alarms
      << ", \"attempts\": " << s.attempts
      << ", \"tuning_events\": " << s.tuning_events
      << ", \"unmatched_windows\": " << s.unmatched_windows << "}\n";
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string frac(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string report_table(const MetricsReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& k, const std::string& v) {
    out << k;
    for (std::size_t i = k.size(); i < 18; ++i) out << ' ';
    out << v << '\n';
  };
  row("GT tracks", std::to_string(r.gt_tracks));
  row("MT (%)", pct(r.mt));
  row("PT (%)", pct(r.pt));
  row("ML (%)", pct(r.ml));
  row("MOTA", frac(r.mota));
  row("MOTP", frac(r.motp));
  row("M-mean", frac(r.m_mean));
  row("IoU threshold", frac(r.iou_threshold));
  row("ID switches", std::to_string(r.id_switches));
  row("Misses", std::to_string(r.misses));
  row("False positives", std::to_string(r.false_positives));
  return out.str();
}

std::string report_csv_row(const MetricsReport& r) {
  std::ostringstream out;
  out << "gt,mt,pt,ml,mota,motp,m_mean,iou,id_switches,misses,false_positives\n";
  out << r.gt_tracks << ',' << pct(r.mt) << ',' << pct(r.pt) << ',' << pct(r.ml)
      << ',' << frac(r.mota) << ',' << frac(r.motp) << ',' << frac(r.m_mean) << ','
      << frac(r.iou_threshold) << ',' << r.id_switches << ',' << r.misses << ','
      << r.false_positives << '\n';
  return out.str();
}

std::string report_json(const MetricsReport& r) {
  std::ostringstream out;
  out << "{\"gt_tracks\": " << r.gt_tracks << ", \"mt\": " << fmt_g9(r.mt)
      << ", \"pt\": " << fmt_g9(r.pt) << ", \"ml\": " << fmt_g9(r.ml)
      << ", \"mota\": " << fmt_g9(r.mota) << ", \"motp\": " << fmt_g9(r.motp)
      << ", \"m_mean\": " << fmt_g9(r.m_mean)
      << ", \"iou_threshold\": " << fmt_g9(r.iou_threshold)
      << ", \"id_switches\": " << r.id_switches << ", \"misses\": " << r.misses
      << ", \"false_positives\": " << r.false_positives << "}\n";
  return out.str();
}

}  // namespace adaptrack
