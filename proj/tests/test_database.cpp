#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "adaptrack/database.hpp"
#include "adaptrack/io.hpp"
#include "adaptrack/synth.hpp"

using namespace adaptrack;

namespace {

std::string db_fingerprint(const LearnedDatabase& db) {
  std::ostringstream out;
  for (const ClusterEntry& c : db.clusters) {
    out << c.id << '|' << c.signature.frame_count << '|';
    for (int k = 0; k < 5; ++k) out << fmt_g9(c.params.w()[k]) << ',';
    for (const auto& p : c.provenance) out << p.video << ':' << p.start << '-' << p.end << ';';
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("one stable training video yields one cluster") {
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("v0", generate(make_preset("appearance-stable/size-noisy", 7)));
  LearnReport rep;
  const LearnedDatabase db = build_database(training, LearnConfig{}, &rep);
  REQUIRE(db.clusters.size() == 1);
  CHECK(db.clusters[0].id == 0);
  CHECK(db.clusters[0].provenance.size() == 1);
  CHECK(db.clusters[0].provenance[0].video == "v0");
  CHECK(rep.chunks_used >= 1);
  // normalized cluster weights
  CHECK(std::abs(db.clusters[0].params.w().sum() - 1.0) <= 1e-6);
}

TEST_CASE("identical synthetic contexts from two videos merge into one cluster") {
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("v0", generate(make_preset("appearance-stable/size-noisy", 7)));
  training.emplace_back("v1", generate(make_preset("appearance-stable/size-noisy", 8)));
  const LearnedDatabase db = build_database(training, LearnConfig{});
  REQUIRE(db.clusters.size() == 1);
  CHECK(db.clusters[0].provenance.size() == 2);
  CHECK(db.clusters[0].provenance[0].video == "v0");
  CHECK(db.clusters[0].provenance[1].video == "v1");
}

TEST_CASE("distinct contexts stay separate clusters") {
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("a", generate(make_preset("appearance-stable/size-noisy", 7)));
  training.emplace_back("b", generate(make_preset("size-stable/appearance-noisy", 7)));
  const LearnedDatabase db = build_database(training, LearnConfig{});
  REQUIRE(db.clusters.size() == 2);
  // cluster ids are unique and consecutive
  CHECK(db.clusters[0].id == 0);
  CHECK(db.clusters[1].id == 1);
}

TEST_CASE("build_database is deterministic") {
  auto build = [] {
    std::vector<std::pair<std::string, SceneSequence>> training;
    training.emplace_back("a", generate(make_preset("appearance-stable/size-noisy", 7)));
    training.emplace_back("b", generate(make_preset("size-stable/appearance-noisy", 9)));
    return build_database(training, LearnConfig{});
  };
  CHECK(db_fingerprint(build()) == db_fingerprint(build()));
}

TEST_CASE("missing ground truth is rejected") {
  SceneSequence seq;
  seq.frame_width = 100;
  seq.frame_height = 100;
  seq.detections_by_frame.resize(10);
  std::vector<std::pair<std::string, SceneSequence>> training;
  training.emplace_back("bad", std::move(seq));
  CHECK_THROWS_AS(build_database(training, LearnConfig{}), std::invalid_argument);
}

TEST_CASE("merged signatures sum counts and frames") {
  std::vector<FeatureVec> w1(30, FeatureVec::Constant(0.2));
  std::vector<FeatureVec> w2(20, FeatureVec::Constant(0.8));
  const ContextSignature a = window_signature(w1, 0.1);
  const ContextSignature b = window_signature(w2, 0.1);
  const std::vector<const ContextSignature*> members{&a, &b};
  const ContextSignature merged = merge_signatures(members);
  CHECK(merged.frame_count == 50);
  for (int f = 0; f < 6; ++f) {
    long total = 0;
    for (const CodeWord& w : merged.books[f]) total += w.count;
    CHECK(total == 50);
    CHECK(merged.books[f].size() == 2);
  }
  CHECK(merged.window.empty());

  // identical duplicate words coalesce
  const std::vector<const ContextSignature*> twice{&a, &a};
  const ContextSignature doubled = merge_signatures(twice);
  for (int f = 0; f < 6; ++f) {
    REQUIRE(doubled.books[f].size() == 1);
    CHECK(doubled.books[f][0].count == 60);
  }
}
