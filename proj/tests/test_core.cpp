#include <gtest/gtest.h>

#include <random>

#include "prefboard/core/dataset.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/synthetic/generators.hpp"
#include "support/test_util.hpp"

using namespace prefboard;
using prefboard::testing::TempDir;
using prefboard::testing::write_text;

namespace {

std::string record(const std::string& label, bool with_b = true) {
  Json j;
  j["turns"] = Json::array({{{"role", "user"}, {"text", "q " + label}}});
  j["response_a"] = "first answer";
  if (with_b) j["response_b"] = "second answer";
  j["label"] = label;
  return j.dump();
}

}  // namespace

TEST(Text, NfcComposesDecomposedAccents) {
  EXPECT_EQ(text::nfc("cafe\xCC\x81"), "caf\xC3\xA9");
  EXPECT_EQ(text::nfc("plain"), "plain");
}

TEST(Text, NewlinesAndWhitespace) {
  EXPECT_EQ(text::normalize_newlines("a\r\nb\rc\n"), "a\nb\nc\n");
  EXPECT_EQ(text::collapse_whitespace("  a \t b\n\nc  "), "a b c");
  EXPECT_EQ(text::trim("\t x y \n"), "x y");
}

TEST(Text, TokenizeAndLength) {
  EXPECT_EQ(text::tokenize_words("Hello, World! x-2"),
            (std::vector<std::string>{"hello", "world", "x", "2"}));
  EXPECT_EQ(text::utf8_length("caf\xC3\xA9"), 4u);
  EXPECT_EQ(text::utf8_length(""), 0u);
}

TEST(Text, Fnv1aReferenceValues) {
  // Published FNV-1a 64-bit test vectors.
  EXPECT_EQ(text::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(text::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(text::fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, Sha256KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, PinnedFixtureDigest) {
  // Digest computed with an independent reference serializer; the query is
  // given in decomposed form so NFC normalization is exercised.
  auto inst = make_instance({{"user", "Where is the cafe\xCC\x81?"}}, "Down the street.",
                            "I do not know.", Label::win);
  EXPECT_EQ(inst.id, "c10445558da65b56fc17415dbbb3411d03d11884214bb7cb057e36e89add1fb8");
  auto composed = make_instance({{"user", "Where is the caf\xC3\xA9?"}}, "Down the street.",
                                "I do not know.", Label::lose);
  EXPECT_EQ(composed.id, inst.id);
}

TEST(Hash, MultiTurnCrlfDigest) {
  auto inst = make_instance({{"user", "hi\r\nthere"}, {"assistant", "hello"}, {"user", "ok"}}, "A",
                            "B", Label::tie);
  EXPECT_EQ(inst.id, "4dc13ca5458833f8b9cc8341f57553fe5c6c53e4413bd23c06dd81035e79d2f4");
  EXPECT_EQ(inst.query, "hi\r\nthere");
}

TEST(Hash, SameContentSameIdDifferentResponseDifferentId) {
  auto a = make_instance({{"user", "q"}}, "x", "y", Label::win, "m1", "m2");
  auto b = make_instance({{"user", "q"}}, "x", "y", Label::lose);
  auto c = make_instance({{"user", "q"}}, "x", "z", Label::win);
  EXPECT_EQ(canonical_hash(a), canonical_hash(b));
  EXPECT_NE(canonical_hash(a), canonical_hash(c));
  EXPECT_EQ(canonical_hash(a).size(), 64u);
}

TEST(Hash, CriteriaHashIsOrderSensitive) {
  EXPECT_NE(criteria_hash({"a", "b"}), criteria_hash({"b", "a"}));
  EXPECT_EQ(criteria_hash({"a", "b"}), criteria_hash({"a", "b"}));
}

TEST(Types, LabelReversalIsInvolution) {
  for (Label y : {Label::win, Label::tie, Label::lose}) EXPECT_EQ(reversed(reversed(y)), y);
  EXPECT_EQ(reversed(Label::win), Label::lose);
  EXPECT_EQ(reversed(Label::tie), Label::tie);
}

TEST(Types, MakeInstanceValidation) {
  EXPECT_THROW(make_instance({{"user", "q"}}, "", "b", Label::win), ValidationError);
  EXPECT_THROW(make_instance({{"assistant", "q"}}, "a", "b", Label::win), ValidationError);
  auto inst = make_instance({{"system", "s"}, {"user", "first"}, {"assistant", "r"}, {"user", "second"}},
                            "a", "b", Label::win);
  EXPECT_EQ(inst.query, "first");
}

TEST(Types, ConditionedSampleLabelFollowsSide) {
  ConditionedSample s;
  s.instance_id = "x";
  s.criteria.items = {"c"};
  s.criteria.side = Side::b_preferred;
  s.y_c = 1;
  EXPECT_NO_THROW(s.validate());
  s.y_c = 0;
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Types, EnumStringRoundTrips) {
  for (auto t : {SubsetTag::plus, SubsetTag::minus, SubsetTag::minus_remove, SubsetTag::minus_add,
                 SubsetTag::minus_replace, SubsetTag::train, SubsetTag::val}) {
    EXPECT_EQ(subset_tag_from_string(to_string(t)), t);
  }
  for (auto op : {NoiseOp::none, NoiseOp::remove, NoiseOp::add, NoiseOp::replace}) {
    EXPECT_EQ(noise_op_from_string(to_string(op)), op);
  }
  EXPECT_THROW(label_from_string("maybe"), ValidationError);
}

TEST(Dataset, BothBadIsFiltered) {
  TempDir dir;
  write_text(dir / "d.jsonl",
             record("model_a") + "\n" + record("tie (both bad)") + "\n" + record("model_b") + "\n");
  const auto instances = load_preference_dataset(dir / "d.jsonl");
  ASSERT_EQ(instances.size(), 2u);
  EXPECT_EQ(instances[0].label, Label::win);
  EXPECT_EQ(instances[1].label, Label::lose);
}

TEST(Dataset, MissingResponseNamesTheLine) {
  TempDir dir;
  write_text(dir / "d.jsonl", record("model_a") + "\n\n" + record("tie", false) + "\n");
  try {
    load_preference_dataset(dir / "d.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("response_b"), std::string::npos);
  }
}

TEST(Dataset, EmptyFileIsEmptyList) {
  TempDir dir;
  write_text(dir / "d.jsonl", "");
  EXPECT_TRUE(load_preference_dataset(dir / "d.jsonl").empty());
}

TEST(Dataset, MismatchedIdRejected) {
  Json j = Json::parse(record("model_a"));
  j["id"] = std::string(64, '0');
  EXPECT_THROW(parse_preference_record(j.dump()), ValidationError);
}

TEST(Dataset, ScanAccountsForEveryLine) {
  TempDir dir;
  write_text(dir / "d.jsonl", record("model_a") + "\n{broken\n" + record("tie (both bad)") +
                                  "\n" + record("nonsense") + "\n\n" + record("tie") + "\n");
  const auto r = scan_preference_dataset(dir / "d.jsonl");
  EXPECT_EQ(r.record_lines, 5u);
  EXPECT_EQ(r.instances.size() + r.errors.size() + r.filtered_both_bad, r.record_lines);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].line, 2u);
  EXPECT_EQ(r.errors[1].line, 4u);
}

TEST(Dataset, RoundTripOfHundredSyntheticInstances) {
  TempDir dir;
  auto corpus = synthetic::topic_corpus(17, 3);
  corpus.instances.resize(100);
  save_preference_dataset(dir / "d.jsonl", corpus.instances);
  const auto loaded = load_preference_dataset(dir / "d.jsonl");
  ASSERT_EQ(loaded.size(), 100u);
  for (std::size_t i = 0; i < loaded.size(); ++i) EXPECT_EQ(loaded[i], corpus.instances[i]);
}

TEST(Dataset, ReportCountsLabels) {
  std::vector<PreferenceInstance> v{make_instance({{"user", "a"}}, "x", "y", Label::win),
                                    make_instance({{"user", "b"}}, "x", "y", Label::win),
                                    make_instance({{"user", "c"}}, "x", "y", Label::tie),
                                    make_instance({{"user", "d"}}, "x", "y", Label::lose)};
  const auto r = validate_dataset(v);
  EXPECT_DOUBLE_EQ(r.win_pct, 50.0);
  EXPECT_DOUBLE_EQ(r.tie_pct, 25.0);
  EXPECT_DOUBLE_EQ(r.lose_pct, 25.0);
  EXPECT_DOUBLE_EQ(r.avg_turns, 1.0);
  EXPECT_THROW(validate_dataset(std::vector<PreferenceInstance>{}), ValidationError);
}

TEST(Dataset, ReportMatchesPlantedMix) {
  std::vector<Label> labels;
  labels.insert(labels.end(), 38, Label::win);
  labels.insert(labels.end(), 21, Label::tie);
  labels.insert(labels.end(), 41, Label::lose);
  std::mt19937_64 rng(8);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<PreferenceInstance> v;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    v.push_back(make_instance({{"user", "q" + std::to_string(i)}, {"assistant", "r"}, {"user", "f"}},
                              "x", "y", labels[i]));
  }
  const auto r = validate_dataset(v);
  EXPECT_NEAR(r.win_pct, 38.0, 1e-9);
  EXPECT_NEAR(r.tie_pct, 21.0, 1e-9);
  EXPECT_NEAR(r.lose_pct, 41.0, 1e-9);
  EXPECT_NEAR(r.win_pct + r.tie_pct + r.lose_pct, 100.0, 0.01);
  EXPECT_DOUBLE_EQ(r.avg_turns, 3.0);
}

TEST(Io, ConditionedSamplesRoundTrip) {
  TempDir dir;
  const auto suite = synthetic::planted_suite(20, 1);
  save_conditioned_samples(dir / "s.jsonl", suite.samples);
  EXPECT_EQ(load_conditioned_samples(dir / "s.jsonl"), suite.samples);
}

TEST(Io, AtomicWriteReplacesContents) {
  TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  EXPECT_THROW(read_file(dir / "missing.txt"), Error);
}
