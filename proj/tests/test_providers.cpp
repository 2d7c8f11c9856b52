#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/matrix.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/providers/chat.hpp"
#include "prefboard/providers/embedding.hpp"
#include "support/stub_server.hpp"

using namespace prefboard;
using namespace prefboard::providers;
using prefboard::testing::StubServer;

namespace {

ProviderConfig fast_config(const std::string& base_url) {
  ProviderConfig c;
  c.base_url = base_url;
  c.model_name = "stub";
  c.timeout_s = 5.0;
  c.max_retries = 3;
  c.backoff_base_s = 0.001;
  return c;
}

// Oracle for the mock embedder: the hashed bag of words computed directly.
std::vector<double> bag_oracle(const std::vector<std::string>& tokens, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  for (const auto& t : tokens) v[text::fnv1a64(t) % dim] += 1.0;
  double n = 0.0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  return v;
}

std::string chat_reply(const std::string& content) {
  return Json{{"choices", Json::array({{{"message", {{"content", content}}}}})}}.dump();
}

}  // namespace

TEST(MockEmbedder, DeterministicUnitVectors) {
  MockEmbedder e(64);
  const std::vector<std::string> texts{"cat", "cat", "a longer sentence, with punctuation!"};
  const auto out = embed_texts(texts, e);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].values, out[1].values);
  for (const auto& v : out) {
    EXPECT_EQ(v.dim(), 64u);
    EXPECT_NEAR(l2_norm(v.values), 1.0, 1e-9);
  }
}

TEST(MockEmbedder, MatchesHashedBagOracle) {
  const std::size_t dim = 64;
  MockEmbedder e(dim);
  for (const std::string s : {"long", "short", "Long long SHORT", "the cat sat on the mat"}) {
    const auto got = e.embed_one(s).values;
    const auto want = bag_oracle(text::tokenize_words(s), dim);
    for (std::size_t i = 0; i < dim; ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << s;
  }
  const auto a = e.embed_one("long").values;
  const auto b = e.embed_one("short").values;
  const double expected = text::fnv1a64("long") % dim == text::fnv1a64("short") % dim ? 1.0 : 0.0;
  EXPECT_NEAR(cosine_similarity(a, b), expected, 1e-12);
}

TEST(MockEmbedder, DisjointTokensAreOrthogonalWithoutCollisions) {
  MockEmbedder e(4096);
  const auto a = e.embed_one("apple banana");
  const auto b = e.embed_one("cherry durian");
  EXPECT_NEAR(dot(a.values, b.values), 0.0, 1e-12);
}

TEST(EmbedTexts, RejectsEmptyInput) {
  MockEmbedder e(8);
  EXPECT_THROW(embed_texts(std::vector<std::string>{}, e), ValidationError);
}

TEST(HttpEmbedder, BatchesAtMostSixtyFourAndKeepsOrder) {
  StubServer stub;
  std::mutex mu;
  std::vector<std::size_t> batch_sizes;
  stub.server().Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = Json::parse(req.body);
    Json data = Json::array();
    for (const auto& t : body.at("input")) {
      const double k = std::stod(t.get<std::string>());
      data.push_back({{"embedding", {k + 1.0, 1.0, 0.0}}});
    }
    {
      std::lock_guard lock(mu);
      batch_sizes.push_back(body.at("input").size());
    }
    res.set_content(Json{{"data", data}}.dump(), "application/json");
  });
  stub.start();
  HttpEmbedder e(fast_config(stub.base_url()));
  std::vector<std::string> texts;
  for (int i = 0; i < 150; ++i) texts.push_back(std::to_string(i));
  const auto out = embed_texts(texts, e);
  ASSERT_EQ(out.size(), 150u);
  EXPECT_EQ(batch_sizes, (std::vector<std::size_t>{64, 64, 22}));
  for (int i = 0; i < 150; ++i) {
    const double x = i + 1.0;
    EXPECT_NEAR(out[static_cast<std::size_t>(i)].values[0], x / std::sqrt(x * x + 1.0), 1e-12);
  }
}

TEST(HttpEmbedder, FailingBatchIndexIsReported) {
  StubServer stub;
  stub.server().Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = Json::parse(req.body);
    if (body.at("input").at(0).get<std::string>() == "2") {
      res.status = 503;
      return;
    }
    Json data = Json::array();
    for (std::size_t i = 0; i < body.at("input").size(); ++i) data.push_back({{"embedding", {1.0, 0.0}}});
    res.set_content(Json{{"data", data}}.dump(), "application/json");
  });
  stub.start();
  auto cfg = fast_config(stub.base_url());
  cfg.batch_size = 2;
  cfg.max_retries = 1;
  HttpEmbedder e(cfg);
  const std::vector<std::string> texts{"0", "1", "2", "3"};
  try {
    e.embed(texts);
    FAIL() << "expected TransportError";
  } catch (const TransportError& err) {
    ASSERT_TRUE(err.batch_index().has_value());
    EXPECT_EQ(*err.batch_index(), 1u);
  }
}

TEST(HttpEmbedder, DimensionMismatchIsAnError) {
  StubServer stub;
  stub.server().Post("/v1/embeddings", [&](const httplib::Request&, httplib::Response& res) {
    Json data = Json::array({{{"embedding", {1.0, 0.0}}}, {{"embedding", {1.0, 0.0, 0.0}}}});
    res.set_content(Json{{"data", data}}.dump(), "application/json");
  });
  stub.start();
  HttpEmbedder e(fast_config(stub.base_url()));
  const std::vector<std::string> texts{"a", "b"};
  EXPECT_THROW(e.embed(texts), ValidationError);
}

TEST(HttpChat, RetriesUntilSuccess) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls <= 2) {
      res.status = 500;
      return;
    }
    res.set_content(chat_reply("done"), "application/json");
  });
  stub.start();
  HttpChatProvider chat(fast_config(stub.base_url()));
  EXPECT_EQ(chat_complete(chat, "hello", ""), "done");
  EXPECT_EQ(chat.last_attempts(), 3);
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpChat, RetryBudgetExhausted) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 502;
  });
  stub.start();
  auto cfg = fast_config(stub.base_url());
  cfg.max_retries = 2;
  HttpChatProvider chat(cfg);
  EXPECT_THROW(chat.complete("hello", ""), TransportError);
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpChat, TimeoutAgainstSlowStub) {
  StubServer stub;
  stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
    res.set_content(chat_reply("late"), "application/json");
  });
  stub.start();
  auto cfg = fast_config(stub.base_url());
  cfg.timeout_s = 0.001;
  cfg.max_retries = 0;
  HttpChatProvider chat(cfg);
  EXPECT_THROW(chat.complete("hello", ""), TransportError);
}

TEST(HttpChat, SendsBearerTokenAndSchema) {
  StubServer stub;
  std::string auth;
  Json seen;
  stub.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    seen = Json::parse(req.body);
    res.set_content(chat_reply("ok"), "application/json");
  });
  stub.start();
  ::setenv("PREFBOARD_TEST_KEY", "sekret", 1);
  auto cfg = fast_config(stub.base_url());
  cfg.api_key_env_var = "PREFBOARD_TEST_KEY";
  HttpChatProvider chat(cfg);
  chat.complete("question", "schema text");
  EXPECT_EQ(auth, "Bearer sekret");
  ASSERT_EQ(seen.at("messages").size(), 2u);
  EXPECT_EQ(seen.at("messages")[0].at("role"), "system");
  EXPECT_EQ(seen.at("messages")[1].at("content"), "question");
  ::unsetenv("PREFBOARD_TEST_KEY");
}

TEST(HttpChat, ClientErrorIsNotRetried) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
  });
  stub.start();
  HttpChatProvider chat(fast_config(stub.base_url()));
  EXPECT_THROW(chat.complete("hello", ""), Error);
  EXPECT_EQ(calls.load(), 1);
}

TEST(Chat, EmptyCompletionAndPromptRejected) {
  auto blank = MockChatProvider::fixed("blank", "   ");
  EXPECT_THROW(chat_complete(blank, "hi", ""), Error);
  auto fixed = MockChatProvider::fixed("fixed", "template output");
  EXPECT_THROW(chat_complete(fixed, " ", ""), ValidationError);
  EXPECT_EQ(chat_complete(fixed, "template input", ""), "template output");
  EXPECT_EQ(fixed.calls(), 1u);
}

TEST(ProviderConfig, Validation) {
  ProviderConfig c;
  c.base_url = "http://x";
  EXPECT_NO_THROW(c.validate());
  c.timeout_s = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c.timeout_s = 1.0;
  c.max_retries = -1;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(RetryPolicy, ExponentialBackoff) {
  RetryPolicy p{3, 0.5, 2.0};
  EXPECT_DOUBLE_EQ(p.delay(1).count(), 0.5);
  EXPECT_DOUBLE_EQ(p.delay(2).count(), 1.0);
  EXPECT_DOUBLE_EQ(p.delay(3).count(), 2.0);
}

TEST(CachingEmbedder, EmbedsEachTextOnce) {
  struct Counting final : Embedder {
    MockEmbedder inner{16};
    std::atomic<std::size_t> seen{0};
    std::vector<EmbeddingVector> embed(std::span<const std::string> t) override {
      seen += t.size();
      return inner.embed(t);
    }
    std::size_t dim() const override { return 16; }
    std::string id() const override { return "counting"; }
  };
  auto inner = std::make_shared<Counting>();
  CachingEmbedder cache(inner);
  const std::vector<std::string> texts{"a", "b", "a"};
  cache.embed(texts);
  cache.embed(texts);
  EXPECT_EQ(inner->seen.load(), 2u);
  EXPECT_EQ(cache.cached(), 2u);
}
