#include "prefboard/synthetic/generators.hpp"

#include <algorithm>
#include <random>

#include "prefboard/core/error.hpp"

namespace prefboard::synthetic {

namespace {

using Words = std::vector<std::string>;

const std::vector<Words>& topic_words() {
  static const std::vector<Words> words{
      {"recipe", "oven", "flour", "simmer", "garlic", "skillet", "dough", "spice", "broth",
       "marinade", "bake", "sauce"},
      {"telescope", "galaxy", "orbit", "nebula", "comet", "planet", "eclipse", "asteroid",
       "constellation", "lunar", "solar", "cosmic"},
      {"mortgage", "dividend", "portfolio", "inflation", "budget", "loan", "interest", "stocks",
       "pension", "taxes", "savings", "credit"},
      {"tomato", "compost", "seedling", "pruning", "soil", "mulch", "fertilizer", "greenhouse",
       "perennial", "weeds", "irrigation", "shrub"},
      {"compiler", "pointer", "function", "recursion", "debugger", "variable", "runtime",
       "library", "template", "syntax", "thread", "struct"},
      {"guitar", "chord", "melody", "rhythm", "piano", "tempo", "harmony", "scale", "drummer",
       "lyrics", "violin", "orchestra"},
  };
  return words;
}

// Openers are short and varied so topic words dominate a bag-of-words embedding.
const Words kOpeners{"explain",  "tips on",    "help with", "questions about", "advice on",
                     "thoughts on", "notes on", "ideas for", "basics of",      "guide to"};
const Words kShared{"really", "quickly", "today", "beginner", "properly", "usually"};

const Words kNeutral{
    "The first step is to look at what you already have.",
    "Most people start with the simplest option.",
    "Take your time and check each part as you go.",
    "It usually works well when the basics are in place.",
    "Keep notes so you can compare later.",
    "Small adjustments tend to have a large effect.",
    "Try it once before committing to a plan.",
    "Ask someone experienced if anything looks wrong.",
    "Patience matters more than speed here.",
    "Plenty of people run into the same issue.",
};

// Elaboration shares no words with the depth or brevity criteria, so which
// reply a criterion favors shows only in their relative length.
const Words kElaboration{
    "A common case is easy to walk through.",
    "Each stage has its own requirements.",
    "The same idea carries over to related situations.",
    "This is standard practice for good reasons.",
    "Unusual situations need a little extra care.",
    "Checking the work again helps avoid mistakes.",
};

const Words kDepthCriteria{
    "Prefer detailed answers that give examples and background.",
    "Favor thorough explanations with more detail.",
    "Value in-depth analysis with supporting detail and examples.",
    "Reward responses that elaborate with an example.",
    "Prefer comprehensive coverage over a quick reply.",
};

const Words kBrevityCriteria{
    "Prefer short and direct answers.",
    "Favor brief replies that stay on point.",
    "Value concise wording and quick answers.",
    "Reward responses that are short to read.",
    "Prefer a brief summary over a long essay.",
};

const Words kKeywords{"checklist", "diagram", "glossary", "citation", "benchmark", "analogy",
                      "timeline", "warranty", "formula", "prototype", "statistic", "anecdote",
                      "caveat", "tradeoff", "flowchart", "mnemonic"};

const Words kKeywordTemplates{"Mention a {} explicitly.", "Include a {} in the answer.",
                              "Responses should reference a {}.", "Make sure a {} appears."};

template <class Rng>
const std::string& pick(const Words& w, Rng& rng) {
  return w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)];
}

template <class Rng>
std::string make_query(int topic, Rng& rng) {
  const auto& words = topic_words()[static_cast<std::size_t>(topic)];
  std::string q = pick(kOpeners, rng);
  std::vector<std::size_t> idx(words.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i = 0; i < 6; ++i) q += " " + words[idx[i]];
  if (std::bernoulli_distribution(0.5)(rng)) q += " " + pick(kShared, rng);
  return q + "?";
}

template <class Rng>
std::string sentences(const Words& pool, std::size_t n, Rng& rng) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += pick(pool, rng);
  }
  return out;
}

template <class Rng>
std::string verbose_reply(const std::string& topic_word, Rng& rng) {
  std::string out = "About the " + topic_word + ": " + sentences(kNeutral, 3, rng);
  const auto extra = std::uniform_int_distribution<std::size_t>(3, 5)(rng);
  for (std::size_t i = 0; i < extra; ++i) out += " " + pick(kElaboration, rng);
  return out;
}

template <class Rng>
std::string terse_reply(const std::string& topic_word, Rng& rng) {
  return "Simply put, the " + topic_word + " part is simple. " + pick(kNeutral, rng);
}

template <class Rng>
std::vector<std::string> draw_items(const Words& pool, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k && i < idx.size(); ++i) out.push_back(pool[idx[i]]);
  return out;
}

std::string fill(const std::string& tmpl, const std::string& word) {
  auto out = tmpl;
  out.replace(out.find("{}"), 2, word);
  return out;
}

ConditionedSample sample_for(const PreferenceInstance& inst, std::vector<std::string> items,
                             std::vector<int> clusters, Side side) {
  ConditionedSample s;
  s.instance_id = inst.id;
  s.instance_label = inst.label;
  s.criteria.items = std::move(items);
  s.criteria.cluster_ids = std::move(clusters);
  s.criteria.side = side;
  s.y_c = label_for_side(side);
  const bool agrees = (inst.label == Label::win && side == Side::a_preferred) ||
                      (inst.label == Label::lose && side == Side::b_preferred);
  s.subset_tag = agrees ? SubsetTag::plus : SubsetTag::minus;
  return s;
}

}  // namespace

const std::vector<std::string>& topic_names() {
  static const std::vector<std::string> names{"cooking", "astronomy", "finance",
                                              "gardening", "programming", "music"};
  return names;
}

TopicCorpus topic_corpus(std::size_t per_topic, std::uint64_t seed) {
  if (per_topic == 0) throw ValidationError("per_topic must be positive");
  std::mt19937_64 rng(seed);
  TopicCorpus out;
  for (std::size_t i = 0; i < per_topic; ++i) {
    for (int t = 0; t < static_cast<int>(topic_words().size()); ++t) {
      auto query = make_query(t, rng);
      const auto& word = pick(topic_words()[static_cast<std::size_t>(t)], rng);
      auto verbose = verbose_reply(word, rng);
      auto terse = terse_reply(word, rng);
      const bool verbose_first = std::bernoulli_distribution(0.5)(rng);
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      Label label = Label::tie;
      if (u >= 0.05) {
        const bool verbose_wins = u < 0.05 + 0.95 * 0.7;
        label = (verbose_wins == verbose_first) ? Label::win : Label::lose;
      }
      auto inst = make_instance({{"user", std::move(query)}},
                                verbose_first ? verbose : terse, verbose_first ? terse : verbose,
                                label);
      if (out.topic_of.contains(inst.id)) continue;  // identical draw; skip the duplicate
      out.topic_of[inst.id] = t;
      out.instances.push_back(std::move(inst));
    }
  }
  return out;
}

PlantedSuite planted_suite(std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2 || n_samples % 2 != 0) throw ValidationError("n_samples must be even");
  std::mt19937_64 rng(seed);
  std::vector<PreferenceInstance> instances;
  std::vector<ConditionedSample> samples;
  std::map<std::string, Family> family_of;
  const int depth_cluster = 0;
  const int brevity_cluster = 1;
  while (instances.size() < n_samples / 2) {
    const int topic = std::uniform_int_distribution<int>(0, 5)(rng);
    auto query = make_query(topic, rng);
    const auto& word = pick(topic_words()[static_cast<std::size_t>(topic)], rng);
    const bool first = std::bernoulli_distribution(0.5)(rng);
    const bool majority = std::bernoulli_distribution(0.75)(rng);
    const auto family = std::bernoulli_distribution(0.5)(rng) ? Family::verbosity : Family::keyword;

    std::string a, b;
    std::vector<std::string> ca, cb;
    std::vector<int> ka, kb;
    Label label;
    if (family == Family::verbosity) {
      // first: A is the verbose reply.
      auto verbose = verbose_reply(word, rng);
      auto terse = terse_reply(word, rng);
      a = first ? verbose : terse;
      b = first ? terse : verbose;
      const auto kd = std::uniform_int_distribution<std::size_t>(3, 4)(rng);
      const auto kbv = std::uniform_int_distribution<std::size_t>(3, 4)(rng);
      auto depth = draw_items(kDepthCriteria, kd, rng);
      auto brevity = draw_items(kBrevityCriteria, kbv, rng);
      std::vector<int> dk(depth.size(), depth_cluster), bk(brevity.size(), brevity_cluster);
      ca = first ? depth : brevity;
      ka = first ? dk : bk;
      cb = first ? brevity : depth;
      kb = first ? bk : dk;
      label = (majority == first) ? Label::win : Label::lose;  // majority: verbose wins
    } else {
      auto kw = draw_items(kKeywords, 2, rng);
      const auto ia = static_cast<int>(std::find(kKeywords.begin(), kKeywords.end(), kw[0]) - kKeywords.begin());
      const auto ib = static_cast<int>(std::find(kKeywords.begin(), kKeywords.end(), kw[1]) - kKeywords.begin());
      a = "About the " + word + ": " + sentences(kNeutral, 2, rng) + " Here is a " + kw[0] +
          " that helps.";
      b = "About the " + word + ": " + sentences(kNeutral, 2, rng) + " Here is a " + kw[1] +
          " that helps.";
      const auto k = std::uniform_int_distribution<std::size_t>(3, 4)(rng);
      for (const auto& t : draw_items(kKeywordTemplates, k, rng)) {
        ca.push_back(fill(t, kw[0]));
        ka.push_back(2 + ia);
        cb.push_back(fill(t, kw[1]));
        kb.push_back(2 + ib);
      }
      label = majority ? Label::win : Label::lose;
    }
    auto inst = make_instance({{"user", std::move(query)}}, a, b, label);
    if (family_of.contains(inst.id)) continue;
    family_of[inst.id] = family;
    samples.push_back(sample_for(inst, std::move(ca), std::move(ka), Side::a_preferred));
    samples.push_back(sample_for(inst, std::move(cb), std::move(kb), Side::b_preferred));
    instances.push_back(std::move(inst));
  }
  return {InstanceIndex(std::move(instances)), std::move(samples), std::move(family_of)};
}

std::vector<std::string> graded_model_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("model-" + std::to_string(i));
  return out;
}

}  // namespace prefboard::synthetic
