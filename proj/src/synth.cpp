#include "epu/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <json.hpp>
#include <random>

#include "epu/error.hpp"
#include "epu/series.hpp"

namespace epu {

using nlohmann::json;

void SynthSpec::validate() const {
  if (months.empty()) throw ConfigError("synthetic spec: months must be nonempty");
  if (base_docs_per_month <= 0) throw ConfigError("synthetic spec: base_docs_per_month must be positive");
  for (const auto& [m, s] : shock_months)
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("synthetic spec: shock intensity for " + m.str() + " outside [0,1]");
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(dense_fraction) || !in_unit(base_dense_rate) || !in_unit(single_mention_rate) ||
      !in_unit(near_miss_rate) || single_mention_rate + near_miss_rate > 1.0)
    throw ConfigError("synthetic spec: rates must lie in [0,1]");
  if (doc_length < 12) throw ConfigError("synthetic spec: doc_length must be at least 12");
  if (embedding_dim < 8) throw ConfigError("synthetic spec: embedding_dim must be at least 8");
  const auto& v = vocabulary;
  if (v.near_words_per_concept < 1 || v.weak_words_per_concept < 1 || v.background_words < 10)
    throw ConfigError("synthetic spec: vocabulary pools too small");
  if (!(v.near_min_sim > 0.0 && v.near_min_sim <= v.near_max_sim && v.near_max_sim < 1.0) ||
      !(v.weak_min_sim >= 0.0 && v.weak_min_sim <= v.weak_max_sim && v.weak_max_sim < v.near_min_sim))
    throw ConfigError("synthetic spec: similarity bands must satisfy 0 <= weak < near < 1");
}

namespace {
SynthSpec parse_fields(const nlohmann::json& j);
}  // namespace

SynthSpec parse_synth_spec(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("synthetic spec is not a JSON object");
  static const std::set<std::string> known{"months", "start", "end", "shock_months", "base_docs_per_month", "seed",
                                           "doc_length", "dense_fraction", "base_dense_rate", "single_mention_rate",
                                           "near_miss_rate", "uncertainty_emphasis", "wui_scale", "wui_noise",
                                           "embedding_dim", "vocabulary"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("synthetic spec: unknown field '" + key + "'");
  try {
    return parse_fields(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
}

namespace {

SynthSpec parse_fields(const json& j) {
  SynthSpec spec;
  auto month = [](const json& v) {
    auto m = v.is_string() ? Month::parse(v.get<std::string>()) : std::nullopt;
    if (!m) throw ConfigError("synthetic spec: bad month " + v.dump());
    return *m;
  };
  if (j.contains("months")) {
    for (const auto& v : j["months"]) spec.months.push_back(month(v));
  } else if (j.contains("start") && j.contains("end")) {
    for (Month m = month(j["start"]), e = month(j["end"]); m <= e; m = m.next()) spec.months.push_back(m);
  }
  if (j.contains("shock_months"))
    for (const auto& [k, v] : j["shock_months"].items()) spec.shock_months[month(json(k))] = v.get<double>();
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("base_docs_per_month", spec.base_docs_per_month);
  get("seed", spec.seed);
  get("doc_length", spec.doc_length);
  get("dense_fraction", spec.dense_fraction);
  get("base_dense_rate", spec.base_dense_rate);
  get("single_mention_rate", spec.single_mention_rate);
  get("near_miss_rate", spec.near_miss_rate);
  get("uncertainty_emphasis", spec.uncertainty_emphasis);
  get("wui_scale", spec.wui_scale);
  get("wui_noise", spec.wui_noise);
  get("embedding_dim", spec.embedding_dim);
  if (j.contains("vocabulary")) {
    const auto& v = j["vocabulary"];
    auto vget = [&](const char* key, auto& field) {
      if (v.contains(key)) field = v[key].get<std::decay_t<decltype(field)>>();
    };
    if (v.contains("seeds")) {
      auto seeds = v["seeds"].get<std::vector<std::string>>();
      if (seeds.size() != 3) throw ConfigError("synthetic spec: exactly three seed words required");
      std::copy(seeds.begin(), seeds.end(), spec.vocabulary.seeds.begin());
    }
    vget("near_words_per_concept", spec.vocabulary.near_words_per_concept);
    vget("weak_words_per_concept", spec.vocabulary.weak_words_per_concept);
    vget("background_words", spec.vocabulary.background_words);
    vget("near_min_sim", spec.vocabulary.near_min_sim);
    vget("near_max_sim", spec.vocabulary.near_max_sim);
    vget("weak_min_sim", spec.vocabulary.weak_min_sim);
    vget("weak_max_sim", spec.vocabulary.weak_max_sim);
    vget("seed_word_weight", spec.vocabulary.seed_word_weight);
  }
  spec.validate();
  return spec;
}

}  // namespace

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synthetic spec: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_synth_spec(text);
}

namespace {

// std distributions are implementation-defined; these are not, so output is
// byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(Vec& v) {
  double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

Vec gaussian(Rng& rng, int dim) {
  Vec v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.normal();
  return v;
}

// Unit vector orthogonal to every basis vector.
Vec orthogonal_unit(Rng& rng, int dim, const std::array<Vec, 3>& basis) {
  Vec r = gaussian(rng, dim);
  for (const auto& e : basis) {
    double p = dot(r, e);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p * e[i];
  }
  normalize(r);
  return r;
}

Vec with_similarity(Rng& rng, int dim, const std::array<Vec, 3>& basis, std::size_t concept_index, double sim) {
  Vec r = orthogonal_unit(rng, dim, basis);
  const double rest = std::sqrt(1.0 - sim * sim);
  Vec v(r.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sim * basis[concept_index][i] + rest * r[i];
  return v;
}

std::string suffix_word(const std::string& stem, const char* tag, int k) {
  return stem + tag + std::to_string(k);
}

}  // namespace

SynthCorpus generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const auto& voc = spec.vocabulary;
  const int dim = spec.embedding_dim;
  Rng rng(spec.seed);
  SynthCorpus out;
  out.embeddings = EmbeddingTable(static_cast<std::size_t>(dim));

  // Orthonormal concept directions by Gram-Schmidt.
  std::array<Vec, 3> basis;
  for (std::size_t c = 0; c < 3; ++c) {
    basis[c] = gaussian(rng, dim);
    for (std::size_t p = 0; p < c; ++p) {
      double d = dot(basis[c], basis[p]);
      for (int i = 0; i < dim; ++i) basis[c][static_cast<std::size_t>(i)] -= d * basis[p][static_cast<std::size_t>(i)];
    }
    normalize(basis[c]);
  }

  for (std::size_t c = 0; c < 3; ++c) {
    Vec seed_vec = basis[c];
    double scale = rng.uniform(0.5, 3.0);
    for (double& x : seed_vec) x *= scale;
    out.embeddings.add(voc.seeds[c], seed_vec);
    out.near_words[c].push_back(voc.seeds[c]);
    for (int k = 1; k <= voc.near_words_per_concept; ++k) {
      auto word = suffix_word(voc.seeds[c], "", k);
      double sim = rng.uniform(voc.near_min_sim, voc.near_max_sim);
      out.embeddings.add(word, with_similarity(rng, dim, basis, c, sim));
      out.near_words[c].push_back(word);
    }
    for (int k = 1; k <= voc.weak_words_per_concept; ++k) {
      auto word = suffix_word(voc.seeds[c], "w", k);
      double sim = rng.uniform(voc.weak_min_sim, voc.weak_max_sim);
      out.embeddings.add(word, with_similarity(rng, dim, basis, c, sim));
      out.weak_words[c].push_back(word);
    }
  }
  std::vector<std::string> background;
  for (int k = 1; k <= voc.background_words; ++k) {
    auto word = "w" + std::to_string(k);
    Vec v = orthogonal_unit(rng, dim, basis);
    for (std::size_t c = 0; c < 3; ++c) {
      double leak = rng.uniform(-0.2, 0.2);
      for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] += leak * basis[c][static_cast<std::size_t>(i)];
    }
    out.embeddings.add(word, v);
    background.push_back(std::move(word));
  }
  out.keywords.economy.insert(out.near_words[0].begin(), out.near_words[0].end());
  out.keywords.policy.insert(out.near_words[1].begin(), out.near_words[1].end());
  out.keywords.uncertainty.insert(out.near_words[2].begin(), out.near_words[2].end());

  // Monthly emphasis path for the uncertainty seed: AR(1) rescaled to
  // [0, uncertainty_emphasis].
  std::vector<double> emphasis(spec.months.size(), 0.0);
  {
    double z = 0.0;
    for (auto& e : emphasis) {
      z = 0.8 * z + rng.normal();
      e = z;
    }
    auto [lo, hi] = std::minmax_element(emphasis.begin(), emphasis.end());
    double a = *lo, b = *hi;
    for (auto& e : emphasis) e = b > a ? spec.uncertainty_emphasis * (e - a) / (b - a) : 0.0;
  }

  auto pick_near = [&](std::size_t c) -> const std::string& {
    if (rng.chance(voc.seed_word_weight)) return out.near_words[c][0];
    return out.near_words[c][1 + rng.below(out.near_words[c].size() - 1)];
  };
  auto pick_weak = [&](std::size_t c) -> const std::string& { return out.weak_words[c][rng.below(out.weak_words[c].size())]; };

  for (std::size_t mi = 0; mi < spec.months.size(); ++mi) {
    const Month month = spec.months[mi];
    auto shock = spec.shock_months.find(month);
    const double intensity = shock == spec.shock_months.end() ? 0.0 : shock->second;
    const int total = spec.base_docs_per_month;
    const double dense_share = std::min(1.0, spec.base_dense_rate + intensity * spec.dense_fraction);
    const int dense = static_cast<int>(std::lround(dense_share * total));

    MonthTruth truth;
    truth.intensity = intensity;
    truth.total_docs = total;
    truth.dense_docs = dense;

    using namespace std::chrono;
    const sys_days first_day = year{month.year()} / static_cast<unsigned>(month.month()) / 1;
    const sys_days next_day = year{month.next().year()} / static_cast<unsigned>(month.next().month()) / 1;
    const auto days_in_month = (next_day - first_day).count();

    for (int d = 0; d < total; ++d) {
      const int length = spec.doc_length + static_cast<int>(rng.below(21)) - 10;
      std::vector<std::string> tokens;
      tokens.reserve(static_cast<std::size_t>(length) + 8);
      for (int t = 0; t < length; ++t) tokens.push_back(background[rng.below(background.size())]);

      std::vector<std::string> inserted;
      bool economic = false;
      if (d < dense) {
        for (std::size_t c = 0; c < 3; ++c) inserted.push_back(pick_near(c));
        economic = true;
      } else {
        double u = rng.uniform();
        if (u < spec.single_mention_rate) {
          std::size_t c = rng.below(3);
          inserted.push_back(pick_near(c));
          economic = c == 0;
          if (rng.chance(0.5)) inserted.push_back(pick_weak((c + 1 + rng.below(2)) % 3));
        } else if (u < spec.single_mention_rate + spec.near_miss_rate) {
          std::size_t missing = rng.below(3);
          for (std::size_t c = 0; c < 3; ++c) inserted.push_back(c == missing ? pick_weak(c) : pick_near(c));
          economic = missing != 0;
        }
      }
      // Repeat the uncertainty seed according to this month's emphasis.
      const auto& useed = out.near_words[2][0];
      if (std::find(inserted.begin(), inserted.end(), useed) != inserted.end()) {
        int extra = static_cast<int>(std::floor(emphasis[mi] + rng.uniform()));
        for (int r = 0; r < extra; ++r) inserted.push_back(useed);
      }
      for (auto& w : inserted) {
        auto pos = rng.below(tokens.size() + 1);
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), w);
      }
      truth.uncertainty_count += static_cast<double>(std::count(tokens.begin(), tokens.end(), useed));

      Document doc;
      char id[48];
      std::snprintf(id, sizeof id, "syn-%04d%02d-%05d", month.year(), month.month(), d);
      doc.id = id;
      doc.published_at = static_cast<UnixSeconds>(first_day.time_since_epoch().count()) * 86400 +
                         static_cast<UnixSeconds>(rng.below(static_cast<std::size_t>(days_in_month) * 86400));
      doc.topic = economic ? "economy" : "general";
      const std::size_t title_len = std::min<std::size_t>(6, tokens.size());
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        std::string& dst = t < title_len ? doc.title : doc.body;
        if (!dst.empty()) dst += ' ';
        dst += tokens[t];
      }
      out.documents.push_back(std::move(doc));
    }
    out.truth[month] = truth;
  }

  std::map<Quarter, double> quarter_sums;
  for (const auto& [m, t] : out.truth) quarter_sums[Quarter::of(m)] += t.uncertainty_count;
  for (const auto& [q, s] : quarter_sums)
    out.quarterly_wui[q] = spec.wui_scale * s * (1.0 + spec.wui_noise * rng.normal());
  return out;
}

void write_synthetic(const std::filesystem::path& dir, const SynthCorpus& synth) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("corpus.jsonl");
    for (const auto& doc : synth.documents) f << to_record(doc, false) << '\n';
  }
  {
    auto f = open("shocks.csv");
    f << "month,intensity,planted_dense_docs,total_docs\n";
    for (const auto& [m, t] : synth.truth)
      f << m.str() << ',' << format_double(t.intensity) << ',' << t.dense_docs << ',' << t.total_docs << '\n';
  }
  {
    auto f = open("monthly_truth.csv");
    f << "month,value\n";
    for (const auto& [m, t] : synth.truth) f << m.str() << ',' << format_double(t.uncertainty_count) << '\n';
  }
  {
    auto f = open("quarterly_wui.csv");
    f << "quarter,value\n";
    for (const auto& [q, v] : synth.quarterly_wui) f << q.str() << ',' << format_double(v) << '\n';
  }
  {
    auto f = open("embeddings.txt");
    write_embeddings(f, synth.embeddings);
  }
  auto f = open("keywords.txt");
  auto section = [&](const char* name, std::vector<std::string> words) {
    std::sort(words.begin(), words.end());
    f << '[' << name << "]\n";
    for (const auto& w : words) f << w << '\n';
  };
  section("economy", synth.near_words[0]);
  section("policy", synth.near_words[1]);
  section("uncertainty", synth.near_words[2]);
}

}  // namespace epu
