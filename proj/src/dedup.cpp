#include "epu/dedup.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "epu/error.hpp"

namespace epu {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> salts(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> out(n);
  std::uint64_t state = seed;
  for (auto& s : out) {
    state += 0x9e3779b97f4a7c15ULL;
    s = mix64(state);
  }
  return out;
}

MinHashSignature signature_with(std::span<const std::uint64_t> shingle_set, std::span<const std::uint64_t> salt,
                                std::string doc_id) {
  MinHashSignature sig;
  sig.doc_id = std::move(doc_id);
  sig.values.assign(salt.size(), std::numeric_limits<std::uint64_t>::max());
  sig.empty = shingle_set.empty();
  for (std::uint64_t sh : shingle_set)
    for (std::size_t i = 0; i < salt.size(); ++i) sig.values[i] = std::min(sig.values[i], mix64(sh ^ salt[i]));
  return sig;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::set<Shingle> shingles(std::span<const std::string> tokens, std::size_t k) {
  std::set<Shingle> out;
  if (k == 0) throw ConfigError("shingle size must be at least 1");
  if (tokens.size() < k) return out;
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) out.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                                                  tokens.begin() + static_cast<std::ptrdiff_t>(i + k));
  return out;
}

std::vector<std::uint64_t> shingle_hashes(std::span<const std::string> tokens, std::size_t k) {
  std::vector<std::uint64_t> out;
  if (k == 0) throw ConfigError("shingle size must be at least 1");
  if (tokens.size() < k) return out;
  out.reserve(tokens.size() - k + 1);
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
    std::uint64_t h = kFnvOffset;
    for (std::size_t j = i; j < i + k; ++j) {
      h = fnv1a(tokens[j], h);
      h = fnv1a(std::string_view("\x1f", 1), h);
    }
    out.push_back(h);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MinHashSignature signature(std::span<const std::uint64_t> shingle_set, std::size_t num_hashes, std::uint64_t seed,
                           std::string doc_id) {
  if (num_hashes == 0) throw ConfigError("num_hashes must be at least 1");
  auto salt = salts(num_hashes, seed);
  return signature_with(shingle_set, salt, std::move(doc_id));
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.empty || b.empty || a.values.size() != b.values.size() || a.values.empty()) return 0.0;
  std::size_t eq = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) eq += a.values[i] == b.values[i];
  return static_cast<double>(eq) / static_cast<double>(a.values.size());
}

double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

double jaccard(const std::set<Shingle>& a, const std::set<Shingle>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& s : a) inter += b.contains(s);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

void DedupConfig::validate() const {
  if (shingle_size == 0) throw ConfigError("shingle size must be at least 1");
  if (num_hashes == 0 || bands == 0 || rows_per_band == 0) throw ConfigError("hash, band and row counts must be positive");
  if (bands * rows_per_band != num_hashes)
    throw ConfigError("bands × rows_per_band (" + std::to_string(bands) + " × " + std::to_string(rows_per_band) +
                      ") must equal num_hashes (" + std::to_string(num_hashes) + ")");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("jaccard threshold must lie in (0, 1]");
}

std::vector<MinHashSignature> signatures_serial(std::span<const Document> docs, const DedupConfig& config) {
  auto salt = salts(config.num_hashes, config.seed);
  std::vector<MinHashSignature> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(signature_with(shingle_hashes(d.tokens, config.shingle_size), salt, d.id));
  return out;
}

std::vector<MinHashSignature> signatures(std::span<const Document> docs, const DedupConfig& config) {
  auto salt = salts(config.num_hashes, config.seed);
  std::vector<MinHashSignature> out(docs.size());
  const int nthreads = config.threads > 0 ? config.threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& d = docs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = signature_with(shingle_hashes(d.tokens, config.shingle_size), salt, d.id);
  }
  return out;
}

DedupResult find_near_duplicates(std::span<const Document> docs, const DedupConfig& config) {
  config.validate();
  const int nthreads = config.threads > 0 ? config.threads : omp_get_max_threads();
  auto sigs = signatures(docs, config);

  // One bucket map per band; bands are independent so each is built by one
  // thread and the merged candidate list is sorted afterwards.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> band_pairs(config.bands);
  const auto nb = static_cast<std::int64_t>(config.bands);
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nb; ++b) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    const auto offset = static_cast<std::size_t>(b) * config.rows_per_band;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      if (sigs[i].empty) continue;
      std::uint64_t key = kFnvOffset;
      for (std::size_t r = 0; r < config.rows_per_band; ++r) key = mix64(key ^ sigs[i].values[offset + r]) + r;
      buckets[key].push_back(i);
    }
    auto& pairs = band_pairs[static_cast<std::size_t>(b)];
    for (const auto& [key, members] : buckets)
      for (std::size_t x = 0; x < members.size(); ++x)
        for (std::size_t y = x + 1; y < members.size(); ++y) pairs.emplace_back(members[x], members[y]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (auto& p : band_pairs) candidates.insert(candidates.end(), p.begin(), p.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  DedupResult result;
  result.candidate_pairs = candidates.size();
  std::vector<char> verified(candidates.size(), 0);
  const auto nc = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 16)
  for (std::int64_t c = 0; c < nc; ++c) {
    auto [i, j] = candidates[static_cast<std::size_t>(c)];
    auto a = shingles(docs[i].tokens, config.shingle_size);
    auto b = shingles(docs[j].tokens, config.shingle_size);
    verified[static_cast<std::size_t>(c)] = jaccard(a, b) >= config.threshold;
  }

  UnionFind uf(docs.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!verified[c]) continue;
    result.verified_pairs.push_back(candidates[c]);
    uf.unite(candidates[c].first, candidates[c].second);
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (const auto& [i, j] : result.verified_pairs) {
    components[uf.find(i)];
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto it = components.find(uf.find(i));
    if (it != components.end()) it->second.push_back(i);
  }
  auto earlier = [&](std::size_t a, std::size_t b) {
    if (docs[a].published_at != docs[b].published_at) return docs[a].published_at < docs[b].published_at;
    return docs[a].id < docs[b].id;
  };
  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end(), earlier);
    result.groups.push_back({members, members.front()});
  }
  std::sort(result.groups.begin(), result.groups.end(),
            [&](const DuplicateGroup& a, const DuplicateGroup& b) { return earlier(a.representative, b.representative); });
  return result;
}

MonthlySeries dedup_event_counts(const Corpus& corpus, const std::unordered_set<std::string>& filter_terms,
                                 const DedupConfig& config) {
  std::vector<Document> matching;
  for (const auto& d : corpus.documents)
    if (std::any_of(d.tokens.begin(), d.tokens.end(), [&](const std::string& t) { return filter_terms.contains(t); }))
      matching.push_back(d);
  auto dups = find_near_duplicates(matching, config);
  std::vector<char> counted(matching.size(), 1);
  for (const auto& g : dups.groups)
    for (std::size_t i : g.members) counted[i] = i == g.representative;

  std::map<Month, double> counts;
  for (std::size_t i = 0; i < matching.size(); ++i)
    if (counted[i]) counts[matching[i].month()] += 1.0;

  MonthlySeries series;
  series.label = "events";
  series.stage = Stage::Raw;
  auto range = stats_range(corpus.stats);
  if (!range) return series;
  for (Month m : range->months()) {
    auto it = corpus.stats.docs_per_month.find(m);
    if (it == corpus.stats.docs_per_month.end() || it->second == 0) {
      series.values[m] = std::nullopt;
      continue;
    }
    auto c = counts.find(m);
    series.values[m] = c == counts.end() ? 0.0 : c->second;
  }
  return series;
}

}  // namespace epu
