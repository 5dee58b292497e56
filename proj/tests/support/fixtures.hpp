#pragma once

#include <string>
#include <vector>

#include "epu/corpus.hpp"
#include "epu/tokenizer.hpp"

namespace fixture {

inline epu::Document doc(std::string id, const std::string& date, const std::string& text, std::string topic = {}) {
  epu::Document d;
  d.id = std::move(id);
  d.published_at = *epu::parse_iso8601(date);
  d.body = text;
  d.topic = std::move(topic);
  d.tokens = epu::tokenize(text);
  return d;
}

inline epu::Corpus corpus(std::vector<epu::Document> docs) {
  epu::Corpus c;
  c.documents = std::move(docs);
  c.stats = epu::compute_stats(c.documents, 1);
  return c;
}

}  // namespace fixture
