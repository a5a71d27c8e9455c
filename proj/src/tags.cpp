#include "tagcorrupt/tags.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {
namespace {

constexpr std::array<std::string_view, kNumErrorTags + 1> kLabels = {
    "ADJ",       "ADJ:FORM",  "ADV",       "CONJ",  "CONTR", "DET",  "MORPH",
    "NOUN",      "NOUN:INFL", "NOUN:NUM",  "NOUN:POSS", "ORTH", "OTHER", "PART",
    "PREP",      "PRON",      "PUNCT",     "SPELL", "UNK",   "VERB", "VERB:FORM",
    "VERB:INFL", "VERB:SVA",  "VERB:TENSE", "WO",   "SELF",
};

}  // namespace

const std::array<ErrorTag, kNumErrorTags>& error_tags() {
  static const auto tags = [] {
    std::array<ErrorTag, kNumErrorTags> out{};
    for (std::size_t i = 0; i < kNumErrorTags; ++i) out[i] = tag_at(i);
    return out;
  }();
  return tags;
}

std::string_view render_tag(ErrorTag tag) { return kLabels[index_of(tag)]; }

ErrorTag parse_tag(std::string_view text) {
  if (text == "K") return ErrorTag::Unk;
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    if (kLabels[i] == text) return tag_at(i);
  }
  throw UnknownTag(std::string(text));
}

TagDistribution::TagDistribution() { probs_.fill(1.0 / kNumErrorTags); }

TagDistribution TagDistribution::from_probabilities(const std::array<double, kNumErrorTags>& probs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumErrorTags; ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw InvalidDistribution("probability of " + std::string(kLabels[i]) + " is negative or not finite");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << sum << ", expected 1";
    throw InvalidDistribution(msg.str());
  }
  return TagDistribution(probs);
}

TagDistribution TagDistribution::from_map(const std::map<ErrorTag, double>& probs) {
  std::array<double, kNumErrorTags> dense{};
  for (const auto& [tag, p] : probs) {
    if (!is_error_tag(tag)) throw InvalidDistribution("SELF cannot carry probability mass");
    dense[index_of(tag)] = p;
  }
  return from_probabilities(dense);
}

TagDistribution TagDistribution::from_counts(const TagCountArray& counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw EmptyCorpus();
  std::array<double, kNumErrorTags> probs{};
  for (std::size_t i = 0; i < kNumErrorTags; ++i) {
    probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return TagDistribution(probs);
}

TagDistribution TagDistribution::uniform() { return TagDistribution(); }

TagDistribution estimate_distribution(const TagCountArray& edit_counts) {
  return TagDistribution::from_counts(edit_counts);
}

TagCountArray target_counts(const TagDistribution& dist, std::size_t n) {
  TagCountArray counts{};
  std::array<double, kNumErrorTags> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < kNumErrorTags; ++i) {
    double quota = dist.probabilities()[i] * static_cast<double>(n);
    const double nearest = std::round(quota);
    if (std::abs(quota - nearest) < 1e-9) quota = nearest;
    const double whole = std::floor(quota);
    counts[i] = static_cast<std::size_t>(whole);
    remainder[i] = quota - whole;
    assigned += counts[i];
  }
  std::array<std::size_t, kNumErrorTags> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // Leftovers can exceed 25 only through rounding noise in a near-invalid
  // distribution; cycling keeps the sum exact regardless.
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
    ++counts[order[k % kNumErrorTags]];
  }
  return counts;
}

double tv_distance(const TagDistribution& p, const TagDistribution& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumErrorTags; ++i) {
    sum += std::abs(p.probabilities()[i] - q.probabilities()[i]);
  }
  return 0.5 * sum;
}

TagDistribution parse_distribution_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidDistribution(std::string("distribution is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidDistribution("distribution must be a JSON object");
  std::array<double, kNumErrorTags> probs{};
  double sum = 0.0;
  for (const auto& [key, value] : doc.items()) {
    const ErrorTag tag = parse_tag(key);
    if (!is_error_tag(tag)) throw InvalidDistribution("SELF cannot carry probability mass");
    if (!value.is_number()) throw InvalidDistribution("weight of " + key + " is not a number");
    const double p = value.get<double>();
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidDistribution("weight of " + key + " is negative");
    probs[index_of(tag)] += p;
    sum += p;
  }
  if (sum < 0.99 || sum > 1.01) {
    std::ostringstream msg;
    msg << "distribution weights sum to " << sum << ", outside [0.99, 1.01]";
    throw InvalidDistribution(msg.str());
  }
  for (double& p : probs) p /= sum;
  // Renormalization can leave a rounding residue beyond 1e-9 only in
  // pathological inputs; absorb it into the largest entry.
  const double residue = 1.0 - std::accumulate(probs.begin(), probs.end(), 0.0);
  *std::max_element(probs.begin(), probs.end()) += residue;
  return TagDistribution::from_probabilities(probs);
}

TagDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open distribution file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_distribution_json(buffer.str());
}

std::string distribution_to_json(const TagDistribution& dist, bool include_zeros) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (ErrorTag tag : error_tags()) {
    const double p = dist[tag];
    if (p > 0.0 || include_zeros) doc[std::string(render_tag(tag))] = p;
  }
  return doc.dump(2);
}

}  // namespace tagcorrupt
