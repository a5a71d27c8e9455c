#include "tagcorrupt/assign.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {

bool feasible_score(double score) { return std::isfinite(score) && score > kMinScore; }

Method parse_method(std::string_view text) {
  if (text == "online") return Method::Online;
  if (text == "offline-optimal") return Method::OfflineOptimal;
  if (text == "offline-prob") return Method::OfflineProb;
  throw Error("unknown method: " + std::string(text));
}

std::string_view render_method(Method method) {
  switch (method) {
    case Method::Online: return "online";
    case Method::OfflineOptimal: return "offline-optimal";
    case Method::OfflineProb: return "offline-prob";
  }
  return "online";
}

std::size_t draw_index(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double total = 0;
  for (double p : probs) total += p;
  double cum = 0;
  std::size_t last = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    cum += probs[i];
    last = i;
    if (u * total < cum) return i;
  }
  if (last == probs.size()) throw EmptySupport("categorical draw over an empty support");
  return last;
}

ErrorTag draw_tag(const TagDistribution& dist, std::mt19937_64& rng) {
  return tag_at(draw_index(dist.probabilities(), rng));
}

Assignment assign_online(const TagDistribution& dist, std::size_t n, std::mt19937_64& rng) {
  Assignment a;
  a.method = Method::Online;
  a.tags.reserve(n);
  a.sentences.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.tags.push_back(draw_tag(dist, rng));
    a.sentences.push_back(i);
  }
  return a;
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Min-heap of (cost, row) with lazy deletion.
using Entry = std::pair<std::int64_t, std::size_t>;
using Heap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

// Successive shortest paths on the graph contracted onto the columns:
// S -> column (cheapest unassigned row), column -> column (cheapest row move),
// column -> T (remaining quota). Row nodes have a single residual in-arc, so
// shortest paths through them are preserved by the contraction.
class QuotaSolver {
 public:
  QuotaSolver(const ScoreMatrix& s, std::span<const std::size_t> quotas)
      : rows_(s.rows()), cols_(s.cols()), quotas_(quotas.begin(), quotas.end()),
        cost_(rows_ * cols_, kInf), assigned_(rows_, kNone), count_(cols_, 0),
        entry_(cols_), transfer_(cols_ * cols_), potential_(cols_ + 2, 0) {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const double v = s.at(i, k);
        if (!feasible_score(v)) continue;
        cost_[i * cols_ + k] = std::llround(-v * 1e6);
        entry_[k].push({cost_[i * cols_ + k], i});
      }
    }
  }

  // Returns false when the sink is unreachable.
  bool augment() {
    const std::size_t src = cols_;
    const std::size_t sink = cols_ + 1;
    const std::size_t nodes = cols_ + 2;
    std::vector<std::int64_t> dist(nodes, kInf);
    std::vector<std::size_t> pred(nodes, kNone);
    std::vector<std::size_t> pred_row(nodes, kNone);
    std::vector<bool> done(nodes, false);
    dist[src] = 0;
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, src});
    auto relax = [&](std::size_t u, std::size_t v, std::int64_t w, std::size_t row) {
      const std::int64_t nd = dist[u] + w + potential_[u] - potential_[v];
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = u;
        pred_row[v] = row;
        pq.push({nd, v});
      }
    };
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u] || d != dist[u]) continue;
      done[u] = true;
      if (u == sink) continue;
      if (u == src) {
        for (std::size_t k = 0; k < cols_; ++k) {
          if (auto top = entry_top(k)) relax(src, k, top->first, top->second);
        }
        continue;
      }
      if (count_[u] < quotas_[u]) relax(u, sink, 0, kNone);
      for (std::size_t k = 0; k < cols_; ++k) {
        if (k == u) continue;
        if (auto top = transfer_top(u, k)) relax(u, k, top->first, top->second);
      }
    }
    if (dist[sink] >= kInf) return false;
    for (std::size_t v = 0; v < nodes; ++v) potential_[v] += std::min(dist[v], dist[sink]);

    // Walk back from the sink; moves are applied after all rows are known.
    std::vector<std::pair<std::size_t, std::size_t>> moves;  // (row, new column)
    std::size_t v = pred[sink];
    ++count_[v];
    while (v != src) {
      moves.emplace_back(pred_row[v], v);
      v = pred[v];
    }
    for (auto [row, col] : moves) assign(row, col);
    ++augmentations_;
    return true;
  }

  bool certify() const {
    // Bellman-Ford over exact residual column-to-column arcs.
    std::vector<std::int64_t> pi(cols_, 0);
    auto arc = [&](std::size_t a, std::size_t b) {
      std::int64_t best = kInf;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (assigned_[i] != a || cost_[i * cols_ + b] >= kInf) continue;
        best = std::min(best, cost_[i * cols_ + b] - cost_[i * cols_ + a]);
      }
      return best;
    };
    std::vector<std::int64_t> w(cols_ * cols_, kInf);
    for (std::size_t a = 0; a < cols_; ++a) {
      for (std::size_t b = 0; b < cols_; ++b) {
        if (a != b) w[a * cols_ + b] = arc(a, b);
      }
    }
    for (std::size_t iter = 0; iter <= cols_; ++iter) {
      bool changed = false;
      for (std::size_t a = 0; a < cols_; ++a) {
        for (std::size_t b = 0; b < cols_; ++b) {
          const std::int64_t c = w[a * cols_ + b];
          if (c < kInf && pi[a] + c < pi[b]) {
            pi[b] = pi[a] + c;
            changed = true;
          }
        }
      }
      if (!changed) break;
      if (iter == cols_) return false;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      const std::size_t a = assigned_[i];
      if (a == kNone) return false;
      for (std::size_t b = 0; b < cols_; ++b) {
        const std::int64_t c = cost_[i * cols_ + b];
        if (b == a || c >= kInf) continue;
        if (c - cost_[i * cols_ + a] + pi[a] - pi[b] < 0) return false;
      }
    }
    return true;
  }

  std::vector<std::size_t> starved() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < cols_; ++k) {
      if (count_[k] < quotas_[k]) out.push_back(k);
    }
    return out;
  }

  const std::vector<std::size_t>& assignment() const { return assigned_; }
  std::size_t augmentations() const { return augmentations_; }
  std::int64_t total_cost() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (assigned_[i] != kNone) t += cost_[i * cols_ + assigned_[i]];
    }
    return t;
  }

 private:
  std::optional<Entry> entry_top(std::size_t k) {
    Heap& h = entry_[k];
    while (!h.empty() && assigned_[h.top().second] != kNone) h.pop();
    if (h.empty()) return std::nullopt;
    return h.top();
  }

  std::optional<Entry> transfer_top(std::size_t from, std::size_t to) {
    Heap& h = transfer_[from * cols_ + to];
    while (!h.empty() && assigned_[h.top().second] != from) h.pop();
    if (h.empty()) return std::nullopt;
    return h.top();
  }

  void assign(std::size_t row, std::size_t col) {
    assigned_[row] = col;
    const std::int64_t base = cost_[row * cols_ + col];
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::int64_t c = cost_[row * cols_ + k];
      if (k != col && c < kInf) transfer_[col * cols_ + k].push({c - base, row});
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::size_t> quotas_;
  std::vector<std::int64_t> cost_;
  std::vector<std::size_t> assigned_;
  std::vector<std::size_t> count_;
  std::vector<Heap> entry_;
  std::vector<Heap> transfer_;
  std::vector<std::int64_t> potential_;
  std::size_t augmentations_ = 0;
};

}  // namespace

std::vector<std::size_t> solve_quota_assignment(const ScoreMatrix& scores, std::span<const std::size_t> quotas,
                                                std::span<const std::string> names, FlowStats* stats) {
  if (quotas.size() != scores.cols()) throw Error("quota vector does not match the score matrix");
  std::size_t total = 0;
  for (auto q : quotas) total += q;
  if (total != scores.rows()) throw Error("quotas must sum to the number of rows");

  QuotaSolver solver(scores, quotas);
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    if (!solver.augment()) {
      std::vector<std::string> starved;
      std::string list;
      for (auto k : solver.starved()) {
        starved.push_back(k < names.size() ? names[k] : std::to_string(k));
        list += (list.empty() ? "" : ", ") + starved.back();
      }
      throw InfeasibleQuota("quotas cannot be met; starved tags: " + list, std::move(starved));
    }
  }
  const bool ok = solver.certify();
  if (!ok) throw Error("min-cost flow optimality certificate failed");
  if (stats) {
    stats->total_cost = solver.total_cost();
    stats->augmentations = solver.augmentations();
    stats->certificate_ok = ok;
  }
  return solver.assignment();
}

Assignment assign_offline_optimal(const ScoreMatrix& scores, const TagDistribution& dist, FlowStats* stats) {
  if (scores.cols() != kNumErrorTags) throw Error("score matrix must have one column per error tag");
  if (scores.rows() == 0) throw EmptyCorpus("no sentences to assign");
  const TagCountArray quotas = target_counts(dist, scores.rows());
  std::vector<std::string> names;
  for (ErrorTag t : error_tags()) names.emplace_back(render_tag(t));
  const auto cols = solve_quota_assignment(scores, quotas, names, stats);
  Assignment a;
  a.method = Method::OfflineOptimal;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    a.tags.push_back(tag_at(cols[i]));
    a.sentences.push_back(i);
    a.objective += scores.at(i, cols[i]);
  }
  return a;
}

double posterior_tag(const ScoreMatrix& scores, std::size_t n, std::size_t t) {
  const double s = scores.at(n, t);
  if (!feasible_score(s)) return 0.0;
  return std::exp(s) / static_cast<double>(scores.cols());
}

Assignment assign_offline_prob(const ScoreMatrix& scores, const TagDistribution& dist, std::size_t n_out,
                               std::mt19937_64& rng) {
  if (scores.cols() != kNumErrorTags) throw Error("score matrix must have one column per error tag");
  // Per-tag cumulative weights exp(score - max) over feasible rows.
  std::vector<std::vector<double>> cdf(kNumErrorTags);
  for (std::size_t t = 0; t < kNumErrorTags; ++t) {
    if (dist.probabilities()[t] <= 0) continue;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < scores.rows(); ++n) {
      if (feasible_score(scores.at(n, t))) top = std::max(top, scores.at(n, t));
    }
    if (!std::isfinite(top)) {
      throw EmptySupport("no sentence can carry tag " + std::string(render_tag(tag_at(t))));
    }
    auto& c = cdf[t];
    c.resize(scores.rows());
    double total = 0;
    for (std::size_t n = 0; n < scores.rows(); ++n) {
      const double s = scores.at(n, t);
      total += feasible_score(s) ? std::exp(s - top) : 0.0;
      c[n] = total;
    }
  }
  Assignment a;
  a.method = Method::OfflineProb;
  for (std::size_t k = 0; k < n_out; ++k) {
    const std::size_t t = draw_index(dist.probabilities(), rng);
    const auto& c = cdf[t];
    const double u = uniform01(rng) * c.back();
    std::size_t m = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
    if (m >= c.size()) m = c.size() - 1;
    a.tags.push_back(tag_at(t));
    a.sentences.push_back(m);
    a.objective += scores.at(m, t);
  }
  return a;
}

}  // namespace tagcorrupt
