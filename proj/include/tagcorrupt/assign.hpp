#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/tags.hpp"

namespace tagcorrupt {

// rows x cols log-probabilities, row-major. Unscored cells hold NaN; pairs
// with no corruption hold kMinScore. Storage is either heap memory or a
// memory-mapped cache file.
class ScoreMatrix {
 public:
  static constexpr char kMagic[9] = "TCSMAT01";
  static constexpr std::size_t kHeaderBytes = 24;  // magic, uint64 rows, uint64 cols

  ScoreMatrix(std::size_t rows, std::size_t cols);
  // Opens (resuming) or creates a memory-mapped cache file. An existing file
  // with other dimensions throws IoError.
  static ScoreMatrix mapped(const std::string& path, std::size_t rows, std::size_t cols);
  static ScoreMatrix load(const std::string& path);

  ScoreMatrix(ScoreMatrix&&) noexcept;
  ScoreMatrix& operator=(ScoreMatrix&&) noexcept;
  ~ScoreMatrix();

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t n, std::size_t t) const { return data_[n * cols_ + t]; }
  void set(std::size_t n, std::size_t t, double v) { data_[n * cols_ + t] = v; }
  bool is_scored(std::size_t n, std::size_t t) const;
  bool file_backed() const { return map_ != nullptr; }

  void save(const std::string& path) const;
  void flush() const;

 private:
  ScoreMatrix() = default;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> heap_;
  void* map_ = nullptr;
  std::size_t map_bytes_ = 0;
  double* data_ = nullptr;
};

bool feasible_score(double score);

enum class Method { Online, OfflineOptimal, OfflineProb };
Method parse_method(std::string_view text);
std::string_view render_method(Method method);

struct Assignment {
  Method method = Method::Online;
  std::uint64_t seed = 0;
  // tags[k] is the tag assigned to sentence sentences[k].
  std::vector<ErrorTag> tags;
  std::vector<std::size_t> sentences;
  double objective = 0.0;  // sum of chosen scores (offline methods)
};

// One categorical draw using a single generator call.
std::size_t draw_index(std::span<const double> probs, std::mt19937_64& rng);
ErrorTag draw_tag(const TagDistribution& dist, std::mt19937_64& rng);

Assignment assign_online(const TagDistribution& dist, std::size_t n, std::mt19937_64& rng);

struct FlowStats {
  std::int64_t total_cost = 0;  // fixed-point (1e-6) units
  std::size_t augmentations = 0;
  bool certificate_ok = false;
};

// Exact min-cost assignment of rows to columns with column counts equal to
// `quotas` (which must sum to rows). Cells that are not feasible_score are
// left out of the graph. Columns are named by `names` in errors.
// Throws InfeasibleQuota listing columns whose quota cannot be met.
std::vector<std::size_t> solve_quota_assignment(const ScoreMatrix& scores, std::span<const std::size_t> quotas,
                                                std::span<const std::string> names, FlowStats* stats = nullptr);

// Columns follow error_tags() order.
Assignment assign_offline_optimal(const ScoreMatrix& scores, const TagDistribution& dist,
                                  FlowStats* stats = nullptr);

// exp(score) / cols; 0 for kMinScore.
double posterior_tag(const ScoreMatrix& scores, std::size_t n, std::size_t t);

// n_out draws of (tag ~ dist, sentence ~ softmax(scores[., tag])), with
// replacement. Throws EmptySupport when a drawable tag has no feasible row.
Assignment assign_offline_prob(const ScoreMatrix& scores, const TagDistribution& dist, std::size_t n_out,
                               std::mt19937_64& rng);

}  // namespace tagcorrupt
