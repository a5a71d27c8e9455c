#include "tagcorrupt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "tagcorrupt/annotate.hpp"
#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {
namespace {

constexpr std::size_t kChunk = 2048;
constexpr int kOnlineRedraws = 5;
constexpr std::uint64_t kDrawStream = 0x6f66666c696e65ULL;  // "offline"

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs fn(worker, i) for i in [begin, end) on `workers` threads; rethrows the
// first exception after all threads stop.
void parallel_for(std::size_t begin, std::size_t end, std::size_t workers,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (workers <= 1 || end - begin <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(0, i);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t count = std::min(workers, end - begin);
  for (std::size_t w = 0; w < count; ++w) {
    pool.emplace_back([&, w] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= end) break;
        try {
          fn(w, i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::unique_ptr<Scorer> make_scorer(const std::string& name) {
  if (name == "rule") return std::make_unique<RuleScorer>();
  constexpr std::string_view kExternal = "external:";
  if (name.rfind(kExternal, 0) == 0 && name.size() > kExternal.size()) {
    return std::make_unique<ExternalScorer>(name.substr(kExternal.size()));
  }
  throw Error("unknown scorer '" + name + "' (expected rule or external:<command>)");
}

struct Worker {
  std::unique_ptr<Scorer> scorer;
  std::unique_ptr<Corruptor> corruptor;
};

class Engine {
 public:
  explicit Engine(const JobConfig& config) : config_(config) {
    if (!config.lexicon_path.empty()) {
      owned_lex_ = std::make_unique<Lexicon>(Lexicon::with_word_list(config.lexicon_path));
    }
    rules_ = std::make_unique<RuleEngine>(owned_lex_ ? *owned_lex_ : Lexicon::builtin());
    const std::size_t n = std::max<std::size_t>(1, config.workers);
    for (std::size_t w = 0; w < n; ++w) {
      Worker wk;
      wk.scorer = make_scorer(config.scorer);
      wk.corruptor = std::make_unique<Corruptor>(*wk.scorer, *rules_);
      workers_.push_back(std::move(wk));
    }
  }

  const RuleEngine& rules() const { return *rules_; }
  std::size_t size() const { return workers_.size(); }

  std::optional<CorruptionCandidate> corrupt(std::size_t worker, const SentenceContext& ctx, ErrorTag tag,
                                             std::uint64_t seed) {
    Corruptor& c = *workers_[worker].corruptor;
    std::mt19937_64 rng(seed);
    try {
      if (config_.conditioning.direct) return c.decode(ctx, tag, config_.decode, rng);
      return constrained_decode(ctx, build_constraint(tag, config_.conditioning.mode), config_.decode.beam_size, c);
    } catch (const Infeasible&) {
      return std::nullopt;
    }
  }

  std::uint64_t decode_calls() const {
    std::uint64_t total = 0;
    for (const auto& w : workers_) total += w.corruptor->decode_calls();
    return total;
  }

 private:
  const JobConfig& config_;
  std::unique_ptr<Lexicon> owned_lex_;
  std::unique_ptr<RuleEngine> rules_;
  std::vector<Worker> workers_;
};

std::string format_pair(const JobConfig& config, const CorruptionCandidate& cand, const std::string& clean) {
  const std::string corrupted = detokenize(cand.target);
  return config.swap ? clean + "\t" + corrupted : corrupted + "\t" + clean;
}

struct Retained {
  std::size_t line = 0;  // 0-based input index
  const std::string* text = nullptr;
};

// `offset` is the input index of sentences[0].
std::vector<Retained> filter_sentences(const std::vector<std::string>& sentences, std::size_t max_words,
                                       std::vector<SkipEntry>& skipped, std::size_t offset = 0) {
  std::vector<Retained> out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::size_t words = count_words(sentences[i]);
    if (words == 0) {
      skipped.push_back({offset + i + 1, "empty"});
    } else if (words > max_words) {
      skipped.push_back({offset + i + 1, "too_long"});
    } else {
      out.push_back({offset + i, &sentences[i]});
    }
  }
  return out;
}

void run_online(Engine& engine, const std::vector<Retained>& kept, const JobConfig& config,
                const TagDistribution& dist, CorruptResult& result) {
  for (std::size_t start = 0; start < kept.size(); start += kChunk) {
    const std::size_t stop = std::min(kept.size(), start + kChunk);
    std::vector<std::optional<std::string>> lines(stop - start);
    std::vector<std::uint64_t> redraws(stop - start, 0);
    parallel_for(start, stop, engine.size(), [&](std::size_t w, std::size_t i) {
      const Retained& r = kept[i];
      std::mt19937_64 rng(sentence_seed(config.seed, r.line));
      SentenceContext ctx(tokenize(*r.text), engine.rules());
      for (int attempt = 0; attempt <= kOnlineRedraws; ++attempt) {
        const ErrorTag tag = draw_tag(dist, rng);
        if (auto cand = engine.corrupt(w, ctx, tag, rng())) {
          lines[i - start] = format_pair(config, *cand, *r.text);
          return;
        }
        if (attempt < kOnlineRedraws) ++redraws[i - start];
      }
    });
    for (std::size_t i = start; i < stop; ++i) {
      result.stats.redraws += redraws[i - start];
      if (lines[i - start]) {
        result.lines.push_back(std::move(*lines[i - start]));
      } else {
        result.skipped.push_back({kept[i].line + 1, "infeasible"});
      }
    }
  }
}

ScoreMatrix make_matrix(const JobConfig& config, std::size_t rows) {
  const double bytes = static_cast<double>(rows) * kNumErrorTags * sizeof(double);
  if (!config.score_cache.empty()) return ScoreMatrix::mapped(config.score_cache, rows, kNumErrorTags);
  if (bytes > static_cast<double>(config.memory_budget_mb) * 1024.0 * 1024.0) {
    const std::string path = (config.output.empty() ? std::string("tagcorrupt") : config.output) + ".scores";
    return ScoreMatrix::mapped(path, rows, kNumErrorTags);
  }
  return ScoreMatrix(rows, kNumErrorTags);
}

// One decode per (sentence, tag) cell; the cell keeps the decoded candidate's
// log-probability so the realization step can reproduce it from the cell seed.
void fill_matrix(Engine& engine, const std::vector<Retained>& kept, const JobConfig& config, ScoreMatrix& scores,
                 RunStats& stats) {
  std::vector<std::uint64_t> calls(kept.size(), 0);
  parallel_for(0, kept.size(), engine.size(), [&](std::size_t w, std::size_t i) {
    const Retained& r = kept[i];
    std::optional<SentenceContext> ctx;
    for (std::size_t t = 0; t < kNumErrorTags; ++t) {
      if (scores.is_scored(i, t)) continue;
      if (!ctx) ctx.emplace(tokenize(*r.text), engine.rules());
      auto cand = engine.corrupt(w, *ctx, tag_at(t), cell_seed(config.seed, r.line, t));
      scores.set(i, t, cand ? std::min(0.0, cand->log_prob) : kMinScore);
      ++calls[i];
    }
  });
  for (auto c : calls) stats.matrix_calls += c;
  if (scores.file_backed()) scores.flush();
}

void realize(Engine& engine, const std::vector<Retained>& kept, const std::vector<std::size_t>& rows,
             const std::vector<ErrorTag>& tags, const JobConfig& config, CorruptResult& result) {
  std::vector<std::optional<std::string>> lines(rows.size());
  parallel_for(0, rows.size(), engine.size(), [&](std::size_t w, std::size_t k) {
    const Retained& r = kept[rows[k]];
    SentenceContext ctx(tokenize(*r.text), engine.rules());
    if (auto cand = engine.corrupt(w, ctx, tags[k], cell_seed(config.seed, r.line, index_of(tags[k])))) {
      lines[k] = format_pair(config, *cand, *r.text);
    }
  });
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (lines[k]) {
      result.lines.push_back(std::move(*lines[k]));
    } else {
      result.skipped.push_back({kept[rows[k]].line + 1, "infeasible"});
    }
  }
}

void run_offline_optimal(Engine& engine, const std::vector<Retained>& kept, const JobConfig& config,
                         const TagDistribution& dist, CorruptResult& result) {
  ScoreMatrix scores = make_matrix(config, kept.size());
  fill_matrix(engine, kept, config, scores, result.stats);
  std::vector<std::size_t> feasible_rows;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool any = false;
    for (std::size_t t = 0; t < kNumErrorTags && !any; ++t) any = feasible_score(scores.at(i, t));
    if (any) {
      feasible_rows.push_back(i);
    } else {
      result.skipped.push_back({kept[i].line + 1, "infeasible"});
    }
  }
  if (feasible_rows.empty()) return;
  ScoreMatrix sub(feasible_rows.size(), kNumErrorTags);
  for (std::size_t k = 0; k < feasible_rows.size(); ++k) {
    for (std::size_t t = 0; t < kNumErrorTags; ++t) sub.set(k, t, scores.at(feasible_rows[k], t));
  }
  const Assignment a = assign_offline_optimal(sub, dist);
  result.stats.objective = a.objective;
  realize(engine, kept, feasible_rows, a.tags, config, result);
  std::stable_sort(result.skipped.begin(), result.skipped.end(),
                   [](const SkipEntry& x, const SkipEntry& y) { return x.line < y.line; });
}

void run_offline_prob(Engine& engine, const std::vector<Retained>& kept, const JobConfig& config,
                      const TagDistribution& dist, CorruptResult& result) {
  ScoreMatrix scores = make_matrix(config, kept.size());
  fill_matrix(engine, kept, config, scores, result.stats);
  std::mt19937_64 rng(splitmix64(config.seed ^ kDrawStream));
  const Assignment a = assign_offline_prob(scores, dist, config.n_out.value_or(kept.size()), rng);
  std::vector<std::size_t> order(a.sentences.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a.sentences[x] < a.sentences[y]; });
  std::vector<std::size_t> rows;
  std::vector<ErrorTag> tags;
  double objective = 0;
  for (std::size_t k : order) {
    rows.push_back(a.sentences[k]);
    tags.push_back(a.tags[k]);
    objective += scores.at(a.sentences[k], index_of(a.tags[k]));
  }
  result.stats.objective = objective;
  realize(engine, kept, rows, tags, config, result);
}

}  // namespace

Conditioning parse_conditioning(std::string_view text) {
  if (text == "direct") return {};
  return {false, parse_constraint_mode(text)};
}

std::string render_conditioning(const Conditioning& c) {
  return c.direct ? "direct" : std::string(render_constraint_mode(c.mode));
}

std::uint64_t sentence_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  return splitmix64(sentence_seed(seed, index) ^ (tag + 1) * 0x9e3779b97f4a7c15ULL);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

CorruptResult corrupt_corpus(const std::vector<std::string>& sentences, const JobConfig& config,
                             const TagDistribution& dist) {
  if (!config.conditioning.direct && config.decode.beam_size == 0) throw Error("beam size must be at least 1");
  CorruptResult result;
  result.stats.input_lines = sentences.size();
  Engine engine(config);
  const auto kept = filter_sentences(sentences, config.max_words, result.skipped);
  switch (config.method) {
    case Method::Online: run_online(engine, kept, config, dist, result); break;
    case Method::OfflineOptimal: run_offline_optimal(engine, kept, config, dist, result); break;
    case Method::OfflineProb: run_offline_prob(engine, kept, config, dist, result); break;
  }
  std::stable_sort(result.skipped.begin(), result.skipped.end(),
                   [](const SkipEntry& x, const SkipEntry& y) { return x.line < y.line; });
  result.stats.decode_calls = engine.decode_calls();
  result.stats.written = result.lines.size();
  result.stats.skipped = result.skipped.size();
  return result;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void write_chunk(std::ostream& out, std::ostream& skips, const CorruptResult& r) {
  for (const auto& l : r.lines) out << l << '\n';
  for (const auto& s : r.skipped) skips << s.line << '\t' << s.reason << '\n';
}

// Online needs no pool-wide state, so the input is read and written one
// chunk at a time.
RunStats stream_online(const JobConfig& config, const TagDistribution& dist, std::ostream& out,
                       std::ostream& skips) {
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + config.input);
  Engine engine(config);
  RunStats total;
  std::vector<std::string> chunk;
  std::string line;
  bool more = true;
  while (more) {
    chunk.clear();
    while (chunk.size() < kChunk && (more = static_cast<bool>(std::getline(in, line)))) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      chunk.push_back(std::move(line));
    }
    CorruptResult r;
    const auto kept = filter_sentences(chunk, config.max_words, r.skipped, total.input_lines);
    run_online(engine, kept, config, dist, r);
    std::stable_sort(r.skipped.begin(), r.skipped.end(),
                     [](const SkipEntry& x, const SkipEntry& y) { return x.line < y.line; });
    write_chunk(out, skips, r);
    total.input_lines += chunk.size();
    total.written += r.lines.size();
    total.skipped += r.skipped.size();
    total.redraws += r.stats.redraws;
  }
  total.decode_calls = engine.decode_calls();
  return total;
}

}  // namespace

RunStats cmd_corrupt(const JobConfig& config, std::ostream& log) {
  const TagDistribution dist = config.dist_path.empty() ? TagDistribution::uniform()
                                                        : load_distribution(config.dist_path);
  if (!config.conditioning.direct && config.decode.beam_size == 0) throw Error("beam size must be at least 1");
  auto out = open_output(config.output);
  auto skips = open_output(config.skip_log.empty() ? config.output + ".skipped" : config.skip_log);
  RunStats st;
  if (config.method == Method::Online) {
    st = stream_online(config, dist, out, skips);
  } else {
    const CorruptResult result = corrupt_corpus(read_lines(config.input), config, dist);
    write_chunk(out, skips, result);
    st = result.stats;
  }
  if (!out || !skips) throw IoError("write failed: " + config.output);
  log << "method " << render_method(config.method) << ", conditioning " << render_conditioning(config.conditioning)
      << "\ninput " << st.input_lines << ", written " << st.written << ", skipped " << st.skipped
      << "\ndecode calls " << st.decode_calls << ", matrix cells scored " << st.matrix_calls << '\n';
  if (config.method == Method::OfflineOptimal) log << "objective " << st.objective << '\n';
  return st;
}

TagCountArray count_pair_tags(std::istream& in, bool swap, const Lexicon& lex) {
  TagCountArray counts{};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_tabs(line);
    if (fields.size() != 2) throw MalformedLine(number, "expected exactly one tab");
    const auto& clean = swap ? fields[0] : fields[1];
    const auto& corrupted = swap ? fields[1] : fields[0];
    for (const auto& e : annotate_pair(clean, corrupted, lex)) ++counts[index_of(e.tag)];
  }
  return counts;
}

TagDistribution cmd_estimate(const std::string& pairs_path, bool swap, const Lexicon& lex, std::ostream& log) {
  std::ifstream in(pairs_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + pairs_path);
  const TagCountArray counts = count_pair_tags(in, swap, lex);
  std::size_t total = 0;
  for (auto c : counts) total += c;
  log << "edits " << total << '\n';
  for (ErrorTag t : error_tags()) {
    if (counts[index_of(t)] > 0) log << render_tag(t) << '\t' << counts[index_of(t)] << '\n';
  }
  return estimate_distribution(counts);
}

std::vector<std::pair<std::string, TagDistribution>> cmd_estimate_by_label(const std::string& pairs_path,
                                                                           bool swap, const Lexicon& lex,
                                                                           std::ostream& log) {
  std::ifstream in(pairs_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + pairs_path);
  std::map<std::string, TagCountArray> groups;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_tabs(line);
    if (fields.size() != 3) throw MalformedLine(number, "expected corrupted<TAB>clean<TAB>label");
    auto& counts = groups[std::string(fields[2])];
    const auto& clean = swap ? fields[0] : fields[1];
    const auto& corrupted = swap ? fields[1] : fields[0];
    for (const auto& e : annotate_pair(clean, corrupted, lex)) ++counts[index_of(e.tag)];
  }
  if (groups.empty()) throw EmptyCorpus();
  std::vector<std::pair<std::string, TagDistribution>> out;
  for (const auto& [label, counts] : groups) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    log << label << " edits " << total << '\n';
    out.emplace_back(label, estimate_distribution(counts));
  }
  return out;
}

std::size_t cmd_annotate(std::istream& in, std::ostream& out, const Lexicon& lex, std::size_t workers) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  std::vector<std::string> records(lines.size());
  parallel_for(0, lines.size(), workers, [&](std::size_t, std::size_t i) {
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) throw MalformedLine(i + 1, "expected exactly one tab");
    AnnotatedPair p{std::string(fields[0]), std::string(fields[1]), {}};
    p.edits = annotate_pair(p.source, p.target, lex);
    records[i] = annotation_to_json(p);
  });
  for (const auto& r : records) out << r << '\n';
  return records.size();
}

EvalReport cmd_evaldist(const std::string& pairs_path, const TagDistribution& target, double tolerance,
                        bool swap, const Lexicon& lex) {
  std::ifstream in(pairs_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + pairs_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (buffer.str().empty()) throw EmptyCorpus("empty pairs file: " + pairs_path);
  EvalReport r;
  r.target = target;
  for (char c : buffer.str()) r.pairs += c == '\n';
  if (buffer.str().back() != '\n') ++r.pairs;
  r.counts = count_pair_tags(buffer, swap, lex);
  r.observed = estimate_distribution(r.counts);
  r.tv = tv_distance(r.observed, target);
  r.pass = r.tv <= tolerance;
  return r;
}

void print_report(const EvalReport& r, std::ostream& out) {
  out << "tag\tcount\tobserved\ttarget\n" << std::fixed << std::setprecision(4);
  for (ErrorTag t : error_tags()) {
    out << render_tag(t) << '\t' << r.counts[index_of(t)] << '\t' << r.observed[t] << '\t' << r.target[t] << '\n';
  }
  out << "pairs\t" << r.pairs << "\ntv_distance\t" << std::setprecision(6) << r.tv << "\nresult\t"
      << (r.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace tagcorrupt
