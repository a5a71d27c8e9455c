#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "tagcorrupt/annotate.hpp"
#include "tagcorrupt/assign.hpp"
#include "tagcorrupt/constrain.hpp"
#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/errors.hpp"
#include "tagcorrupt/pipeline.hpp"

namespace py = pybind11;
using namespace tagcorrupt;

namespace {

using DistDict = std::map<std::string, double>;

TagDistribution to_dist(const DistDict& probs) {
  std::map<ErrorTag, double> m;
  for (const auto& [name, p] : probs) m[parse_tag(name)] = p;
  return TagDistribution::from_map(m);
}

DistDict from_dist(const TagDistribution& d) {
  DistDict out;
  for (ErrorTag t : error_tags()) {
    if (d[t] > 0) out[std::string(render_tag(t))] = d[t];
  }
  return out;
}

py::list edits_to_py(const std::vector<Edit>& edits) {
  py::list out;
  for (const auto& e : edits) {
    py::dict d;
    d["start"] = e.src_start;
    d["end"] = e.src_end;
    d["replacement"] = join_surface(e.replacement);
    d["tag"] = std::string(render_tag(e.tag));
    out.append(d);
  }
  return out;
}

// Single-sentence corruption with the built-in rule scorer.
py::tuple corrupt_sentence(const std::string& sentence, const std::string& tag, const std::string& constraint,
                           const std::string& decode, std::size_t beam_size, double temperature,
                           std::uint64_t seed) {
  static const RuleEngine engine;
  RuleScorer scorer;
  Corruptor corruptor(scorer, engine);
  SentenceContext ctx(tokenize(sentence), engine);
  const Conditioning cond = parse_conditioning(constraint);
  CorruptionCandidate cand;
  if (cond.direct) {
    DecodeOptions opts;
    opts.mode = parse_decode_mode(decode);
    opts.beam_size = beam_size;
    opts.temperature = temperature;
    std::mt19937_64 rng(seed);
    cand = corruptor.decode(ctx, parse_tag(tag), opts, rng);
  } else {
    cand = constrained_decode(ctx, build_constraint(parse_tag(tag), cond.mode), beam_size, corruptor);
  }
  return py::make_tuple(detokenize(cand.target), cand.log_prob);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tag-controlled synthetic grammatical error generation";

  py::register_exception<Error>(m, "TagCorruptError");
  py::register_exception<Infeasible>(m, "Infeasible", m.attr("TagCorruptError"));
  py::register_exception<EmptyCorpus>(m, "EmptyCorpus", m.attr("TagCorruptError"));
  py::register_exception<InfeasibleQuota>(m, "InfeasibleQuota", m.attr("TagCorruptError"));

  m.def("tags", [] {
    std::vector<std::string> out;
    for (ErrorTag t : error_tags()) out.emplace_back(render_tag(t));
    return out;
  });
  m.def("tokenize", [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(s)) out.push_back(t.surface);
    return out;
  });
  m.def("annotate", [](const std::string& clean, const std::string& corrupted) {
    return edits_to_py(annotate_pair(clean, corrupted));
  }, py::arg("clean"), py::arg("corrupted"));
  m.def("tv_distance", [](const DistDict& p, const DistDict& q) { return tv_distance(to_dist(p), to_dist(q)); });
  m.def("estimate", [](const std::vector<std::pair<std::string, std::string>>& pairs) {
    TagCountArray counts{};
    for (const auto& [corrupted, clean] : pairs) {
      for (const auto& e : annotate_pair(clean, corrupted)) ++counts[index_of(e.tag)];
    }
    return from_dist(estimate_distribution(counts));
  }, py::arg("pairs"), "Distribution of edit tags over (corrupted, clean) pairs.");
  m.def("corrupt", &corrupt_sentence, py::arg("sentence"), py::arg("tag"), py::arg("constraint") = "direct",
        py::arg("decode") = "beam", py::arg("beam_size") = 4, py::arg("temperature") = 1.0, py::arg("seed") = 0,
        "Returns (corrupted sentence, log-probability).");
  m.def("corrupt_corpus",
        [](const std::vector<std::string>& sentences, const DistDict& dist, const std::string& method,
           const std::string& constraint, std::uint64_t seed, std::size_t workers, std::size_t max_words) {
          JobConfig cfg;
          cfg.method = parse_method(method);
          cfg.conditioning = parse_conditioning(constraint);
          cfg.seed = seed;
          cfg.workers = workers;
          cfg.max_words = max_words;
          CorruptResult r;
          {
            py::gil_scoped_release release;
            r = corrupt_corpus(sentences, cfg, to_dist(dist));
          }
          py::list skipped;
          for (const auto& s : r.skipped) skipped.append(py::make_tuple(s.line, s.reason));
          return py::make_tuple(r.lines, skipped);
        },
        py::arg("sentences"), py::arg("dist"), py::arg("method") = "online", py::arg("constraint") = "direct",
        py::arg("seed") = 0, py::arg("workers") = 1, py::arg("max_words") = 250,
        "Returns (corrupted<TAB>clean lines, [(line, reason)] skips).");
}
