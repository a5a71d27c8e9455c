#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>

#include "tagcorrupt/errors.hpp"
#include "tagcorrupt/pipeline.hpp"

using namespace tagcorrupt;

namespace {

std::unique_ptr<Lexicon> load_lexicon(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_unique<Lexicon>(Lexicon::with_word_list(path));
}

const Lexicon& lexicon_or_builtin(const std::unique_ptr<Lexicon>& lex) { return lex ? *lex : Lexicon::builtin(); }

// "-" or empty means standard output.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tag-controlled synthetic grammatical error generation"};
  app.require_subcommand(1);

  std::string input, output, dist_path, lexicon_path;
  bool swap = false;

  auto* estimate = app.add_subcommand("estimate", "Estimate a tag distribution from corrupted<TAB>clean pairs");
  bool by_label = false;
  estimate->add_option("--input", input, "Pairs TSV")->required();
  estimate->add_option("--output", output, "Distribution JSON (default stdout)");
  estimate->add_option("--lexicon", lexicon_path, "Word list, one word per line");
  estimate->add_flag("--swap", swap, "Input is clean<TAB>corrupted");
  estimate->add_flag("--by-label", by_label, "Third column is a group label; one distribution per label");

  JobConfig job;
  std::string method = "online", constraint = "direct", decode = "beam";
  std::size_t n_out = 0;
  auto* corrupt = app.add_subcommand("corrupt", "Corrupt a clean corpus to match a tag distribution");
  corrupt->add_option("--input", job.input, "Clean corpus, one sentence per line")->required();
  corrupt->add_option("--output", job.output, "Output TSV")->required();
  corrupt->add_option("--method", method, "online | offline-optimal | offline-prob")->capture_default_str();
  corrupt->add_option("--constraint", constraint, "direct | nosigma | postsigma | prepostsigma")
      ->capture_default_str();
  corrupt->add_option("--decode", decode, "beam | sample")->capture_default_str();
  corrupt->add_option("--beam-size", job.decode.beam_size)->capture_default_str();
  corrupt->add_option("--temperature", job.decode.temperature)->capture_default_str();
  corrupt->add_option("--seed", job.seed)->capture_default_str();
  corrupt->add_option("--max-words", job.max_words)->capture_default_str();
  corrupt->add_option("--dist", job.dist_path, "Target distribution JSON (default uniform)");
  corrupt->add_option("--lexicon", job.lexicon_path, "Word list, one word per line");
  corrupt->add_option("--scorer", job.scorer, "rule | external:<command>")->capture_default_str();
  corrupt->add_option("--workers", job.workers)->capture_default_str()->check(CLI::PositiveNumber);
  corrupt->add_flag("--swap", job.swap, "Write clean<TAB>corrupted");
  corrupt->add_option("--skip-log", job.skip_log, "Skip log path (default <output>.skipped)");
  corrupt->add_option("--score-cache", job.score_cache, "Memory-mapped score matrix for offline methods");
  corrupt->add_option("--memory-budget-mb", job.memory_budget_mb, "Spill the score matrix above this size")
      ->capture_default_str();
  corrupt->add_option("--n-out", n_out, "Number of draws for offline-prob (default: retained sentences)");

  std::size_t workers = 1;
  auto* annotate = app.add_subcommand("annotate", "Annotate source<TAB>target pairs as JSONL");
  annotate->add_option("--input", input, "Pairs TSV")->required();
  annotate->add_option("--output", output, "JSONL (default stdout)");
  annotate->add_option("--lexicon", lexicon_path, "Word list, one word per line");
  annotate->add_option("--workers", workers)->capture_default_str()->check(CLI::PositiveNumber);

  double tolerance = 0.05;
  auto* evaldist = app.add_subcommand("eval-dist", "Compare the tag distribution of pairs to a target");
  evaldist->add_option("--input", input, "Pairs TSV")->required();
  evaldist->add_option("--dist", dist_path, "Target distribution JSON")->required();
  evaldist->add_option("--tolerance", tolerance, "Maximum total variation distance")->capture_default_str();
  evaldist->add_option("--lexicon", lexicon_path, "Word list, one word per line");
  evaldist->add_flag("--swap", swap, "Input is clean<TAB>corrupted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate->parsed()) {
      const auto lex = load_lexicon(lexicon_path);
      if (by_label) {
        nlohmann::ordered_json all = nlohmann::ordered_json::object();
        for (const auto& [label, d] : cmd_estimate_by_label(input, swap, lexicon_or_builtin(lex), std::cerr)) {
          all[label] = nlohmann::ordered_json::parse(distribution_to_json(d));
        }
        write_output(output, all.dump(2) + "\n");
      } else {
        write_output(output, distribution_to_json(cmd_estimate(input, swap, lexicon_or_builtin(lex), std::cerr)) + "\n");
      }
      return 0;
    }
    if (corrupt->parsed()) {
      job.method = parse_method(method);
      job.conditioning = parse_conditioning(constraint);
      job.decode.mode = parse_decode_mode(decode);
      if (n_out > 0) job.n_out = n_out;
      cmd_corrupt(job, std::cerr);
      return 0;
    }
    if (annotate->parsed()) {
      const auto lex = load_lexicon(lexicon_path);
      std::ifstream in(input, std::ios::binary);
      if (!in) throw IoError("cannot open " + input);
      if (output.empty() || output == "-") {
        cmd_annotate(in, std::cout, lexicon_or_builtin(lex), workers);
      } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw IoError("cannot write " + output);
        cmd_annotate(in, out, lexicon_or_builtin(lex), workers);
      }
      return 0;
    }
    if (evaldist->parsed()) {
      const auto lex = load_lexicon(lexicon_path);
      const auto report = cmd_evaldist(input, load_distribution(dist_path), tolerance, swap, lexicon_or_builtin(lex));
      print_report(report, std::cout);
      return report.pass ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "tagcorrupt: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
