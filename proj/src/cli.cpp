// Copyright 2026 The BioCopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "biocopy/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "biocopy/ablation.hpp"
#include "biocopy/corpus.hpp"
#include "biocopy/decoder.hpp"
#include "biocopy/error.hpp"
#include "biocopy/eval.hpp"
#include "biocopy/jsonl.hpp"
#include "biocopy/scorer.hpp"
#include "biocopy/tagger.hpp"
#include "json.hpp"

namespace biocopy::cli {
namespace {

using nlohmann::json;

// Internal invariant breach detected by a subcommand itself.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

IntRange parse_range(const std::string& text, const std::string& flag) {
  IntRange r;
  std::istringstream in(text);
  char sep = 0;
  if (!(in >> r.min)) {
    throw Error(ErrorCode::kInvalidConfig, flag + " expects N or MIN,MAX");
  }
  if (in >> sep) {
    if (sep != ',' || !(in >> r.max)) {
      throw Error(ErrorCode::kInvalidConfig, flag + " expects N or MIN,MAX");
    }
  } else {
    r.max = r.min;
  }
  return r;
}

RougeWeights parse_weights(const std::string& text) {
  RougeWeights w{};
  std::istringstream in(text);
  char c1 = 0;
  char c2 = 0;
  if (!(in >> w[0] >> c1 >> w[1] >> c2 >> w[2]) || c1 != ',' || c2 != ',') {
    throw Error(ErrorCode::kInvalidConfig, "--rouge-weights expects w1,w2,w3");
  }
  std::string rest;
  if (in >> rest) {
    throw Error(ErrorCode::kInvalidConfig, "--rouge-weights expects w1,w2,w3");
  }
  rouge_total(0.0, 0.0, 0.0, w);
  return w;
}

TaggedExample tagged_of(const Record& r) {
  return {r.source, r.target, r.tags ? *r.tags : bio_tag(r.source, r.target)};
}

std::vector<GoldSpan> gold_of(const Record& r) {
  if (r.gold_spans) return *r.gold_spans;
  const TaggedExample t = tagged_of(r);
  return spans_from_tags(t.source, t.target, t.tags);
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

struct TokenizeFlags {
  std::string mode = "whitespace";
  bool lowercase = false;

  void attach(CLI::App& app) {
    app.add_option("--mode", mode, "Tokenization: whitespace or char")
        ->check(CLI::IsMember({"whitespace", "char"}));
    app.add_flag("--lowercase", lowercase, "Fold ASCII case before matching");
  }
  TokenizeOptions options() const { return {parse_tokenize_mode(mode), lowercase}; }
};

int cmd_tag(const std::string& in_path, const std::string& out_path,
            const TokenizeFlags& flags, std::ostream& out) {
  const TokenizeOptions fallback = flags.options();
  const TokenizeOptions options = read_manifest(in_path).value_or(fallback);
  std::vector<Record> records = read_jsonl(in_path, fallback);
  std::vector<ExamplePair> pairs;
  pairs.reserve(records.size());
  for (const Record& r : records) pairs.push_back(r.pair());
  std::vector<TaggedExample> tagged = tag_corpus(pairs);
  for (std::size_t k = 0; k < records.size(); ++k) records[k].tags = std::move(tagged[k].tags);
  write_jsonl(out_path, records, options);
  out << "tagged " << records.size() << " records\n";
  return kExitOk;
}

int cmd_decode(const std::string& in_path, const std::string& out_path,
               const std::string& scorer_path, bool teacher_force, double noise,
               std::uint64_t seed, const DecodeConfig& config,
               const TokenizeFlags& flags, std::ostream& out) {
  const std::vector<Record> records = read_jsonl(in_path, flags.options());
  if (records.empty()) throw Error(ErrorCode::kEmptyCorpus, in_path + " has no records");
  std::vector<ExamplePair> pairs;
  for (const Record& r : records) pairs.push_back(r.pair());

  Vocabulary vocab;
  ScorerFactory factory;
  std::shared_ptr<NgramScorer> ngram;
  if (teacher_force) {
    vocab = build_vocab(pairs, 1);
    factory = [&](std::size_t k, const ExamplePair&) {
      return make_oracle_scorer(tagged_of(records[k]), vocab, noise, seed + k);
    };
  } else {
    ngram = std::make_shared<NgramScorer>(NgramScorer::load(scorer_path));
    vocab = ngram->vocab();
    factory = [ngram](std::size_t, const ExamplePair&) {
      return std::make_unique<NgramScorer>(*ngram);
    };
  }
  const CorpusDecode decoded = decode_corpus(factory, pairs, vocab, config);
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + out_path);
  std::size_t failure = 0;
  for (std::size_t k = 0; k < decoded.results.size(); ++k) {
    if (decoded.results[k]) {
      file << to_json(*decoded.results[k]).dump() << '\n';
    } else {
      file << json{{"error", decoded.failures[failure++].message}}.dump() << '\n';
    }
  }
  for (const DecodeFailure& f : decoded.failures) {
    if (f.code && !is_data_error(*f.code)) {
      throw InvariantViolation("example " + std::to_string(f.index) + ": " + f.message);
    }
  }
  out << "decoded " << decoded.results.size() - decoded.failures.size() << " of "
      << decoded.results.size() << " records\n";
  out << "diagnostics " << to_json(decoded.totals).dump() << '\n';
  return decoded.failures.empty() ? kExitOk : kExitData;
}

std::vector<std::optional<DecodeResult>> read_decoded(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::vector<std::optional<DecodeResult>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json doc;
      try {
        doc = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kMalformedRecord, std::string("invalid JSON: ") + e.what());
      }
      if (doc.contains("error")) {
        out.emplace_back(std::nullopt);
      } else {
        out.emplace_back(decode_result_from_json(doc));
      }
    } catch (const Error& e) {
      throw e.with_line(line_no).with_context(path);
    }
  }
  return out;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path,
             const std::string& out_path, const EvalOptions& options,
             const TokenizeFlags& flags, std::ostream& out) {
  const auto predictions = read_decoded(pred_path);
  const std::vector<Record> gold_records = read_jsonl(gold_path, flags.options());
  if (predictions.size() != gold_records.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                pred_path + " has " + std::to_string(predictions.size()) +
                    " records, " + gold_path + " has " +
                    std::to_string(gold_records.size()));
  }
  std::vector<TokenSeq> sources;
  std::vector<TokenSeq> references;
  std::vector<std::vector<GoldSpan>> gold;
  for (const Record& r : gold_records) {
    sources.push_back(r.source);
    references.push_back(r.target);
    gold.push_back(gold_of(r));
  }
  const MetricReport report = evaluate(predictions, sources, references, gold, options);
  out << format_report(report, "evaluation");
  if (!out_path.empty()) write_json_file(out_path, to_json(report));
  return kExitOk;
}

int cmd_bench(AblationConfig config, const std::string& out_path,
              std::ostream& out) {
  const AblationReport report = run_ablation(config);
  out << format_report(report.unconstrained.report, "unconstrained (baseline)");
  out << format_report(report.constrained.report, "constrained (BIO copy)");
  const auto& u = report.unconstrained.report.long_span_error_pct;
  const auto& c = report.constrained.report.long_span_error_pct;
  if (u && c && *u > 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "long-span error reduction: %.1f%% relative\n",
                  100.0 * (*u - *c) / *u);
    out << buf;
  }
  out << "constrained runs not copied verbatim: "
      << report.constrained.non_contiguous_runs << " of "
      << report.constrained.runs << '\n';
  if (!out_path.empty()) {
    write_json_file(out_path, {{"unconstrained", to_json(report.unconstrained.report)},
                               {"constrained", to_json(report.constrained.report)}});
  }
  if (report.constrained.non_contiguous_runs != 0) {
    throw InvariantViolation("constrained decoding emitted a non-verbatim copy");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"BIO-tag copy toolkit: tagging, constrained decoding, evaluation"};
  app.require_subcommand(1);

  TokenizeFlags tok;
  std::string in_path;
  std::string out_path;

  CLI::App* tag = app.add_subcommand("tag", "Add LCS-derived BIO tags to pairs");
  tag->add_option("--in", in_path, "Untagged JSONL")->required();
  tag->add_option("--out", out_path, "Tagged JSONL")->required();
  tok.attach(*tag);

  SyntheticConfig synth;
  std::string source_len = "12,24", spans = "1,3", span_len = "2,5", filler_len = "1,3";
  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic copy corpus");
  gen->add_option("--out", out_path, "Synthetic JSONL")->required();
  gen->add_option("--seed", synth.seed, "Random seed");
  gen->add_option("--num-examples", synth.num_examples, "Number of examples");
  gen->add_option("--vocab-size", synth.vocab_size, "Content vocabulary size");
  gen->add_option("--source-len", source_len, "Source length N or MIN,MAX");
  gen->add_option("--spans-per-target", spans, "Spans per target N or MIN,MAX");
  gen->add_option("--span-len", span_len, "Span length N or MIN,MAX");
  gen->add_option("--filler-len", filler_len, "Filler run length N or MIN,MAX");
  gen->add_flag("--distractor", synth.distractor,
                "Share one token between copy and filler vocabularies");
  gen->add_option("--distractor-rate", synth.distractor_rate,
                  "Chance a filler token is the distractor");

  double add_k = 0.1;
  std::size_t min_freq = 1;
  CLI::App* train = app.add_subcommand("train", "Fit the n-gram scorer");
  train->add_option("--in", in_path, "Tagged JSONL")->required();
  train->add_option("--out", out_path, "Scorer JSON")->required();
  train->add_option("--add-k", add_k, "Additive smoothing constant");
  train->add_option("--min-freq", min_freq, "Vocabulary frequency threshold");
  tok.attach(*train);

  DecodeConfig dconf;
  std::string scorer_path;
  bool teacher_force = false;
  double noise = 0.0;
  std::uint64_t seed = 0;
  CLI::App* dec = app.add_subcommand("decode", "Decode a corpus");
  dec->add_option("--in", in_path, "Input JSONL")->required();
  dec->add_option("--out", out_path, "Decode results JSONL")->required();
  auto* scorer_opt = dec->add_option("--scorer", scorer_path, "Scorer JSON from train");
  auto* tf_opt = dec->add_flag("--teacher-force", teacher_force,
                               "Score with the reference itself (oracle)");
  scorer_opt->excludes(tf_opt);
  dec->add_option("--noise", noise, "Oracle noise for --teacher-force");
  dec->add_option("--seed", seed, "Oracle seed for --teacher-force");
  dec->add_option("--beam", dconf.beam_width, "Beam width (1 = greedy)");
  dec->add_option("--max-len", dconf.max_len, "Maximum output length");
  dec->add_option("--constrained", dconf.constrained, "Apply BIO masks (true|false)");
  dec->add_option("--copy-oov", dconf.copy_oov, "Allow copying OOV tokens (true|false)");
  dec->add_option("--length-penalty", dconf.length_penalty, "Length normalization exponent");
  tok.attach(*dec);

  EvalOptions eopts;
  std::string gold_path;
  std::string weights;
  CLI::App* ev = app.add_subcommand("eval", "Score decode output against gold");
  ev->add_option("--in", in_path, "Decode results JSONL")->required();
  ev->add_option("--gold", gold_path, "Gold JSONL")->required();
  ev->add_option("--out", out_path, "Write the report as JSON");
  ev->add_option("--min-span-len", eopts.min_span_len, "Long-span threshold");
  ev->add_option("--rouge-weights", weights, "Weights for ROUGE-1,2,L total");
  tok.attach(*ev);

  AblationConfig bench_conf = default_ablation(0);
  std::uint64_t bench_seed = 7;
  CLI::App* bench = app.add_subcommand("bench", "Constrained vs. unconstrained ablation");
  bench->add_option("--seed", bench_seed, "Seed for data and scorer");
  bench->add_option("--noise", bench_conf.noise, "Oracle noise");
  bench->add_option("--confusion-rate", bench_conf.confusion_rate,
                    "Chance a copy step prefers the distractor");
  bench->add_option("--num-examples", bench_conf.data.num_examples, "Corpus size");
  bench->add_option("--beam", bench_conf.decode.beam_width, "Beam width (1 = greedy)");
  bench->add_option("--max-len", bench_conf.decode.max_len, "Maximum output length");
  bench->add_option("--min-span-len", bench_conf.eval.min_span_len, "Long-span threshold");
  bench->add_option("--rouge-weights", weights, "Weights for ROUGE-1,2,L total");
  bench->add_option("--out", out_path, "Write both reports as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (tag->parsed()) return cmd_tag(in_path, out_path, tok, out);
    if (gen->parsed()) {
      synth.source_len = parse_range(source_len, "--source-len");
      synth.spans_per_target = parse_range(spans, "--spans-per-target");
      synth.span_len = parse_range(span_len, "--span-len");
      synth.filler_len = parse_range(filler_len, "--filler-len");
      const auto corpus = generate_synthetic(synth);
      std::vector<Record> records;
      for (const SyntheticExample& ex : corpus) {
        records.push_back({ex.pair.source, ex.pair.target,
                           tags_from_spans(ex.pair.target.size(), ex.gold_spans),
                           ex.gold_spans});
      }
      write_jsonl(out_path, records, TokenizeOptions{});
      out << "wrote " << records.size() << " synthetic records\n";
      return kExitOk;
    }
    if (train->parsed()) {
      const std::vector<Record> records = read_jsonl(in_path, tok.options());
      std::vector<TaggedExample> corpus;
      std::vector<ExamplePair> pairs;
      for (const Record& r : records) {
        corpus.push_back(tagged_of(r));
        pairs.push_back(r.pair());
      }
      NgramScorer::train(corpus, build_vocab(pairs, min_freq), add_k).save(out_path);
      out << "trained on " << corpus.size() << " records\n";
      return kExitOk;
    }
    if (dec->parsed()) {
      if (!teacher_force && scorer_path.empty()) {
        err << "decode: one of --scorer or --teacher-force is required\n";
        return kExitUsage;
      }
      dconf.validate();
      return cmd_decode(in_path, out_path, scorer_path, teacher_force, noise, seed,
                        dconf, tok, out);
    }
    if (ev->parsed()) {
      if (!weights.empty()) eopts.rouge_weights = parse_weights(weights);
      return cmd_eval(in_path, gold_path, out_path, eopts, tok, out);
    }
    if (bench->parsed()) {
      AblationConfig conf = default_ablation(bench_seed);
      conf.noise = bench_conf.noise;
      conf.confusion_rate = bench_conf.confusion_rate;
      conf.data.num_examples = bench_conf.data.num_examples;
      conf.decode.beam_width = bench_conf.decode.beam_width;
      conf.decode.max_len = bench_conf.decode.max_len;
      conf.eval.min_span_len = bench_conf.eval.min_span_len;
      if (!weights.empty()) conf.eval.rouge_weights = parse_weights(weights);
      return cmd_bench(conf, out_path, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    if (e.code() == ErrorCode::kInvalidConfig || e.code() == ErrorCode::kWeightSum) {
      return kExitUsage;
    }
    return is_data_error(e.code()) ? kExitData : kExitInternal;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violated: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace biocopy::cli
