// Copyright 2026 The logdoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logdoc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "logdoc/chart.hpp"
#include "logdoc/kb.hpp"
#include "logdoc/prover.hpp"
#include "logdoc/resources.hpp"
#include "logdoc/retrieval.hpp"
#include "logdoc/semantics.hpp"

namespace logdoc {

using nlohmann::json;

std::string traces_path(const std::string& kb_path) { return kb_path + ".traces"; }

std::string trace_id(std::string_view query, std::size_t index) {
  // FNV-1a, stable across platforms and runs.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : query) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h << std::dec << "-" << index;
  return s.str();
}

namespace {

// Exit with a code after printing a message.
struct CliFailure {
  int code;
  std::string message;
};

enum class Format { kHuman, kRecords };

struct Options {
  ResourcePaths paths = bundled_resource_paths();
  ScoreConfig score;
  VDConfig vd;
  double weight_cap = 0;
  Format format = Format::kHuman;

  std::string kb_path;
  int doc_id = 0;
  std::vector<std::string> files;
  std::vector<std::string> text;
  bool query_is_lf = false;
  std::string trace;
};

std::string filter_name(FilterMode mode) {
  switch (mode) {
    case FilterMode::kCluster: return "cluster";
    case FilterMode::kFirstN: return "first-n";
    case FilterMode::kWithinPct: return "within-pct";
  }
  return "cluster";
}

std::string joined(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

ResourceSet load(const Options& opt) {
  try {
    return load_resources(opt.paths);
  } catch (const ResourceError& e) {
    throw CliFailure{kExitConfig, e.what()};
  }
}

KnowledgeBase load_kb(const std::string& path, bool create) {
  if (create && !std::filesystem::exists(path)) return KnowledgeBase();
  try {
    return KnowledgeBase::load(path);
  } catch (const KbError& e) {
    throw CliFailure{kExitConfig, path + ": " + e.what()};
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kExitConfig, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Postulates the KB does not already define, in file order.
std::vector<Rule> extra_rules(const KnowledgeBase& kb, const ResourceSet& res) {
  std::vector<Rule> out;
  for (auto& r : res.postulate_rules()) {
    if (!kb.find_rule(r.id)) out.push_back(std::move(r));
  }
  return out;
}

json step_json(const ProofStep& s) {
  json j;
  j["literal"] = s.literal.str();
  switch (s.kind) {
    case ProofStep::Kind::kFact:
      j["kind"] = "fact";
      j["fact"] = s.fact;
      break;
    case ProofStep::Kind::kRule:
      j["kind"] = "rule";
      j["rule"] = s.rule;
      break;
    case ProofStep::Kind::kIsa:
      j["kind"] = "isa";
      j["variant"] = s.variant.str();
      break;
  }
  return j;
}

ProofStep step_from_json(const json& j) {
  ProofStep s;
  s.literal = parse_atom(j.at("literal").get<std::string>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fact") {
    s.kind = ProofStep::Kind::kFact;
    s.fact = j.at("fact").get<FactId>();
  } else if (kind == "rule") {
    s.kind = ProofStep::Kind::kRule;
    s.rule = j.at("rule").get<std::string>();
  } else if (kind == "isa") {
    s.kind = ProofStep::Kind::kIsa;
    s.variant = parse_atom(j.at("variant").get<std::string>());
  } else {
    throw std::runtime_error("unknown step kind " + kind);
  }
  return s;
}

json read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) return json{{"traces", json::object()}};
  try {
    json j = json::parse(in);
    if (!j.contains("traces") || !j["traces"].is_object()) throw std::runtime_error("no traces");
    return j;
  } catch (const std::exception& e) {
    throw CliFailure{kExitConfig, path + ": malformed trace file: " + e.what()};
  }
}

void write_sidecar(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CliFailure{kExitConfig, "cannot write " + tmp};
    out << j.dump(1) << "\n";
    if (!out) throw CliFailure{kExitConfig, "cannot write " + tmp};
  }
  std::filesystem::rename(tmp, path);
}

int cmd_index(const Options& opt, std::ostream& out) {
  ResourceSet res = load(opt);
  KnowledgeBase kb = load_kb(opt.kb_path, true);
  if (opt.doc_id <= 0) throw CliFailure{kExitConfig, "--doc-id must be positive"};
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < opt.files.size(); ++i) {
    const int doc = opt.doc_id + static_cast<int>(i);
    if (kb.has_document(doc)) {
      throw CliFailure{kExitDuplicate, "document " + std::to_string(doc) + " is already indexed"};
    }
    texts.push_back(read_file(opt.files[i]));
  }
  IndexReport total;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    IndexReport r;
    try {
      r = index_document(kb, opt.doc_id + static_cast<int>(i), texts[i], res, opt.score);
    } catch (const RetrievalError& e) {
      throw CliFailure{kExitConfig, opt.files[i] + ": " + e.what()};
    }
    total.fragments += r.fragments;
    total.readings += r.readings;
    total.fallback_tokens += r.fallback_tokens;
    total.facts += r.facts;
    if (opt.format == Format::kRecords) {
      out << json{{"document", r.document}, {"file", opt.files[i]}, {"fragments", r.fragments},
                  {"readings", r.readings}, {"fallback_tokens", r.fallback_tokens},
                  {"facts", r.facts}}
                 .dump()
          << "\n";
    } else {
      out << "document " << r.document << " (" << opt.files[i] << "): " << r.fragments
          << " fragments, " << r.readings << " readings, " << r.fallback_tokens
          << " fallback tokens, " << r.facts << " facts\n";
    }
  }
  if (opt.format == Format::kHuman && texts.size() > 1) {
    out << "total: " << total.fragments << " fragments, " << total.readings << " readings, "
        << total.fallback_tokens << " fallback tokens, " << total.facts << " facts\n";
  }
  kb.save(opt.kb_path);
  return kExitOk;
}

int cmd_query(const Options& opt, std::ostream& out, std::ostream& err) {
  ResourceSet res = load(opt);
  KnowledgeBase kb = load_kb(opt.kb_path, false);
  const std::string text = joined(opt.text);
  QueryResult r;
  try {
    QueryForms q;
    if (opt.query_is_lf) {
      q.forms.push_back(parse_logical_form(text));
      if (q.forms.front().empty()) throw RetrievalError("empty query");
    } else {
      q = analyze_query(text, res, opt.score);
    }
    r = answer_forms(kb, q, res.postulate_rules(), &res.isa, opt.vd);
  } catch (const RetrievalError& e) {
    throw CliFailure{kExitConfig, e.what()};
  } catch (const SyntaxError& e) {
    throw CliFailure{kExitConfig, std::string("query: ") + e.what()};
  }
  if (r.truncated) err << "warning: inference budget exhausted; results may be incomplete\n";

  if (opt.format == Format::kRecords) {
    const std::string sidecar = traces_path(opt.kb_path);
    json traces = read_sidecar(sidecar);
    for (std::size_t i = 0; i < r.passages.size(); ++i) {
      const Passage& p = r.passages[i];
      const std::string id = trace_id(text, i + 1);
      json steps = json::array();
      for (const auto& s : p.trace.steps) steps.push_back(step_json(s));
      traces["traces"][id] = {{"query", text},
                              {"goal", r.forms[p.query_reading].str()},
                              {"document", p.document},
                              {"fragment", p.fragment},
                              {"stage", stage_name(p.stage)},
                              {"trace_stage", p.trace.stage},
                              {"inferences", p.trace.inferences},
                              {"steps", steps}};
      out << json{{"document", p.document},
                  {"fragment", p.fragment},
                  {"stage", stage_name(p.stage)},
                  {"text", p.text},
                  {"trace_id", id},
                  {"rules", p.trace.rules_used()},
                  {"steps", p.trace.steps.size()},
                  {"reading", p.query_reading}}
                 .dump()
          << "\n";
    }
    if (!r.passages.empty()) write_sidecar(sidecar, traces);
  } else {
    for (const auto& p : r.passages) out << render_passage(p) << "\n";
  }
  return r.passages.empty() ? kExitNoResults : kExitOk;
}

int cmd_parse(const Options& opt, std::ostream& out) {
  ResourceSet res = load(opt);
  const std::string text = joined(opt.text);
  auto tokens = tokenize(text);
  while (!tokens.empty() && (tokens.back() == "." || tokens.back() == "?" || tokens.back() == "!")) {
    tokens.pop_back();
  }
  ScoreConfig all = opt.score;
  all.n_best = 0;
  auto chart = tokens.empty() ? nullptr : parse(tokens, res, all);
  std::vector<Analysis> analyses = chart ? full_analyses(chart) : std::vector<Analysis>{};
  out << "tokens: " << joined(tokens) << "\n";
  out << "analyses: " << analyses.size() << "\n";
  {
    std::ostringstream line;
    line << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < analyses.size(); ++i) {
      line << (i + 1) << ". " << analyses[i].value << "  " << chart->tree(analyses[i].root)
           << "\n";
    }
    if (!analyses.empty()) {
      line << "survivors (" << filter_name(opt.score.filter) << "):";
      for (const auto& kept : filter_readings(analyses, opt.score)) {
        auto it = std::find_if(analyses.begin(), analyses.end(),
                               [&](const Analysis& a) { return a.root == kept.root; });
        line << " " << (it - analyses.begin() + 1);
      }
      line << "\n";
    }
    out << line.str();
  }
  if (tokens.empty()) return kExitOk;

  auto pruned = parse(tokens, res, opt.score);
  FragmentCover cover = extract_fragments(pruned, opt.score);
  out << (cover.full ? "indexed readings: " : "indexed fragments: ") << cover.analyses.size()
      << "\n";
  std::ostringstream line;
  line << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i < cover.analyses.size(); ++i) {
    const Analysis& a = cover.analyses[i];
    line << (i + 1) << ". " << a.value << "  [" << a.start << "," << a.end << ") "
         << pruned->tree(a.root) << "\n";
    try {
      line << lf_debug_string(compose(a, res));
    } catch (const SemanticsError& e) {
      line << "composition failed: " << e.what() << "\n";
    }
  }
  if (!cover.uncovered.empty()) {
    line << "uncovered:";
    for (std::size_t pos : cover.uncovered) line << " " << tokens[pos];
    line << "\n";
  }
  out << line.str();
  return kExitOk;
}

int cmd_explain(const Options& opt, std::ostream& out) {
  ResourceSet res = load(opt);
  KnowledgeBase kb = load_kb(opt.kb_path, false);
  json traces = read_sidecar(traces_path(opt.kb_path));
  if (!traces["traces"].contains(opt.trace)) {
    throw CliFailure{kExitUnknownTrace, "unknown trace id " + opt.trace};
  }
  const json& t = traces["traces"][opt.trace];
  ProofTrace trace;
  LogicalForm goal;
  try {
    trace.prov = Provenance{t.at("fragment").get<int>(), t.at("document").get<int>()};
    trace.stage = t.at("trace_stage").get<std::string>();
    trace.inferences = t.at("inferences").get<std::size_t>();
    for (const auto& s : t.at("steps")) trace.steps.push_back(step_from_json(s));
    goal = parse_logical_form(t.at("goal").get<std::string>());
  } catch (const std::exception& e) {
    throw CliFailure{kExitConfig, "malformed trace " + opt.trace + ": " + e.what()};
  }
  for (const auto& s : trace.steps) {
    if (s.kind == ProofStep::Kind::kFact && s.fact >= kb.facts().size()) {
      throw CliFailure{kExitUnknownTrace, "trace " + opt.trace + " cites a fact not in the KB"};
    }
  }
  auto rules = extra_rules(kb, res);
  Passage p;
  p.document = trace.prov->document;
  p.fragment = trace.prov->fragment;
  p.stage = parse_stage(t.value("stage", std::string("direct"))).value_or(Stage::kDirect);
  if (const std::string* text = kb.source_text(*trace.prov)) p.text = *text;
  out << "trace " << opt.trace << ": " << render_passage(p) << "\n";
  out << "query: " << t.value("query", std::string()) << "\n";
  out << "goal: " << goal.str() << "\n";
  out << render_trace(trace, kb, rules);
  if (!replay(Goal::from(goal), kb, trace, rules, &res.isa)) {
    throw CliFailure{kExitUnknownTrace, "trace " + opt.trace + " does not replay against " +
                                            opt.kb_path};
  }
  out << "replay: ok\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Logic-based passage retrieval", "logdoc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file of option values; flags override it")
      ->envname("LOGDOC_CONFIG");

  app.add_option("--grammar", opt.paths.grammar, "Grammar rules")->capture_default_str();
  app.add_option("--lexicon", opt.paths.lexicon, "Lexicon")->capture_default_str();
  app.add_option("--postulates", opt.paths.postulates, "Meaning postulates")
      ->capture_default_str();
  app.add_option("--specs", opt.paths.specs, "Spec rules and set phrases")
      ->capture_default_str();
  app.add_option("--isa", opt.paths.isa, "Isa hierarchy; empty for none")->capture_default_str();

  app.add_option("--rew", opt.score.rew, "Embedding reward")->capture_default_str();
  app.add_option("--pen", opt.score.pen, "Node penalty")->capture_default_str();
  app.add_option("--default-lex", opt.score.default_lex_value, "Default lexical value")
      ->capture_default_str();
  app.add_option("--n-best", opt.score.n_best, "Values kept per chart cohort; 0 keeps all")
      ->capture_default_str();
  const std::map<std::string, FilterMode> filters{{"cluster", FilterMode::kCluster},
                                                  {"first-n", FilterMode::kFirstN},
                                                  {"within-pct", FilterMode::kWithinPct}};
  app.add_option("--filter", opt.score.filter, "Reading filter: cluster, first-n, within-pct")
      ->transform(CLI::CheckedTransformer(filters, CLI::ignore_case));
  app.add_option("--cluster-threshold", opt.score.cluster_threshold, "Cluster coefficient cut")
      ->capture_default_str();
  app.add_option("--first-n", opt.score.first_n, "Readings kept by first-n")
      ->capture_default_str();
  app.add_option("--within-pct", opt.score.within_pct, "Percentage band of within-pct")
      ->capture_default_str();

  app.add_option("--m", opt.vd.m, "Direct hits above which no postulate is used")
      ->capture_default_str();
  app.add_option("--n", opt.vd.n, "Hits below which postulates are added")
      ->capture_default_str();
  app.add_option("--o", opt.vd.o, "Hits below which isa expansion is added")
      ->capture_default_str();
  app.add_flag("--escalate-in-band", opt.vd.escalate_in_band,
               "Escalate when direct hits lie between N and M");
  app.add_option("--max-inferences", opt.vd.max_inferences, "Inference budget per stage")
      ->capture_default_str();
  app.add_option("--max-depth", opt.vd.max_depth, "Rule applications per proof branch")
      ->capture_default_str();
  auto* cap = app.add_option("--weight-cap", opt.weight_cap, "Skip rules heavier than this");
  const std::map<std::string, Format> formats{{"human", Format::kHuman},
                                              {"records", Format::kRecords}};
  app.add_option("--format", opt.format, "Output format: human or records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* index = app.add_subcommand("index", "Index documents, one id per file");
  index->add_option("--kb", opt.kb_path, "Knowledge base file")->required();
  index->add_option("--doc-id", opt.doc_id, "Id of the first document")->required();
  index->add_option("files", opt.files, "Document files; - reads stdin")->required();

  auto* query = app.add_subcommand("query", "Retrieve passages");
  query->add_option("--kb", opt.kb_path, "Knowledge base file")->required();
  query->add_flag("--lf", opt.query_is_lf, "Read the query as a logical form");
  query->add_option("text", opt.text, "Query text")->required();

  auto* parse_cmd = app.add_subcommand("parse", "Show ranked analyses of a sentence");
  parse_cmd->add_option("text", opt.text, "Sentence");

  auto* explain = app.add_subcommand("explain", "Show the proof behind a retrieved passage");
  explain->add_option("--kb", opt.kb_path, "Knowledge base file")->required();
  explain->add_option("trace", opt.trace, "Trace id from a records-format query")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (cap->count() > 0) opt.vd.rule_weight_cap = opt.weight_cap;
    try {
      opt.score.validate();
      opt.vd.validate();
    } catch (const std::invalid_argument& e) {
      throw CliFailure{kExitConfig, std::string("invalid configuration: ") + e.what()};
    }
    if (*index) return cmd_index(opt, out);
    if (*query) return cmd_query(opt, out, err);
    if (*parse_cmd) return cmd_parse(opt, out);
    return cmd_explain(opt, out);
  } catch (const CliFailure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace logdoc
