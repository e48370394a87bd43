#include "gll/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gll/engine.hpp"
#include "gll/forest.hpp"
#include "gll/grammar_dsl.hpp"
#include "gll/naive.hpp"

namespace gll::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Exit : int { accept = 0, reject = 1, error = 2 };

struct RunConfig {
  std::string grammar;
  std::string start;
  std::string mode = "char";
  std::string text;
  std::string input;
  bool from_stdin = false;
  std::uint64_t fuel = 10'000'000;
  std::uint64_t max_instantiations = 100'000;
  std::size_t errors = 3;
  std::size_t max_trees = 10;
  std::string format = "text";
  bool deterministic = false;
  bool oracle = false;
  // bench
  std::vector<std::size_t> sizes{20, 40, 60, 80, 100};
  std::string unit = "a";
};

// Operational failure: message already formatted for the user.
struct Failure {
  std::string message;
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{std::string("cannot read ") + what + " " + path};
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json id_json(SymbolId id) {
  if (id.is_token()) return json{{"token", id.name()}};
  json args = json::array();
  for (SymbolId a : id.args()) args.push_back(id_json(a));
  return json{{"nt", id.name()}, {"args", args}};
}

json bsr_json(const BsrElement& b) {
  json pre = json::array(), post = json::array();
  for (SymbolId s : b.slot.pre()) pre.push_back(id_json(s));
  for (SymbolId s : b.slot.post()) post.push_back(id_json(s));
  return json{{"slot", {{"lhs", id_json(b.slot.lhs())}, {"pre", pre}, {"post", post}}},
              {"l", b.left},
              {"k", b.pivot},
              {"r", b.right}};
}

json tree_json(const DerivationTree& t) {
  json j{{"name", t.symbol.str()}, {"left", t.left}, {"right", t.right}};
  if (t.token) {
    j["token"] = *t.token;
    return j;
  }
  json kids = json::array();
  for (const auto& c : t.children) kids.push_back(tree_json(*c));
  j["children"] = kids;
  return j;
}

class Session {
 public:
  Session(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err)
      : cfg_(cfg), in_(in), out_(out), err_(err) {}

  bool json_out() const { return cfg_.format == "json"; }

  void load() {
    const std::string text = read_file(cfg_.grammar, "grammar");
    dsl::GrammarAst ast;
    try {
      ast = dsl::parse_grammar(text);
    } catch (const dsl::SyntaxError& e) {
      throw Failure{cfg_.grammar + ":" + e.what()};
    }
    mode_ = cfg_.mode == "words" ? dsl::TokenMode::words : dsl::TokenMode::chars;
    try {
      grammar_.emplace(dsl::elaborate(ast, mode_));
    } catch (const dsl::ElaborationError& e) {
      std::string msg;
      for (const auto& d : e.diagnostics()) msg += (msg.empty() ? "" : "\n") + cfg_.grammar + ":" + dsl::render(d);
      throw Failure{msg};
    }
    std::string start = cfg_.start;
    if (start.empty()) {
      if (ast.definitions.empty()) throw Failure{"grammar defines no nonterminal; pass --start"};
      start = ast.definitions.front().name;
    }
    try {
      start_ref_ = dsl::parse_symbol_ref(start);
      start_.emplace(grammar_->symbol(start_ref_));
    } catch (const dsl::SyntaxError& e) {
      throw Failure{"start symbol: " + std::string(e.what())};
    } catch (const dsl::ElaborationError& e) {
      throw Failure{e.what()};
    }
  }

  std::vector<Token> input() {
    if (!cfg_.from_stdin && cfg_.input.empty()) return dsl::tokenize(cfg_.text, mode_);
    std::string text;
    if (cfg_.from_stdin) {
      std::stringstream ss;
      ss << in_.rdbuf();
      text = ss.str();
    } else {
      text = read_file(cfg_.input, "input");
    }
    // a file's trailing newline is not part of the sentence
    if (mode_ == dsl::TokenMode::chars && !text.empty() && text.back() == '\n') {
      text.pop_back();
      if (!text.empty() && text.back() == '\r') text.pop_back();
    }
    return dsl::tokenize(text, mode_);
  }

  ParseOptions options() const {
    ParseOptions o;
    if (cfg_.fuel) o.fuel = cfg_.fuel;
    if (cfg_.max_instantiations) o.instantiation_limit = cfg_.max_instantiations;
    return o;
  }

  ParseResult parse(const std::vector<Token>& in) {
    try {
      return run_recognize(*start_, in, options());
    } catch (const ResourceExhausted& e) {
      throw Failure{e.what()};
    }
  }

  // Runs the naive recognizer alongside; disagreement is an operational error.
  void check_oracle(const std::vector<Token>& in, bool accepted, json* j) {
    if (!cfg_.oracle) return;
    std::optional<std::uint64_t> budget;
    if (cfg_.fuel) budget = cfg_.fuel;
    naive::NaiveGrammar oracle(grammar_->ast(), mode_, budget);
    bool verdict;
    try {
      verdict = oracle.recognize(start_ref_, in);
    } catch (const naive::StepBudgetExceeded& e) {
      throw Failure{std::string("oracle: ") + e.what()};
    }
    if (j)
      (*j)["oracle"] = verdict;
    else
      out_ << "oracle: " << (verdict ? "accept" : "reject") << "\n";
    if (verdict != accepted) throw Failure{"engine and oracle disagree"};
  }

  void print_errors(const ParseResult& res, json* j) {
    auto x = extract_errors(res.state, res.accepted, cfg_.errors);
    if (j) {
      json arr = json::array();
      for (const auto& r : x.reports) {
        json e{{"position", r.position}, {"expected", r.expected}};
        e["got"] = r.got ? json(*r.got) : json(nullptr);
        arr.push_back(e);
      }
      (*j)["errors"] = arr;
      return;
    }
    for (const auto& r : x.reports) {
      out_ << "error at " << r.position << ": expected " << r.expected.front() << ", got "
           << (r.got ? "'" + *r.got + "'" : std::string("end of input")) << "\n";
    }
  }

  void timing(const std::string& label, double seconds) {
    if (!cfg_.deterministic) err_ << label << seconds << " s\n";
  }

  Exit recognize() {
    auto in = input();
    auto res = parse(in);
    if (json_out()) {
      json j{{"accepted", res.accepted}};
      if (!res.accepted) print_errors(res, &j);
      check_oracle(in, res.accepted, &j);
      out_ << j.dump() << "\n";
    } else {
      out_ << (res.accepted ? "accept" : "reject") << "\n";
      if (!res.accepted) print_errors(res, nullptr);
      check_oracle(in, res.accepted, nullptr);
    }
    return res.accepted ? Exit::accept : Exit::reject;
  }

  Exit bsr() {
    auto in = input();
    auto res = parse(in);
    auto elems = res.state.bsrs().sorted();
    std::sort(elems.begin(), elems.end(), bsr_dump_less);
    if (json_out()) {
      json arr = json::array();
      for (const auto& b : elems) arr.push_back(bsr_json(b));
      json j{{"accepted", res.accepted}, {"bsrs", arr}, {"total", elems.size()}};
      check_oracle(in, res.accepted, &j);
      out_ << j.dump() << "\n";
    } else {
      for (const auto& b : elems) out_ << render_bsr(b) << "\n";
      out_ << "total: " << elems.size() << "\n";
      check_oracle(in, res.accepted, nullptr);
    }
    return res.accepted ? Exit::accept : Exit::reject;
  }

  Exit parse_trees() {
    auto in = input();
    auto res = parse(in);
    json j;
    if (!res.accepted) {
      if (json_out()) {
        j = json{{"accepted", false}, {"trees", json::array()}};
        print_errors(res, &j);
        check_oracle(in, false, &j);
        out_ << j.dump() << "\n";
      } else {
        out_ << "reject\n";
        print_errors(res, nullptr);
        check_oracle(in, false, nullptr);
      }
      return Exit::reject;
    }
    // one extra tree tells whether the limit cut anything off
    auto trees = extract_trees(*start_, in, res.state.bsrs(), cfg_.max_trees + 1, grammar_->filters());
    const bool truncated = trees.size() > cfg_.max_trees;
    if (truncated) trees.resize(cfg_.max_trees);
    if (json_out()) {
      json arr = json::array();
      for (const auto& t : trees) arr.push_back(tree_json(*t));
      j = json{{"accepted", true}, {"trees", arr}, {"truncated", truncated}};
      check_oracle(in, true, &j);
      out_ << j.dump() << "\n";
    } else {
      for (const auto& t : trees) out_ << render_tree(*t) << "\n";
      if (truncated)
        out_ << trees.size() << " trees (truncated)\n";
      else if (trees.empty())
        out_ << "0 trees (all derivations filtered)\n";
      check_oracle(in, true, nullptr);
    }
    return Exit::accept;
  }

  Exit count() {
    auto in = input();
    auto res = parse(in);
    DerivationCount c;
    if (res.accepted) c = count_derivations(*start_, in, res.state.bsrs(), 0, in.size(), grammar_->filters());
    if (json_out()) {
      json j{{"accepted", res.accepted}, {"count", c.value}, {"saturated", c.saturated}};
      check_oracle(in, res.accepted, &j);
      out_ << j.dump() << "\n";
    } else {
      out_ << c.value << (c.saturated ? " (saturated)" : "") << "\n";
      check_oracle(in, res.accepted, nullptr);
    }
    return res.accepted ? Exit::accept : Exit::reject;
  }

  Exit stats() {
    auto in = input();
    auto t0 = std::chrono::steady_clock::now();
    auto res = parse(in);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& st = res.state;
    json j{{"accepted", res.accepted},
           {"descriptors_processed", st.stats().descriptors_processed},
           {"uset", st.uset().size()},
           {"bsrs", st.bsrs().size()},
           {"prel", st.prel().size()},
           {"grel", st.grel().size()},
           {"continuations_applied", st.stats().continuations_applied},
           {"instantiations", st.stats().instantiations}};
    if (json_out()) {
      check_oracle(in, res.accepted, &j);
      out_ << j.dump() << "\n";
    } else {
      for (const auto& [k, v] : j.items()) out_ << k << ": " << v.dump() << "\n";
      check_oracle(in, res.accepted, nullptr);
    }
    timing("time: ", secs);
    return res.accepted ? Exit::accept : Exit::reject;
  }

  Exit bench() {
    bool all = true;
    json rows = json::array();
    for (std::size_t n : cfg_.sizes) {
      std::string text;
      for (std::size_t i = 0; i < n; ++i) {
        if (mode_ == dsl::TokenMode::words && i) text += ' ';
        text += cfg_.unit;
      }
      auto in = dsl::tokenize(text, mode_);
      auto t0 = std::chrono::steady_clock::now();
      auto res = parse(in);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      all = all && res.accepted;
      const auto d = res.state.stats().descriptors_processed;
      if (json_out())
        rows.push_back(json{{"n", n}, {"accepted", res.accepted}, {"descriptors_processed", d}});
      else
        out_ << "n=" << n << " " << (res.accepted ? "accept" : "reject") << " descriptors=" << d << "\n";
      timing("n=" + std::to_string(n) + " time: ", secs);
    }
    if (json_out()) out_ << rows.dump() << "\n";
    return all ? Exit::accept : Exit::reject;
  }

 private:
  const RunConfig& cfg_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  dsl::TokenMode mode_ = dsl::TokenMode::chars;
  std::optional<dsl::CompiledGrammar> grammar_;
  dsl::SymbolRef start_ref_;
  std::optional<Symbol> start_;
};

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Generalized LL parser for grammars with parameterized nonterminals", "gll"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("--grammar,-g", cfg.grammar, "Grammar file")->required()->check(CLI::ExistingFile);
    sub->add_option("--start,-s", cfg.start, "Start symbol, e.g. CSV(alpha); default: first definition");
    sub->add_option("--mode", cfg.mode, "Tokenization")->check(CLI::IsMember({"char", "words"}));
    sub->add_option("--fuel", cfg.fuel, "Descriptor budget, 0 = unlimited")->capture_default_str();
    sub->add_option("--max-instantiations", cfg.max_instantiations,
                    "Budget for nonterminals instantiated during a run, 0 = unlimited")
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--deterministic", cfg.deterministic, "Suppress timings");
    if (!needs_input) return;
    auto* src = sub->add_option_group("input", "Sentence source (exactly one)");
    src->add_option("--text,-t", cfg.text, "Literal input text");
    src->add_option("--input,-i", cfg.input, "Input file")->check(CLI::ExistingFile);
    src->add_flag("--stdin", cfg.from_stdin, "Read input from stdin");
    src->require_option(1);
    sub->add_option("--errors", cfg.errors, "Error reports on reject")->capture_default_str();
    sub->add_flag("--oracle", cfg.oracle, "Cross-check with the naive backtracking recognizer");
  };

  auto* rec = app.add_subcommand("recognize", "Accept or reject the input");
  common(rec, true);
  auto* bsr = app.add_subcommand("bsr", "Dump the BSR set");
  common(bsr, true);
  auto* parse = app.add_subcommand("parse", "Print derivation trees");
  common(parse, true);
  parse->add_option("--max-trees", cfg.max_trees, "Tree limit")->capture_default_str();
  auto* cnt = app.add_subcommand("count", "Count derivations");
  common(cnt, true);
  auto* st = app.add_subcommand("stats", "Parse-state sizes and timing");
  common(st, true);
  auto* bench = app.add_subcommand("bench", "Recognition time on repeated inputs");
  common(bench, false);
  bench->add_option("--sizes", cfg.sizes, "Input lengths")->delimiter(',');
  bench->add_option("--unit", cfg.unit, "Token repeated to build each input")->capture_default_str();

  std::vector<std::string> argv_store{"gll"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(Exit::error);
  }

  Session s(cfg, in, out, err);
  try {
    s.load();
    Exit code;
    if (rec->parsed())
      code = s.recognize();
    else if (bsr->parsed())
      code = s.bsr();
    else if (parse->parsed())
      code = s.parse_trees();
    else if (cnt->parsed())
      code = s.count();
    else if (st->parsed())
      code = s.stats();
    else
      code = s.bench();
    return static_cast<int>(code);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return static_cast<int>(Exit::error);
}

}  // namespace gll::cli
