#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "regame/acceptance.hpp"
#include "regame/certify.hpp"
#include "regame/fo.hpp"
#include "regame/langs.hpp"
#include "regame/oracle.hpp"
#include "regame/serialize.hpp"
#include "regame/service.hpp"
#include "regame/solver.hpp"

using namespace regame;

namespace {

/// Exit codes: solve reports 0 = S wins, 1 = D wins, 2 = resource limit; errors are >= 3.
constexpr int exit_s = 0;
constexpr int exit_d = 1;
constexpr int exit_limit = 2;
constexpr int exit_error = 3;

struct WordArgs {
  std::string alphabet = "ab";
  std::string a_list, b_list;
  std::string a_file, b_file;
};

void add_word_options(CLI::App& cmd, WordArgs& w) {
  cmd.add_option("--alphabet", w.alphabet, "Alphabet symbols")->capture_default_str();
  cmd.add_option("-A", w.a_list, "Comma-separated words of A (EPS for the empty word)");
  cmd.add_option("-B", w.b_list, "Comma-separated words of B (EPS for the empty word)");
  cmd.add_option("--A-file", w.a_file, "Word file for A")->check(CLI::ExistingFile);
  cmd.add_option("--B-file", w.b_file, "Word file for B")->check(CLI::ExistingFile);
}

WordSet load_words(const std::string& list, const std::string& file, const Alphabet& sigma) {
  WordSet out;
  if (!file.empty()) {
    std::ifstream in(file);
    WordFile f = read_word_file(in);
    for (const auto& w : f.words) sigma.check_word(w);
    out = f.words;
  }
  if (!list.empty()) out = set_union(out, parse_word_list(list, sigma));
  return canonical(std::move(out));
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  return file;
}

struct PruneArgs {
  bool no_lemma5 = false;
  bool chain = false;
  bool raw = false;
  std::size_t max_positions = SolverOptions{}.max_positions;
};

void add_prune_options(CLI::App& cmd, PruneArgs& a) {
  cmd.add_flag("--no-lemma5", a.no_lemma5, "Search positions whose A and B share a word instead of cutting them off");
  cmd.add_flag("--chain", a.chain, "Cut off star-free positions decided by long chains");
  cmd.add_flag("--raw", a.raw, "Unreduced move generation");
  cmd.add_option("--max-positions", a.max_positions, "Transposition table limit")->capture_default_str();
}

SolverOptions solver_options(const PruneArgs& a) {
  SolverOptions o;
  o.lemma5_pruning = !a.no_lemma5;
  o.chain_pruning = a.chain;
  o.generation = a.raw ? MoveGeneration::raw : MoveGeneration::reduced;
  o.max_positions = a.max_positions;
  return o;
}

// --- solve ---------------------------------------------------------------------

struct SolveArgs {
  std::string dialect = "re";
  int k = 0;
  std::optional<int> s;
  WordArgs words;
  std::string position_file;
  bool json_out = false;
  PruneArgs prune;
};

int cmd_solve(const SolveArgs& args) {
  Position p;
  if (!args.position_file.empty()) {
    std::ifstream in(args.position_file);
    p = position_from_json(json::parse(in));
  } else {
    const Alphabet sigma(args.words.alphabet);
    p = make_position(parse_dialect(args.dialect), args.k, args.s, sigma,
                      load_words(args.words.a_list, args.words.a_file, sigma),
                      load_words(args.words.b_list, args.words.b_file, sigma));
  }
  Solver solver(solver_options(args.prune));
  SolveResult r;
  try {
    r = solver.solve(p);
  } catch (const resource_limit_exceeded& e) {
    if (args.json_out) {
      std::cout << json{{"position", to_json(p)}, {"winner", nullptr}, {"error", e.what()}}.dump(2) << "\n";
    } else {
      std::cout << "unknown: " << e.what() << "\n";
    }
    return exit_limit;
  }
  if (args.json_out) {
    json j;
    j["position"] = to_json(p);
    const json result = to_json(r);
    for (const auto& [key, value] : result.items()) j[key] = value;
    std::cout << j.dump(2) << "\n";
  } else {
    if (r.winner == Player::S) std::cout << "S wins; witness: " << render_expr(*r.witness) << "\n";
    else std::cout << "D wins\n";
    std::cerr << "positions " << r.stats.positions_visited << ", memo hits " << r.stats.memo_hits << ", max depth "
              << r.stats.max_depth << ", moves " << r.stats.moves_examined << "\n";
  }
  return r.winner == Player::S ? exit_s : exit_d;
}

// --- synth ---------------------------------------------------------------------

struct SynthArgs {
  std::string dialect = "re";
  std::size_t max_size = 12;
  std::optional<std::size_t> max_stars;
  WordArgs words;
  bool structural = false;
  bool json_out = false;
};

int cmd_synth(const SynthArgs& args) {
  const Alphabet sigma(args.words.alphabet);
  const WordSet a = load_words(args.words.a_list, args.words.a_file, sigma);
  const WordSet b = load_words(args.words.b_list, args.words.b_file, sigma);
  WordSet shared;
  for (const auto& w : a)
    if (contains(b, w)) shared.push_back(w);
  if (!shared.empty()) throw std::invalid_argument("A and B overlap in {" + format_word_list(shared) + "}");
  const EnumSpec spec{sigma, parse_dialect(args.dialect), args.max_size, args.max_stars};
  const auto sep =
      min_separating(a, b, spec, args.structural ? OracleMode::structural : OracleMode::observational);
  if (args.json_out) {
    json j{{"bounds", to_json(spec)}, {"A", detail::word_json(a)}, {"B", detail::word_json(b)}};
    if (sep) {
      j["expression"] = render_expr(sep->expr);
      j["size"] = sep->size;
      j["stars"] = sep->stars;
    } else {
      j["expression"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
  } else if (sep) {
    std::cout << "minimal: " << render_expr(sep->expr) << " (size " << sep->size << ", stars " << sep->stars << ")\n";
  } else {
    std::cout << "none within bounds (size <= " << args.max_size << ")\n";
  }
  return sep ? 0 : 1;
}

// --- gen -------------------------------------------------------------------------

struct GenArgs {
  unsigned n = 1;
  unsigned k = 1;
  bool expand = false;
  std::string output;
};

int cmd_gen_enc(const GenArgs& args) {
  std::ofstream file;
  write_word_file(open_output(args.output, file), paren_alphabet(), enc_language(args.n));
  return 0;
}

int cmd_gen_lnk(const GenArgs& args) {
  std::ofstream file;
  write_word_file(open_output(args.output, file), chain_alphabet(args.n), make_lnk(args.n, args.k));
  return 0;
}

int cmd_gen_phi(const GenArgs& args) {
  std::ofstream file;
  std::ostream& out = open_output(args.output, file);
  const auto phi = fo::build_phi(static_cast<int>(args.n));
  if (args.expand) {
    out << fo::render(phi, true) << "\n";
  } else {
    for (const auto& d : fo::macro_definitions(static_cast<int>(args.n))) out << d << "\n";
  }
  std::cerr << "size " << fo::fo_size(phi) << "\n";
  return 0;
}

// --- certify -------------------------------------------------------------------------

struct CertifyArgs {
  unsigned n = 2;
  unsigned k = 2;
  std::string dialect = "resf";
  std::size_t max_size = 9;
  std::size_t max_stars = 1;
  CegisOptions opt;
  bool json_out = false;
};

int cmd_certify(const CertifyArgs& args) {
  const Alphabet sigma = chain_alphabet(args.n);
  const WordSet a = make_lnk(args.n, args.k);
  const unsigned n = args.n;
  const WordPredicate in_b0 = [n](const Word& w) { return !even_chain_member(w, n); };
  const EnumSpec spec{sigma, parse_dialect(args.dialect), args.max_size, args.max_stars};
  const CegisResult r = certify_lower_bound(a, in_b0, spec, default_seed(a, sigma, in_b0), args.opt);
  if (args.json_out) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << to_string(r.status) << " after " << r.rounds.size() << " rounds\n";
    for (const auto& rd : r.rounds)
      std::cout << "  " << render_expr(rd.candidate) << " refuted by " << format_word(rd.counterexample) << "\n";
    std::cout << "sample: " << format_word_list(r.b_sample) << "\n";
    if (!r.diagnostic.empty()) std::cout << r.diagnostic << "\n";
  }
  return r.status == CegisStatus::certificate ? 0 : 1;
}

// --- verify -------------------------------------------------------------------------------

int cmd_verify(const std::string& suite) {
  namespace acc = acceptance;
  std::vector<acc::Report> reports;
  auto show = [&](const acc::Report& r) {
    for (const auto& d : r.details) std::cout << "    " << d << "\n";
    std::cout << r.verdict_line() << "\n" << std::flush;
    reports.push_back(r);
  };
  const bool all = suite == "all";
  if (all || suite == "determinism") {
    const auto first = acc::run_criteria_1_to_6(show);
    show(acc::criterion7(first));
  } else if (suite == "theorems") {
    const auto grid = acc::solve_grid();
    show(acc::criterion1(grid));
    show(acc::criterion2(grid));
  } else if (suite == "lemmas") {
    show(acc::criterion3());
  } else if (suite == "size-bound") {
    show(acc::criterion4());
  } else if (suite == "hierarchy") {
    show(acc::criterion5());
  } else if (suite == "even-chains") {
    show(acc::criterion6());
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass;
  return ok ? 0 : 1;
}

// --- serve -------------------------------------------------------------------------------

int cmd_serve(const std::string& host, int port, const std::string& log_dir) {
  std::optional<std::filesystem::path> dir;
  if (!log_dir.empty()) dir = log_dir;
  service::SessionManager mgr(dir);
  httplib::Server server;
  service::install_routes(server, mgr);
  std::cerr << "listening on " << host << ":" << port << " (" << mgr.size() << " sessions restored)\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return exit_error;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formula size games for regular expressions"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Decide a game position (exit 0: S wins, 1: D wins, 2: limit)");
  solve_cmd->add_option("--dialect", solve.dialect, "re, resf or gre")->capture_default_str();
  solve_cmd->add_option("-k", solve.k, "Size budget");
  solve_cmd->add_option("-s", solve.s, "Star budget (resf and gre)");
  solve_cmd->add_option("--position", solve.position_file, "JSON position file")->check(CLI::ExistingFile);
  solve_cmd->add_flag("--json", solve.json_out, "JSON report");
  add_word_options(*solve_cmd, solve.words);
  add_prune_options(*solve_cmd, solve.prune);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Find a minimal separating expression");
  synth_cmd->add_option("--dialect", synth.dialect, "re, resf or gre")->capture_default_str();
  synth_cmd->add_option("--max-size", synth.max_size, "Size bound")->capture_default_str();
  synth_cmd->add_option("--max-stars", synth.max_stars, "Star bound");
  synth_cmd->add_flag("--structural", synth.structural, "Enumerate every expression instead of one per language");
  synth_cmd->add_flag("--json", synth.json_out, "JSON report");
  add_word_options(*synth_cmd, synth.words);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Emit generated languages and formulas");
  gen_cmd->require_subcommand(1);
  auto* gen_enc = gen_cmd->add_subcommand("enc", "Encodings of the sets in V_{n+1} as parenthesis words");
  auto* gen_lnk = gen_cmd->add_subcommand("lnk", "Words with n chain symbols, chains of length 2k and 2k+1");
  auto* gen_phi = gen_cmd->add_subcommand("phi", "FO formula defining the encodings of level n");
  for (auto* c : {gen_enc, gen_lnk, gen_phi}) {
    c->add_option("-n", gen.n, "Level or number of symbols")->capture_default_str();
    c->add_option("-o,--output", gen.output, "Output file (default stdout)");
  }
  gen_lnk->add_option("-k", gen.k, "Chain parameter: chains have length 2k or 2k+1")->capture_default_str();
  gen_phi->add_flag("--expand", gen.expand, "Expand every macro");

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Counterexample-guided lower bound for even-chain languages");
  cert_cmd->add_option("-n", cert.n, "Number of chain symbols")->capture_default_str();
  cert_cmd->add_option("-k", cert.k, "Chain parameter: chains have length 2k or 2k+1")->capture_default_str();
  cert_cmd->add_option("--dialect", cert.dialect, "re, resf or gre")->capture_default_str();
  cert_cmd->add_option("--max-size", cert.max_size, "Size bound")->capture_default_str();
  cert_cmd->add_option("--max-stars", cert.max_stars, "Star bound")->capture_default_str();
  cert_cmd->add_option("--horizon", cert.opt.horizon, "Counterexample word length bound")->capture_default_str();
  cert_cmd->add_option("--max-rounds", cert.opt.max_rounds, "Round bound")->capture_default_str();
  cert_cmd->add_flag("--json", cert.json_out, "JSON report");

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suites");
  verify_cmd->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"theorems", "lemmas", "size-bound", "hierarchy", "even-chains", "determinism", "all"}))
      ->capture_default_str();

  std::string host = "127.0.0.1", log_dir;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP session service");
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", port, "Port")->capture_default_str();
  serve_cmd->add_option("--log-dir", log_dir, "Directory for session logs, replayed on startup");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_error;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*synth_cmd) return cmd_synth(synth);
    if (*gen_enc) return cmd_gen_enc(gen);
    if (*gen_lnk) return cmd_gen_lnk(gen);
    if (*gen_phi) return cmd_gen_phi(gen);
    if (*cert_cmd) return cmd_certify(cert);
    if (*verify_cmd) return cmd_verify(suite);
    if (*serve_cmd) return cmd_serve(host, port, log_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}
