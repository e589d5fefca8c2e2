#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mllgames.hpp"

namespace mllgames::cli {

enum Exit : int { Ok = 0, Negative = 1, Usage = 2 };

inline constexpr std::string_view assignment_grammar =
    "assignment file: one binding per line, '#' starts a comment\n"
    "  atom = builtin        builtin in {unit, B, Bdual, C, Cflip, B+Bdual}\n"
    "  atom = path.json      {\"moves\":[{\"id\":..,\"label\":\"P\"|\"O\"}],\"positions\":[[ids..]..]}";

inline constexpr std::string_view function_grammar =
    "function file: one entry per line, '#' starts a comment\n"
    "  o-move -> p-move";

inline constexpr std::string_view corpus_grammar = "corpus = max-literals ':' atoms      e.g. 8:2";

// An input error whose message is followed by the grammar of the bad format.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& msg, std::string_view grammar) : std::runtime_error(msg), grammar_(grammar) {}
  std::string_view grammar() const { return grammar_; }

 private:
  std::string_view grammar_;
};

inline std::string read_file(const std::string& path, std::string_view grammar) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'", grammar);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Game load_game(const std::string& ref, const std::filesystem::path& base) {
  if (auto g = builtin::by_name(ref)) return *g;
  std::filesystem::path p(ref);
  if (p.is_relative()) p = base / p;
  try {
    return game_from_json(nlohmann::json::parse(read_file(p.string(), assignment_grammar)));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("game document '" + ref + "': " + e.what(), assignment_grammar);
  } catch (const InvalidGame& e) {
    throw InputError("game document '" + ref + "': " + e.what(), assignment_grammar);
  } catch (const std::invalid_argument& e) {
    throw InputError("game document '" + ref + "': " + e.what(), assignment_grammar);
  }
}

inline Assignment parse_assignment(std::string_view text, const std::filesystem::path& base) {
  Assignment asg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("line " + std::to_string(line_no) + ": expected 'atom = game'", assignment_grammar);
    const std::string atom = trim(line.substr(0, eq)), ref = trim(line.substr(eq + 1));
    if (!Atom::valid_name(atom))
      throw InputError("line " + std::to_string(line_no) + ": bad atom name '" + atom + "'", assignment_grammar);
    asg.insert_or_assign(Atom(atom), load_game(ref, base));
  }
  return asg;
}

inline Assignment load_assignment(const std::string& path) {
  return parse_assignment(read_file(path, assignment_grammar), std::filesystem::path(path).parent_path());
}

inline std::string show(const Assignment& asg) {
  std::string out;
  for (const auto& [a, g] : asg) {
    std::string name = "custom";
    for (const auto& n : {"unit", "B", "Bdual", "C", "Cflip", "B+Bdual"})
      if (*builtin::by_name(n) == g) name = n;
    out += (out.empty() ? "" : ", ") + a.name() + "=" + name;
  }
  return out;
}

inline nlohmann::json to_json(const Sequent& s) { return to_string(s); }

inline nlohmann::json to_json(const Assignment& asg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [a, g] : asg) j[a.name()] = mllgames::to_json(g);
  return j;
}

inline nlohmann::json to_json(const HistoryFreeFunction& f) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [o, p] : f.entries()) j[o] = p;
  return j;
}

// ---------------------------------------------------------------------------
// Commands

struct Options {
  std::string format = "text";
  bool structured() const { return format == "structured"; }
};

inline int check_net(const std::string& seq, const std::string& links, const Options& opt, std::ostream& out) {
  const ProofStructure ps(parse_sequent(seq), parse_linking(links));
  const auto v = is_proof_net(ps);
  if (opt.structured()) {
    nlohmann::json j{{"sequent", to_string(ps.sequent)}, {"links", to_string(ps.linking)}, {"net", v.net},
                     {"switchings_checked", v.switchings_checked}};
    if (!v.net) {
      j["switching"] = to_string(*v.switching);
      j["cycle"] = v.cycle_names;
    }
    out << j.dump(2) << "\n";
  } else if (v.net) {
    out << "PROOF NET\n" << v.switchings_checked << (v.switchings_checked == 1 ? " switching" : " switchings") << " acyclic\n";
  } else {
    out << "NOT A PROOF NET\nswitching: " << to_string(*v.switching) << "\ncycle:";
    for (const auto& n : v.cycle_names) out << " " << n;
    out << "\n";
  }
  return v.net ? Ok : Negative;
}

inline int prove_cmd(const std::string& seq, const Options& opt, std::ostream& out) {
  const Sequent s = parse_sequent(seq);
  const auto nets = prove(s);
  if (opt.structured()) {
    nlohmann::json j{{"sequent", to_string(s)}, {"nets", nlohmann::json::array()}};
    for (const auto& l : nets) j["nets"].push_back(to_string(l));
    out << j.dump(2) << "\n";
  } else {
    out << nets.size() << (nets.size() == 1 ? " net" : " nets");
    for (std::size_t i = 0; i < nets.size(); ++i) out << (i ? "; " : ": ") << to_string(nets[i]);
    out << "\n";
  }
  return nets.empty() ? Negative : Ok;
}

inline int denote_cmd(const std::string& seq, const std::string& links, const std::string& assign, const Options& opt,
                      std::ostream& out) {
  const ProofStructure ps(parse_sequent(seq), parse_linking(links));
  const Assignment asg = load_assignment(assign);
  const Arena arena = Arena::instantiate(ps.sequent, asg);
  const BoundFunction f = denote_bound(arena, ps.linking);
  const auto outcome = check_history_free(arena, f);
  const auto fn = unbind(arena, f);
  if (opt.structured()) {
    nlohmann::json j{{"sequent", to_string(ps.sequent)}, {"links", to_string(ps.linking)}, {"assignment", to_json(asg)},
                     {"function", to_json(fn)}, {"winning", outcome.winning}};
    if (!outcome.winning) j["losing_play"] = play_ids(arena, Play{outcome.losing_play, Label::P});
    out << j.dump(2) << "\n";
  } else {
    out << to_string(fn);
    if (outcome.winning) {
      out << "winning under " << show(asg) << "\n";
    } else {
      out << "not winning under " << show(asg) << "; Player stuck after " << join_ids(play_ids(arena, Play{outcome.losing_play, Label::P}))
          << "\n";
    }
  }
  return outcome.winning ? Ok : Negative;
}

inline HistoryFreeFunction load_function(const std::string& path) {
  try {
    return parse_function(read_file(path, function_grammar));
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what(), function_grammar);
  }
}

inline int compose_cmd(const std::string& f_path, const std::string& g_path, const std::string& games,
                       const Options& opt, std::ostream& out) {
  const auto f = load_function(f_path), g = load_function(g_path);
  HistoryFreeFunction h;
  try {
    h = compose_exec(f, g);
  } catch (const ChatteringDivergence& e) {
    if (opt.structured())
      out << nlohmann::json{{"chattering", e.trace()}}.dump(2) << "\n";
    else
      out << e.what() << "\n";
    return Negative;
  }
  std::optional<bool> agree;
  if (!games.empty()) {
    std::vector<Game> gs;
    std::stringstream ss(games);
    for (std::string ref; std::getline(ss, ref, ',');) gs.push_back(load_game(ref, "."));
    if (gs.size() != 3) throw InputError("--games takes three games A,B,C", assignment_grammar);
    const Game ab = lollipop(gs[0], gs[1]), bc = lollipop(gs[1], gs[2]), ac = lollipop(gs[0], gs[2]);
    agree = compose_sets(ab, bc, ac, induce(ab, f), induce(bc, g)) == induce(ac, h);
  }
  if (opt.structured()) {
    nlohmann::json j{{"function", to_json(h)}};
    if (agree) j["agrees_with_set_composition"] = *agree;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(h);
    if (agree) out << (*agree ? "agrees with set composition\n" : "DISAGREES with set composition\n");
  }
  return agree.value_or(true) ? Ok : Negative;
}

inline void report_verdict(const Verdict& v, const Options& opt, std::ostream& out) {
  if (opt.structured()) {
    nlohmann::json j{{"valid", v.valid}, {"certificate", certificate_lines(v)}};
    if (v.counterexample) {
      const auto& c = *v.counterexample;
      const auto r = replay_counterexample(c);
      j["counterexample"] = {{"simple_sequent", to_string(c.simple)}, {"cycle", c.cycle_nodes},
                             {"instantiation", to_json(c.instantiation)}, {"play", c.play},
                             {"player_stuck", defeats(r)}};
    }
    out << j.dump(2) << "\n";
    return;
  }
  if (v.valid) {
    out << "VALID\n";
    for (const auto& line : certificate_lines(v)) out << "  " << line << "\n";
    return;
  }
  const auto& c = *v.counterexample;
  out << "INVALID\nsimple sequent: " << to_string(c.simple) << "\ncycle:";
  for (const auto& n : c.cycle_nodes) out << " " << n;
  out << "\ninstantiation: " << show(c.instantiation) << "\nplay:";
  for (std::size_t k = 0; k < c.play.size(); ++k) out << " " << (k % 2 == 0 ? "O:" : "P:") << c.play[k];
  const auto r = replay_counterexample(c);
  out << "\n" << (defeats(r) ? "Player stuck: Player loses" : "replay does not defeat Player") << "\n";
}

inline int complete_cmd(const std::string& seq, const std::string& links, const Options& opt, std::ostream& out) {
  const Verdict v = full_check(parse_sequent(seq), parse_linking(links));
  report_verdict(v, opt, out);
  return v.valid ? Ok : Negative;
}

inline int oracle_cmd(const std::string& seq, const std::string& links, const std::string& corpus, const Options& opt,
                      std::ostream& out) {
  if (corpus.empty()) {
    const Sequent s = parse_sequent(seq);
    const Linking l = parse_linking(links);
    const ProofStructure ps(s, l);
    const auto r = SemanticOracle(s).evaluate(l);
    if (opt.structured()) {
      nlohmann::json j{{"sequent", to_string(s)}, {"links", to_string(l)}, {"oracle", r.value}};
      if (r.refuted_by) j["refuted_by"] = *r.refuted_by;
      out << j.dump(2) << "\n";
    } else {
      out << (r.value ? "true" : "false");
      if (r.refuted_by) out << " (not winning under " << *r.refuted_by << ")";
      out << "\n";
    }
    return r.value ? Ok : Negative;
  }
  const auto colon = corpus.find(':');
  std::size_t max_literals = 0, atoms = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    max_literals = std::stoul(corpus.substr(0, colon));
    atoms = std::stoul(corpus.substr(colon + 1));
    if (atoms == 0 || atoms > 8) throw std::invalid_argument("atoms");
  } catch (const std::exception&) {
    throw InputError("bad corpus argument '" + corpus + "'", corpus_grammar);
  }
  CorpusGenerator gen(atoms);
  std::size_t total_disagreements = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n = 2; n <= max_literals; n += 2) {
    std::size_t sequents = 0, linkings = 0, nets = 0, disagreements = 0;
    for (const auto& s : gen.sequents(n)) {
      ++sequents;
      const SemanticOracle oracle(s);
      for_each_linking(s, [&](const Linking& l) {
        ++linkings;
        const bool net = is_proof_net(ProofStructure(s, l)).net;
        const Verdict v = full_check(s, l, Record::Summary);
        const bool sem = oracle.evaluate(l, v).value;
        nets += net;
        if (net != v.valid || net != sem) {
          ++disagreements;
          if (!opt.structured()) out << "disagreement: " << to_string(s) << " links " << to_string(l) << "\n";
        }
      });
    }
    total_disagreements += disagreements;
    if (opt.structured())
      rows.push_back({{"literals", n}, {"sequents", sequents}, {"linkings", linkings}, {"nets", nets},
                      {"disagreements", disagreements}});
    else
      out << "literals=" << n << " sequents=" << sequents << " linkings=" << linkings << " nets=" << nets
          << " disagreements=" << disagreements << "\n";
  }
  if (opt.structured()) out << rows.dump(2) << "\n";
  return total_disagreements == 0 ? Ok : Negative;
}

inline int polarity_cmd(const std::string& text, bool with_p, const Options& opt, std::ostream& out) {
  if (with_p) {
    const auto ctx = parse_extended_list(text);
    const bool ok = with_p_premise_ok(ctx);
    if (opt.structured()) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& f : ctx) j.push_back({{"formula", to_string(f)}, {"polarity", static_cast<int>(polarity(f))}});
      out << nlohmann::json{{"context", j}, {"with_p_allowed", ok}}.dump(2) << "\n";
    } else {
      for (const auto& f : ctx) out << to_string(f) << " : " << to_string(polarity(f)) << "\n";
      out << (ok ? "With^p allowed: every context formula is positive" : "With^p not allowed") << "\n";
    }
    return ok ? Ok : Negative;
  }
  const auto f = parse_extended(text);
  const Polarity p = polarity(f);
  if (opt.structured())
    out << nlohmann::json{{"formula", to_string(f)}, {"polarity", static_cast<int>(p)}}.dump(2) << "\n";
  else
    out << to_string(p) << "\n";
  return Ok;
}

// ---------------------------------------------------------------------------
// Play: the user is Opponent, the denoted strategy is Player.

class PlaySession {
 public:
  PlaySession(const ProofStructure& ps, const Assignment& asg)
      : arena_(Arena::instantiate(ps.sequent, asg)), f_(denote_bound(arena_, ps.linking)), state_(arena_.initial()) {}

  std::vector<std::string> o_moves() const {
    std::vector<std::string> out;
    arena_.for_each_move(state_, [&](MoveIndex m, const Arena::State&) {
      if (arena_.label(m) == Label::O) out.push_back(arena_.move_id(m));
    });
    return out;
  }

  const std::vector<std::string>& history() const { return history_; }
  bool over() const { return over_; }
  std::optional<Label> loser() const { return loser_; }

  // Returns the lines to print for one Opponent input.
  std::vector<std::string> opponent(const std::string& id) {
    const auto legal = o_moves();
    auto legal_list = [&] { return legal.empty() ? std::string("none") : join(legal); };
    const auto m = arena_.index_of(id);
    if (!m) return {"unknown move '" + id + "'; legal O-moves: " + legal_list()};
    if (arena_.label(*m) != Label::O) return {"'" + id + "' is a Player move; legal O-moves: " + legal_list()};
    if (const auto c = arena_.check(state_, *m); c != Arena::Check::Ok)
      return {"illegal move '" + id + "': " + to_string(c) + "; legal O-moves: " + legal_list()};
    state_ = *arena_.advance(state_, *m);
    history_.push_back(id);
    std::vector<std::string> lines;
    const auto answer = f_[*m];
    const auto next = answer ? arena_.advance(state_, *answer) : std::nullopt;
    if (!next) {
      if (answer)
        lines.push_back("strategy answers " + arena_.move_id(*answer) + ", which is illegal: " +
                        to_string(arena_.check(state_, *answer)));
      lines.push_back("Player stuck: Player loses");
      finish(Label::P);
      return lines;
    }
    state_ = *next;
    history_.push_back(arena_.move_id(*answer));
    lines.push_back("P: " + arena_.move_id(*answer));
    if (o_moves().empty()) {
      lines.push_back("no O-moves remain: Opponent loses");
      finish(Label::O);
    }
    return lines;
  }

  // Called once before the first input.
  std::vector<std::string> opening() {
    if (o_moves().empty()) {
      finish(Label::O);
      return {"no O-moves remain: Opponent loses"};
    }
    return {};
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  }
  void finish(Label loser) {
    over_ = true;
    loser_ = loser;
  }

  Arena arena_;
  BoundFunction f_;
  Arena::State state_;
  std::vector<std::string> history_;
  bool over_ = false;
  std::optional<Label> loser_;
};

inline int play_cmd(const std::string& seq, const std::string& links, const std::string& assign,
                    const std::optional<std::string>& batch, std::istream& in, std::ostream& out) {
  const ProofStructure ps(parse_sequent(seq), parse_linking(links));
  PlaySession session(ps, load_assignment(assign));
  std::vector<std::string> inputs;
  const bool interactive = !batch;
  if (batch) {
    std::stringstream ss(*batch);
    for (std::string id; std::getline(ss, id, ',');) inputs.push_back(id);
  }
  auto say = [&](const std::vector<std::string>& lines) {
    for (const auto& l : lines) out << l << "\n";
  };
  auto show_moves = [&] {
    const auto m = session.o_moves();
    out << "O-moves:";
    for (const auto& x : m) out << " " << x;
    out << "\n";
  };
  out << "game: " << to_string(ps.sequent) << " | links " << to_string(ps.linking) << "\n";
  say(session.opening());
  std::size_t next = 0;
  while (!session.over()) {
    show_moves();
    std::string line;
    if (interactive) {
      out << "O> " << std::flush;
      if (!std::getline(in, line)) break;
    } else {
      if (next == inputs.size()) break;
      line = inputs[next++];
      out << "O> " << line << "\n";
    }
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    if (line == ":quit") break;
    if (line == ":moves") continue;
    if (line == ":history") {
      out << "history: " << join_ids(session.history()) << "\n";
      continue;
    }
    say(session.opponent(line));
  }
  if (!session.over()) out << "play unfinished: " << join_ids(session.history()) << "\n";
  return session.loser() == Label::P ? Negative : Ok;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Game semantics for MLL+MIX: proof nets, strategies and full completeness", "mllgames"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "structured"}));

  std::string seq, links, assign, corpus, f_path, g_path, games, formula;
  std::optional<std::string> moves;
  bool with_p = false;
  auto needs_links = [&](CLI::App* c) {
    c->add_option("sequent", seq, "sequent, e.g. \"a^ | a^, a * a\"")->required();
    c->add_option("--links", links, "axiom links, e.g. 1-4,2-3")->required();
  };

  auto* check = app.add_subcommand("check-net", "decide the switching criterion");
  needs_links(check);
  auto* prv = app.add_subcommand("prove", "list every proof net on a sequent");
  prv->add_option("sequent", seq)->required();
  auto* den = app.add_subcommand("denote", "the history-free function of a proof structure");
  needs_links(den);
  den->add_option("--assign", assign, "assignment file")->required();
  auto* cmp = app.add_subcommand("compose", "execution-formula composition of two functions");
  cmp->add_option("f", f_path, "function file on A⊸B")->required();
  cmp->add_option("g", g_path, "function file on B⊸C")->required();
  cmp->add_option("--games", games, "A,B,C as builtins or game documents; also compare with set composition");
  auto* cpl = app.add_subcommand("complete", "run the completeness pipeline");
  needs_links(cpl);
  auto* orc = app.add_subcommand("oracle", "brute-force semantic check over the catalog");
  orc->add_option("sequent", seq);
  orc->add_option("--links", links);
  orc->add_option("--corpus", corpus, "max-literals:atoms");
  auto* pol = app.add_subcommand("polarity", "syntactic polarity of an extended formula");
  pol->add_option("formula", formula, "formula, or a comma-separated context with --with-p")->required();
  pol->add_flag("--with-p", with_p, "check the With^p side condition on a context");
  auto* ply = app.add_subcommand("play", "play Opponent against the denoted strategy");
  needs_links(ply);
  ply->add_option("--assign", assign, "assignment file")->required();
  ply->add_option("--moves", moves, "comma-separated Opponent moves (batch mode)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return Usage;
  }

  try {
    if (check->parsed()) return check_net(seq, links, opt, out);
    if (prv->parsed()) return prove_cmd(seq, opt, out);
    if (den->parsed()) return denote_cmd(seq, links, assign, opt, out);
    if (cmp->parsed()) return compose_cmd(f_path, g_path, games, opt, out);
    if (cpl->parsed()) return complete_cmd(seq, links, opt, out);
    if (orc->parsed()) {
      if (corpus.empty() && (seq.empty() || links.empty()))
        throw InputError("oracle needs a sequent with --links, or --corpus", corpus_grammar);
      return oracle_cmd(seq, links, corpus, opt, out);
    }
    if (pol->parsed()) return polarity_cmd(formula, with_p, opt, out);
    if (ply->parsed()) return play_cmd(seq, links, assign, moves, in, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n" << e.grammar() << "\n";
    return Usage;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n"
        << (pol->parsed() ? extended_grammar : sequent_grammar) << "\n";
    return Usage;
  } catch (const LinkingSyntaxError& e) {
    err << "error: " << e.what() << "\n" << linking_grammar << "\n";
    return Usage;
  } catch (const InvalidLinking& e) {
    err << "error: " << e.what() << "\n" << linking_grammar << "\n";
    return Usage;
  } catch (const MissingAtom& e) {
    err << "error: " << e.what() << "\n" << assignment_grammar << "\n";
    return Usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}

}  // namespace mllgames::cli
