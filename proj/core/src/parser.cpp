#include "wtc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace wtc {

namespace {

struct Token {
  std::string text;
  bool ident = false;
  int line = 1;
  int col = 1;
};

[[noreturn]] void syntax_error_at(int line, int col, const std::string& msg) {
  raise(Errc::syntax_error, "line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg);
}

std::vector<Token> lex_formula(std::string_view text) {
  static const char* symbols[] = {"<<|", "|>>", "<<", ">>", "[[", "]]", "(", ")",
                                  "{",   "}",   ",", "~",  "&",  "|",  "!", "."};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
    bool matched = false;
    for (const char* sym : symbols) {
      std::size_t len = std::string_view(sym).size();
      if (text.substr(i, len) == sym) {
        out.push_back({sym, false, line, col});
        i += len;
        col += static_cast<int>(len);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({std::string(text.substr(i, j - i)), true, line, col});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    syntax_error_at(line, col, std::string("unexpected character '") + c + "'");
  }
  return out;
}

class FormulaParser {
public:
  explicit FormulaParser(std::string_view text) : tokens_(lex_formula(text)) {}

  Formula parse() {
    if (tokens_.empty()) syntax_error_at(1, 1, "empty formula");
    Formula out = parse_or();
    if (pos_ < tokens_.size()) fail("trailing input after the formula");
    return out;
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    if (pos_ < tokens_.size())
      syntax_error_at(tokens_[pos_].line, tokens_[pos_].col, msg + " (at '" + tokens_[pos_].text + "')");
    const Token& last = tokens_.back();
    syntax_error_at(last.line, last.col + static_cast<int>(last.text.size()), msg);
  }

  bool at(std::string_view sym, std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() && !tokens_[pos_ + ahead].ident &&
           tokens_[pos_ + ahead].text == sym;
  }
  bool at_ident(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() && tokens_[pos_ + ahead].ident;
  }
  const std::string& ident_text(std::size_t ahead = 0) const { return tokens_[pos_ + ahead].text; }

  void expect(std::string_view sym) {
    if (!at(sym)) fail("expected '" + std::string(sym) + "'");
    ++pos_;
  }

  std::string expect_ident(const char* what) {
    if (!at_ident()) fail(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  std::vector<Var> parse_vlist() {
    expect("{");
    std::vector<Var> out;
    if (!at("}")) {
      out.push_back(expect_ident("a variable"));
      while (at(",")) {
        ++pos_;
        out.push_back(expect_ident("a variable"));
      }
    }
    expect("}");
    return out;
  }

  // vlist [","] vlist "~" "<<" label var
  BindSpec parse_spec_guts() {
    BindSpec spec;
    spec.causes = parse_vlist();
    if (at(",")) ++pos_;
    spec.independent = parse_vlist();
    expect("~");
    expect("<<");
    std::string label = expect_ident("a label");
    if (label == "tau") fail("bind labels are visible; 'tau' is not allowed");
    spec.label = Label::visible(label);
    spec.target = expect_ident("the bound variable");
    return spec;
  }

  bool at_product_separator() const {
    return at("(", 0) && at_ident(1) && ident_text(1) == "x" && at(")", 2);
  }

  Formula parse_product(bool exec_diamonds, BindSpec first) {
    std::vector<BindSpec> factors{std::move(first)};
    while (at_product_separator()) {
      pos_ += 3;
      if (exec_diamonds) {
        expect("<<|");
        factors.push_back(parse_spec_guts());
        expect("|>>");
      } else {
        expect("(");
        factors.push_back(parse_spec_guts());
        expect(")");
      }
    }
    expect(")");
    Formula body = parse_prefix();
    return Formula::step_product(std::move(factors), exec_diamonds, std::move(body));
  }

  std::vector<Var> parse_prop_args() {
    expect("(");
    std::vector<Var> args;
    if (at("{")) {
      args = parse_vlist();
    } else if (at_ident()) {
      args.push_back(expect_ident("a variable"));
      while (at(",")) {
        ++pos_;
        args.push_back(expect_ident("a variable"));
      }
    }
    expect(")");
    return args;
  }

  Formula parse_prefix() {
    if (at("!")) {
      ++pos_;
      return Formula::neg(parse_prefix());
    }
    if (at("<<")) {
      ++pos_;
      std::string v = expect_ident("a variable");
      expect(">>");
      return Formula::exec(v, parse_prefix());
    }
    if (at("[[")) {
      ++pos_;
      std::string v = expect_ident("a variable");
      expect("]]");
      return Formula::dual_exec(v, parse_prefix());
    }
    if (at("<<|")) {
      ++pos_;
      BindSpec spec = parse_spec_guts();
      expect("|>>");
      return Formula::bind_exec(std::move(spec), parse_prefix());
    }
    if (at("{")) {
      ++pos_;
      BindSpec spec = parse_spec_guts();
      expect("}");
      return Formula::dual_bind(std::move(spec), parse_prefix());
    }
    if (at("(")) {
      // bind prefix, step product or parenthesized formula; a dual bind after
      // the parenthesis ("( {{...") means a parenthesized formula
      if (at("{", 1) && !at("{", 2)) {
        ++pos_;
        BindSpec spec = parse_spec_guts();
        expect(")");
        return Formula::bind(std::move(spec), parse_prefix());
      }
      if (at("<<|", 1)) {
        // product of diamonds, or a parenthesized diamond-prefixed formula
        ++pos_;
        expect("<<|");
        BindSpec spec = parse_spec_guts();
        expect("|>>");
        if (at_product_separator() || at(")")) return parse_product(true, std::move(spec));
        Formula first = Formula::bind_exec(std::move(spec), parse_prefix());
        Formula inner = continue_or(std::move(first));
        expect(")");
        return inner;
      }
      if (at("(", 1) && at("{", 2) && !at("{", 3)) {
        // product of plain binds, or a parenthesized bind-prefixed formula
        ++pos_;  // outer "("
        expect("(");
        BindSpec spec = parse_spec_guts();
        expect(")");
        if (at_product_separator() || at(")")) return parse_product(false, std::move(spec));
        // parenthesized formula: the bind body stays prefix-tight, the
        // connectives continue inside the parentheses
        Formula first = Formula::bind(std::move(spec), parse_prefix());
        Formula inner = continue_or(std::move(first));
        expect(")");
        return inner;
      }
      ++pos_;
      Formula inner = parse_or();
      expect(")");
      return inner;
    }
    if (at_ident()) {
      const std::string& word = ident_text();
      if (word == "T") {
        ++pos_;
        return Formula::truth();
      }
      if (word == "mu" || word == "nu") {
        bool is_mu = word == "mu";
        ++pos_;
        std::string prop = expect_ident("a proposition name");
        std::vector<Var> params = parse_prop_args();
        expect(".");
        Formula body = parse_or();
        return is_mu ? Formula::mu(prop, std::move(params), std::move(body))
                     : Formula::nu(prop, std::move(params), std::move(body));
      }
      std::string prop = expect_ident("a proposition name");
      std::vector<Var> args = parse_prop_args();
      return Formula::prop_apply(std::move(prop), std::move(args));
    }
    fail("expected a formula");
  }

  Formula continue_and(Formula first) {
    while (at("&")) {
      ++pos_;
      first = Formula::conj(std::move(first), parse_prefix());
    }
    return first;
  }

  Formula continue_or(Formula first) {
    first = continue_and(std::move(first));
    while (at("|")) {
      ++pos_;
      first = Formula::disj(std::move(first), parse_and());
    }
    return first;
  }

  Formula parse_and() { return continue_and(parse_prefix()); }

  Formula parse_or() { return continue_or(parse_and()); }
};

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string print_formula(const Formula& phi) { return phi.to_string(); }

PrimeEventStructure parse_pes(std::string_view text) {
  RawPes raw;
  raw.name = "pes";
  std::map<std::string, EventId> ids;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;

    auto need = [&](const char* what) {
      std::string tok;
      if (!(ls >> tok)) syntax_error_at(lineno, 1, std::string("expected ") + what);
      return tok;
    };
    auto lookup = [&](const std::string& name) {
      auto it = ids.find(name);
      if (it == ids.end())
        raise(Errc::dangling_event,
              "line " + std::to_string(lineno) + ": event '" + name + "' is not declared");
      return it->second;
    };

    if (word == "pes") {
      if (saw_header) syntax_error_at(lineno, 1, "duplicate 'pes' header");
      saw_header = true;
      std::string name;
      if (ls >> name) raw.name = name;
    } else if (word == "event") {
      std::string name = need("an event id");
      std::string label = need("a label");
      if (ids.count(name)) syntax_error_at(lineno, 1, "event '" + name + "' declared twice");
      ids[name] = static_cast<EventId>(raw.labels.size());
      raw.labels.push_back(label == "tau" ? Label::tau() : Label::visible(label));
      raw.event_names.push_back(name);
    } else if (word == "cause") {
      std::string a = need("an event id");
      std::string b = need("an event id");
      raw.causes.emplace_back(lookup(a), lookup(b));
    } else if (word == "conflict") {
      std::string a = need("an event id");
      std::string b = need("an event id");
      raw.conflicts.emplace_back(lookup(a), lookup(b));
    } else {
      syntax_error_at(lineno, 1, "unknown directive '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) syntax_error_at(lineno, 1, "trailing text '" + extra + "'");
  }
  return validate_pes(raw);
}

std::string print_pes(const PrimeEventStructure& pes) {
  std::string out = "pes " + (pes.name().empty() ? std::string("pes") : pes.name()) + "\n";
  for (EventId e : pes.events())
    out += "event " + pes.event_name(e) + " " + pes.label(e).name() + "\n";
  for (const auto& [a, b] : pes.reduced_causality())
    out += "cause " + pes.event_name(a) + " " + pes.event_name(b) + "\n";
  for (const auto& [a, b] : pes.minimal_conflicts())
    out += "conflict " + pes.event_name(a) + " " + pes.event_name(b) + "\n";
  return out;
}

}  // namespace wtc
