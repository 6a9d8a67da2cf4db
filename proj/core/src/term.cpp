#include "wtc/term.hpp"

#include <cctype>

namespace wtc {

ProcessTerm ProcessTerm::prefix(Label l, ProcessTerm body) {
  ProcessTerm t;
  t.kind = Kind::prefix;
  t.label = std::move(l);
  t.children.push_back(std::move(body));
  return t;
}

ProcessTerm ProcessTerm::choice(ProcessTerm l, ProcessTerm r) {
  ProcessTerm t;
  t.kind = Kind::choice;
  t.children.push_back(std::move(l));
  t.children.push_back(std::move(r));
  return t;
}

ProcessTerm ProcessTerm::par(ProcessTerm l, ProcessTerm r) {
  ProcessTerm t;
  t.kind = Kind::par;
  t.children.push_back(std::move(l));
  t.children.push_back(std::move(r));
  return t;
}

namespace {

class TermParser {
public:
  explicit TermParser(std::string_view text) : text_(text) {}

  ProcessTerm parse() {
    ProcessTerm t = parse_sum();
    skip_ws();
    if (pos_ < text_.size())
      raise(Errc::syntax_error, "trailing input in process term at position " + std::to_string(pos_));
    return t;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ProcessTerm parse_sum() {
    ProcessTerm t = parse_par();
    while (eat('+')) t = ProcessTerm::choice(std::move(t), parse_par());
    return t;
  }

  ProcessTerm parse_par() {
    ProcessTerm t = parse_prim();
    while (eat('|')) t = ProcessTerm::par(std::move(t), parse_prim());
    return t;
  }

  ProcessTerm parse_prim() {
    skip_ws();
    if (pos_ >= text_.size()) raise(Errc::syntax_error, "unexpected end of process term");
    if (eat('0')) return ProcessTerm::nil();
    if (eat('(')) {
      ProcessTerm t = parse_sum();
      if (!eat(')')) raise(Errc::syntax_error, "expected ')' in process term");
      return t;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      raise(Errc::syntax_error,
            std::string("unexpected character '") + text_[pos_] + "' in process term");
    std::string name(text_.substr(start, pos_ - start));
    Label label = name == "tau" ? Label::tau() : Label::visible(name);
    if (eat('.')) return ProcessTerm::prefix(std::move(label), parse_prim());
    return ProcessTerm::prefix(std::move(label), ProcessTerm::nil());
  }
};

int precedence(ProcessTerm::Kind k) {
  switch (k) {
    case ProcessTerm::Kind::choice: return 1;
    case ProcessTerm::Kind::par: return 2;
    default: return 3;
  }
}

std::string render(const ProcessTerm& t, int min_prec) {
  std::string out;
  switch (t.kind) {
    case ProcessTerm::Kind::nil:
      return "0";
    case ProcessTerm::Kind::prefix:
      out = t.label.name();
      if (!(t.children[0].kind == ProcessTerm::Kind::nil))
        out += "." + render(t.children[0], 3);
      return out;
    case ProcessTerm::Kind::choice:
      out = render(t.children[0], 1) + " + " + render(t.children[1], 2);
      break;
    case ProcessTerm::Kind::par:
      out = render(t.children[0], 2) + " | " + render(t.children[1], 3);
      break;
  }
  if (precedence(t.kind) < min_prec) return "(" + out + ")";
  return out;
}

struct Fragment {
  std::vector<Label> labels;
  std::vector<std::pair<EventId, EventId>> causes;
  std::vector<std::pair<EventId, EventId>> conflicts;
  std::vector<EventId> minimal;
};

Fragment compile(const ProcessTerm& t) {
  switch (t.kind) {
    case ProcessTerm::Kind::nil:
      return {};
    case ProcessTerm::Kind::prefix: {
      Fragment body = compile(t.children[0]);
      Fragment out;
      out.labels.push_back(t.label);
      for (const Label& l : body.labels) out.labels.push_back(l);
      for (auto [a, b] : body.causes) out.causes.emplace_back(a + 1, b + 1);
      for (auto [a, b] : body.conflicts) out.conflicts.emplace_back(a + 1, b + 1);
      for (EventId e = 1; e < out.labels.size(); ++e) out.causes.emplace_back(0, e);
      out.minimal.push_back(0);
      return out;
    }
    case ProcessTerm::Kind::choice:
    case ProcessTerm::Kind::par: {
      Fragment l = compile(t.children[0]);
      Fragment r = compile(t.children[1]);
      const EventId shift = static_cast<EventId>(l.labels.size());
      Fragment out = std::move(l);
      for (const Label& lb : r.labels) out.labels.push_back(lb);
      for (auto [a, b] : r.causes) out.causes.emplace_back(a + shift, b + shift);
      for (auto [a, b] : r.conflicts) out.conflicts.emplace_back(a + shift, b + shift);
      if (t.kind == ProcessTerm::Kind::choice) {
        for (EventId lm : out.minimal)
          for (EventId rm : r.minimal) out.conflicts.emplace_back(lm, rm + shift);
      }
      for (EventId rm : r.minimal) out.minimal.push_back(rm + shift);
      return out;
    }
  }
  return {};
}

}  // namespace

ProcessTerm parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string print_term(const ProcessTerm& t) { return render(t, 1); }

PrimeEventStructure compile_term(const ProcessTerm& t, const std::string& name) {
  Fragment f = compile(t);
  RawPes raw;
  raw.name = name;
  raw.labels = std::move(f.labels);
  raw.causes = std::move(f.causes);
  raw.conflicts = std::move(f.conflicts);
  return validate_pes(raw);
}

}  // namespace wtc
