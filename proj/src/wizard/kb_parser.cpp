#include "surfkit/wizard/kb_parser.hpp"

#include "surfkit/error.hpp"
#include "surfkit/wizard/rules.hpp"
#include "surfkit/wizard/workflow.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace surfkit::wizard {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.')) return false;
  }
  return true;
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    if (line[i] == '"') {
      ++i;
      while (i < line.size() && !(line[i] == '"' && line[i - 1] != '\\')) ++i;
      if (i >= line.size()) throw Error(Errc::ParseError, "unterminated string");
      ++i;
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    }
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

GuardAtom parse_guard_atom(std::string_view text) {
  text = trim(text);
  static constexpr std::string_view kOps[] = {"!=", "\xE2\x89\xA0", "=", "<", ">"};
  for (std::string_view op : kOps) {
    const std::size_t pos = text.find(op);
    if (pos == std::string_view::npos) continue;
    GuardAtom a;
    a.key = std::string(trim(text.substr(0, pos)));
    if (!is_identifier(a.key)) throw Error(Errc::ParseError, "bad guard key '" + a.key + "'");
    a.op = op == "=" ? GuardOp::Eq : op == "<" ? GuardOp::Lt : op == ">" ? GuardOp::Gt : GuardOp::Ne;
    a.literal = parse_kb_value(trim(text.substr(pos + op.size())));
    return a;
  }
  throw Error(Errc::ParseError, "guard atom '" + std::string(text) + "' has no operator");
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  KnowledgeBase run() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t nl = text_.find('\n', pos);
      const std::string_view raw = text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no_;
      try {
        line(trim(strip_comment(raw)));
      } catch (const Error& e) {
        if (e.code() != Errc::ParseError) throw;
        throw Error(Errc::ParseError, source_ + ":" + std::to_string(line_no_) + ": " + e.what());
      }
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (workflow_) throw Error(Errc::ParseError, source_ + ": workflow " + workflow_->id + " lacks @end");
    for (const auto& [id, wf] : kb_.workflows()) validate_workflow(kb_, wf);
    return std::move(kb_);
  }

 private:
  void line(std::string_view l) {
    if (l.empty()) return;
    if (workflow_) {
      workflow_line(l);
      return;
    }
    if (l.front() == '@') {
      directive(l);
      return;
    }
    const auto tokens = split_tokens(l);
    if (tokens.size() != 3)
      throw Error(Errc::ParseError, "expected 'subject predicate object', got " + std::to_string(tokens.size()) + " token(s)");
    if (!is_identifier(tokens[0])) throw Error(Errc::ParseError, "subject must be a symbol");
    if (!is_identifier(tokens[1])) throw Error(Errc::ParseError, "predicate must be a symbol");
    kb_.add(Value::symbol(std::string(tokens[0])), std::string(tokens[1]), parse_kb_value(tokens[2]));
  }

  void directive(std::string_view l) {
    const std::size_t sp = l.find_first_of(" \t");
    const std::string_view name = l.substr(0, sp);
    const std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(l.substr(sp));
    if (name == "@functional") {
      if (!is_identifier(rest)) throw Error(Errc::ParseError, "@functional needs a predicate");
      kb_.declare_functional(std::string(rest));
    } else if (name == "@rule") {
      Rule r = parse_rule(rest);
      for (const auto& b : builtin_rules()) {
        if (b.name == r.name) throw Error(Errc::ConsistencyError, "rule '" + r.name + "' is built in");
      }
      kb_.add_rule(std::move(r));
    } else if (name == "@workflow") {
      if (!is_identifier(rest)) throw Error(Errc::ParseError, "@workflow needs an identifier");
      workflow_ = WorkflowDef{};
      workflow_->id = std::string(rest);
    } else {
      throw Error(Errc::ParseError, "unknown directive '" + std::string(name) + "'");
    }
  }

  void note_step(const std::string& s) {
    if (s == kDone) return;
    for (const auto& x : workflow_->steps) {
      if (x == s) return;
    }
    workflow_->steps.push_back(s);
  }

  void workflow_line(std::string_view l) {
    if (l == "@end") {
      if (workflow_->start.empty()) throw Error(Errc::ParseError, "workflow " + workflow_->id + " has no start");
      kb_.add_workflow(std::move(*workflow_));
      workflow_.reset();
      return;
    }
    if (l.substr(0, 6) == "start ") {
      const auto s = trim(l.substr(6));
      if (!is_identifier(s)) throw Error(Errc::ParseError, "start needs a step name");
      workflow_->start = std::string(s);
      note_step(workflow_->start);
      return;
    }
    const std::size_t arrow = l.find("->");
    if (arrow == std::string_view::npos) throw Error(Errc::ParseError, "expected 'start X', 'A -> B [guard]' or '@end'");
    Edge e;
    e.from = std::string(trim(l.substr(0, arrow)));
    std::string_view rest = trim(l.substr(arrow + 2));
    const std::size_t open = rest.find('[');
    e.to = std::string(trim(rest.substr(0, open)));
    if (!is_identifier(e.from) || !is_identifier(e.to)) throw Error(Errc::ParseError, "edge endpoints must be symbols");
    if (e.from == kDone) throw Error(Errc::ParseError, "Done has no successors");
    if (open != std::string_view::npos) {
      if (rest.back() != ']') throw Error(Errc::ParseError, "guard must end with ']'");
      std::string_view body = rest.substr(open + 1, rest.size() - open - 2);
      while (!trim(body).empty()) {
        const std::size_t comma = body.find(',');
        e.guard.push_back(parse_guard_atom(body.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
    }
    note_step(e.from);
    note_step(e.to);
    workflow_->edges.push_back(std::move(e));
  }

  std::string_view text_;
  std::string source_;
  std::size_t line_no_ = 0;
  KnowledgeBase kb_;
  std::optional<WorkflowDef> workflow_;
};

}  // namespace

Value parse_kb_value(std::string_view token) {
  token = trim(token);
  if (token.empty()) throw Error(Errc::ParseError, "missing value");
  if (token.front() == '"') {
    if (token.size() < 2 || token.back() != '"') throw Error(Errc::ParseError, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
      if (token[i] == '\\' && i + 2 < token.size()) ++i;
      out += token[i];
    }
    return Value::string(out);
  }
  if (token == "true") return Value::boolean(true);
  if (token == "false") return Value::boolean(false);
  if (const std::size_t tilde = token.find('~'); tilde != std::string_view::npos) {
    const auto number = parse_number(token.substr(0, tilde));
    if (!number) throw Error(Errc::ParseError, "bad quantity '" + std::string(token) + "'");
    const auto unit = find_unit(token.substr(tilde + 1));
    if (!unit) throw Error(Errc::ParseError, "unknown unit in '" + std::string(token) + "'");
    Quantity q;
    q.value = *number;
    q.unit = std::string(unit->symbol);
    q.canonical = *number * unit->to_canonical;
    q.dimension = unit->dimension;
    return Value::quantity(q);
  }
  if (const auto number = parse_number(token)) return Value::number(*number);
  if (!is_identifier(token)) throw Error(Errc::ParseError, "bad token '" + std::string(token) + "'");
  return Value::symbol(std::string(token));
}

KnowledgeBase parse_kb(std::string_view text, const std::string& source) { return Parser(text, source).run(); }

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open knowledge base " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str(), path.string());
}

const KnowledgeBase& default_kb() {
  static const KnowledgeBase kb = parse_kb(default_kb_text(), "default.kb");
  return kb;
}

}  // namespace surfkit::wizard
