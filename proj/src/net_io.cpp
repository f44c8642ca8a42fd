#include "justnets/net_io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace justnets {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

bool valid_id(const std::string& s) {
  if (s.empty() || s.find('=') != std::string::npos) return false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '#' || c == '\n' || c == '"') return false;
  }
  return true;
}

bool valid_action(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  return true;
}

}  // namespace

Net parse_pnet(std::string_view text) {
  NetBuilder b;
  std::string name = "net";
  std::size_t lineno = 0;
  std::size_t pos = 0;
  bool seen_net = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    auto toks = split(line);
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    auto fail = [&](const std::string& msg, std::size_t col) -> void { throw ParseError(msg, lineno, col); };
    auto parse_count = [&](const Token& tok, const std::string& key) -> Count {
      std::string prefix = key + "=";
      if (tok.text.rfind(prefix, 0) != 0) fail("expected " + prefix + "<n>", tok.column);
      Count v = 0;
      const char* first = tok.text.data() + prefix.size();
      const char* last = tok.text.data() + tok.text.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || first == last) fail("invalid number in '" + tok.text + "'", tok.column);
      return v;
    };
    const std::string& kw = toks[0].text;
    try {
      if (kw == "net") {
        if (toks.size() != 2) fail("expected: net <name>", toks[0].column);
        if (seen_net) fail("duplicate net header", toks[0].column);
        seen_net = true;
        name = toks[1].text;
      } else if (kw == "place") {
        if (toks.size() < 2 || toks.size() > 3) fail("expected: place <id> [tokens=<n>]", toks[0].column);
        if (!valid_id(toks[1].text)) fail("invalid place id", toks[1].column);
        Count k = toks.size() == 3 ? parse_count(toks[2], "tokens") : 0;
        b.add_place(toks[1].text, k);
      } else if (kw == "trans") {
        if (toks.size() != 3) fail("expected: trans <id> label=<action>|tau|w", toks[0].column);
        if (!valid_id(toks[1].text)) fail("invalid transition id", toks[1].column);
        const std::string& lt = toks[2].text;
        if (lt.rfind("label=", 0) != 0) fail("expected label=<action>", toks[2].column);
        std::string a = lt.substr(6);
        Label l;
        if (a == "tau") {
          l = Label::tau();
        } else if (a == "w") {
          l = Label::success();
        } else if (valid_action(a)) {
          l = Label::visible(a);
        } else {
          fail("invalid action name '" + a + "'", toks[2].column);
        }
        b.add_transition(toks[1].text, l);
      } else if (kw == "arc" || kw == "read") {
        if (toks.size() < 3 || toks.size() > 4) fail("expected: " + kw + " <src> <dst> [weight=<n>]", toks[0].column);
        Count w = toks.size() == 4 ? parse_count(toks[3], "weight") : 1;
        if (w == 0) fail("weight must be positive", toks[3].column);
        auto sp = b.find_place(toks[1].text);
        auto st = b.find_transition(toks[1].text);
        auto dp = b.find_place(toks[2].text);
        auto dt = b.find_transition(toks[2].text);
        if (!sp && !st) fail("unknown id '" + toks[1].text + "'", toks[1].column);
        if (!dp && !dt) fail("unknown id '" + toks[2].text + "'", toks[2].column);
        if (kw == "read") {
          if (!sp || !dt) fail("read arc must go from a place to a transition", toks[1].column);
          b.add_read(*sp, *dt, w);
        } else if (sp && dt) {
          b.add_arc(*sp, *dt, w);
        } else if (st && dp) {
          b.add_arc(*st, *dp, w);
        } else {
          fail("arc must connect a place and a transition", toks[1].column);
        }
      } else if (kw == "actions") {
        for (std::size_t i = 1; i < toks.size(); ++i) {
          if (!valid_action(toks[i].text) || toks[i].text == "tau" || toks[i].text == "w") {
            fail("invalid action name '" + toks[i].text + "'", toks[i].column);
          }
          b.declare_action(toks[i].text);
        }
      } else {
        fail("unknown keyword '" + kw + "'", toks[0].column);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InvalidNet& e) {
      throw ParseError(e.what(), lineno, toks[0].column);
    }
    if (eol == text.size()) break;
  }
  b.set_name(name);
  return std::move(b).build();
}

std::string write_pnet(const Net& n) {
  std::ostringstream os;
  os << "net " << (n.name().empty() ? "net" : n.name()) << '\n';
  ActionSet extra = n.declared_actions();
  if (!extra.empty()) {
    os << "actions";
    for (const auto& a : extra) os << ' ' << a;
    os << '\n';
  }
  for (auto p : n.places()) {
    if (!valid_id(n.place_name(p))) throw InvalidNet("place id not writable: '" + n.place_name(p) + "'");
    os << "place " << n.place_name(p);
    if (Count k = n.initial_marking().count(p)) os << " tokens=" << k;
    os << '\n';
  }
  for (const auto& t : n.transitions()) {
    if (!valid_id(t.name)) throw InvalidNet("transition id not writable: '" + t.name + "'");
    os << "trans " << t.name << " label=" << t.label.str() << '\n';
  }
  auto weight = [](Count k) { return k == 1 ? std::string() : " weight=" + std::to_string(k); };
  for (const auto& t : n.transitions()) {
    for (const auto& [p, k] : t.pre) os << "arc " << n.place_name(p) << ' ' << t.name << weight(k) << '\n';
    for (const auto& [p, k] : t.post) os << "arc " << t.name << ' ' << n.place_name(p) << weight(k) << '\n';
    for (const auto& [p, k] : t.read) os << "read " << n.place_name(p) << ' ' << t.name << weight(k) << '\n';
  }
  return os.str();
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const Net& n) {
  std::ostringstream os;
  os << "digraph " << quote(n.name()) << " {\n  rankdir=LR;\n";
  for (auto p : n.places()) {
    Count k = n.initial_marking().count(p);
    os << "  p" << p.index << " [shape=circle,label=" << quote(k ? std::to_string(k) : "")
       << ",xlabel=" << quote(n.place_name(p)) << "];\n";
  }
  for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
    const auto& t = n.transitions()[i];
    os << "  t" << i << " [shape=box,label=" << quote(t.label.is_tau() ? "τ" : t.label.str())
       << ",xlabel=" << quote(t.name) << "];\n";
  }
  auto wl = [](Count k) { return k == 1 ? std::string() : " [label=\"" + std::to_string(k) + "\"]"; };
  for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
    const auto& t = n.transitions()[i];
    for (const auto& [p, k] : t.pre) os << "  p" << p.index << " -> t" << i << wl(k) << ";\n";
    for (const auto& [p, k] : t.post) os << "  t" << i << " -> p" << p.index << wl(k) << ";\n";
    for (const auto& [p, k] : t.read) {
      os << "  p" << p.index << " -> t" << i << " [dir=none"
         << (k == 1 ? std::string() : ",label=\"" + std::to_string(k) + "\"") << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace justnets
