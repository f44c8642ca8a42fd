#include "justnets/lang.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace justnets::lang {

namespace {

std::string join(const ActionSet& as) {
  std::string s;
  for (const auto& a : as) {
    if (!s.empty()) s += ',';
    s += a;
  }
  return s;
}

std::string join(const Renaming& f) {
  std::string s;
  for (const auto& [a, b] : f) {
    if (!s.empty()) s += ',';
    s += a + "->" + b;
  }
  return s;
}

// A continuation or signal body needs brackets when it is a sum of several branches.
std::string bracketed(const TermPtr& t) {
  if (t->is_sum() && t->branches.size() > 1) return "(" + t->key + ")";
  return t->key;
}

std::string sum_key(const std::vector<std::pair<Label, TermPtr>>& bs) {
  if (bs.empty()) return "0";
  std::string s;
  for (const auto& [a, p] : bs) {
    if (!s.empty()) s += '+';
    s += a.str() + "." + bracketed(p);
  }
  return s;
}

std::shared_ptr<Term> fresh(Term::Kind k) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  return t;
}

}  // namespace

TermPtr make_sum(std::vector<std::pair<Label, TermPtr>> branches) {
  auto t = fresh(Term::Kind::sum);
  t->branches = std::move(branches);
  t->key = sum_key(t->branches);
  return t;
}

TermPtr make_nil() { return make_sum({}); }

TermPtr make_prefix(Label a, TermPtr continuation) { return make_sum({{std::move(a), std::move(continuation)}}); }

TermPtr make_signal(Label a, TermPtr body) {
  if (!body->is_sum()) throw InvalidNet("signal body must be a guarded sum");
  auto t = fresh(Term::Kind::signal);
  t->signal = std::move(a);
  t->branches = body->branches;
  t->key = t->signal.str() + ">" + bracketed(body);
  return t;
}

TermPtr make_par(TermPtr l, ActionSet sync, TermPtr r) {
  auto t = fresh(Term::Kind::par);
  t->left = std::move(l);
  t->right = std::move(r);
  t->actions = std::move(sync);
  t->key = "(" + t->left->key + "|[" + join(t->actions) + "]|" + t->right->key + ")";
  return t;
}

TermPtr make_hide(ActionSet hidden, TermPtr body) {
  auto t = fresh(Term::Kind::hide);
  t->left = std::move(body);
  t->actions = std::move(hidden);
  t->key = "hide{" + join(t->actions) + "}in(" + t->left->key + ")";
  return t;
}

TermPtr make_rename(Renaming f, TermPtr body) {
  auto t = fresh(Term::Kind::rename);
  t->left = std::move(body);
  t->renaming = std::move(f);
  t->key = "rename{" + join(t->renaming) + "}in(" + t->left->key + ")";
  return t;
}

TermPtr make_ident(std::string name) {
  auto t = fresh(Term::Kind::ident);
  t->name = std::move(name);
  t->key = t->name;
  return t;
}

bool operator==(const Term& a, const Term& b) { return a.key == b.key; }

const std::string& to_string(const TermPtr& t) { return t->key; }

// ---- lexer ----

namespace {

enum class Tok {
  ident,   // uppercase initial
  action,  // lowercase initial
  zero,
  dot,
  plus,
  gt,
  lparen,
  rparen,
  lsync,       // |[
  rsync,       // ]|
  interleave,  // |||
  fullsync,    // ||
  lbrace,
  rbrace,
  comma,
  arrow,
  eq,
  semi,
  kw_hide,
  kw_rename,
  kw_in,
  kw_act,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(s.substr(i, n)), l, cl});
      advance(n);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) {
        ++j;
      }
      std::string word(s.substr(i, j - i));
      Tok k = std::isupper(static_cast<unsigned char>(c)) ? Tok::ident : Tok::action;
      if (word == "hide") k = Tok::kw_hide;
      if (word == "rename") k = Tok::kw_rename;
      if (word == "in") k = Tok::kw_in;
      if (word == "act") k = Tok::kw_act;
      push(k, j - i);
      continue;
    }
    if (c == '0') {
      if (i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1]))) {
        throw ParseError("unexpected number", l, cl);
      }
      push(Tok::zero, 1);
      continue;
    }
    if (starts("|||")) {
      push(Tok::interleave, 3);
    } else if (starts("|[")) {
      push(Tok::lsync, 2);
    } else if (starts("]|")) {
      push(Tok::rsync, 2);
    } else if (starts("||")) {
      push(Tok::fullsync, 2);
    } else if (starts("->")) {
      push(Tok::arrow, 2);
    } else {
      switch (c) {
        case '.': push(Tok::dot, 1); break;
        case '+': push(Tok::plus, 1); break;
        case '>': push(Tok::gt, 1); break;
        case '(': push(Tok::lparen, 1); break;
        case ')': push(Tok::rparen, 1); break;
        case '{': push(Tok::lbrace, 1); break;
        case '}': push(Tok::rbrace, 1); break;
        case ',': push(Tok::comma, 1); break;
        case '=': push(Tok::eq, 1); break;
        case ';': push(Tok::semi, 1); break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
      }
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

Label label_of(const std::string& a) {
  if (a == "tau") return Label::tau();
  if (a == "w") return Label::success();
  return Label::visible(a);
}

struct IdentUse {
  std::size_t line, column;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) { prescan(); }

  Program run() {
    Program prog;
    std::map<std::string, IdentUse> def_at;
    while (peek().kind != Tok::end) {
      if (peek().kind == Tok::kw_act) {
        next();
        for (const auto& a : action_list(Tok::semi)) prog.defs.declared.insert(a);
        expect(Tok::semi, "';'");
        continue;
      }
      if (peek().kind == Tok::ident && peek(1).kind == Tok::eq) {
        const Token name = next();
        next();
        if (prog.defs.bodies.count(name.text)) {
          throw ParseError("identifier '" + name.text + "' defined twice", name.line, name.column);
        }
        unguarded_.clear();
        auto body = par();
        expect(Tok::semi, "';'");
        prog.defs.bodies[name.text] = body;
        prog.defs.order.push_back(name.text);
        unguarded_refs_[name.text] = unguarded_;
        def_at[name.text] = {name.line, name.column};
        continue;
      }
      if (prog.main) {
        const Token& t = peek();
        throw ParseError("unexpected '" + t.text + "' after the main term", t.line, t.column);
      }
      prog.main = par();
      if (peek().kind == Tok::semi) next();
    }
    for (const auto& [name, at] : uses_) {
      if (!prog.defs.bodies.count(name)) {
        throw ParseError("undefined identifier '" + name + "'", at.line, at.column);
      }
    }
    check_guarded(prog.defs, def_at);
    if (!prog.main) {
      if (prog.defs.order.empty()) throw ParseError("empty program", 1, 1);
      prog.main = make_ident(prog.defs.order.front());
    }
    return prog;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + what + ", found " + found, t.line, t.column);
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(what, peek());
    return next();
  }

  // Full alphabet for `||`: declared actions, or every action named in the file.
  void prescan() {
    ActionSet declared, all;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::action && toks_[i].text != "tau" && toks_[i].text != "w") all.insert(toks_[i].text);
      if (toks_[i].kind == Tok::kw_act) {
        for (std::size_t j = i + 1; j < toks_.size() && toks_[j].kind != Tok::semi; ++j) {
          if (toks_[j].kind == Tok::action) declared.insert(toks_[j].text);
        }
      }
    }
    full_ = declared.empty() ? all : declared;
  }

  std::string visible_action() {
    const Token t = expect(Tok::action, "an action");
    if (t.text == "tau" || t.text == "w") throw ParseError("'" + t.text + "' is not a visible action", t.line, t.column);
    return t.text;
  }

  std::vector<std::string> action_list(Tok close) {
    std::vector<std::string> out;
    if (peek().kind == close) return out;
    out.push_back(visible_action());
    while (peek().kind == Tok::comma) {
      next();
      out.push_back(visible_action());
    }
    return out;
  }

  TermPtr par() {
    auto t = sum();
    for (;;) {
      ActionSet sync;
      if (peek().kind == Tok::lsync) {
        next();
        for (auto& a : action_list(Tok::rsync)) sync.insert(a);
        expect(Tok::rsync, "']|'");
      } else if (peek().kind == Tok::interleave) {
        next();
      } else if (peek().kind == Tok::fullsync) {
        next();
        sync = full_;
      } else {
        return t;
      }
      t = make_par(t, std::move(sync), sum());
    }
  }

  TermPtr sum() {
    const Token first = peek();
    auto t = unary();
    if (peek().kind != Tok::plus) return t;
    std::vector<std::pair<Label, TermPtr>> bs;
    auto take = [&](const TermPtr& u, const Token& at) {
      if (!u->is_sum()) throw ParseError("operand of '+' must be a guarded sum", at.line, at.column);
      bs.insert(bs.end(), u->branches.begin(), u->branches.end());
    };
    take(t, first);
    while (peek().kind == Tok::plus) {
      next();
      const Token at = peek();
      take(unary(), at);
    }
    return make_sum(std::move(bs));
  }

  TermPtr unary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::action: {
        next();
        Label a = label_of(t.text);
        if (peek().kind == Tok::dot) {
          next();
          return make_prefix(std::move(a), guarded_unary());
        }
        if (peek().kind == Tok::gt) {
          if (!a.is_visible()) throw ParseError("only visible actions can be signalled", t.line, t.column);
          next();
          const Token at = peek();
          auto body = guarded_unary();
          if (!body->is_sum()) throw ParseError("signal body must be a guarded sum", at.line, at.column);
          return make_signal(std::move(a), body);
        }
        fail("'.' or '>' after action", peek());
      }
      case Tok::zero: next(); return make_nil();
      case Tok::kw_hide: {
        next();
        expect(Tok::lbrace, "'{'");
        ActionSet hidden;
        for (auto& a : action_list(Tok::rbrace)) hidden.insert(a);
        expect(Tok::rbrace, "'}'");
        expect(Tok::kw_in, "'in'");
        return make_hide(std::move(hidden), unary());
      }
      case Tok::kw_rename: {
        next();
        expect(Tok::lbrace, "'{'");
        Renaming f;
        if (peek().kind != Tok::rbrace) {
          for (;;) {
            const Token at = peek();
            std::string from = visible_action();
            expect(Tok::arrow, "'->'");
            std::string to = visible_action();
            if (!f.emplace(from, to).second) throw ParseError("action '" + from + "' renamed twice", at.line, at.column);
            if (peek().kind != Tok::comma) break;
            next();
          }
        }
        expect(Tok::rbrace, "'}'");
        expect(Tok::kw_in, "'in'");
        return make_rename(std::move(f), unary());
      }
      case Tok::ident:
        next();
        uses_.emplace(t.text, IdentUse{t.line, t.column});
        if (guard_depth_ == 0) unguarded_.insert(t.text);
        return make_ident(t.text);
      case Tok::lparen: {
        next();
        auto inner = par();
        expect(Tok::rparen, "')'");
        return inner;
      }
      default: fail("a term", t);
    }
  }

  TermPtr guarded_unary() {
    ++guard_depth_;
    auto t = unary();
    --guard_depth_;
    return t;
  }

  // Identifier references outside any prefix must not form a cycle, otherwise
  // decomposition would not terminate.
  void check_guarded(const Definitions& defs, const std::map<std::string, IdentUse>& at) const {
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& k) {
      state[k] = 1;
      auto it = unguarded_refs_.find(k);
      if (it != unguarded_refs_.end()) {
        for (const auto& r : it->second) {
          if (state[r] == 1) {
            const auto& loc = at.at(k);
            throw ParseError("unguarded recursion through '" + r + "'", loc.line, loc.column);
          }
          if (state[r] == 0) visit(r);
        }
      }
      state[k] = 2;
    };
    for (const auto& k : defs.order) {
      if (state[k] == 0) visit(k);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ActionSet full_;
  int guard_depth_ = 0;
  std::set<std::string> unguarded_;
  std::map<std::string, std::set<std::string>> unguarded_refs_;
  std::map<std::string, IdentUse> uses_;
};

}  // namespace

Program parse(std::string_view text) { return Parser(lex(text)).run(); }

// ---- places and derivation ----

namespace {

PlacePtr make_place(PlaceExpr::Kind k, TermPtr term, PlacePtr inner, ActionSet actions, Renaming f) {
  auto p = std::make_shared<PlaceExpr>();
  p->kind = k;
  p->term = std::move(term);
  p->inner = std::move(inner);
  p->actions = std::move(actions);
  p->renaming = std::move(f);
  switch (k) {
    case PlaceExpr::Kind::sum:
    case PlaceExpr::Kind::signal: p->key = p->term->key; break;
    case PlaceExpr::Kind::left: p->key = "(" + p->inner->key + ")|[" + join(p->actions) + "]|_"; break;
    case PlaceExpr::Kind::right: p->key = "_|[" + join(p->actions) + "]|(" + p->inner->key + ")"; break;
    case PlaceExpr::Kind::hide: p->key = "hide{" + join(p->actions) + "}(" + p->inner->key + ")"; break;
    case PlaceExpr::Kind::rename: p->key = "rename{" + join(p->renaming) + "}(" + p->inner->key + ")"; break;
  }
  return p;
}

PlaceSet tagged(const PlaceSet& s, PlaceExpr::Kind k, const ActionSet& as, const Renaming& f = {}) {
  PlaceSet out;
  for (const auto& p : s) out.insert(make_place(k, nullptr, p, as, f));
  return out;
}

PlaceSet merged(PlaceSet a, const PlaceSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

int compare(const PlaceSet& a, const PlaceSet& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (int c = (*ia)->key.compare((*ib)->key); c != 0) return c;
  }
  if (ia != a.end()) return 1;
  if (ib != b.end()) return -1;
  return 0;
}

// Transitions derivable from a growing set of places, grouped by the outermost
// operator tag as the rules dictate. Each group keeps its own child for the places
// beneath the tag, so adding places only derives the transitions that involve them.
class Group {
 public:
  explicit Group(const Definitions& defs) : defs_(defs) {}

  const std::vector<DerivedTransition>& all() const { return all_; }

  // Returns the transitions that became derivable through `fresh`.
  std::vector<DerivedTransition> add(const std::vector<PlacePtr>& fresh) {
    std::vector<DerivedTransition> out;
    auto emit = [&](DerivedTransition t) {
      if (seen_.insert(t).second) {
        all_.push_back(t);
        out.push_back(std::move(t));
      }
    };
    std::map<ActionSet, std::pair<std::vector<PlacePtr>, std::vector<PlacePtr>>> pars;
    std::map<ActionSet, std::vector<PlacePtr>> hides;
    std::map<Renaming, std::vector<PlacePtr>> renames;
    for (const auto& mu : fresh) {
      if (!places_.insert(mu).second) continue;
      switch (mu->kind) {
        case PlaceExpr::Kind::sum:
        case PlaceExpr::Kind::signal:
          for (const auto& [a, p] : mu->term->branches) emit({{mu}, {}, a, dex(p, defs_)});
          if (mu->kind == PlaceExpr::Kind::signal) emit({{}, {mu}, mu->term->signal, {}});
          break;
        case PlaceExpr::Kind::left: pars[mu->actions].first.push_back(mu->inner); break;
        case PlaceExpr::Kind::right: pars[mu->actions].second.push_back(mu->inner); break;
        case PlaceExpr::Kind::hide: hides[mu->actions].push_back(mu->inner); break;
        case PlaceExpr::Kind::rename: renames[mu->renaming].push_back(mu->inner); break;
      }
    }
    using K = PlaceExpr::Kind;
    for (const auto& [sync, sides] : pars) {
      auto& [gl, gr] = pars_[sync];
      if (!gl) gl = std::make_unique<Group>(defs_);
      if (!gr) gr = std::make_unique<Group>(defs_);
      const std::size_t old_l = gl->all().size(), old_r = gr->all().size();
      const auto dl = gl->add(sides.first);
      const auto dr = gr->add(sides.second);
      auto synchronising = [&](const Label& l) { return l.is_visible() && sync.count(l.action); };
      auto left = [&](const PlaceSet& s) { return tagged(s, K::left, sync); };
      auto right = [&](const PlaceSet& s) { return tagged(s, K::right, sync); };
      for (const auto& t : dl) {
        if (!synchronising(t.label)) emit({left(t.pre), left(t.read), t.label, left(t.post)});
      }
      for (const auto& t : dr) {
        if (!synchronising(t.label)) emit({right(t.pre), right(t.read), t.label, right(t.post)});
      }
      const auto& tl = gl->all();
      const auto& tr = gr->all();
      for (std::size_t i = 0; i < tl.size(); ++i) {
        if (!synchronising(tl[i].label)) continue;
        for (std::size_t j = i < old_l ? old_r : 0; j < tr.size(); ++j) {
          if (tr[j].label != tl[i].label) continue;
          emit({merged(left(tl[i].pre), right(tr[j].pre)), merged(left(tl[i].read), right(tr[j].read)), tl[i].label,
                merged(left(tl[i].post), right(tr[j].post))});
        }
      }
    }
    for (const auto& [hidden, inner] : hides) {
      auto& g = hides_[hidden];
      if (!g) g = std::make_unique<Group>(defs_);
      for (const auto& t : g->add(inner)) {
        Label l = t.label.is_visible() && hidden.count(t.label.action) ? Label::tau() : t.label;
        emit({tagged(t.pre, K::hide, hidden), tagged(t.read, K::hide, hidden), l, tagged(t.post, K::hide, hidden)});
      }
    }
    for (const auto& [f, inner] : renames) {
      auto& g = renames_[f];
      if (!g) g = std::make_unique<Group>(defs_);
      for (const auto& t : g->add(inner)) {
        Label l = t.label;
        if (l.is_visible()) {
          if (auto it = f.find(l.action); it != f.end()) l = Label::visible(it->second);
        }
        emit({tagged(t.pre, K::rename, {}, f), tagged(t.read, K::rename, {}, f), l, tagged(t.post, K::rename, {}, f)});
      }
    }
    return out;
  }

 private:
  const Definitions& defs_;
  PlaceSet places_;
  std::set<DerivedTransition> seen_;
  std::vector<DerivedTransition> all_;
  std::map<ActionSet, std::pair<std::unique_ptr<Group>, std::unique_ptr<Group>>> pars_;
  std::map<ActionSet, std::unique_ptr<Group>> hides_;
  std::map<Renaming, std::unique_ptr<Group>> renames_;
};

}  // namespace

bool operator<(const DerivedTransition& a, const DerivedTransition& b) {
  if (int c = compare(a.pre, b.pre)) return c < 0;
  if (int c = compare(a.read, b.read)) return c < 0;
  if (a.label != b.label) return a.label < b.label;
  return compare(a.post, b.post) < 0;
}

PlaceSet dex(const TermPtr& t, const Definitions& defs) {
  using K = PlaceExpr::Kind;
  switch (t->kind) {
    case Term::Kind::sum: return {make_place(K::sum, t, nullptr, {}, {})};
    case Term::Kind::signal: return {make_place(K::signal, t, nullptr, {}, {})};
    case Term::Kind::par:
      return merged(tagged(dex(t->left, defs), K::left, t->actions), tagged(dex(t->right, defs), K::right, t->actions));
    case Term::Kind::hide: return tagged(dex(t->left, defs), K::hide, t->actions);
    case Term::Kind::rename: return tagged(dex(t->left, defs), K::rename, {}, t->renaming);
    case Term::Kind::ident: {
      auto it = defs.bodies.find(t->name);
      if (it == defs.bodies.end()) throw InvalidNet("undefined identifier '" + t->name + "'");
      return dex(it->second, defs);
    }
  }
  return {};
}

Derivation derive(const Definitions& defs, const PlaceSet& seed, std::size_t fuel) {
  Derivation d;
  Group root(defs);
  PlaceSet known = seed;
  std::vector<PlacePtr> pending(seed.begin(), seed.end());
  d.places = pending;
  while (!pending.empty()) {
    if (d.places.size() > fuel) {
      d.exhausted = true;
      break;
    }
    std::vector<PlacePtr> next;
    for (const auto& t : root.add(pending)) {
      for (const auto& p : t.post) {
        if (known.insert(p).second) next.push_back(p);
      }
    }
    d.places.insert(d.places.end(), next.begin(), next.end());
    pending = std::move(next);
  }
  d.transitions = root.all();
  std::sort(d.transitions.begin(), d.transitions.end());
  return d;
}

Net compile(const Definitions& defs, const TermPtr& t, std::size_t fuel) {
  const PlaceSet seed = dex(t, defs);
  const Derivation d = derive(defs, seed, fuel);
  if (d.exhausted) {
    throw InvalidNet("derivation did not reach a fixed point within " + std::to_string(fuel) + " places");
  }
  NetBuilder b("ccsps");
  std::map<std::string, PlaceId> ids;
  for (const auto& p : d.places) ids[p->key] = b.add_place(p->key, seed.count(p) ? 1 : 0);
  std::size_t k = 0;
  for (const auto& dt : d.transitions) {
    auto tid = b.add_transition("t" + std::to_string(k++), dt.label);
    for (const auto& p : dt.pre) b.add_arc(ids.at(p->key), tid);
    for (const auto& p : dt.read) b.add_read(ids.at(p->key), tid);
    for (const auto& p : dt.post) b.add_arc(tid, ids.at(p->key));
  }
  b.declare_actions(defs.declared);
  return std::move(b).build();
}

Net compile(const Program& p, std::size_t fuel) { return compile(p.defs, p.main, fuel); }

Net compile_source(std::string_view text, std::size_t fuel) { return compile(parse(text), fuel); }

}  // namespace justnets::lang
