#include "ptcalc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ptcalc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  // split at sep, but not inside parentheses
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

long long parse_int(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    long long v = std::stoll(trim(s), &pos);
    if (pos != trim(s).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": expected an integer, got '" + s + "'");
  }
}

} // namespace

CurveClass parse_curve_class(const std::string& text, int rank, const std::string& where) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw InputError(where + ": curve class must look like (b1,...,br), got '" + text + "'");
  auto parts = split_top(t.substr(1, t.size() - 2), ',');
  if (static_cast<int>(parts.size()) != rank)
    throw InputError(where + ": curve class has " + std::to_string(parts.size()) +
                     " entries, geometry rank is " + std::to_string(rank));
  CurveClass b;
  for (const auto& p : parts) b.push_back(parse_int(p, where));
  return b;
}

KClass parse_kclass(const std::string& text, int rank, const std::string& where) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw InputError(where + ": class must look like (d;b1,...,br;n), got '" + text + "'");
  auto parts = split_top(t.substr(1, t.size() - 2), ';');
  if (parts.size() != 3)
    throw InputError(where + ": class must have three ';'-separated fields, got '" + text + "'");
  KClass k;
  k.d = static_cast<int>(parse_int(parts[0], where));
  auto bs = split_top(parts[1], ',');
  if (static_cast<int>(bs.size()) != rank)
    throw InputError(where + ": class curve part has " + std::to_string(bs.size()) +
                     " entries, geometry rank is " + std::to_string(rank));
  for (const auto& p : bs) k.beta.push_back(parse_int(p, where));
  k.n = parse_int(parts[2], where);
  return k;
}

// ---- polynomial expression parser ---------------------------------------------

namespace {

struct Tok {
  enum Kind { Num, Ident, Op, End } kind = End;
  std::string text;
};

std::vector<Tok> lex_expr(const std::string& s, const std::string& where) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) { ++i; continue; }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Num, s.substr(i, j - i)});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i)});
      i = j;
      continue;
    }
    if (std::string("+-*/^()").find(ch) != std::string::npos) {
      out.push_back({Tok::Op, std::string(1, ch)});
      ++i;
      continue;
    }
    throw InputError(where + ": unexpected character '" + std::string(1, ch) +
                     "' in expression '" + s + "'");
  }
  out.push_back({Tok::End, ""});
  return out;
}

struct ExprParser {
  const std::vector<Tok>& toks;
  size_t pos = 0;
  const std::vector<std::string>& vars;
  const std::string& where;

  const Tok& peek() const { return toks[pos]; }
  Tok take() { return toks[pos++]; }
  bool is_op(const std::string& o) const {
    return peek().kind == Tok::Op && peek().text == o;
  }

  RatPoly constant(const Rat& v) const {
    return ratpoly_const(static_cast<int>(vars.size()), v);
  }

  RatPoly mul(const RatPoly& a, const RatPoly& b) const {
    RatPoly r;
    r.k = a.k;
    for (const auto& [ea, ca] : a.c)
      for (const auto& [eb, cb] : b.c) {
        std::vector<int> e(ea);
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        ratpoly_add_term(r, e, ca * cb);
      }
    return r;
  }

  RatPoly parse_expr() {
    bool neg = false;
    if (is_op("+")) take();
    else if (is_op("-")) { take(); neg = true; }
    RatPoly acc = parse_term();
    if (neg) acc = mul(constant(-1), acc);
    while (is_op("+") || is_op("-")) {
      bool minus = take().text == "-";
      RatPoly t = parse_term();
      if (minus) t = mul(constant(-1), t);
      for (const auto& [e, c] : t.c) ratpoly_add_term(acc, e, c);
    }
    return acc;
  }

  RatPoly parse_term() {
    RatPoly acc = parse_atom();
    while (is_op("*")) {
      take();
      acc = mul(acc, parse_atom());
    }
    return acc;
  }

  RatPoly parse_atom() {
    bool neg = false;
    if (is_op("-")) { take(); neg = true; }
    RatPoly base = parse_primary();
    if (is_op("^")) {
      take();
      if (peek().kind != Tok::Num)
        throw InputError(where + ": exponent must be a literal integer");
      long long e = std::stoll(take().text);
      if (e < 0 || e > 64) throw InputError(where + ": exponent out of range");
      RatPoly p = constant(1);
      for (long long i = 0; i < e; ++i) p = mul(p, base);
      base = p;
    }
    if (neg) base = mul(constant(-1), base);
    return base;
  }

  RatPoly parse_primary() {
    if (peek().kind == Tok::Num) {
      std::string num = take().text;
      if (is_op("/")) {
        take();
        if (peek().kind != Tok::Num)
          throw InputError(where + ": expected an integer denominator");
        std::string den = take().text;
        return constant(rat_parse(num + "/" + den, where));
      }
      return constant(rat_parse(num, where));
    }
    if (peek().kind == Tok::Ident) {
      std::string name = take().text;
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end())
        throw InputError(where + ": unknown variable '" + name + "' (expected one of " +
                         [&] {
                           std::string v;
                           for (const auto& x : vars) v += (v.empty() ? "" : ", ") + x;
                           return v;
                         }() + ")");
      std::vector<int> e(vars.size(), 0);
      e[static_cast<size_t>(it - vars.begin())] = 1;
      RatPoly p;
      p.k = static_cast<int>(vars.size());
      ratpoly_add_term(p, e, Rat(1));
      return p;
    }
    if (is_op("(")) {
      take();
      RatPoly inner = parse_expr();
      if (!is_op(")")) throw InputError(where + ": missing ')' in expression");
      take();
      return inner;
    }
    throw InputError(where + ": malformed expression");
  }
};

} // namespace

RatPoly parse_poly_expr(const std::string& text, const std::vector<std::string>& vars,
                        const std::string& where) {
  auto toks = lex_expr(text, where);
  ExprParser p{toks, 0, vars, where};
  RatPoly r = p.parse_expr();
  if (p.peek().kind != Tok::End)
    throw InputError(where + ": trailing tokens in expression '" + text + "'");
  return r;
}

// ---- value literals -------------------------------------------------------------

namespace {

// "(poly in s)" -> ring element, truncated
RElem relem_from_expr(const std::string& text, int trunc_n, const std::string& where) {
  RatPoly p = parse_poly_expr(text, {"s"}, where);
  RElem r = relem_zero(trunc_n);
  for (const auto& [e, c] : p.c) {
    if (e[0] > trunc_n) continue; // beyond the truncation order
    r.c[static_cast<size_t>(e[0])] += c;
  }
  return r;
}

// "SYM:(expr) + SYM:(expr)" with expr over {n, s} -> univariate MPoly in n
// with module coefficients
MPoly mpoly_from_value(const std::string& text, int trunc_n, const VertexConfig& cfg,
                       const std::string& where, bool allow_n) {
  MPoly out(1, trunc_n);
  for (const auto& part : split_top(text, '+')) {
    if (part.empty())
      throw InputError(where + ": empty term in value '" + text + "'");
    auto colon = part.find(':');
    if (colon == std::string::npos)
      throw InputError(where + ": value terms must look like SYM:(expr), got '" + part + "'");
    std::string sym = trim(part.substr(0, colon));
    std::string expr = trim(part.substr(colon + 1));
    // monomials in registered symbols: "A" or "A*P"; canonicalized by sorting
    {
      std::vector<std::string> fac;
      for (const auto& f : split_top(sym, '*')) {
        std::string name = trim(f);
        if (name.empty())
          throw InputError(where + ": empty factor in monomial '" + sym + "'");
        cfg.symbol(name); // existence check
        fac.push_back(name);
      }
      if (fac.empty())
        throw InputError(where + ": value term needs a symbol before ':'");
      std::sort(fac.begin(), fac.end());
      sym = fac[0];
      for (size_t i = 1; i < fac.size(); ++i) sym += "*" + fac[i];
    }
    if (expr.size() < 2 || expr.front() != '(' || expr.back() != ')')
      throw InputError(where + ": value expression must be parenthesized, got '" + expr + "'");
    std::string inner = expr.substr(1, expr.size() - 2);
    std::vector<std::string> vars = allow_n ? std::vector<std::string>{"n", "s"}
                                            : std::vector<std::string>{"s"};
    RatPoly p = parse_poly_expr(inner, vars, where);
    for (const auto& [e, c] : p.c) {
      int en = allow_n ? e[0] : 0;
      int es = allow_n ? e[1] : e[0];
      if (es > trunc_n) continue;
      RElem coeff = relem_zero(trunc_n);
      coeff.c[static_cast<size_t>(es)] = c;
      mpoly_add_term(out, {en}, melem_basis(trunc_n, sym, coeff));
    }
  }
  return out;
}

MElem melem_from_value(const std::string& text, int trunc_n, const VertexConfig& cfg,
                       const std::string& where) {
  MPoly p = mpoly_from_value(text, trunc_n, cfg, where, false);
  return upoly_eval(p, Rat(0));
}

std::string strip_parens(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw InputError(where + ": expected a parenthesized value, got '" + s + "'");
  return t.substr(1, t.size() - 2);
}

} // namespace

// ---- the scenario parser ---------------------------------------------------------

namespace {

struct RawDt {
  long long period = 0;
  std::map<long long, std::pair<std::string, std::string>> polys; // residue -> (text, where)
};

struct ParserState {
  ScenarioData s;
  std::string section;
  // staged data that needs every section before it can be finalized
  std::vector<std::tuple<std::string, std::string, std::string>> weight_lines; // lhs, rhs, where
  std::map<CurveClass, RawDt> rawdt;
  std::vector<std::tuple<CurveClass, long long, std::string, std::string>> rawmiddle;
  std::vector<std::tuple<std::string, std::string, int>> rawqueries; // kind rest line
  bool rank_seen = false;
};

std::map<std::string, std::string> parse_kv_fields(const std::string& rest,
                                                   const std::string& where) {
  // space-separated key=value tokens; values contain no spaces
  std::map<std::string, std::string> out;
  std::istringstream in(rest);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw InputError(where + ": expected key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq);
    std::string val = tok.substr(eq + 1);
    if (!out.emplace(key, val).second)
      throw InputError(where + ": duplicate field '" + key + "'");
  }
  return out;
}

std::vector<Rat> parse_rat_vector(const std::string& text, int rank, const std::string& where) {
  auto inner = strip_parens(text, where);
  auto parts = split_top(inner, ',');
  if (static_cast<int>(parts.size()) != rank)
    throw InputError(where + ": expected " + std::to_string(rank) + " entries, got " +
                     std::to_string(parts.size()));
  std::vector<Rat> out;
  for (size_t i = 0; i < parts.size(); ++i)
    out.push_back(rat_parse(parts[i], where + " entry " + std::to_string(i + 1)));
  return out;
}

std::vector<long long> parse_int_vector(const std::string& text, int rank,
                                        const std::string& where) {
  auto inner = strip_parens(text, where);
  auto parts = split_top(inner, ',');
  if (static_cast<int>(parts.size()) != rank)
    throw InputError(where + ": expected " + std::to_string(rank) + " entries, got " +
                     std::to_string(parts.size()));
  std::vector<long long> out;
  for (const auto& p : parts) out.push_back(parse_int(p, where));
  return out;
}

void handle_geometry(ParserState& st, const std::string& key, const std::string& val,
                     const std::string& where) {
  auto& g = st.s.vcfg.geom;
  if (key == "rank") {
    g.rank = static_cast<int>(parse_int(val, where));
    if (g.rank < 1 || g.rank > 8) throw InputError(where + ": rank must be in 1..8");
    st.rank_seen = true;
  } else if (key == "c1") {
    g.c1 = parse_int_vector(val, g.rank, where);
  } else if (key == "omega") {
    g.omega = parse_rat_vector(val, g.rank, where);
  } else if (key == "omega_alt") {
    st.s.omega_alt = parse_rat_vector(val, g.rank, where);
  } else if (key == "ample") {
    g.L = parse_int_vector(val, g.rank, where);
  } else if (key == "euler_override") {
    // rows separated by ';', entries by ','
    auto inner = strip_parens(val, where);
    auto rows = split_top(inner, ';');
    int dim = g.rank + 2;
    if (static_cast<int>(rows.size()) != dim)
      throw InputError(where + ": pairing override needs " + std::to_string(dim) + " rows");
    std::vector<std::vector<long long>> m;
    for (const auto& r : rows) {
      auto es = split_top(r, ',');
      if (static_cast<int>(es.size()) != dim)
        throw InputError(where + ": pairing override rows need " + std::to_string(dim) +
                         " entries");
      std::vector<long long> row;
      for (const auto& e : es) row.push_back(parse_int(e, where));
      m.push_back(std::move(row));
    }
    g.euler_override = std::move(m);
  } else {
    throw InputError(where + ": unknown [geometry] key '" + key + "'");
  }
}

void handle_vertex(ParserState& st, const std::string& key, const std::string& val,
                   const std::string& where) {
  auto& v = st.s.vcfg;
  if (key == "trunc") {
    long long t = parse_int(val, where);
    if (t < 0 || t > 16) throw InputError(where + ": trunc must be in 0..16");
    v.trunc_n = static_cast<int>(t);
  } else if (key == "parity") {
    if (val == "chi") v.parity = VertexConfig::ParityChi;
    else if (val == "even") v.parity = VertexConfig::ParityEven;
    else throw InputError(where + ": parity must be 'chi' or 'even'");
  } else if (key == "eta_scale") {
    v.eta_scale = rat_parse(val, where);
  } else if (key == "symbol") {
    // "A hdeg=2" with an optional label=(d;b;n)
    std::istringstream in(val);
    std::string name;
    in >> name;
    if (name.empty()) throw InputError(where + ": symbol needs a name");
    std::string rest;
    std::getline(in, rest);
    auto fields = parse_kv_fields(rest, where);
    BaseSymbol sym;
    sym.name = name;
    auto hit = fields.find("hdeg");
    if (hit == fields.end()) throw InputError(where + ": symbol '" + name + "' needs hdeg=");
    sym.hdeg = static_cast<int>(parse_int(hit->second, where));
    fields.erase(hit);
    auto lit = fields.find("label");
    if (lit != fields.end()) {
      sym.label = parse_kclass(lit->second, v.geom.rank, where);
      fields.erase(lit);
    } else {
      sym.label.beta.assign(static_cast<size_t>(v.geom.rank), 0);
    }
    if (!fields.empty())
      throw InputError(where + ": unknown symbol field '" + fields.begin()->first + "'");
    if (!v.symbols.emplace(name, sym).second)
      throw InputError(where + ": duplicate symbol '" + name + "'");
  } else if (key == "point_symbol") {
    st.s.point_symbol = val;
  } else {
    throw InputError(where + ": unknown [vertex] key '" + key + "'");
  }
}

// weight lines: lhs "w[1]((0;1,0),(0;0,1))" or "w[2](*,*)", rhs a poly in n1, n2
void handle_weight(ParserState& st, const std::string& lhs, const std::string& rhs,
                   const std::string& where) {
  auto& v = st.s.vcfg;
  size_t ob = lhs.find('[');
  size_t cb = lhs.find(']');
  if (ob == std::string::npos || cb == std::string::npos || cb < ob)
    throw InputError(where + ": malformed weight key '" + lhs + "'");
  long long i = parse_int(lhs.substr(ob + 1, cb - ob - 1), where);
  if (i < 1 || i > 64) throw InputError(where + ": weight index must be >= 1");
  std::string args = trim(lhs.substr(cb + 1));
  auto inner = strip_parens(args, where);
  auto parts = split_top(inner, ',');
  RatPoly poly = parse_poly_expr(rhs, {"n1", "n2"}, where);
  if (parts.size() == 2 && parts[0] == "*" && parts[1] == "*") {
    if (!v.weight_wildcard.emplace(static_cast<int>(i), poly).second)
      throw InputError(where + ": duplicate wildcard weight for i=" + std::to_string(i));
    return;
  }
  if (parts.size() != 2)
    throw InputError(where + ": weight key needs two classes or (*,*)");
  // entries are "(d;b1,..,br)"; a trailing ;n is tolerated and ignored
  auto parse_class_key = [&](const std::string& text) {
    std::string inner2 = strip_parens(text, where);
    auto fields = split_top(inner2, ';');
    if (fields.size() != 2 && fields.size() != 3)
      throw InputError(where + ": weight-key class must look like (d;beta), got '" +
                       text + "'");
    KClass a;
    a.d = static_cast<int>(parse_int(fields[0], where));
    a.beta = parse_curve_class("(" + fields[1] + ")", v.geom.rank, where);
    if (a.d != 0 && a.d != 1)
      throw InputError(where + ": weight-key d flag must be 0 or 1");
    return class_key(a);
  };
  ClassKey ka = parse_class_key(parts[0]), kb = parse_class_key(parts[1]);
  std::pair<ClassKey, ClassKey> key =
      (kb < ka) ? std::make_pair(kb, ka) : std::make_pair(ka, kb);
  if (kb < ka) poly = ratpoly_swap2(poly); // store in canonical key order
  if (!v.weights[static_cast<int>(i)].emplace(key, poly).second)
    throw InputError(where + ": duplicate weight entry for i=" + std::to_string(i));
}

void handle_dt(ParserState& st, const std::string& lhs, const std::string& rhs,
               const std::string& where) {
  // "dt (1,0) 0/2 = A:(n) + P:(1)"  -> class (1,0), residue 0, period 2
  std::istringstream in(lhs);
  std::string kw;
  in >> kw;
  if (kw != "dt") throw InputError(where + ": [dt] lines must start with 'dt'");
  std::string rest;
  std::getline(in, rest);
  rest = trim(rest);
  size_t close = rest.find(')');
  if (rest.empty() || rest.front() != '(' || close == std::string::npos)
    throw InputError(where + ": dt line needs a parenthesized curve class");
  CurveClass beta =
      parse_curve_class(rest.substr(0, close + 1), st.s.vcfg.geom.rank, where);
  std::string resspec = trim(rest.substr(close + 1));
  auto slash = resspec.find('/');
  if (slash == std::string::npos)
    throw InputError(where + ": dt line needs residue/period after the class");
  long long r = parse_int(resspec.substr(0, slash), where);
  long long d = parse_int(resspec.substr(slash + 1), where);
  if (d < 1 || r < 0 || r >= d)
    throw InputError(where + ": dt residue/period must satisfy 0 <= r < d");
  auto& raw = st.rawdt[beta];
  if (raw.period == 0) raw.period = d;
  if (raw.period != d)
    throw InputError(where + ": dt entries for class " + curve_str(beta) +
                     " mix periods " + std::to_string(raw.period) + " and " +
                     std::to_string(d));
  if (!raw.polys.emplace(r, std::make_pair(rhs, where)).second)
    throw InputError(where + ": duplicate dt residue " + std::to_string(r) +
                     " for class " + curve_str(beta));
}

void handle_pt(ParserState& st, const std::string& lhs, const std::string& rhs,
               const std::string& where) {
  std::istringstream in(lhs);
  std::string kw;
  in >> kw;
  std::string rest;
  std::getline(in, rest);
  rest = trim(rest);
  int rank = st.s.vcfg.geom.rank;
  if (kw == "vanish" || kw == "cutoff" || kw == "order" || kw == "tailfrom") {
    CurveClass beta = parse_curve_class(rest, rank, where);
    auto& info = st.s.ptinfo[beta];
    if (kw == "vanish") info.vanish = parse_int(rhs, where);
    else if (kw == "cutoff") info.cutoff = rat_parse(rhs, where);
    else if (kw == "tailfrom") {
      info.tail_from = parse_int(rhs, where);
      info.has_tail_from = true;
    } else {
      long long m = parse_int(rhs, where);
      if (m < 1 || m > 512) throw InputError(where + ": order must be in 1..512");
      info.order = static_cast<int>(m);
    }
  } else if (kw == "middle") {
    size_t close = rest.find(')');
    if (rest.empty() || rest.front() != '(' || close == std::string::npos)
      throw InputError(where + ": middle line needs a parenthesized curve class");
    CurveClass beta = parse_curve_class(rest.substr(0, close + 1), rank, where);
    long long n = parse_int(rest.substr(close + 1), where);
    st.rawmiddle.emplace_back(beta, n, rhs, where);
  } else {
    throw InputError(where + ": unknown [pt] key '" + kw + "'");
  }
}

void handle_options(ParserState& st, const std::string& key, const std::string& val,
                    const std::string& where) {
  if (key == "window") {
    st.s.window = parse_int(val, where);
    if (st.s.window < 1 || st.s.window > 64)
      throw InputError(where + ": window must be in 1..64");
  } else if (key == "nmax") {
    st.s.default_nmax = parse_int(val, where);
    if (st.s.default_nmax < 0 || st.s.default_nmax > 4096)
      throw InputError(where + ": nmax must be in 0..4096");
  } else {
    throw InputError(where + ": unknown [options] key '" + key + "'");
  }
}

void finalize_query(ParserState& st, const std::string& kindword, const std::string& rest,
                    int line, const std::string& where) {
  ScenarioQuery q;
  q.line = line;
  auto rank = st.s.vcfg.geom.rank;
  auto fields = parse_kv_fields(rest, where);
  auto need = [&](const std::string& k) {
    auto it = fields.find(k);
    if (it == fields.end())
      throw InputError(where + ": query '" + kindword + "' needs field '" + k + "'");
    std::string v = it->second;
    fields.erase(it);
    return v;
  };
  auto optional_field = [&](const std::string& k) -> std::optional<std::string> {
    auto it = fields.find(k);
    if (it == fields.end()) return std::nullopt;
    std::string v = it->second;
    fields.erase(it);
    return v;
  };

  if (kindword == "coeffs") {
    q.kind = ScenarioQuery::Kind::Coeffs;
    std::string cls = need("classes");
    auto inner = strip_parens(cls, where);
    for (const auto& part : split_top(inner, ',')) {
      // split_top breaks inside (d;b;n) only at top level, so each part is a class
      q.classes.push_back(parse_kclass(part, rank, where));
    }
    if (q.classes.empty()) throw InputError(where + ": coeffs needs at least one class");
    q.tau_spec = need("tau");
    q.tautilde_spec = need("tautilde");
  } else if (kindword == "wallcross") {
    q.kind = ScenarioQuery::Kind::Wallcross;
    q.beta = parse_curve_class(need("beta"), rank, where);
    q.has_beta = true;
    q.n = parse_int(need("n"), where);
    q.has_n = true;
  } else if (kindword == "ptgen") {
    q.kind = ScenarioQuery::Kind::Ptgen;
    q.beta = parse_curve_class(need("beta"), rank, where);
    q.has_beta = true;
  } else if (kindword == "expand") {
    q.kind = ScenarioQuery::Kind::Expand;
    if (auto b = optional_field("beta")) {
      q.beta = parse_curve_class(*b, rank, where);
      q.has_beta = true;
    } else {
      // inline tail: j=, d=, e=, q=(m:coeff;m:coeff)
      q.has_inline = true;
      q.inline_tail.j = parse_int(need("j"), where);
      q.inline_tail.d = parse_int(need("d"), where);
      if (q.inline_tail.d < 1) throw InputError(where + ": inline tail needs d >= 1");
      long long e = parse_int(need("e"), where);
      if (e < 1 || e > 64) throw InputError(where + ": inline tail needs 1 <= e <= 64");
      q.inline_tail.e = static_cast<int>(e);
      std::string qs = strip_parens(need("q"), where);
      if (st.s.point_symbol.empty())
        throw InputError(where + ": inline expand needs point_symbol in [vertex]");
      for (const auto& part : split_top(qs, ';')) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
          throw InputError(where + ": inline q terms must look like m:coeff");
        long long m = parse_int(part.substr(0, colon), where);
        RElem coeff = relem_from_expr(part.substr(colon + 1), st.s.vcfg.trunc_n, where);
        MElem v = melem_basis(st.s.vcfg.trunc_n, st.s.point_symbol, coeff);
        if (!v.is_zero()) q.inline_tail.Q.emplace(m, v);
      }
    }
    if (auto nm = optional_field("nmax")) {
      q.nmax = parse_int(*nm, where);
      if (q.nmax < 0) throw InputError(where + ": nmax must be >= 0");
    }
  } else if (kindword == "verify") {
    q.kind = ScenarioQuery::Kind::Verify;
    q.beta = parse_curve_class(need("beta"), rank, where);
    q.has_beta = true;
    q.n = parse_int(need("n"), where);
    q.has_n = true;
  } else {
    throw InputError(where + ": unknown query kind '" + kindword + "'");
  }
  if (!fields.empty())
    throw InputError(where + ": unknown query field '" + fields.begin()->first + "'");
  st.s.queries.push_back(std::move(q));
}

} // namespace

ScenarioData scenario_parse(const std::string& text, const std::string& path,
                            std::optional<int> trunc_override) {
  ParserState st;
  st.s.path = path;
  st.s.raw = text;
  st.s.vcfg.geom.rank = 1;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InputError(where + ": malformed section header '" + line + "'");
      st.section = line.substr(1, line.size() - 2);
      static const std::vector<std::string> known = {"geometry", "vertex", "dt",
                                                     "pt", "options", "queries"};
      if (std::find(known.begin(), known.end(), st.section) == known.end())
        throw InputError(where + ": unknown section [" + st.section + "]");
      continue;
    }
    if (st.section.empty())
      throw InputError(where + ": content before the first section header");
    where += " [" + st.section + "]";

    if (st.section == "queries") {
      std::istringstream ls(line);
      std::string kindword;
      ls >> kindword;
      std::string rest;
      std::getline(ls, rest);
      st.rawqueries.emplace_back(kindword, rest, lineno);
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(where + ": expected 'key = value' in '" + line + "'");
    std::string lhs = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    if (lhs.empty() || rhs.empty())
      throw InputError(where + ": expected 'key = value' in '" + line + "'");
    std::string wpath = where + " " + lhs;

    if (st.section == "geometry") {
      handle_geometry(st, lhs, rhs, wpath);
    } else if (st.section == "vertex") {
      if (lhs.rfind("w[", 0) == 0) st.weight_lines.emplace_back(lhs, rhs, wpath);
      else handle_vertex(st, lhs, rhs, wpath);
    } else if (st.section == "dt") {
      handle_dt(st, lhs, rhs, wpath);
    } else if (st.section == "pt") {
      handle_pt(st, lhs, rhs, wpath);
    } else if (st.section == "options") {
      handle_options(st, lhs, rhs, wpath);
    }
  }

  // finalize: geometry sanity first, then everything that needs the full config
  if (trunc_override) {
    if (*trunc_override < 0 || *trunc_override > 16)
      throw InputError(path + ": truncation override must be in 0..16");
    st.s.vcfg.trunc_n = *trunc_override;
  }
  auto& g = st.s.vcfg.geom;
  if (g.c1.empty()) g.c1.assign(static_cast<size_t>(g.rank), 1);
  if (g.omega.empty()) g.omega.assign(static_cast<size_t>(g.rank), Rat(1));
  if (g.L.empty()) g.L.assign(static_cast<size_t>(g.rank), 1);
  g.validate();
  if (st.s.omega_alt && static_cast<int>(st.s.omega_alt->size()) != g.rank)
    throw InputError(path + ": omega_alt rank mismatch");
  if (st.s.omega_alt)
    for (const auto& w : *st.s.omega_alt)
      if (!(w > 0)) throw InputError(path + ": omega_alt entries must be positive");

  for (const auto& [lhs, rhs, wpath] : st.weight_lines) handle_weight(st, lhs, rhs, wpath);
  if (!st.s.point_symbol.empty()) st.s.vcfg.symbol(st.s.point_symbol); // must exist
  st.s.vcfg.validate();

  for (const auto& [beta, raw] : st.rawdt) {
    QuasiPoly qp;
    qp.d = raw.period;
    qp.trunc_n = st.s.vcfg.trunc_n;
    qp.polys.assign(static_cast<size_t>(raw.period), mpoly_zero(1, st.s.vcfg.trunc_n));
    for (const auto& [r, tw] : raw.polys)
      qp.polys[static_cast<size_t>(r)] =
          mpoly_from_value(tw.first, st.s.vcfg.trunc_n, st.s.vcfg, tw.second, true);
    st.s.dt.emplace(beta, qp_canon(qp));
  }
  for (const auto& [beta, n, rhs, wpath] : st.rawmiddle) {
    MElem v = melem_from_value(rhs, st.s.vcfg.trunc_n, st.s.vcfg, wpath);
    if (!st.s.middle.emplace(std::make_pair(beta, n), v).second)
      throw InputError(wpath + ": duplicate middle value for " + curve_str(beta) +
                       ", n=" + std::to_string(n));
  }
  for (const auto& [kindword, rest, line] : st.rawqueries) {
    std::string where = path + ":" + std::to_string(line) + " [queries]";
    finalize_query(st, kindword, rest, line, where);
  }
  return st.s;
}

ScenarioData scenario_load(const std::string& path, std::optional<int> trunc_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_parse(ss.str(), path, trunc_override);
}

StabilityCond stability_from_spec(const ScenarioData& s, const std::string& spec,
                                  const std::string& where) {
  if (spec == "omega") return stab_sheaf(s.vcfg.geom.omega);
  if (spec == "omega_alt") {
    if (!s.omega_alt)
      throw InputError(where + ": stability 'omega_alt' needs omega_alt in [geometry]");
    return stab_sheaf(*s.omega_alt);
  }
  if (spec == "posbig") return stab_pair(s.vcfg.geom.omega, slope_posbig());
  if (spec.rfind("pair_below:", 0) == 0)
    return stab_pair(s.vcfg.geom.omega, slope_fin(rat_parse(spec.substr(11), where), -1));
  if (spec.rfind("pair:", 0) == 0)
    return stab_pair(s.vcfg.geom.omega, slope_fin(rat_parse(spec.substr(5), where), 0));
  throw InputError(where + ": unknown stability spec '" + spec +
                   "' (expected omega, omega_alt, posbig, pair:<q>, pair_below:<q>)");
}

} // namespace ptcalc
