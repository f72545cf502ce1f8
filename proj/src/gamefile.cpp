#include "saddlekit/gamefile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace saddlekit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_bound(const std::string& text) {
  std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = std::stod(t, &used);
  if (used != t.size()) throw Error("bad numeric bound: " + text);
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw Error("bad boolean for " + key + ": " + text);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

GridSpec parse_grid_spec(const std::string& text) {
  auto parts = split(trim(text), ':');
  if (parts.size() != 3) throw Error("grid spec must be lo:hi:n, got " + text);
  GridSpec g;
  g.lo = parse_bound(parts[0]);
  g.hi = parse_bound(parts[1]);
  g.n = static_cast<int>(std::stol(trim(parts[2])));
  if (g.n < 1) throw Error("grid spec needs n >= 1");
  if (g.n > 1 && !(g.hi > g.lo)) throw Error("grid spec needs lo < hi");
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi))
    throw Error("grid spec bounds must be finite");
  return g;
}

DomainDecl parse_domain(const std::string& text) {
  std::string t = trim(text);
  if (t == "reals") return DomainDecl::reals();
  auto call = [&](const std::string& name) -> std::optional<std::string> {
    if (t.rfind(name + "(", 0) == 0 && t.back() == ')')
      return t.substr(name.size() + 1, t.size() - name.size() - 2);
    return std::nullopt;
  };
  if (auto body = call("interval")) {
    auto parts = split(*body, ',');
    if (parts.size() != 2) throw Error("interval needs two bounds: " + text);
    return DomainDecl::interval(parse_bound(parts[0]), parse_bound(parts[1]));
  }
  if (auto body = call("integers")) {
    auto parts = split(*body, ',');
    if (parts.size() != 2) throw Error("integers needs two bounds: " + text);
    return DomainDecl::integer_range(parse_bound(parts[0]), parse_bound(parts[1]));
  }
  if (auto body = call("set")) {
    std::vector<double> pts;
    for (const auto& part : split(*body, ',')) pts.push_back(parse_bound(part));
    return DomainDecl::finite_set(std::move(pts));
  }
  throw Error("unknown domain syntax: " + text);
}

GameFile parse_game_file(const std::string& text, const std::string& origin) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      sections[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << origin << ":" << lineno << ": expected key = value";
      throw Error(msg.str());
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty()) throw Error("key outside any section: " + key);
    sections[section][key] = value;
  }

  if (!sections.count("game")) throw Error("game file needs a [game] section");
  bool has_family = sections.count("family") > 0;
  bool has_sequential = sections.count("sequential") > 0;
  if (has_family && has_sequential)
    throw Error("[family] and [sequential] are mutually exclusive");

  GameFile gf;
  gf.shape = has_family ? GameFile::Shape::Family
             : has_sequential ? GameFile::Shape::Sequential
                              : GameFile::Shape::GameOnly;

  auto& game = sections["game"];
  if (!game.count("payoff")) throw Error("[game] needs payoff = \"<expr>\"");
  gf.payoff = parse_expression(unquote(game["payoff"]));
  if (game.count("a_domain")) gf.a_domain = parse_domain(unquote(game["a_domain"]));
  if (game.count("b_domain")) gf.b_domain = parse_domain(unquote(game["b_domain"]));

  auto read_expr = [&](std::map<std::string, std::string>& sec, const char* key) {
    Expr e;
    if (sec.count(key)) e = parse_expression(unquote(sec[key]));
    return e;
  };

  if (has_family) {
    auto& fam = sections["family"];
    if (fam.count("x_grid")) gf.x_grid = parse_grid_spec(unquote(fam["x_grid"]));
    gf.a_lo = read_expr(fam, "a_lo");
    gf.a_hi = read_expr(fam, "a_hi");
    gf.b_lo = read_expr(fam, "b_lo");
    gf.b_hi = read_expr(fam, "b_hi");
    if (fam.count("a_two_point")) {
      auto parts = split(unquote(fam["a_two_point"]), '|');
      if (parts.size() != 2) throw Error("a_two_point needs \"<e1>|<e2>\"");
      gf.a_point1 = parse_expression(trim(parts[0]));
      gf.a_point2 = parse_expression(trim(parts[1]));
    }
  }
  if (has_sequential) {
    auto& seq = sections["sequential"];
    if (seq.count("x_grid")) gf.x_grid = parse_grid_spec(unquote(seq["x_grid"]));
    gf.a_lo = read_expr(seq, "a_lo");
    gf.a_hi = read_expr(seq, "a_hi");
    gf.b_lo = read_expr(seq, "b_lo");
    gf.b_hi = read_expr(seq, "b_hi");
    if (seq.count("a_two_point")) {
      auto parts = split(unquote(seq["a_two_point"]), '|');
      if (parts.size() != 2) throw Error("a_two_point needs \"<e1>|<e2>\"");
      gf.a_point1 = parse_expression(trim(parts[0]));
      gf.a_point2 = parse_expression(trim(parts[1]));
    }
  }

  if (sections.count("flags")) {
    auto& flags = sections["flags"];
    auto get = [&](const char* key, bool& slot) {
      if (flags.count(key)) slot = parse_bool(flags[key], key);
    };
    get("c_lsc", gf.flags.c_lsc);
    get("c_usc", gf.flags.c_usc);
    get("a_lsc_mapping", gf.flags.a_lsc_mapping);
    get("b_lsc_mapping", gf.flags.b_lsc_mapping);
    get("b_compact", gf.flags.b_compact);
    get("c_bounded_below", gf.flags.c_bounded_below);
    get("a_coercive_in_a", gf.flags.a_coercive_in_a);
  }

  // expression sanity: sequential endpoints may mention x and a; family
  // endpoints and plain payoffs must not exceed their variable budget
  if (gf.shape == GameFile::Shape::GameOnly && mentions(gf.payoff, Var::X))
    throw Error("plain games must not reference x (declare [family] or [sequential])");
  for (const Expr& e : {gf.a_lo, gf.a_hi, gf.b_lo, gf.b_hi}) {
    if (!e) continue;
    if (mentions(e, Var::B)) throw Error("constraint endpoints must not reference b");
    if (gf.shape == GameFile::Shape::Family && mentions(e, Var::A))
      throw Error("family constraint endpoints depend on x only");
  }
  return gf;
}

GameFile load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open game file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_game_file(buffer.str(), path);
}

GameFamily GameFile::to_family() const {
  if (shape != Shape::Family) throw Error("game file has no [family] section");
  GameFamily fam;
  if (x_grid) fam.x_grid = x_grid->points();
  fam.payoff = payoff;
  fam.flags = flags;
  if (a_point1) {
    fam.a_map = ConstraintMapping::two_point(a_point1, a_point2);
  } else {
    fam.a_map = ConstraintMapping::interval(a_domain, a_lo, a_hi);
  }
  fam.b_map = ConstraintMapping::interval(b_domain, b_lo, b_hi);
  return fam;
}

SequentialGame GameFile::to_sequential() const {
  if (shape != Shape::Sequential) throw Error("game file has no [sequential] section");
  SequentialGame g;
  g.payoff = payoff;
  if (a_point1) {
    g.phi_a = ConstraintMapping::two_point(a_point1, a_point2);
  } else {
    g.phi_a = ConstraintMapping::interval(a_domain, a_lo, a_hi);
  }
  g.phi_b = ConstraintMapping::interval(b_domain, b_lo, b_hi);
  return g;
}

}  // namespace saddlekit
