#include "hjsd/problem_file.hpp"

#include <cstdlib>
#include <sstream>

namespace hjsd {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string t;
  while (ss >> t) tokens.push_back(t);
  return tokens;
}

double parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw FileError("expected a number, got '" + tok + "'", line);
  return v;
}

int parse_int(const std::string& tok, int line) {
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw FileError("expected an integer, got '" + tok + "'", line);
  return static_cast<int>(v);
}

struct TagInfo {
  Directive::Tag tag;
  int dim;        // problem dimension the tag belongs to
  int n_geom;     // leading geometric reals
  bool has_speed; // speed expression field present
};

bool lookup_tag(const std::string& t, TagInfo& info) {
  if (t == "#P") return false;  // handled per dimension by the caller
  static const std::pair<const char*, TagInfo> kTags[] = {
      {"#LX", {Directive::Tag::LX, 2, 3, true}},
      {"#LY", {Directive::Tag::LY, 2, 3, true}},
      {"#S", {Directive::Tag::S, 2, 2, true}},
      {"#LXY", {Directive::Tag::LXY, 3, 4, true}},
      {"#LYZ", {Directive::Tag::LYZ, 3, 4, true}},
      {"#LXZ", {Directive::Tag::LXZ, 3, 4, true}},
      {"#SX", {Directive::Tag::SX, 3, 5, true}},
      {"#SY", {Directive::Tag::SY, 3, 5, true}},
      {"#SZ", {Directive::Tag::SZ, 3, 5, true}},
      {"#V", {Directive::Tag::V, 3, 3, true}},
  };
  for (const auto& [name, i] : kTags) {
    if (t == name) {
      info = i;
      return true;
    }
  }
  return false;
}

void parse_header(ProblemFile& pf, const std::vector<std::string>& tok,
                  int line) {
  if (tok[0] == "#HJSD2D") {
    if (tok.size() != 9)
      throw FileError("#HJSD2D expects 8 fields: Nx Ny xmin xmax ymin ymax "
                      "NA1 NA2",
                      line);
    pf.dim = 2;
    pf.counts = {parse_int(tok[1], line), parse_int(tok[2], line), 1};
    pf.lo = {parse_real(tok[3], line), parse_real(tok[5], line), 0.0};
    pf.hi = {parse_real(tok[4], line), parse_real(tok[6], line), 0.0};
    pf.na1 = parse_int(tok[7], line);
    pf.na2 = parse_int(tok[8], line);
  } else if (tok[0] == "#HJSD3D") {
    if (tok.size() != 13)
      throw FileError("#HJSD3D expects 12 fields: Nx Ny Nz xmin xmax ymin "
                      "ymax zmin zmax NA1 NA2 NA3",
                      line);
    pf.dim = 3;
    pf.counts = {parse_int(tok[1], line), parse_int(tok[2], line),
                 parse_int(tok[3], line)};
    pf.lo = {parse_real(tok[4], line), parse_real(tok[6], line),
             parse_real(tok[8], line)};
    pf.hi = {parse_real(tok[5], line), parse_real(tok[7], line),
             parse_real(tok[9], line)};
    pf.na1 = parse_int(tok[10], line);
    pf.na2 = parse_int(tok[11], line);
    pf.na3 = parse_int(tok[12], line);
  } else {
    throw FileError("first directive must be #HJSD2D or #HJSD3D", line);
  }
  for (int a = 0; a < pf.dim; ++a) {
    if (pf.counts[a] < 2)
      throw FileError("node counts must be at least 2", line);
    if (!(pf.lo[a] < pf.hi[a]))
      throw FileError("box bounds must satisfy min < max", line);
  }
  if (pf.na1 < 2) throw FileError("NA1 must be at least 2", line);
  if (pf.na2 < 3) throw FileError("NA2 must be at least 3", line);
  if (pf.dim == 3 && pf.na3 < 2) throw FileError("NA3 must be at least 2", line);
}

}  // namespace

ProblemFile parse_hjsd(const std::string& text) {
  ProblemFile pf;
  bool have_header = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with("//")) continue;
    auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (!have_header) {
      parse_header(pf, tok, line_no);
      have_header = true;
      continue;
    }

    Directive d;
    d.line = line_no;
    TagInfo info;
    if (tok[0] == "#P") {
      // #P x y [z] cost discount
      info = {Directive::Tag::P, pf.dim, pf.dim, false};
    } else if (lookup_tag(tok[0], info)) {
      if (info.dim != pf.dim)
        throw FileError(tok[0] + (pf.dim == 2 ? " is a 3D directive in a 2D file"
                                              : " is a 2D directive in a 3D file"),
                        line_no);
    } else {
      throw FileError("unknown directive '" + tok[0] + "'", line_no);
    }
    d.tag = info.tag;

    std::size_t expected = 1 + info.n_geom + (info.has_speed ? 1 : 0) + 2;
    if (tok.size() != expected)
      throw FileError(tok[0] + " expects " + std::to_string(expected - 1) +
                          " fields, got " + std::to_string(tok.size() - 1),
                      line_no);
    std::size_t f = 1;
    for (int g = 0; g < info.n_geom; ++g)
      d.geom.push_back(parse_real(tok[f++], line_no));
    if (info.has_speed) d.speed = tok[f++];
    d.cost = tok[f++];
    d.discount = parse_real(tok[f++], line_no);
    if (!(d.discount > 0.0))
      throw FileError("discount factor must be positive", line_no);
    pf.directives.push_back(std::move(d));
  }
  if (!have_header) throw FileError("missing #HJSD2D/#HJSD3D header", line_no);
  return pf;
}

}  // namespace hjsd
