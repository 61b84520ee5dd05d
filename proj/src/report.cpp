#include "jpf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "jpf/error.hpp"

namespace jpf {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string num(double v) { return fmt("%.17g", v); }
std::string prob(double v) { return fmt("%.12f", v); }

int user_s(int m, int h) { return m + 1 - h; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

int to_int(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Record {
  std::string id;
  std::string seq;
};

std::vector<Record> fasta_records(const std::string& text, const std::string& source) {
  std::vector<Record> recs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == ';') continue;
    if (line[first] == '>') {
      std::string id = line.substr(first + 1);
      id = id.substr(0, id.find_first_of(" \t"));
      if (id.empty()) id = "seq" + std::to_string(recs.size() + 1);
      recs.push_back({id, ""});
      continue;
    }
    if (recs.empty()) {
      throw Error(ErrorKind::BadFasta,
                  source + " line " + std::to_string(line_no) + ": sequence before header");
    }
    for (char c : line)
      if (c != ' ' && c != '\t') recs.back().seq.push_back(c);
  }
  for (const auto& r : recs)
    if (r.seq.empty()) throw Error(ErrorKind::BadFasta, source + ": record " + r.id + " is empty");
  return recs;
}

}  // namespace

std::pair<Strand, Strand> parse_fasta(const std::string& text, const std::string& source) {
  const auto recs = fasta_records(text, source);
  if (recs.size() != 2) {
    throw Error(ErrorKind::WrongRecordCount,
                source + ": expected 2 records, found " + std::to_string(recs.size()));
  }
  return {Strand::from_5to3(recs[0].id, recs[0].seq, Role::Query),
          Strand::from_5to3(recs[1].id, recs[1].seq, Role::Target)};
}

std::pair<Strand, Strand> ingest_fasta(const std::vector<std::filesystem::path>& paths) {
  if (paths.size() == 1) return parse_fasta(read_file(paths[0]), paths[0].string());
  if (paths.size() != 2) {
    throw Error(ErrorKind::WrongRecordCount,
                "expected one dual-record file or two files, got " +
                    std::to_string(paths.size()));
  }
  std::vector<Record> recs;
  for (const auto& p : paths) {
    const auto one = fasta_records(read_file(p), p.string());
    if (one.size() != 1) {
      throw Error(ErrorKind::WrongRecordCount,
                  p.string() + ": expected 1 record, found " + std::to_string(one.size()));
    }
    recs.push_back(one[0]);
  }
  return {Strand::from_5to3(recs[0].id, recs[0].seq, Role::Query),
          Strand::from_5to3(recs[1].id, recs[1].seq, Role::Target)};
}

Header make_header(const InsideResult& in, std::optional<std::uint64_t> seed) {
  Header h;
  h.tool = std::string("jointpf ") + kVersion;
  h.fingerprint = in.model().fingerprint();
  h.seed = seed;
  h.r_id = in.r().id;
  h.s_id = in.s().id;
  h.n = in.n();
  h.m = in.m();
  return h;
}

void write_header(std::ostream& out, const Header& h) {
  out << "# tool: " << h.tool << "\n";
  out << "# model: " << h.fingerprint << "\n";
  out << "# seed: " << (h.seed ? std::to_string(*h.seed) : std::string("none")) << "\n";
  out << "# R: " << h.r_id << " length " << h.n << ", positions 1.." << h.n << " 5'->3'\n";
  out << "# S: " << h.s_id << " length " << h.m << ", positions 1.." << h.m
      << " 5'->3' (internal index = " << h.m << " + 1 - position)\n";
}

// ---------------------------------------------------------------------------

PfReport make_pf(const InsideResult& in) {
  PfReport pf;
  pf.header = make_header(in);
  pf.q_total = in.q_total();
  pf.q_r = in.q_r();
  pf.q_s = in.q_s();
  return pf;
}

void write_pf(std::ostream& out, const PfReport& pf, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["tool"] = pf.header.tool;
    j["model"] = pf.header.fingerprint;
    j["seed"] = nullptr;
    j["r"] = {{"id", pf.header.r_id}, {"length", pf.header.n}, {"order", "5'->3'"}};
    j["s"] = {{"id", pf.header.s_id}, {"length", pf.header.m}, {"order", "5'->3'"},
              {"internal_index", "length + 1 - position"}};
    j["q_total"] = pf.q_total;
    j["q_r"] = pf.q_r;
    j["q_s"] = pf.q_s;
    out << j.dump(2) << "\n";
    return;
  }
  write_header(out, pf.header);
  out << "Q_I\t" << num(pf.q_total) << "\n";
  out << "q_R\t" << num(pf.q_r) << "\n";
  out << "q_S\t" << num(pf.q_s) << "\n";
}

PfReport read_pf(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  PfReport pf;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto j = nlohmann::json::parse(text);
      pf.header.tool = j.at("tool").get<std::string>();
      pf.header.fingerprint = j.at("model").get<std::string>();
      pf.header.r_id = j.at("r").at("id").get<std::string>();
      pf.header.n = j.at("r").at("length").get<int>();
      pf.header.s_id = j.at("s").at("id").get<std::string>();
      pf.header.m = j.at("s").at("length").get<int>();
      pf.q_total = j.at("q_total").get<double>();
      pf.q_r = j.at("q_r").get<double>();
      pf.q_s = j.at("q_s").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("pf json: ") + e.what());
    }
    return pf;
  }
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  bool seen[3] = {false, false, false};
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.rfind("# model: ", 0) == 0) pf.header.fingerprint = line.substr(9);
    if (line.rfind("# tool: ", 0) == 0) pf.header.tool = line.substr(8);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no));
    const double v = to_double(f[1], line_no);
    if (f[0] == "Q_I") pf.q_total = v, seen[0] = true;
    else if (f[0] == "q_R") pf.q_r = v, seen[1] = true;
    else if (f[0] == "q_S") pf.q_s = v, seen[2] = true;
    else throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + f[0]);
  }
  if (!seen[0] || !seen[1] || !seen[2]) throw Error(ErrorKind::ParseError, "pf: missing field");
  return pf;
}

// ---------------------------------------------------------------------------

void write_bpp(std::ostream& out, const Header& h, const InsideResult& in,
               const ProbTables& p, double min_p) {
  write_header(out, h);
  out << "kind\ta\tb\tprobability\n";
  const int n = in.n(), m = in.m();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (p.bpp_r[i][j] > min_p) out << "R\t" << i << "\t" << j << "\t" << prob(p.bpp_r[i][j]) << "\n";
  std::vector<BppEntry> s_rows;
  for (int a = 1; a <= m; ++a)
    for (int b = a + 1; b <= m; ++b)
      if (p.bpp_s[a][b] > min_p) s_rows.push_back({"S", user_s(m, b), user_s(m, a), p.bpp_s[a][b]});
  std::sort(s_rows.begin(), s_rows.end(),
            [](const BppEntry& x, const BppEntry& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (const auto& e : s_rows) out << "S\t" << e.a << "\t" << e.b << "\t" << prob(e.p) << "\n";
  for (int i = 1; i <= n; ++i)
    for (int u = 1; u <= m; ++u) {
      const double v = p.bpp_ext[i][user_s(m, u)];
      if (v > min_p) out << "EXT\t" << i << "\t" << u << "\t" << prob(v) << "\n";
    }
}

std::vector<BppEntry> read_bpp(std::istream& in) {
  std::vector<BppEntry> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("kind\t", 0) == 0) continue;
    const auto f = split(line, '\t');
    if (f.size() != 4 || (f[0] != "R" && f[0] != "S" && f[0] != "EXT"))
      throw Error(ErrorKind::ParseError, "bpp line " + std::to_string(line_no));
    rows.push_back({f[0], to_int(f[1], line_no), to_int(f[2], line_no), to_double(f[3], line_no)});
  }
  return rows;
}

// ---------------------------------------------------------------------------

void write_hybrids(std::ostream& out, const Header& h, const InsideResult& in,
                   const HybridProbMatrix& hy, double min_p) {
  write_header(out, h);
  const int n = in.n(), m = in.m();
  out << "section\tcontext\ti\tj\th\tl\tprobability\n";
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int uh = 1; uh <= m; ++uh)
        for (int ul = uh; ul <= m; ++ul) {
          const int ih = user_s(m, ul), il = user_s(m, uh);
          const double total = hy(i, j, ih, il);
          if (!(total > min_p)) continue;
          for (int y = 0; y < kContexts; ++y) {
            const double v = hy.context(y, i, j, ih, il);
            if (v > 0.0)
              out << "HY\t" << ctx_name(y) << "\t" << i << "\t" << j << "\t" << uh << "\t"
                  << ul << "\t" << prob(v) << "\n";
          }
          out << "HY\tALL\t" << i << "\t" << j << "\t" << uh << "\t" << ul << "\t"
              << prob(total) << "\n";
        }
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      double sum = 0.0;
      for (int a = 1; a <= m; ++a)
        for (int b = a; b <= m; ++b) sum += hy(i, j, a, b);
      if (sum > min_p)
        out << "RPROJ\t-\t" << i << "\t" << j << "\t0\t0\t" << prob(sum) << "\n";
    }
}

std::vector<HybridEntry> read_hybrids(std::istream& in) {
  std::vector<HybridEntry> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("section\t", 0) == 0) continue;
    const auto f = split(line, '\t');
    if (f.size() != 7 || (f[0] != "HY" && f[0] != "RPROJ"))
      throw Error(ErrorKind::ParseError, "hybrids line " + std::to_string(line_no));
    rows.push_back({f[0], f[1], to_int(f[2], line_no), to_int(f[3], line_no),
                    to_int(f[4], line_no), to_int(f[5], line_no), to_double(f[6], line_no)});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string format_target_row(int i, int j, double probability) {
  return std::to_string(i) + "," + std::to_string(j) + ": " + fmt("%.1f", probability * 100.0) +
         "%";
}

void write_targets(std::ostream& out, const Header& h, const TargetTable& t, int m) {
  write_header(out, h);
  auto user = [m](const TargetRow& r) {
    return r.strand == Side::R ? std::pair{r.i, r.j} : std::pair{user_s(m, r.j), user_s(m, r.i)};
  };
  if (t.has_opt) {
    const auto [a, b] = user(t.p_opt);
    out << "# p_opt: " << (t.p_opt.strand == Side::R ? "R " : "S ")
        << format_target_row(a, b, t.p_opt.probability) << "\n";
  }
  for (const Side side : {Side::R, Side::S}) {
    out << "## " << (side == Side::R ? "R " + h.r_id : "S " + h.s_id) << "\n";
    for (const auto& row : t.rows) {
      if (row.strand != side) continue;
      const auto [a, b] = user(row);
      out << format_target_row(a, b, row.probability) << "\n";
    }
  }
}

std::vector<TargetLine> read_targets(std::istream& in) {
  std::vector<TargetLine> rows;
  std::string line;
  int line_no = 0;
  char strand = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("## ", 0) == 0) {
      strand = line.size() > 3 ? line[3] : 0;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    int i = 0, j = 0;
    double pct = 0.0;
    char pc = 0;
    if (strand == 0 || std::sscanf(line.c_str(), "%d,%d: %lf%c", &i, &j, &pct, &pc) != 4 ||
        pc != '%')
      throw Error(ErrorKind::ParseError, "targets line " + std::to_string(line_no));
    rows.push_back({strand, i, j, pct});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string format_structure(const JointStructure& js) {
  std::string r(js.n, '.'), s(js.m, '.');
  for (const Arc& a : js.interior_r) r[a.a - 1] = '(', r[a.b - 1] = ')';
  for (const Arc& a : js.interior_s) {
    s[user_s(js.m, a.b) - 1] = '(';
    s[user_s(js.m, a.a) - 1] = ')';
  }
  std::string pairs;
  for (const Arc& e : js.exterior) {
    r[e.a - 1] = '|';
    s[user_s(js.m, e.b) - 1] = '|';
    if (!pairs.empty()) pairs += ' ';
    pairs += std::to_string(e.a) + "-" + std::to_string(user_s(js.m, e.b));
  }
  return r + "\n" + s + "\n" + (pairs.empty() ? "-" : pairs);
}

namespace {

std::vector<Arc> bracket_arcs(const std::string& line) {
  std::vector<Arc> arcs;
  std::vector<int> open;
  for (int k = 0; k < static_cast<int>(line.size()); ++k) {
    const char c = line[k];
    if (c == '(') {
      open.push_back(k + 1);
    } else if (c == ')') {
      if (open.empty()) throw Error(ErrorKind::ParseError, "unbalanced ')' in " + line);
      arcs.push_back({open.back(), k + 1});
      open.pop_back();
    } else if (c != '.' && c != '|') {
      throw Error(ErrorKind::ParseError, std::string("bad character '") + c + "' in " + line);
    }
  }
  if (!open.empty()) throw Error(ErrorKind::ParseError, "unbalanced '(' in " + line);
  return arcs;
}

}  // namespace

JointStructure parse_structure(const std::string& r_line, const std::string& s_line,
                               const std::string& pairs_line) {
  JointStructure js;
  js.n = static_cast<int>(r_line.size());
  js.m = static_cast<int>(s_line.size());
  js.interior_r = bracket_arcs(r_line);
  for (const Arc& a : bracket_arcs(s_line))
    js.interior_s.push_back({user_s(js.m, a.b), user_s(js.m, a.a)});
  if (pairs_line != "-") {
    for (const auto& tok : split(pairs_line, ' ')) {
      if (tok.empty()) continue;
      const auto dash = tok.find('-');
      if (dash == std::string::npos) throw Error(ErrorKind::ParseError, "bad pair " + tok);
      const int i = to_int(tok.substr(0, dash), 0);
      const int u = to_int(tok.substr(dash + 1), 0);
      js.exterior.push_back({i, user_s(js.m, u)});
    }
  }
  js.normalize();
  return js;
}

void write_sample(std::ostream& out, const Header& h, const SampleBatch& batch) {
  write_header(out, h);
  out << "# draws: " << batch.draws << "\n";
  std::map<std::string, std::size_t> freq;
  for (std::size_t k = 0; k < batch.structures.size(); ++k) {
    const std::string text = format_structure(batch.structures[k]);
    ++freq[text];
    out << ">" << (k + 1) << "\n" << text << "\n";
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out << "## summary: " << ranked.size() << " distinct\n";
  out << "count\tfraction\tR\tS\tpairs\n";
  for (const auto& [text, count] : ranked) {
    const auto f = split(text, '\n');
    out << count << "\t" << fmt("%.6f", static_cast<double>(count) / batch.draws) << "\t"
        << f[0] << "\t" << f[1] << "\t" << f[2] << "\n";
  }
}

std::vector<JointStructure> read_sample(std::istream& in) {
  std::vector<JointStructure> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("## summary", 0) == 0) break;
    if (line.empty() || line[0] == '#') continue;
    if (line[0] != '>') throw Error(ErrorKind::ParseError, "sample: expected '>' record");
    std::string r, s, pairs;
    if (!std::getline(in, r) || !std::getline(in, s) || !std::getline(in, pairs))
      throw Error(ErrorKind::ParseError, "sample: truncated record " + line);
    out.push_back(parse_structure(r, s, pairs));
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_dotplot(std::ostream& out, const Header& h, const InsideResult& in,
                   const ProbTables& p) {
  const int n = in.n(), m = in.m();
  const double cell = 12.0, margin = 40.0;
  const double width = margin + n * cell + 10, height = margin + m * cell + 40;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- " << h.tool << " model " << h.fingerprint << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width)
      << "\" height=\"" << fmt("%.0f", height) << "\" viewBox=\"0 0 " << fmt("%.0f", width)
      << " " << fmt("%.0f", height) << "\">\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << n * cell
      << "\" height=\"" << m * cell << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 1; i <= n; ++i)
    if (i == 1 || i % 10 == 0)
      out << "<text x=\"" << fmt("%.1f", margin + (i - 0.5) * cell) << "\" y=\""
          << margin - 5 << "\" font-size=\"8\" text-anchor=\"middle\">" << i << "</text>\n";
  for (int u = 1; u <= m; ++u)
    if (u == 1 || u % 10 == 0)
      out << "<text x=\"" << margin - 5 << "\" y=\"" << fmt("%.1f", margin + (u - 0.5) * cell + 3)
          << "\" font-size=\"8\" text-anchor=\"end\">" << u << "</text>\n";
  for (int i = 1; i <= n; ++i) {
    for (int u = 1; u <= m; ++u) {
      const double v = p.bpp_ext[i][user_s(m, u)];
      if (!(v > 0.0)) continue;
      const double side = cell * std::sqrt(std::min(1.0, v));
      const double cx = margin + (i - 0.5) * cell, cy = margin + (u - 0.5) * cell;
      out << "<rect x=\"" << fmt("%.3f", cx - side / 2) << "\" y=\"" << fmt("%.3f", cy - side / 2)
          << "\" width=\"" << fmt("%.3f", side) << "\" height=\"" << fmt("%.3f", side)
          << "\" fill=\"black\"><title>" << i << "," << u << ": " << prob(v)
          << "</title></rect>\n";
    }
  }
  out << "<text x=\"" << margin << "\" y=\"" << fmt("%.0f", height - 22)
      << "\" font-size=\"9\">x: " << h.r_id << " 5'-&gt;3'; y: " << h.s_id
      << " 5'-&gt;3' (stored reversed internally)</text>\n";
  out << "<text x=\"" << margin << "\" y=\"" << fmt("%.0f", height - 10)
      << "\" font-size=\"9\">square area proportional to exterior pair probability</text>\n";
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------

void write_oracle(std::ostream& out, const Header& h, const EnsembleReport& rep,
                  bool list_structures) {
  write_header(out, h);
  out << "count\t" << rep.count << "\n";
  out << "weighted_sum\t" << num(rep.weighted_sum) << "\n";
  if (!list_structures) return;
  for (const auto& ws : rep.structures) {
    out << ">" << prob(ws.weight / rep.weighted_sum) << "\n" << format_structure(ws.structure)
        << "\n";
  }
}

}  // namespace jpf
