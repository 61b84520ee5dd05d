#include "jpf/energy.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jpf/error.hpp"

namespace jpf {

namespace {

constexpr const char* kPairNames[kNumPairTypes] = {"AU", "CG", "GC",
                                                   "UA", "GU", "UG"};

double extrapolate(const std::array<double, kLoopTableMax + 1>& table,
                   int size, double coef) {
  if (size <= kLoopTableMax) return table[size];
  return table[kLoopTableMax] +
         coef * std::log(static_cast<double>(size) / kLoopTableMax);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int base_index(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'U': return 3;
    default: return -1;
  }
}

int pair_type(char five, char three) {
  static constexpr int table[4][4] = {
      {-1, -1, -1, kAU},
      {-1, -1, kCG, -1},
      {-1, kGC, -1, kGU},
      {kUA, -1, kUG, -1},
  };
  const int x = base_index(five), y = base_index(three);
  if (x < 0 || y < 0) return -1;
  return table[x][y];
}

const char* pair_type_name(int pt) {
  return pt >= 0 && pt < kNumPairTypes ? kPairNames[pt] : "--";
}

EnergyModel::EnergyModel() {
  // Placeholder defaults in the spirit of common nearest-neighbour sets.
  const double hp[] = {5.4, 5.4, 5.4, 5.4, 5.6, 5.7, 5.4, 6.0, 5.5, 6.4};
  for (int k = 0; k <= kLoopTableMax; ++k) {
    hairpin[k] = k < 10 ? hp[k] : 6.4 + loop_extrapolation * std::log(k / 9.0);
  }
  const double bu[] = {0.0, 3.8, 2.8, 3.2, 3.6, 4.0, 4.4};
  for (int k = 0; k <= kLoopTableMax; ++k) {
    bulge[k] = k < 7 ? bu[k] : 4.4 + loop_extrapolation * std::log(k / 6.0);
  }
  const double in[] = {0.0, 0.0, 0.5, 1.6, 1.1, 2.0, 2.0};
  for (int k = 0; k <= kLoopTableMax; ++k) {
    interior[k] = k < 7 ? in[k] : 2.0 + loop_extrapolation * std::log(k / 6.0);
  }
  // Outer pair XY (5' X), inner pair ZW: 5'-XZ-3' / 3'-YW-5'.
  const double wc[4][4] = {
      {-0.93, -2.24, -2.08, -1.10},
      {-2.11, -3.26, -2.36, -2.08},
      {-2.35, -3.42, -3.26, -2.24},
      {-1.33, -2.35, -2.11, -0.93},
  };
  for (int p = 0; p < kNumPairTypes; ++p) {
    for (int q = 0; q < kNumPairTypes; ++q) {
      stack[p][q] = (p < 4 && q < 4) ? wc[p][q] : -1.0;
    }
  }
  exterior_arc.fill(0.0);
}

EnergyModel EnergyModel::unit() {
  EnergyModel m;
  m.hairpin.fill(0.0);
  m.bulge.fill(0.0);
  m.interior.fill(0.0);
  m.interior_asym = 0.0;
  m.loop_extrapolation = 0.0;
  for (auto& row : m.stack) row.fill(0.0);
  m.multi_init = m.multi_branch = m.multi_unpaired = 0.0;
  m.kiss_init = m.kiss_branch = m.kiss_unpaired = 0.0;
  m.sigma0 = 0.0;
  m.sigma = 0.0;
  m.beta3 = 0.0;
  m.exterior_arc.fill(0.0);
  m.hybrid_loop_init = m.hybrid_loop_per = 0.0;
  return m;
}

double EnergyModel::weight(double energy) const {
  return std::exp(-energy / rt);
}

double EnergyModel::hairpin_energy(int size) const {
  return extrapolate(hairpin, size, loop_extrapolation);
}

double EnergyModel::interior_energy(int outer_pt, int inner_pt, int left,
                                    int right) const {
  if (left == 0 && right == 0) return stack[outer_pt][inner_pt];
  if (left == 0 || right == 0)
    return extrapolate(bulge, left + right, loop_extrapolation);
  return extrapolate(interior, left + right, loop_extrapolation) +
         interior_asym * std::abs(left - right);
}

double EnergyModel::g_int(int prev_pt, int next_pt, int gap_r,
                          int gap_s) const {
  if (gap_r == 0 && gap_s == 0) return stack[prev_pt][next_pt];
  return hybrid_loop_init + hybrid_loop_per * (gap_r + gap_s);
}

double EnergyModel::hybrid_step_energy(double g_int_value, int gap_r,
                                       int gap_s, HybridContext ctx) const {
  double e = sigma0 + sigma * g_int_value;
  if (ctx.r == Loop::K) e += gap_r * beta3;
  if (ctx.s == Loop::K) e += gap_s * beta3;
  return e;
}

double weight_hybrid_step(const EnergyModel& model, const std::string& r,
                          const std::string& s, int i1, int h1, int j, int l,
                          HybridContext ctx) {
  if (j <= i1 || l <= h1) {
    throw Error(ErrorKind::InvalidGap,
                "hybrid step needs i1 < j and h1 < l, got (" +
                    std::to_string(i1) + "," + std::to_string(h1) + ")->(" +
                    std::to_string(j) + "," + std::to_string(l) + ")");
  }
  const int prev = pair_type(r[i1 - 1], s[h1 - 1]);
  const int next = pair_type(r[j - 1], s[l - 1]);
  if (!model.can_pair(prev) || !model.can_pair(next) || !model.interaction)
    return 0.0;
  const int gr = j - i1 - 1, gs = l - h1 - 1;
  return model.weight(
      model.hybrid_step_energy(model.g_int(prev, next, gr, gs), gr, gs, ctx));
}

std::string EnergyModel::serialize() const {
  std::ostringstream out;
  auto put = [&](const std::string& key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << " = " << buf << "\n";
  };
  put("rt", rt);
  out << "min_hairpin = " << min_hairpin << "\n";
  out << "interaction = " << (interaction ? 1 : 0) << "\n";
  out << "pairs = ";
  bool first = true;
  for (int p = 0; p < kNumPairTypes; ++p) {
    if (!allowed[p]) continue;
    out << (first ? "" : ",") << kPairNames[p];
    first = false;
  }
  out << "\n";
  for (int k = 0; k <= kLoopTableMax; ++k) put("hairpin." + std::to_string(k), hairpin[k]);
  for (int k = 0; k <= kLoopTableMax; ++k) put("bulge." + std::to_string(k), bulge[k]);
  for (int k = 0; k <= kLoopTableMax; ++k) put("interior." + std::to_string(k), interior[k]);
  put("interior_asym", interior_asym);
  put("loop_extrapolation", loop_extrapolation);
  for (int p = 0; p < kNumPairTypes; ++p)
    for (int q = 0; q < kNumPairTypes; ++q)
      put(std::string("stack.") + kPairNames[p] + "." + kPairNames[q], stack[p][q]);
  put("multi_init", multi_init);
  put("multi_branch", multi_branch);
  put("multi_unpaired", multi_unpaired);
  put("kiss_init", kiss_init);
  put("kiss_branch", kiss_branch);
  put("kiss_unpaired", kiss_unpaired);
  put("sigma0", sigma0);
  put("sigma", sigma);
  put("beta3", beta3);
  for (int p = 0; p < kNumPairTypes; ++p)
    put(std::string("exterior_arc.") + kPairNames[p], exterior_arc[p]);
  put("hybrid_loop_init", hybrid_loop_init);
  put("hybrid_loop_per", hybrid_loop_per);
  return out.str();
}

std::string EnergyModel::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

int pair_from_name(const std::string& name) {
  for (int p = 0; p < kNumPairTypes; ++p)
    if (name == kPairNames[p]) return p;
  return -1;
}

double* lookup(EnergyModel& m, const std::string& key) {
  static const std::pair<const char*, double EnergyModel::*> scalars[] = {
      {"rt", &EnergyModel::rt},
      {"interior_asym", &EnergyModel::interior_asym},
      {"loop_extrapolation", &EnergyModel::loop_extrapolation},
      {"multi_init", &EnergyModel::multi_init},
      {"multi_branch", &EnergyModel::multi_branch},
      {"multi_unpaired", &EnergyModel::multi_unpaired},
      {"kiss_init", &EnergyModel::kiss_init},
      {"kiss_branch", &EnergyModel::kiss_branch},
      {"kiss_unpaired", &EnergyModel::kiss_unpaired},
      {"sigma0", &EnergyModel::sigma0},
      {"sigma", &EnergyModel::sigma},
      {"beta3", &EnergyModel::beta3},
      {"hybrid_loop_init", &EnergyModel::hybrid_loop_init},
      {"hybrid_loop_per", &EnergyModel::hybrid_loop_per},
  };
  for (const auto& [name, member] : scalars)
    if (key == name) return &(m.*member);

  const auto dot = key.find('.');
  if (dot == std::string::npos) return nullptr;
  const std::string head = key.substr(0, dot), tail = key.substr(dot + 1);
  auto size_index = [&](std::array<double, kLoopTableMax + 1>& t) -> double* {
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      return nullptr;
    const int k = std::atoi(tail.c_str());
    return k <= kLoopTableMax ? &t[k] : nullptr;
  };
  if (head == "hairpin") return size_index(m.hairpin);
  if (head == "bulge") return size_index(m.bulge);
  if (head == "interior") return size_index(m.interior);
  if (head == "exterior_arc") {
    const int p = pair_from_name(tail);
    return p >= 0 ? &m.exterior_arc[p] : nullptr;
  }
  if (head == "stack") {
    const auto dot2 = tail.find('.');
    if (dot2 == std::string::npos) return nullptr;
    const int p = pair_from_name(tail.substr(0, dot2));
    const int q = pair_from_name(tail.substr(dot2 + 1));
    return p >= 0 && q >= 0 ? &m.stack[p][q] : nullptr;
  }
  return nullptr;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError,
              "params line " + std::to_string(line) + ": " + msg);
}

double to_number(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    parse_fail(line, "not a number: '" + v + "'");
  return x;
}

}  // namespace

EnergyModel parse_params(const std::string& text) {
  EnergyModel m;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key == "min_hairpin") {
      const double x = to_number(val, line);
      if (x < 0 || x != std::floor(x)) parse_fail(line, "min_hairpin must be a nonnegative integer");
      m.min_hairpin = static_cast<int>(x);
    } else if (key == "interaction") {
      if (val == "1" || val == "true" || val == "on") m.interaction = true;
      else if (val == "0" || val == "false" || val == "off") m.interaction = false;
      else parse_fail(line, "interaction must be 0 or 1");
    } else if (key == "pairs") {
      m.allowed.fill(false);
      std::istringstream list(val);
      std::string item;
      while (std::getline(list, item, ',')) {
        const int p = pair_from_name(trim(item));
        if (p < 0) parse_fail(line, "unknown pair '" + trim(item) + "'");
        m.allowed[p] = true;
      }
    } else if (double* slot = lookup(m, key)) {
      *slot = to_number(val, line);
    } else {
      parse_fail(line, "unknown key '" + key + "'");
    }
  }
  if (!(m.rt > 0)) parse_fail(line, "rt must be positive");
  return m;
}

EnergyModel load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open params file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

}  // namespace jpf
