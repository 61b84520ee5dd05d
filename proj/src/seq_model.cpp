#include "jpf/seq_model.hpp"

#include <algorithm>
#include <cctype>

#include "jpf/error.hpp"

namespace jpf {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadFasta: return "BadFasta";
    case ErrorKind::WrongRecordCount: return "WrongRecordCount";
    case ErrorKind::BadAlphabet: return "BadAlphabet";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::InvalidGap: return "InvalidGap";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Strand Strand::from_5to3(std::string id, std::string_view seq, Role role) {
  Strand s;
  s.id = std::move(id);
  s.role = role;
  s.residues.reserve(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(seq[k])));
    if (c == 'T') c = 'U';
    if (c != 'A' && c != 'C' && c != 'G' && c != 'U') {
      throw Error(ErrorKind::BadAlphabet,
                  "residue '" + std::string(1, seq[k]) + "' at position " +
                      std::to_string(k + 1) + " of " + s.id);
    }
    s.residues.push_back(c);
  }
  if (s.residues.empty())
    throw Error(ErrorKind::BadAlphabet, "empty sequence " + s.id);
  if (role == Role::Target) std::reverse(s.residues.begin(), s.residues.end());
  return s;
}

std::string Strand::sequence_5to3() const {
  std::string out = residues;
  if (role == Role::Target) std::reverse(out.begin(), out.end());
  return out;
}

void JointStructure::normalize() {
  std::sort(interior_r.begin(), interior_r.end());
  std::sort(interior_s.begin(), interior_s.end());
  std::sort(exterior.begin(), exterior.end());
}

const char* rule_name(Rule rule) {
  switch (rule) {
    case Rule::Valid: return "Valid";
    case Rule::BadIndex: return "BadIndex";
    case Rule::DoublePairedPosition: return "DoublePairedPosition";
    case Rule::CrossingArcs: return "CrossingArcs";
    case Rule::ZigZag: return "ZigZag";
    case Rule::HairpinTooSmall: return "HairpinTooSmall";
  }
  return "Unknown";
}

namespace {

ValidityReport fail(Rule rule, std::vector<Arc> arcs, std::string detail) {
  return {rule, std::move(arcs), std::move(detail)};
}

std::string arc_str(Arc x) {
  return "(" + std::to_string(x.a) + "," + std::to_string(x.b) + ")";
}

std::optional<ValidityReport> crossing_interior(const std::vector<Arc>& arcs,
                                                const char* strand) {
  for (std::size_t p = 0; p < arcs.size(); ++p) {
    for (std::size_t q = 0; q < arcs.size(); ++q) {
      const Arc x = arcs[p], y = arcs[q];
      if (x.a < y.a && y.a < x.b && x.b < y.b) {
        return fail(Rule::CrossingArcs, {x, y},
                    std::string(strand) + " arcs " + arc_str(x) + " and " +
                        arc_str(y) + " cross");
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> covered_exterior(const JointStructure& js,
                                                    Arc arc, bool on_r) {
  int first = -1, last = -1;
  for (int k = 0; k < static_cast<int>(js.exterior.size()); ++k) {
    const int pos = on_r ? js.exterior[k].a : js.exterior[k].b;
    if (arc.a < pos && pos < arc.b) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return std::nullopt;
  return std::make_pair(first, last);
}

namespace {

// First overlapping-but-not-nested pair of covered intervals, if any.
std::optional<std::pair<Arc, Arc>> find_zigzag(const JointStructure& js) {
  std::vector<Arc> ext = js.exterior;
  std::sort(ext.begin(), ext.end());
  JointStructure sorted = js;
  sorted.exterior = ext;
  for (const Arc& ra : js.interior_r) {
    auto ci = covered_exterior(sorted, ra, true);
    if (!ci) continue;
    for (const Arc& sa : js.interior_s) {
      auto cj = covered_exterior(sorted, sa, false);
      if (!cj) continue;
      const auto [a1, a2] = *ci;
      const auto [b1, b2] = *cj;
      const bool overlap = a1 <= b2 && b1 <= a2;
      const bool nested = (a1 <= b1 && b2 <= a2) || (b1 <= a1 && a2 <= b2);
      if (overlap && !nested) return std::make_pair(ra, sa);
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_zigzag_free(const JointStructure& js) { return !find_zigzag(js); }

ValidityReport validate(const JointStructure& js, int min_hairpin) {
  if (js.n < 1 || js.m < 1)
    return fail(Rule::BadIndex, {}, "strand lengths must be positive");
  std::vector<int> used_r(js.n + 1, 0), used_s(js.m + 1, 0);
  for (const Arc& x : js.interior_r) {
    if (x.a < 1 || x.b > js.n || x.a >= x.b)
      return fail(Rule::BadIndex, {x}, "bad R arc " + arc_str(x));
    ++used_r[x.a];
    ++used_r[x.b];
  }
  for (const Arc& x : js.interior_s) {
    if (x.a < 1 || x.b > js.m || x.a >= x.b)
      return fail(Rule::BadIndex, {x}, "bad S arc " + arc_str(x));
    ++used_s[x.a];
    ++used_s[x.b];
  }
  for (const Arc& x : js.exterior) {
    if (x.a < 1 || x.a > js.n || x.b < 1 || x.b > js.m)
      return fail(Rule::BadIndex, {x}, "bad exterior arc " + arc_str(x));
    ++used_r[x.a];
    ++used_s[x.b];
  }
  for (int p = 1; p <= js.n; ++p) {
    if (used_r[p] > 1) {
      return fail(Rule::DoublePairedPosition, {},
                  "R position " + std::to_string(p) + " paired more than once");
    }
  }
  for (int p = 1; p <= js.m; ++p) {
    if (used_s[p] > 1) {
      return fail(Rule::DoublePairedPosition, {},
                  "S position " + std::to_string(p) + " paired more than once");
    }
  }
  if (auto r = crossing_interior(js.interior_r, "R")) return *r;
  if (auto r = crossing_interior(js.interior_s, "S")) return *r;
  for (std::size_t p = 0; p < js.exterior.size(); ++p) {
    for (std::size_t q = 0; q < js.exterior.size(); ++q) {
      const Arc x = js.exterior[p], y = js.exterior[q];
      if (x.a < y.a && x.b >= y.b) {
        return fail(Rule::CrossingArcs, {x, y},
                    "exterior arcs " + arc_str(x) + " and " + arc_str(y) +
                        " cross");
      }
    }
  }
  if (auto z = find_zigzag(js)) {
    return fail(Rule::ZigZag, {z->first, z->second},
                "R arc " + arc_str(z->first) + " and S arc " +
                    arc_str(z->second) + " form a zig-zag");
  }
  for (const Arc& x : js.interior_r) {
    if (x.b - x.a - 1 < min_hairpin)
      return fail(Rule::HairpinTooSmall, {x}, "R arc " + arc_str(x));
  }
  for (const Arc& x : js.interior_s) {
    if (x.b - x.a - 1 < min_hairpin)
      return fail(Rule::HairpinTooSmall, {x}, "S arc " + arc_str(x));
  }
  return {};
}

std::vector<Hybrid> extract_hybrids(const JointStructure& js) {
  std::vector<Arc> ext = js.exterior;
  std::sort(ext.begin(), ext.end());
  std::vector<Hybrid> out;
  if (ext.empty()) return out;

  std::vector<char> paired_r(js.n + 2, 0), paired_s(js.m + 2, 0);
  for (const Arc& x : js.interior_r) paired_r[x.a] = paired_r[x.b] = 1;
  for (const Arc& x : js.interior_s) paired_s[x.a] = paired_s[x.b] = 1;
  for (const Arc& x : ext) {
    paired_r[x.a] = 1;
    paired_s[x.b] = 1;
  }
  auto gap_free = [&](Arc x, Arc y) {
    for (int p = x.a + 1; p < y.a; ++p)
      if (paired_r[p]) return false;
    for (int p = x.b + 1; p < y.b; ++p)
      if (paired_s[p]) return false;
    return true;
  };

  out.push_back({{ext.front()}});
  for (std::size_t k = 1; k < ext.size(); ++k) {
    if (gap_free(ext[k - 1], ext[k])) {
      out.back().arcs.push_back(ext[k]);
    } else {
      out.push_back({{ext[k]}});
    }
  }
  return out;
}

}  // namespace jpf
