#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jpf {

enum class Role { Query, Target };

/// An RNA strand over {A,C,G,U}.
///
/// `residues` is stored in internal order: a Query strand (R) reads 5'->3',
/// a Target strand (S) is reversed once at construction so that internal
/// position 1 is its 3' end. All indices handed around the library are
/// 1-based internal positions.
struct Strand {
  std::string id;
  std::string residues;
  Role role = Role::Query;

  /// Builds a strand from a user-facing 5'->3' sequence. Normalizes case and
  /// T->U; throws Error(BadAlphabet) naming the offending 5'->3' position.
  static Strand from_5to3(std::string id, std::string_view seq, Role role);

  int size() const { return static_cast<int>(residues.size()); }
  char at(int pos) const { return residues[pos - 1]; }
  /// Internal 1-based position -> user 5'->3' position.
  int user_position(int pos) const {
    return role == Role::Target ? size() + 1 - pos : pos;
  }
  std::string sequence_5to3() const;
};

struct Arc {
  int a = 0;
  int b = 0;
  auto operator<=>(const Arc&) const = default;
};

/// Interior arcs of R and S plus the exterior (R_i, S_h) arcs, all in
/// internal 1-based coordinates. Arc lists are kept sorted.
struct JointStructure {
  int n = 0;
  int m = 0;
  std::vector<Arc> interior_r;  // (i, j), i < j
  std::vector<Arc> interior_s;  // (h, l), h < l
  std::vector<Arc> exterior;    // (i, h)

  void normalize();
  bool operator==(const JointStructure&) const = default;
  auto operator<=>(const JointStructure&) const = default;
};

enum class Rule {
  Valid,
  BadIndex,
  DoublePairedPosition,
  CrossingArcs,
  ZigZag,
  HairpinTooSmall,
};

const char* rule_name(Rule rule);

struct ValidityReport {
  Rule rule = Rule::Valid;
  std::vector<Arc> arcs;  // offending arcs, in the order the rule names them
  std::string detail;
  bool ok() const { return rule == Rule::Valid; }
};

/// Checks single pairing, noncrossing arcs on each strand and among the
/// exterior arcs, zig-zag freedom and the minimum hairpin size, reporting the
/// first violated rule in that order.
ValidityReport validate(const JointStructure& js, int min_hairpin = 3);

/// For each interior arc with at least one exterior-arc endpoint strictly
/// inside it on its own strand, the set of covered exterior arcs is an
/// interval of the sorted exterior list. Zig-zag free means the intervals
/// coming from R arcs and from S arcs are pairwise disjoint or nested.
bool is_zigzag_free(const JointStructure& js);

/// Index interval [first, last] into `js.exterior` covered by an interior
/// arc; nullopt when it covers no exterior arc.
std::optional<std::pair<int, int>> covered_exterior(const JointStructure& js,
                                                    Arc arc, bool on_r);

struct Hybrid {
  std::vector<Arc> arcs;  // exterior arcs (i, h), increasing
  Arc footprint_r() const { return {arcs.front().a, arcs.back().a}; }
  Arc footprint_s() const { return {arcs.front().b, arcs.back().b}; }
};

/// Splits the exterior arcs into maximal runs whose consecutive members are
/// separated only by unpaired positions on both strands.
std::vector<Hybrid> extract_hybrids(const JointStructure& js);

}  // namespace jpf
