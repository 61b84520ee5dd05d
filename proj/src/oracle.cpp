#include "jpf/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include "jpf/error.hpp"

namespace jpf {

namespace {

/// Pair type of an intramolecular arc (a,b) on one strand; S is read 5'->3'.
int intra_pair_type(const std::string& seq, bool reversed, int a, int b) {
  return reversed ? pair_type(seq[b - 1], seq[a - 1]) : pair_type(seq[a - 1], seq[b - 1]);
}

struct StrandView {
  const std::string* seq;
  bool reversed;
  int len;
  std::vector<int> partner;   // interior partner or 0
  std::vector<bool> ext;      // endpoint of an exterior arc
  std::vector<bool> hy_gap;   // unpaired position inside a hybrid gap
};

double loop_energy(const StrandView& v, const EnergyModel& model, int a, int b) {
  bool kissing = false;
  for (int k = a + 1; k < b; ++k) kissing = kissing || v.ext[k];
  std::vector<std::pair<int, int>> children;
  int unpaired = 0, free_unpaired = 0;
  for (int k = a + 1; k < b;) {
    if (v.partner[k] > k) {
      children.emplace_back(k, v.partner[k]);
      k = v.partner[k] + 1;
      continue;
    }
    if (!v.ext[k]) {
      ++unpaired;
      if (!v.hy_gap[k]) ++free_unpaired;
    }
    ++k;
  }
  const int outer = intra_pair_type(*v.seq, v.reversed, a, b);
  if (kissing)
    return model.kiss_init + model.kiss_branch * static_cast<double>(children.size()) +
           model.kiss_unpaired * free_unpaired;
  if (children.empty()) return model.hairpin_energy(b - a - 1);
  if (children.size() == 1) {
    const auto [p, q] = children.front();
    return model.interior_energy(outer, intra_pair_type(*v.seq, v.reversed, p, q),
                                 p - a - 1, b - q - 1);
  }
  return model.multi_init + model.multi_branch * static_cast<double>(children.size()) +
         model.multi_unpaired * unpaired;
}

bool enclosed(const std::vector<Arc>& arcs, int pos) {
  for (const Arc& arc : arcs)
    if (arc.a < pos && pos < arc.b) return true;
  return false;
}

}  // namespace

double structure_energy(const JointStructure& js, const Strand& r, const Strand& s,
                        const EnergyModel& model) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  StrandView views[2];
  views[0] = {&r.residues, false, js.n, std::vector<int>(js.n + 2, 0),
              std::vector<bool>(js.n + 2, false), std::vector<bool>(js.n + 2, false)};
  views[1] = {&s.residues, true, js.m, std::vector<int>(js.m + 2, 0),
              std::vector<bool>(js.m + 2, false), std::vector<bool>(js.m + 2, false)};
  const std::vector<Arc>* interior[2] = {&js.interior_r, &js.interior_s};
  for (int k = 0; k < 2; ++k) {
    for (const Arc& arc : *interior[k]) {
      if (!model.can_pair(intra_pair_type(*views[k].seq, views[k].reversed, arc.a, arc.b)))
        return inf;
      views[k].partner[arc.a] = arc.b;
      views[k].partner[arc.b] = arc.a;
    }
  }
  for (const Arc& e : js.exterior) {
    if (!model.interaction || !model.can_pair(pair_type(r.at(e.a), s.at(e.b)))) return inf;
    views[0].ext[e.a] = true;
    views[1].ext[e.b] = true;
  }

  double energy = 0.0;
  for (const Hybrid& hy : extract_hybrids(js)) {
    const Arc& first = hy.arcs.front();
    energy += model.exterior_arc[pair_type(r.at(first.a), s.at(first.b))];
    const HybridContext ctx{enclosed(js.interior_r, first.a) ? Loop::K : Loop::E,
                            enclosed(js.interior_s, first.b) ? Loop::K : Loop::E};
    for (std::size_t k = 1; k < hy.arcs.size(); ++k) {
      const Arc& p = hy.arcs[k - 1];
      const Arc& q = hy.arcs[k];
      const int gr = q.a - p.a - 1, gs = q.b - p.b - 1;
      for (int x = p.a + 1; x < q.a; ++x) views[0].hy_gap[x] = true;
      for (int x = p.b + 1; x < q.b; ++x) views[1].hy_gap[x] = true;
      const double g = model.g_int(pair_type(r.at(p.a), s.at(p.b)),
                                   pair_type(r.at(q.a), s.at(q.b)), gr, gs);
      energy += model.hybrid_step_energy(g, gr, gs, ctx);
    }
  }
  for (int k = 0; k < 2; ++k)
    for (const Arc& arc : *interior[k]) energy += loop_energy(views[k], model, arc.a, arc.b);
  return energy;
}

namespace {

/// All pseudoknot-free secondary structures of one strand.
void secondary_structures(const std::string& seq, bool reversed, const EnergyModel& model,
                          int a, std::vector<Arc>& cur, std::vector<std::vector<Arc>>& out,
                          int end) {
  // Structures on [a, end] appended to `cur`.
  if (a > end) {
    out.push_back(cur);
    return;
  }
  // a unpaired
  secondary_structures(seq, reversed, model, a + 1, cur, out, end);
  for (int b = a + model.min_hairpin + 1; b <= end; ++b) {
    if (!model.can_pair(intra_pair_type(seq, reversed, a, b))) continue;
    std::vector<std::vector<Arc>> inner;
    std::vector<Arc> tmp;
    secondary_structures(seq, reversed, model, a + 1, tmp, inner, b - 1);
    for (const auto& in : inner) {
      std::vector<Arc> next = cur;
      next.push_back({a, b});
      next.insert(next.end(), in.begin(), in.end());
      secondary_structures(seq, reversed, model, b + 1, next, out, end);
    }
  }
}

void exterior_matchings(const std::vector<int>& free_r, const std::vector<int>& free_s,
                        std::size_t ri, std::size_t si, const Strand& r, const Strand& s,
                        const EnergyModel& model, std::vector<Arc>& cur,
                        const std::function<void(const std::vector<Arc>&)>& visit) {
  visit(cur);
  if (!model.interaction) return;
  for (std::size_t x = ri; x < free_r.size(); ++x) {
    for (std::size_t y = si; y < free_s.size(); ++y) {
      if (!model.can_pair(pair_type(r.at(free_r[x]), s.at(free_s[y])))) continue;
      cur.push_back({free_r[x], free_s[y]});
      exterior_matchings(free_r, free_s, x + 1, y + 1, r, s, model, cur, visit);
      cur.pop_back();
    }
  }
}

}  // namespace

EnsembleReport enumerate(const Strand& r, const Strand& s, const EnergyModel& model,
                         const OracleLimits& limits) {
  const int n = r.size(), m = s.size();
  std::vector<std::vector<Arc>> sr, ss;
  {
    std::vector<Arc> cur;
    secondary_structures(r.residues, false, model, 1, cur, sr, n);
    cur.clear();
    secondary_structures(s.residues, true, model, 1, cur, ss, m);
  }
  EnsembleReport rep;
  rep.mass_r.assign(n + 1, std::vector<double>(n + 1, 0.0));
  rep.mass_s.assign(m + 1, std::vector<double>(m + 1, 0.0));
  rep.mass_ext.assign(n + 1, std::vector<double>(m + 1, 0.0));
  std::set<JointStructure> seen;

  for (const auto& ar : sr) {
    for (const auto& as : ss) {
      std::vector<bool> paired_r(n + 1, false), paired_s(m + 1, false);
      for (const Arc& a : ar) paired_r[a.a] = paired_r[a.b] = true;
      for (const Arc& a : as) paired_s[a.a] = paired_s[a.b] = true;
      std::vector<int> free_r, free_s;
      for (int i = 1; i <= n; ++i)
        if (!paired_r[i]) free_r.push_back(i);
      for (int h = 1; h <= m; ++h)
        if (!paired_s[h]) free_s.push_back(h);
      std::vector<Arc> cur;
      exterior_matchings(free_r, free_s, 0, 0, r, s, model, cur,
                         [&](const std::vector<Arc>& ext) {
        JointStructure js;
        js.n = n;
        js.m = m;
        js.interior_r = ar;
        js.interior_s = as;
        js.exterior = ext;
        js.normalize();
        if (!validate(js, model.min_hairpin).ok()) return;
        if (rep.count >= limits.max_structures) {
          throw Error(ErrorKind::LimitExceeded,
                      "more than " + std::to_string(rep.count) + " structures");
        }
        if (limits.keep_structures && !seen.insert(js).second)
          throw Error(ErrorKind::InvalidArgument, "oracle produced a duplicate structure");
        const double w = model.weight(structure_energy(js, r, s, model));
        ++rep.count;
        rep.weighted_sum += w;
        for (const Arc& a : js.interior_r) rep.mass_r[a.a][a.b] += w;
        for (const Arc& a : js.interior_s) rep.mass_s[a.a][a.b] += w;
        for (const Arc& a : js.exterior) rep.mass_ext[a.a][a.b] += w;
        for (const Hybrid& hy : extract_hybrids(js)) {
          const Arc fr = hy.footprint_r(), fs = hy.footprint_s();
          rep.mass_hy[{fr.a, fr.b, fs.a, fs.b}] += w;
        }
        if (limits.keep_structures) rep.structures.push_back({std::move(js), w});
      });
    }
  }
  return rep;
}

OracleMarginals exact_probabilities(const EnsembleReport& rep) {
  OracleMarginals out;
  const double z = rep.weighted_sum;
  auto scale = [z](std::vector<std::vector<double>> mat) {
    for (auto& row : mat)
      for (double& x : row) x /= z;
    return mat;
  };
  out.bpp_r = scale(rep.mass_r);
  out.bpp_s = scale(rep.mass_s);
  out.bpp_ext = scale(rep.mass_ext);
  for (const auto& [fp, w] : rep.mass_hy) {
    const double p = w / z;
    out.p_hy[fp] = p;
    out.p_tar_r[{fp[0], fp[1]}] += p;
    out.p_tar_s[{fp[2], fp[3]}] += p;
  }
  out.structure_probability.reserve(rep.structures.size());
  for (const auto& ws : rep.structures) out.structure_probability.push_back(ws.weight / z);
  return out;
}

}  // namespace jpf
