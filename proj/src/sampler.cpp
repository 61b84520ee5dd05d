#include "jpf/sampler.hpp"

#include <cmath>
#include <deque>
#include <exception>
#include <string>

#include "jpf/error.hpp"

namespace jpf {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SumOp {
  double total = 0.0;
  void term(double c, const Emit&) { total += c; }
  void term(double c, const Emit&, const Ref& a) { total += c * *a.v; }
  void term(double c, const Emit&, const Ref& a, const Ref& b) { total += c * *a.v * *b.v; }
};

struct PickOp {
  double threshold = 0.0;
  double cum = 0.0;
  bool done = false;
  Emit emit;
  Node kids[2];
  int nkids = 0;
  // Fallback for rounding: the last term with positive mass.
  Emit last_emit;
  Node last_kids[2];
  int last_nkids = 0;

  void take(double w, const Emit& e, const Ref* a, const Ref* b) {
    if (done || w <= 0.0) return;
    last_emit = e;
    last_nkids = 0;
    if (a) last_kids[last_nkids++] = a->key;
    if (b) last_kids[last_nkids++] = b->key;
    cum += w;
    if (cum > threshold) {
      done = true;
      emit = last_emit;
      nkids = last_nkids;
      kids[0] = last_kids[0];
      kids[1] = last_kids[1];
    }
  }
  void term(double c, const Emit& e) { take(c, e, nullptr, nullptr); }
  void term(double c, const Emit& e, const Ref& a) { take(c * *a.v, e, &a, nullptr); }
  void term(double c, const Emit& e, const Ref& a, const Ref& b) {
    take(c * *a.v * *b.v, e, &a, &b);
  }
  void finish() {
    if (done) return;
    done = true;
    emit = last_emit;
    nkids = last_nkids;
    kids[0] = last_kids[0];
    kids[1] = last_kids[1];
  }
};

double node_value(JointGrammar& g, const Node& node) {
  switch (node.kind) {
    case NodeKind::Root: return g.root_value();
    case NodeKind::Sec:
      return g.sec(node.sub).value(static_cast<SecTab>(node.tab), node.i, node.j);
    case NodeKind::Joint:
      return g.value(static_cast<JTab>(node.tab), node.sub, node.i, node.j, node.h, node.l);
    case NodeKind::One: return 1.0;
  }
  return 0.0;
}

std::string describe(const Node& node) {
  std::string s;
  switch (node.kind) {
    case NodeKind::Root: return "root";
    case NodeKind::Sec:
      s = sec_tab_name(static_cast<SecTab>(node.tab));
      s += node.sub == 0 ? "[R]" : "[S]";
      break;
    case NodeKind::Joint:
      s = jtab_name(static_cast<JTab>(node.tab));
      s += std::string("^") + ctx_name(node.sub);
      break;
    case NodeKind::One: return "one";
  }
  return s + "(" + std::to_string(node.i) + "," + std::to_string(node.j) + ";" +
         std::to_string(node.h) + "," + std::to_string(node.l) + ")";
}

}  // namespace

std::mt19937_64 draw_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL);
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

JointStructure sample_one(const InsideResult& in, std::mt19937_64& rng) {
  // Tables are only read; produce() needs non-const access for Ref.
  JointGrammar& g = const_cast<JointGrammar&>(in.grammar());
  JointStructure js;
  js.n = g.n();
  js.m = g.m();
  std::deque<Node> stack_a;  // pending nodes, taken from the bottom
  stack_a.push_back(Node{NodeKind::Root, 0, 0, 0, 0, 0, 0});
  while (!stack_a.empty()) {
    const Node node = stack_a.front();
    stack_a.pop_front();
    const double value = node_value(g, node);
    SumOp sum;
    g.produce_node(sum, node);
    if (!(value > 0.0) || std::abs(sum.total / value - 1.0) > 1e-6) {
      throw Error(ErrorKind::NumericalUnderflow,
                  "cases of " + describe(node) + " sum to " + std::to_string(sum.total) +
                      ", stored " + std::to_string(value));
    }
    PickOp pick;
    pick.threshold = uniform01(rng) * sum.total;
    g.produce_node(pick, node);
    pick.finish();
    for (int k = 0; k < pick.emit.n; ++k) {
      const EmitArc& arc = pick.emit.arcs[k];
      const Arc a{arc.a, arc.b};
      switch (arc.kind) {
        case ArcKind::R: js.interior_r.push_back(a); break;
        case ArcKind::S: js.interior_s.push_back(a); break;
        case ArcKind::Ext: js.exterior.push_back(a); break;
      }
    }
    for (int k = 0; k < pick.nkids; ++k)
      if (pick.kids[k].kind != NodeKind::One) stack_a.push_back(pick.kids[k]);
  }
  js.normalize();
  return js;
}

SampleBatch sample_batch(const InsideResult& in, std::size_t count, std::uint64_t seed,
                         int threads) {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.fingerprint = in.model().fingerprint();
  batch.draws = count;
  batch.structures.resize(count);
  std::exception_ptr failure;
  long long failed_at = -1;
  const long long total = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1)
  for (long long k = 0; k < total; ++k) {
    try {
      auto rng = draw_stream(seed, static_cast<std::uint64_t>(k));
      batch.structures[k] = sample_one(in, rng);
    } catch (...) {
#pragma omp critical
      if (failed_at < 0 || k < failed_at) {
        failed_at = k;
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      throw Error(e.kind(), "draw " + std::to_string(failed_at) + ": " + e.what());
    }
  }
  return batch;
}

}  // namespace jpf
