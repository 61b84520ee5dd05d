#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "golden_targets.hpp"
#include "jpf/error.hpp"
#include "jpf/report.hpp"
#include "test_util.hpp"

using namespace jpf;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_fasta(text, "test");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("fasta ingestion") {
  const auto [r, s] = parse_fasta(">r\nGAAAC\n>s\nGUUUC\n", "test");
  CHECK(r.id == "r");
  CHECK(r.residues == "GAAAC");
  CHECK(s.id == "s");
  CHECK(s.residues == "CUUUG");
  CHECK(kind_of(">r\nGAAAC\n") == ErrorKind::WrongRecordCount);
  CHECK(kind_of(">r\nGAXAC\n>s\nGUUUC\n") == ErrorKind::BadAlphabet);
  CHECK(kind_of("GAAAC\n>s\nGUUUC\n") == ErrorKind::BadFasta);
  const auto a = temp_file("jpf_a.fa", ">query desc\nGGG\nAAA\n");
  const auto b = temp_file("jpf_b.fa", ">target\nuuuccc\n");
  const auto [r2, s2] = ingest_fasta({a, b});
  CHECK(r2.id == "query");
  CHECK(r2.residues == "GGGAAA");
  CHECK(s2.sequence_5to3() == "UUUCCC");
  CHECK_THROWS_AS(ingest_fasta({fs::temp_directory_path() / "jpf_missing.fa"}), Error);
}

TEST_CASE("target row format") {
  CHECK(format_target_row(52, 60, 0.83) == "52,60: 83.0%");
  CHECK(format_target_row(1, 3, 1.0) == "1,3: 100.0%");
  CHECK(format_target_row(27, 28, 0.1004) == "27,28: 10.0%");
}

TEST_CASE("targets match the golden file") {
  Header h;
  TargetTable t;
  jpf::testing::golden_targets(h, t);
  std::ostringstream out;
  write_targets(out, h, t, h.m);
  std::ifstream golden(JPF_GOLDEN_DIR "/targets.txt");
  REQUIRE(golden);
  std::stringstream expect;
  expect << golden.rdbuf();
  CHECK(out.str() == expect.str());
  std::istringstream back(out.str());
  const auto rows = read_targets(back);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3].strand == 'S');
  CHECK(rows[3].i == 53);
  CHECK(rows[3].percent == doctest::Approx(62.5));
}

TEST_CASE("artifacts round-trip") {
  const Strand r = jpf::testing::query("GGGAAAUCCA");
  const Strand s = jpf::testing::target("UGGAUUUCCC");
  InsideResult in = inside(r, s, EnergyModel());
  const ProbTables p = outside(in);
  for (bool json : {false, true}) {
    std::stringstream buf;
    write_pf(buf, make_pf(in), json);
    const PfReport back = read_pf(buf);
    CHECK(back.q_total == in.q_total());
    CHECK(back.q_r == in.q_r());
    CHECK(back.q_s == in.q_s());
    CHECK(back.header.fingerprint == EnergyModel().fingerprint());
  }
  {
    std::stringstream buf;
    write_bpp(buf, make_header(in), in, p);
    const auto rows = read_bpp(buf);
    bool found = false;
    for (const auto& e : rows) {
      if (e.kind == "EXT" && e.a == 1 && e.b == 10) {
        CHECK(e.p == doctest::Approx(p.bpp_ext[1][1]).epsilon(1e-10));
        found = true;
      }
    }
    CHECK(found);
  }
  {
    std::stringstream buf;
    const auto hy = hybrid_probabilities(in, p);
    write_hybrids(buf, make_header(in), in, hy);
    for (const auto& e : read_hybrids(buf))
      if (e.section == "HY" && e.ctx == "ALL")
        CHECK(e.p == doctest::Approx(hy(e.i, e.j, 11 - e.l, 11 - e.h)).epsilon(1e-10));
  }
  {
    const auto batch = sample_batch(in, 25, 7);
    std::stringstream buf;
    write_sample(buf, make_header(in, 7), batch);
    CHECK(read_sample(buf) == batch.structures);
  }
}

TEST_CASE("extended dot-bracket") {
  JointStructure js{6, 5, {{1, 6}}, {{1, 5}}, {{2, 2}, {3, 3}}};
  const std::string text = format_structure(js);
  CHECK(text == "(||..)\n(.||)\n2-4 3-3");
  CHECK(parse_structure("(||..)", "(.||)", "2-4 3-3") == js);
  CHECK(std::regex_match(format_target_row(3, 14, 0.257), std::regex(R"(\d+,\d+: \d+\.\d%)")));
}
