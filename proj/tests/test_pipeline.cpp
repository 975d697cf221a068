#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "pqi/error.hpp"
#include "pqi/pipeline.hpp"
#include "pqi/synth.hpp"

using namespace pqi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("pqi_pipe_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    auto p = (path / name).string();
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
};

// Small fixture: z3 is well supported, z2 only via the shared peptide.
RunConfig toy_config(const TempDir& dir, const std::string& out_name) {
  RunConfig cfg;
  cfg.psm_path = dir.file("psms.tsv",
                          "spectrum\tpeptide\tprobability\n"
                          "s1\tYSHARED\t1.0\n"
                          "s2\tYUNIQA\t1.0\n"
                          "s3\tYUNIQA\t1.0\n"
                          "s4\tYUNIQB\t0.5\n");
  cfg.membership_path = dir.file("membership.tsv",
                                 "peptide\tprotein\n"
                                 "YSHARED\tz2\n"
                                 "YSHARED\tz3\n"
                                 "YUNIQA\tz3\n"
                                 "YUNIQB\tz1\n");
  cfg.reference_list_path = dir.file("reference.txt", "z1\nz3\n");
  cfg.calibration = Calibration::Normalize;
  cfg.output_dir = (dir.path / out_name).string();
  return cfg;
}

std::map<std::string, double> read_abundance(const std::string& path) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::map<std::string, double> out;
  std::string acc;
  double v;
  while (in >> acc >> v) out[acc] = v;
  return out;
}

}  // namespace

TEST_CASE("run_pipeline equal division hand values") {
  TempDir dir("ed");
  auto cfg = toy_config(dir, "out");
  cfg.method = Method::EqualDivision;
  auto art = run_pipeline(cfg);
  auto c = read_abundance(art.abundance_path);
  CHECK(c.at("z1") == doctest::Approx(0.5));
  CHECK(c.at("z2") == doctest::Approx(0.5));   // 1.0 / 2
  CHECK(c.at("z3") == doctest::Approx(2.5));   // 2.0 + 0.5
  CHECK(fs::exists(art.curve_path));
  CHECK(fs::exists(art.groups_path));
  CHECK(fs::exists(art.probability_path));
  CHECK(fs::exists(art.summary_path));
}

TEST_CASE("run_pipeline multiple counting with unit weighting is integral") {
  TempDir dir("mp");
  auto cfg = toy_config(dir, "out");
  cfg.method = Method::MultipleCounting;
  cfg.weighting = Weighting::Unit;
  auto art = run_pipeline(cfg);
  auto c = read_abundance(art.abundance_path);
  CHECK(c.at("z1") == 1.0);
  CHECK(c.at("z2") == 1.0);
  CHECK(c.at("z3") == 3.0);
}

TEST_CASE("run_pipeline lp shrinks the unsupported protein") {
  TempDir dir("lp");
  auto cfg = toy_config(dir, "out");
  cfg.method = Method::LinearProgram;
  auto art = run_pipeline(cfg);
  auto c = read_abundance(art.abundance_path);
  CHECK(c.at("z2") == 0.0);
  CHECK(c.at("z3") == doctest::Approx(3.0));
  // Conservation: LP totals match equal division totals.
  double lp_total = c.at("z1") + c.at("z2") + c.at("z3");
  CHECK(lp_total == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("run_pipeline probability floor drops weak PSMs") {
  TempDir dir("floor");
  auto cfg = toy_config(dir, "out");
  cfg.method = Method::EqualDivision;
  cfg.psm_probability_floor = 0.6;  // removes s4, so z1 is dropped
  auto art = run_pipeline(cfg);
  auto c = read_abundance(art.abundance_path);
  CHECK(c.count("z1") == 0);
  CHECK(c.at("z3") == doctest::Approx(2.5));
}

TEST_CASE("run_pipeline artifacts are byte-identical across runs") {
  TempDir dir("det");
  auto cfg_a = toy_config(dir, "out_a");
  auto cfg_b = toy_config(dir, "out_b");
  for (auto* cfg : {&cfg_a, &cfg_b}) {
    cfg->method = Method::LinearProgram;
  }
  auto a = run_pipeline(cfg_a);
  auto b = run_pipeline(cfg_b);
  CHECK(slurp(a.abundance_path) == slurp(b.abundance_path));
  CHECK(slurp(a.probability_path) == slurp(b.probability_path));
  CHECK(slurp(a.groups_path) == slurp(b.groups_path));
  CHECK(slurp(a.curve_path) == slurp(b.curve_path));
  CHECK(slurp(a.summary_path) == slurp(b.summary_path));
}

TEST_CASE("run_pipeline em calibration on synthetic data") {
  TempDir dir("em");
  SynthSpec spec;
  spec.n_proteins = 60;
  spec.seed = 12;
  auto files = generate_synthetic(spec, dir.path.string());
  RunConfig cfg;
  cfg.psm_path = files.psm_path;
  cfg.membership_path = files.membership_path;
  cfg.reference_list_path = files.reference_path;
  cfg.method = Method::LinearProgram;
  cfg.calibration = Calibration::Em;
  cfg.output_dir = (dir.path / "out").string();
  auto art = run_pipeline(cfg);
  // Probabilities are valid and the summary mentions the EM stage.
  std::ifstream in(art.probability_path);
  std::string header;
  std::getline(in, header);
  std::string acc;
  int gid;
  double p;
  int rows = 0;
  while (in >> acc >> gid >> p) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    ++rows;
  }
  CHECK(rows > 0);
  CHECK(slurp(art.summary_path).find("em_converged") != std::string::npos);
}

TEST_CASE("run_pipeline fasta membership path") {
  TempDir dir("fasta");
  RunConfig cfg;
  cfg.psm_path = dir.file("psms.tsv",
                          "spectrum\tpeptide\tprobability\n"
                          "s1\tMKWVTFISLK\t0.9\n");
  cfg.fasta_path = dir.file("db.fasta", ">P1\nMKWVTFISLKAAAR\n");
  cfg.missed_cleavages = 1;
  cfg.min_peptide_length = 4;
  cfg.max_peptide_length = 30;
  cfg.decoy_prefix = "DECOY_";
  cfg.calibration = Calibration::Normalize;
  cfg.output_dir = (dir.path / "out").string();
  auto art = run_pipeline(cfg);
  auto c = read_abundance(art.abundance_path);
  CHECK(c.at("P1") == doctest::Approx(0.9));
}

TEST_CASE("config validation") {
  TempDir dir("cfg");
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), Error);  // nothing set
  cfg = toy_config(dir, "out");
  cfg.membership_path.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);  // no membership source
  cfg = toy_config(dir, "out");
  cfg.fasta_path = "also.fasta";
  CHECK_THROWS_AS(cfg.validate(), Error);  // both sources
  cfg = toy_config(dir, "out");
  cfg.decoy_prefix = "DECOY_";
  CHECK_THROWS_AS(cfg.validate(), Error);  // both references
  cfg = toy_config(dir, "out");
  cfg.psm_probability_floor = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("load_config round trip with enum spellings") {
  TempDir dir("json");
  auto path = dir.file("run.json", R"({
    "psm_path": "a.tsv",
    "membership_path": "b.tsv",
    "reference_list_path": "c.txt",
    "method": "lp",
    "weighting": "unit",
    "calibration": "normalize",
    "output_dir": "out"
  })");
  auto cfg = load_config(path);
  CHECK(cfg.method == Method::LinearProgram);
  CHECK(cfg.weighting == Weighting::Unit);
  CHECK(cfg.calibration == Calibration::Normalize);
  CHECK(cfg.psm_path == "a.tsv");
  CHECK_THROWS_AS(parse_method("nope"), Error);
  CHECK_THROWS_AS(parse_weighting("nope"), Error);
  CHECK_THROWS_AS(parse_calibration("nope"), Error);
}

TEST_CASE("compare_runs against itself and across methods") {
  TempDir dir("cmp");
  auto cfg_ed = toy_config(dir, "out_ed");
  cfg_ed.method = Method::EqualDivision;
  auto cfg_lp = toy_config(dir, "out_lp");
  cfg_lp.method = Method::LinearProgram;
  run_pipeline(cfg_ed);
  run_pipeline(cfg_lp);
  auto self_cmp = compare_runs(cfg_ed.output_dir, cfg_ed.output_dir);
  CHECK(self_cmp.find("q_value\ttp_run_a\ttp_run_b") == 0);
  // Identical runs report identical TP columns on every row.
  std::istringstream rows(self_cmp);
  std::string line;
  std::getline(rows, line);  // header
  while (std::getline(rows, line)) {
    std::istringstream cols(line);
    std::string q;
    long a, b;
    cols >> q >> a >> b;
    CHECK(a == b);
  }
  CHECK_FALSE(compare_runs(cfg_ed.output_dir, cfg_lp.output_dir).empty());
}

TEST_CASE("compare_runs rejects mismatched references") {
  TempDir dir("cmpref");
  auto cfg_a = toy_config(dir, "out_a");
  auto cfg_b = toy_config(dir, "out_b");
  cfg_b.reference_list_path = dir.file("ref2.txt", "z1\n");
  run_pipeline(cfg_a);
  run_pipeline(cfg_b);
  CHECK_THROWS_AS(compare_runs(cfg_a.output_dir, cfg_b.output_dir), Error);
}
