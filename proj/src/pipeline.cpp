#include "pqi/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "pqi/calibrate.hpp"
#include "pqi/error.hpp"
#include "pqi/evaluate.hpp"
#include "pqi/lp.hpp"
#include "pqi/quantify.hpp"

namespace pqi {

Method parse_method(const std::string& name) {
  if (name == "mp") return Method::MultipleCounting;
  if (name == "ed") return Method::EqualDivision;
  if (name == "lp") return Method::LinearProgram;
  throw Error(Errc::InvalidConfig, "unknown method '" + name +
                                       "' (expected mp, ed or lp)");
}

Weighting parse_weighting(const std::string& name) {
  if (name == "probability") return Weighting::Probability;
  if (name == "unit") return Weighting::Unit;
  throw Error(Errc::InvalidConfig, "unknown weighting '" + name +
                                       "' (expected probability or unit)");
}

Calibration parse_calibration(const std::string& name) {
  if (name == "em") return Calibration::Em;
  if (name == "normalize") return Calibration::Normalize;
  throw Error(Errc::InvalidConfig, "unknown calibration '" + name +
                                       "' (expected em or normalize)");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(Errc::InvalidConfig, msg);
  };
  if (psm_path.empty()) fail("psm_path is required");
  if (membership_path.empty() == fasta_path.empty()) {
    fail("exactly one of membership_path / fasta_path must be set");
  }
  if (reference_list_path.empty() == decoy_prefix.empty()) {
    fail("exactly one of reference_list_path / decoy_prefix must be set");
  }
  if (output_dir.empty()) fail("output_dir is required");
  if (psm_probability_floor < 0.0 || psm_probability_floor > 1.0) {
    fail("psm_probability_floor must be in [0,1]");
  }
  if (lp_iteration_cap < 1) fail("lp_iteration_cap must be >= 1");
  if (em_iteration_cap < 1) fail("em_iteration_cap must be >= 1");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path + ": " + e.what());
  }
  RunConfig cfg;
  auto get_str = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j.at(key).get<std::string>();
  };
  get_str("psm_path", cfg.psm_path);
  get_str("membership_path", cfg.membership_path);
  get_str("fasta_path", cfg.fasta_path);
  if (j.contains("missed_cleavages")) {
    cfg.missed_cleavages = j.at("missed_cleavages").get<int>();
  }
  if (j.contains("min_peptide_length")) {
    cfg.min_peptide_length = j.at("min_peptide_length").get<int>();
  }
  if (j.contains("max_peptide_length")) {
    cfg.max_peptide_length = j.at("max_peptide_length").get<int>();
  }
  if (j.contains("method")) {
    cfg.method = parse_method(j.at("method").get<std::string>());
  }
  if (j.contains("weighting")) {
    cfg.weighting = parse_weighting(j.at("weighting").get<std::string>());
  }
  if (j.contains("calibration")) {
    cfg.calibration = parse_calibration(j.at("calibration").get<std::string>());
  }
  get_str("reference_list_path", cfg.reference_list_path);
  get_str("decoy_prefix", cfg.decoy_prefix);
  get_str("output_dir", cfg.output_dir);
  if (j.contains("psm_probability_floor")) {
    cfg.psm_probability_floor = j.at("psm_probability_floor").get<double>();
  }
  if (j.contains("lp_iteration_cap")) {
    cfg.lp_iteration_cap = j.at("lp_iteration_cap").get<long>();
  }
  if (j.contains("em_iteration_cap")) {
    cfg.em_iteration_cap = j.at("em_iteration_cap").get<int>();
  }
  if (j.contains("lp_workers")) {
    cfg.lp_workers = j.at("lp_workers").get<int>();
  }
  return cfg;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write '" + path + "'");
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

RunArtifacts run_pipeline(const RunConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  // Ingest.
  std::vector<Psm> psms = load_psm_file(config.psm_path);
  if (config.psm_probability_floor > 0.0) {
    std::erase_if(psms, [&](const Psm& p) {
      return p.probability < config.psm_probability_floor;
    });
  }
  auto memberships =
      !config.membership_path.empty()
          ? load_membership_file(config.membership_path)
          : load_fasta_digest(config.fasta_path, config.missed_cleavages,
                              config.min_peptide_length,
                              config.max_peptide_length);
  ReferenceSet reference = !config.reference_list_path.empty()
                               ? load_reference_list(config.reference_list_path)
                               : make_decoy_reference(config.decoy_prefix);

  BuildSummary build_summary;
  TripartiteGraph graph = build_graph(psms, memberships, &build_summary);
  std::vector<TripartiteGraph> components = connected_components(graph);

  // Quantify.
  std::vector<double> b = peptide_abundance(graph, config.weighting);
  AbundanceVector abundance;
  double lp_objective = 0.0;
  long lp_iterations = 0;
  switch (config.method) {
    case Method::MultipleCounting:
      abundance = multiple_counting(graph, b, config.weighting);
      break;
    case Method::EqualDivision:
      abundance = equal_division(graph, b, config.weighting);
      break;
    case Method::LinearProgram: {
      LpOptions opts;
      opts.iteration_cap = config.lp_iteration_cap;
      opts.workers = config.lp_workers;
      LpSolution sol = solve_per_component(graph, b, opts);
      lp_objective = sol.objective;
      lp_iterations = sol.iterations;
      abundance = recover_abundance(sol, graph, b, config.weighting);
      break;
    }
  }

  // Calibrate.
  std::vector<double> scores;
  int em_iterations = 0;
  bool em_converged = false;
  if (config.calibration == Calibration::Em) {
    EmFitResult fit =
        em_fit(abundance.protein_abundance, config.em_iteration_cap);
    em_iterations = fit.model.iterations;
    em_converged = fit.model.converged;
    scores = calibrated_probabilities(abundance.protein_abundance, fit.model);
  } else {
    scores = normalized_score(abundance.protein_abundance);
  }

  // Evaluate.
  std::vector<ProteinGroup> groups = group_proteins(graph, scores);
  std::vector<double> group_score(graph.protein_count(), 0.0);
  std::vector<int> group_of(graph.protein_count(), -1);
  for (const ProteinGroup& g : groups) {
    for (int k : g.members) {
      group_score[k] = g.score;
      group_of[k] = g.id;
    }
  }
  std::vector<bool> labels = label(graph, reference);
  std::vector<ScoredLabel> scored(graph.protein_count());
  for (int k = 0; k < graph.protein_count(); ++k) {
    scored[k] = ScoredLabel{group_score[k], labels[k]};
  }
  EvaluationCurve curve = q_value_curve(scored);

  // Artifacts.
  RunArtifacts art;
  std::filesystem::path dir(config.output_dir);
  art.abundance_path = (dir / "abundance.tsv").string();
  art.probability_path = (dir / "probability.tsv").string();
  art.groups_path = (dir / "groups.tsv").string();
  art.curve_path = (dir / "curve.csv").string();
  art.summary_path = (dir / "summary.json").string();

  {
    auto out = open_out(art.abundance_path);
    out << "accession\tabundance\n";
    for (int k = 0; k < graph.protein_count(); ++k) {
      out << graph.proteins[k].accession << "\t"
          << fmt(abundance.protein_abundance[k]) << "\n";
    }
  }
  {
    auto out = open_out(art.probability_path);
    out << "accession\tgroup_id\tprobability\n";
    for (int k = 0; k < graph.protein_count(); ++k) {
      out << graph.proteins[k].accession << "\t" << group_of[k] << "\t"
          << fmt(group_score[k]) << "\n";
    }
  }
  {
    auto out = open_out(art.groups_path);
    out << "accession\tgroup_id\tscore\tlabel\n";
    for (int k = 0; k < graph.protein_count(); ++k) {
      out << graph.proteins[k].accession << "\t" << group_of[k] << "\t"
          << fmt(group_score[k]) << "\t" << (labels[k] ? "TP" : "FP") << "\n";
    }
  }
  {
    auto out = open_out(art.curve_path);
    emit_curve(curve, out);
  }
  {
    nlohmann::json summary;
    summary["spectra"] = graph.spectrum_count();
    summary["peptides"] = graph.peptide_count();
    summary["proteins"] = graph.protein_count();
    summary["membership_edges"] = graph.edge_count();
    summary["components"] = components.size();
    summary["dropped_proteins"] = build_summary.dropped_proteins;
    summary["groups"] = groups.size();
    summary["method"] = method_name(config.method);
    summary["weighting"] = weighting_name(config.weighting);
    summary["calibration"] =
        config.calibration == Calibration::Em ? "em" : "normalize";
    summary["reference"] = reference.describe();
    if (config.method == Method::LinearProgram) {
      summary["lp_objective"] = lp_objective;
      summary["lp_iterations"] = lp_iterations;
    }
    if (config.calibration == Calibration::Em) {
      summary["em_iterations"] = em_iterations;
      summary["em_converged"] = em_converged;
    }
    auto out = open_out(art.summary_path);
    out << summary.dump(2) << "\n";
  }
  return art;
}

namespace {

struct LoadedRun {
  std::string reference;
  EvaluationCurve curve;
};

LoadedRun load_run(const std::string& dir) {
  LoadedRun run;
  std::filesystem::path p(dir);
  {
    std::ifstream in(p / "summary.json");
    if (!in) {
      throw Error(Errc::IoFailure,
                  "cannot open '" + (p / "summary.json").string() + "'");
    }
    nlohmann::json j;
    in >> j;
    run.reference = j.at("reference").get<std::string>();
  }
  std::ifstream in(p / "curve.csv");
  if (!in) {
    throw Error(Errc::IoFailure,
                "cannot open '" + (p / "curve.csv").string() + "'");
  }
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurvePoint pt;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row >> pt.q >> pt.true_positives >> pt.threshold;
    run.curve.points.push_back(pt);
  }
  return run;
}

}  // namespace

std::string compare_runs(const std::string& run_a_dir,
                         const std::string& run_b_dir) {
  LoadedRun a = load_run(run_a_dir);
  LoadedRun b = load_run(run_b_dir);
  if (a.reference != b.reference) {
    throw Error(Errc::MismatchedReference,
                "runs were evaluated against different references (" +
                    a.reference + " vs " + b.reference + ")");
  }
  static const double kGrid[] = {0.0, 0.01, 0.05, 0.1};
  std::ostringstream out;
  out << "q_value\ttp_run_a\ttp_run_b\n";
  char buf[64];
  for (double q : kGrid) {
    std::snprintf(buf, sizeof(buf), "%.2f\t%ld\t%ld", q,
                  true_positives_at_q(a.curve, q),
                  true_positives_at_q(b.curve, q));
    out << buf << "\n";
  }
  return out.str();
}

}  // namespace pqi
