#include "fairkit/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fairkit/audit.hpp"
#include "fairkit/csv.hpp"
#include "fairkit/joint.hpp"
#include "fairkit/massage.hpp"
#include "fairkit/metrics.hpp"
#include "fairkit/postprocess.hpp"
#include "fairkit/repair.hpp"
#include "fairkit/routing.hpp"
#include "fairkit/smote.hpp"
#include "fairkit/synthetic.hpp"
#include "fairkit/trainer.hpp"
#include "vendor/json.hpp"

namespace fairkit {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << content;
}

GeneratorConfig generator_from(const Config& config, std::uint64_t seed) {
  GeneratorConfig gen;
  gen.n_rows = static_cast<std::size_t>(config.get_int_or("data", "n_rows", 1000));
  gen.base_positive_rate = config.get_double_or("data", "base_positive_rate", 0.6);
  gen.bias_strength = config.get_double_or("data", "bias_strength", 0.3);
  gen.proxy_correlation = config.get_double_or("data", "proxy_correlation", 0.8);
  gen.noise_features = static_cast<int>(config.get_int_or("data", "noise_features", 2));
  gen.seed = seed;
  return gen;
}

TrainerSpec trainer_from(const Config& config, std::uint64_t seed) {
  TrainerSpec spec;
  spec.kind = parse_trainer_kind(config.get_or("train", "classifier", "logistic"));
  spec.logistic.learning_rate = config.get_double_or("train", "learning_rate", 0.5);
  spec.logistic.epochs = static_cast<std::size_t>(config.get_int_or("train", "epochs", 300));
  spec.logistic.l2 = config.get_double_or("train", "l2", 1e-4);
  spec.logistic.seed = seed;
  spec.logistic.include_protected = config.get_bool_or("train", "include_protected", false);
  spec.prejudice.eta = config.get_double_or("train", "eta", 1.0);
  spec.prejudice.clamp_floor = config.get_double_or("train", "clamp_floor", 1e-9);
  spec.adversarial.hidden = static_cast<std::size_t>(config.get_int_or("train", "hidden", 8));
  spec.adversarial.lambda = config.get_double_or("train", "lambda", 1.0);
  spec.adversarial.learning_rate = config.get_double_or("train", "learning_rate", 0.5);
  spec.adversarial.epochs = static_cast<std::size_t>(config.get_int_or("train", "epochs", 300));
  spec.adversarial.seed = seed;
  spec.naive_bayes.alpha = config.get_double_or("train", "alpha", 1.0);
  spec.naive_bayes.numeric_bins = static_cast<int>(config.get_int_or("train", "bins", 8));
  return spec;
}

struct StageError : std::runtime_error {
  StageError(std::string stage_name, const Error& cause)
      : std::runtime_error(cause.what()), stage(std::move(stage_name)), code(cause.code()) {}
  std::string stage;
  Errc code;
};

struct ExecuteOutcome {
  FairnessReport report;
  std::optional<double> audit_change_rate;
};

// One full pipeline run into one output directory. Throws StageError with the
// failing stage attached.
ExecuteOutcome execute(const Config& config, std::uint64_t seed, const fs::path& out_dir,
                       bool verbose) {
  WarningLog warnings;
  std::vector<std::string> stages;
  nlohmann::json knobs = nlohmann::json::object();
  std::vector<std::string> outputs;
  auto note = [&](const std::string& stage) {
    stages.push_back(stage);
    if (verbose) std::cout << "stage: " << stage << '\n';
  };
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text(out_dir / name, content);
    outputs.push_back(name);
  };

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create output directory '" + out_dir.string() + "'");

  // ingest
  Dataset data = [&] {
    note("ingest");
    try {
      const std::string source = config.get_or("data", "source", "generate");
      if (source == "generate") return generate_synthetic(generator_from(config, seed));
      if (source == "csv") {
        const Schema schema = load_schema(config.get("data", "schema"));
        return load_csv(config.get("data", "path"), schema);
      }
      throw Error(Errc::invalid_config, "data source must be 'generate' or 'csv'");
    } catch (const Error& e) {
      throw StageError("ingest", e);
    }
  }();

  // preprocess
  std::string pre_method = config.get_or("preprocess", "method", "none");
  Dataset eval_data = data;
  Dataset repaired = data;
  try {
    if (pre_method == "massage") {
      note("preprocess:massage");
      MassageResult result = massage(data, &warnings);
      repaired = std::move(result.repaired);
      knobs["massage_m"] = result.plan.m;
      emit("plan.json", result.plan.to_json());
    } else if (pre_method == "optimize") {
      note("preprocess:optimize");
      const int bins = static_cast<int>(config.get_int_or("preprocess", "bins", 8));
      BinningInfo binfo;
      eval_data = bin_numeric_columns(data, bins, &binfo);
      std::vector<std::string> feature_names;
      for (std::size_t c : eval_data.schema().feature_indices())
        feature_names.push_back(eval_data.schema().columns[c].name);
      JointDistribution joint = empirical_joint(eval_data, feature_names);

      OptimizeConfig opt;
      opt.epsilon = config.get_double_or("preprocess", "epsilon", 0.05);
      if (config.has("preprocess", "distortion_budget"))
        opt.distortion_budget = config.get_double("preprocess", "distortion_budget");
      opt.solver_tolerance = config.get_double_or("preprocess", "solver_tolerance", 1e-6);
      opt.max_iterations =
          static_cast<std::size_t>(config.get_int_or("preprocess", "max_iterations", 60000));
      opt.seed = seed;
      if (!opt.distortion_budget)
        throw Error(Errc::invalid_config,
                    "[preprocess] optimize needs distortion_budget; there is no neutral "
                    "default and the value shapes the repair, so it must be chosen");
      std::cerr << "note: distortion_budget = " << *opt.distortion_budget
                << " caps how far each record may move; the repair depends on it materially "
                   "and the value is recorded in report.json\n";
      SolveResult solved = solve_repair_map(joint, opt);
      for (const auto& w : solved.warnings) warnings.push_back(w);
      repaired = apply_repair(eval_data, joint, solved.map, seed);
      knobs["epsilon"] = opt.epsilon;
      knobs["distortion_budget"] = *opt.distortion_budget;
      knobs["repair_objective"] = solved.objective;
      knobs["repair_converged"] = solved.converged;
      if (!binfo.edges.empty()) {
        nlohmann::json edges = nlohmann::json::object();
        for (const auto& [name, e] : binfo.edges) edges[name] = e;
        knobs["bin_edges"] = std::move(edges);
      }
      emit("map.json", solved.map.to_json(joint));
    } else if (pre_method == "smote") {
      note("preprocess:smote");
      const std::string pv = config.get("preprocess", "protected_value");
      const std::string lv = config.get("preprocess", "label_value");
      const std::size_t count =
          static_cast<std::size_t>(config.get_int("preprocess", "count"));
      const std::size_t k = static_cast<std::size_t>(config.get_int_or("preprocess", "k", 5));
      repaired = smote_augment(data, k, pv, lv, count, seed, &warnings);
      knobs["smote_count"] = count;
      knobs["smote_k"] = k;
      emit("augmented.csv", csv_to_text(repaired));
    } else if (pre_method != "none") {
      throw Error(Errc::invalid_config, "unknown preprocess method '" + pre_method + "'");
    }
    if (pre_method == "massage" || pre_method == "optimize")
      emit("repaired.csv", csv_to_text(repaired));
  } catch (const Error& e) {
    throw StageError("preprocess", e);
  }

  // train
  std::unique_ptr<Model> model;
  TrainerSpec trainer = trainer_from(config, seed);
  std::vector<double> scores;
  try {
    if (config.has_section("train")) {
      note(std::string("train:") + to_string(trainer.kind));
      model = train_model(repaired, trainer);
      scores = model->score(eval_data, &warnings);
      emit("model.json", model->to_json());
      if (trainer.kind == TrainerSpec::Kind::prejudice_remover) knobs["eta"] = trainer.prejudice.eta;
      if (trainer.kind == TrainerSpec::Kind::adversarial)
        knobs["lambda"] = trainer.adversarial.lambda;
    }
  } catch (const Error& e) {
    throw StageError("train", e);
  }

  // postprocess
  std::optional<Decisions> final_decisions;
  std::string post_method = config.get_or("postprocess", "method", "none");
  std::vector<std::pair<std::string, std::vector<double>>> score_columns;
  try {
    if (post_method == "reject_option") {
      if (!model)
        throw Error(Errc::invalid_config, "reject_option needs a [train] section");
      note("postprocess:reject_option");
      RejectOptionConfig ro;
      ro.theta = config.get_double_or("postprocess", "theta", 0.1);
      final_decisions = reject_option(scores, eval_data.groups01(), ro);
      knobs["theta"] = ro.theta;
      score_columns.emplace_back("raw_score", scores);
    } else if (post_method == "ensemble") {
      note("postprocess:ensemble");
      const auto names = config.get_list("postprocess", "classifiers");
      if (names.size() < 2)
        throw Error(Errc::fewer_than_two_classifiers,
                    "[postprocess] ensemble needs >= 2 classifiers");
      std::vector<std::vector<int>> decision_sets;
      for (const auto& name : names) {
        TrainerSpec member = trainer;
        member.kind = parse_trainer_kind(name);
        auto m = train_model(repaired, member);
        auto s = m->score(eval_data, &warnings);
        decision_sets.push_back(threshold_decisions(s));
        score_columns.emplace_back("score_" + name, std::move(s));
      }
      final_decisions = ensemble_disagreement(decision_sets, eval_data.groups01());
      // Consistency below needs one score per row; the committee's decision is
      // the only single-valued output it has.
      scores.assign(final_decisions->decisions.begin(), final_decisions->decisions.end());
      knobs["ensemble"] = names;
    } else if (post_method != "none") {
      throw Error(Errc::invalid_config, "unknown postprocess method '" + post_method + "'");
    } else if (model) {
      final_decisions = Decisions{threshold_decisions(scores),
                                  std::vector<std::uint8_t>(scores.size(), 0)};
      score_columns.emplace_back("raw_score", scores);
    }
  } catch (const Error& e) {
    throw StageError("postprocess", e);
  }

  // metrics
  ExecuteOutcome outcome;
  try {
    note("metrics");
    const std::size_t k = static_cast<std::size_t>(config.get_int_or("run", "knn_k", 5));
    if (final_decisions)
      outcome.report = prediction_report(eval_data, scores, final_decisions->decisions, k,
                                         &warnings);
    else
      outcome.report = dataset_report(repaired, k, &warnings);
  } catch (const Error& e) {
    throw StageError("metrics", e);
  }

  // decisions.csv
  if (final_decisions) {
    std::ostringstream csv;
    csv << "row_id";
    for (const auto& [name, _] : score_columns) csv << ',' << name;
    csv << ",decision,intervened\n";
    csv.precision(17);
    for (std::size_t r = 0; r < eval_data.n_rows(); ++r) {
      csv << eval_data.row_ids()[r];
      for (const auto& [_, col] : score_columns) csv << ',' << col[r];
      csv << ',' << final_decisions->decisions[r] << ','
          << static_cast<int>(final_decisions->intervened[r]) << '\n';
    }
    emit("decisions.csv", csv.str());
  }

  // audit
  if (config.get_bool_or("audit", "enabled", false)) {
    note("audit");
    try {
      const std::size_t k = static_cast<std::size_t>(config.get_int_or("audit", "k", 5));
      std::size_t n_probes = eval_data.n_rows();
      if (config.get_or("audit", "probes", "all") == "first_n")
        n_probes = std::min<std::size_t>(
            n_probes, static_cast<std::size_t>(config.get_int_or("audit", "n_probes", 25)));
      std::vector<Record> probes;
      for (std::size_t r = 0; r < n_probes; ++r) probes.push_back(eval_data.record(r));
      AuditSweepResult audit = audit_sweep(eval_data, repaired, probes, k, trainer);
      std::ostringstream lines;
      for (const auto& f : audit.findings) lines << f.to_json() << '\n';
      emit("audit_findings.jsonl", lines.str());
      emit("audit_summary.json", audit.summary.to_json());
      outcome.audit_change_rate = audit.summary.decision_change_rate;
    } catch (const Error& e) {
      throw StageError("audit", e);
    }
  }

  // simulate
  if (config.get_bool_or("simulate", "enabled", false)) {
    note("simulate");
    try {
      RoutingConfig rc;
      rc.consent_rate = config.get_double_or("simulate", "consent_rate", 1.0);
      rc.ai_fraction_cap = config.get_double_or("simulate", "ai_fraction_cap", 1.0);
      const std::string hm = config.get_or("simulate", "human_model", "group_rates");
      if (hm == "group_rates") {
        rc.human.kind = HumanModel::Kind::group_rates;
        rc.human.rate_privileged = config.get_double_or("simulate", "rate_privileged", 0.5);
        rc.human.rate_unprivileged = config.get_double_or("simulate", "rate_unprivileged", 0.5);
      } else if (hm == "truth_agreement") {
        rc.human.kind = HumanModel::Kind::truth_agreement;
        rc.human.error_rate = config.get_double_or("simulate", "error_rate", 0.0);
      } else {
        throw Error(Errc::invalid_config, "unknown human_model '" + hm + "'");
      }
      rc.seed = seed;
      RoutingResult routed =
          model ? simulate(eval_data, *model, rc) : simulate_without_model(eval_data, rc);
      BlindnessReport blind = verify_blindness(routed);
      nlohmann::json j = nlohmann::json::parse(routed.to_json());
      j["blindness"] = nlohmann::json::parse(blind.to_json());
      emit("routing.json", j.dump(2));
      std::ostringstream trace;
      for (const auto& m : routed.matters) {
        nlohmann::json t;
        t["row_id"] = m.row_id;
        t["consented"] = m.consented;
        t["routed_to_ai"] = m.routed_to_ai;
        if (m.ai_decision) t["ai_decision"] = *m.ai_decision;
        t["final_decision"] = m.final_decision;
        t["re_evaluated"] = m.re_evaluated;
        t["final_by"] = m.final_by == DecidedBy::ai ? "ai" : "human";
        trace << t.dump() << '\n';
      }
      emit("routing_trace.jsonl", trace.str());
      knobs["consent_rate"] = rc.consent_rate;
      knobs["ai_fraction_cap"] = rc.ai_fraction_cap;
    } catch (const Error& e) {
      throw StageError("simulate", e);
    }
  }

  // report.json: the metric block plus every fairness knob this run used.
  nlohmann::json report = nlohmann::json::parse(outcome.report.to_json());
  report["knobs"] = knobs;
  report["stages"] = stages;
  report["warnings"] = warnings;
  emit("report.json", report.dump(2));

  // manifest.json: everything needed to re-run; the timestamp lives here and
  // only here.
  nlohmann::json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["seed"] = seed;
  manifest["config_text"] = config.to_text();
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_text(out_dir / "manifest.json", manifest.dump(2));

  return outcome;
}

int fail_line(const std::string& stage, Errc code, const std::string& message) {
  nlohmann::json j;
  j["error"] = errc_name(code);
  j["stage"] = stage;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return (code == Errc::config_parse || code == Errc::invalid_config) ? kExitConfigError
                                                                      : kExitStageFailure;
}

std::uint64_t effective_seed(const Config& config, const PipelineOptions& options) {
  if (options.seed_override) return *options.seed_override;
  return static_cast<std::uint64_t>(config.get_int_or("run", "seed", 0));
}

}  // namespace

int run_pipeline(const Config& config, const PipelineOptions& options) {
  try {
    execute(config, effective_seed(config, options), options.out_dir, options.verbose);
    return kExitOk;
  } catch (const StageError& e) {
    return fail_line(e.stage, e.code, e.what());
  } catch (const Error& e) {
    return fail_line("setup", e.code(), e.what());
  }
}

namespace {

// Derives the per-stack config: one intervention per stack name, everything
// else inherited from the base config.
Config stack_config(const Config& base, const std::string& stack) {
  Config cleaned;
  for (const auto& section : base.section_names()) {
    if (section == "sweep" || section == "preprocess" || section == "postprocess") continue;
    for (const auto& [k, v] : base.entries(section)) cleaned.set(section, k, v);
  }
  auto copy_section = [&](const std::string& from, const std::string& to) {
    for (const auto& [k, v] : base.entries(from))
      if (k != "method") cleaned.set(to, k, v);
  };
  if (stack == "none") {
    // baseline: no intervention
  } else if (stack == "massage" || stack == "optimize" || stack == "smote") {
    copy_section("preprocess", "preprocess");
    cleaned.set("preprocess", "method", stack);
  } else if (stack == "reject_option" || stack == "ensemble") {
    copy_section("postprocess", "postprocess");
    cleaned.set("postprocess", "method", stack);
  } else if (stack == "prejudice_remover" || stack == "adversarial") {
    cleaned.set("train", "classifier", stack);
  } else {
    throw Error(Errc::invalid_config, "unknown sweep stack '" + stack + "'");
  }
  if (!cleaned.has_section("train")) cleaned.set("train", "classifier", "logistic");
  cleaned.set("audit", "enabled", "true");
  return cleaned;
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

int compare_interventions(const Config& config, const PipelineOptions& options) {
  std::vector<std::string> stacks;
  try {
    stacks = config.get_list("sweep", "stacks");
    if (stacks.size() < 2)
      throw Error(Errc::invalid_config, "[sweep] stacks needs at least 2 entries");
  } catch (const Error& e) {
    return fail_line("setup", e.code(), e.what());
  }

  std::ostringstream csv;
  csv << "stack,accuracy,disparate_impact_ratio,statistical_parity_difference,consistency,"
         "audit_decision_change_rate\n";
  const std::uint64_t seed = effective_seed(config, options);
  for (const auto& stack : stacks) {
    try {
      const Config derived = stack_config(config, stack);
      const fs::path dir = fs::path(options.out_dir) / stack;
      ExecuteOutcome outcome = execute(derived, seed, dir, options.verbose);
      csv << stack << ',' << (outcome.report.accuracy ? format_double(*outcome.report.accuracy)
                                                      : std::string("")) << ','
          << format_double(outcome.report.disparate_impact_ratio) << ','
          << format_double(outcome.report.statistical_parity_difference) << ','
          << format_double(outcome.report.consistency) << ','
          << (outcome.audit_change_rate ? format_double(*outcome.audit_change_rate)
                                        : std::string("")) << '\n';
    } catch (const StageError& e) {
      return fail_line(stack + "/" + e.stage, e.code, e.what());
    } catch (const Error& e) {
      return fail_line(stack, e.code(), e.what());
    }
  }
  try {
    write_text(fs::path(options.out_dir) / "comparison.csv", csv.str());
  } catch (const Error& e) {
    return fail_line("write", e.code(), e.what());
  }
  return kExitOk;
}

}  // namespace fairkit
