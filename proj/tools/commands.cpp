#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "wordclust/cluster.hpp"
#include "wordclust/corpus.hpp"
#include "wordclust/errors.hpp"
#include "wordclust/format.hpp"
#include "wordclust/patterns.hpp"
#include "wordclust/synthetic.hpp"

namespace wordclust::cli {

namespace {

namespace fs = std::filesystem;

struct ScheduleFlags {
  std::uint64_t seed = 0;
  std::string criterion = "mdl";
  double t_init = 1.0;
  double cool = 0.9;
  int window_mult = 10;

  void add_to(CLI::App& cmd, bool with_criterion) {
    cmd.add_option("--seed", seed, "Random seed (default 0)");
    if (with_criterion) cmd.add_option("--criterion", criterion, "mdl or mle")->capture_default_str();
    cmd.add_option("--t-init", t_init, "Initial annealing temperature")->capture_default_str();
    cmd.add_option("--cool", cool, "Cooling factor in (0,1)")->capture_default_str();
    cmd.add_option("--window-mult", window_mult, "Trials per window = window-mult * |N|")->capture_default_str();
  }

  AnnealConfig config(Criterion c) const {
    AnnealConfig cfg{seed, t_init, cool, window_mult, c};
    cfg.validate();
    return cfg;
  }

  void record(nlohmann::json& j) const {
    j["seed"] = seed;
    j["t_init"] = t_init;
    j["cool"] = cool;
    j["window_mult"] = window_mult;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

fs::path manifest_path(const fs::path& output, const std::string& flag) {
  return flag.empty() ? fs::path(output.string() + ".manifest.json") : fs::path(flag);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------- cluster

struct ClusterFlags {
  std::string input;
  std::string output;
  std::string report;
  std::string manifest;
  bool parallel = false;
  ScheduleFlags schedule;
};

int cmd_cluster(const ClusterFlags& f) {
  RunManifest manifest("cluster");
  AnnealConfig config = f.schedule.config(parse_criterion(f.schedule.criterion));
  CoocData data = load_cooc(f.input);
  manifest.add_input(f.input);

  ThesaurusTree tree = build_tree(data, config, BuildOptions{f.parallel});
  write_text(f.output, tree.serialize() + "\n");
  manifest.add_output(f.output);

  auto lengths = tree_description_lengths(tree, data);
  DescriptionLength sum;
  for (const auto& n : lengths) {
    sum.l_mod += n.dl.l_mod;
    sum.l_par += n.dl.l_par;
    sum.l_dat += n.dl.l_dat;
  }
  sum.l_prime = sum.l_par + sum.l_dat;
  sum.l_total = sum.l_mod + sum.l_prime;

  if (!f.report.empty()) {
    std::ostringstream csv;
    csv << "node,num_nouns,l_mod,l_par,l_dat,l_prime,l_total\n";
    for (const auto& n : lengths)
      csv << n.label << ',' << n.num_nouns << ',' << format_fixed(n.dl.l_mod) << ',' << format_fixed(n.dl.l_par)
          << ',' << format_fixed(n.dl.l_dat) << ',' << format_fixed(n.dl.l_prime) << ','
          << format_fixed(n.dl.l_total) << '\n';
    write_text(f.report, csv.str());
    manifest.add_output(f.report);
  }

  auto& cfg = manifest.config();
  cfg["input"] = f.input;
  cfg["output"] = f.output;
  cfg["criterion"] = std::string(criterion_name(config.criterion));
  cfg["parallel"] = f.parallel;
  f.schedule.record(cfg);
  manifest.write(manifest_path(f.output, f.manifest));

  std::cerr << "wordclust cluster: " << data.num_nouns() << " nouns, " << tree.leaves().size()
            << " leaves, summed split l_total " << format_fixed(sum.l_total) << " bits\n";
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  std::string model;
  std::vector<std::int64_t> sizes{50, 100, 200, 400, 800, 1600, 3200};
  int trials = 10;
  std::string out_csv;
  std::string agg_csv;
  std::string criteria = "mdl,mle";
  double clamp = kDefaultKlClamp;
  std::string manifest;
  bool parallel = false;
  ScheduleFlags schedule;
};

int cmd_synth(const SynthFlags& f) {
  RunManifest manifest("synth");
  TrueModel model = f.model.empty() ? default_true_model() : load_true_model(f.model);
  if (!f.model.empty()) manifest.add_input(f.model);
  if (!(f.clamp > 0)) throw ConfigError("--clamp must be positive");

  ExperimentOptions options;
  options.sizes = f.sizes;
  options.trials = f.trials;
  options.seed = f.schedule.seed;
  options.kl_clamp = f.clamp;
  options.parallel = f.parallel;
  options.configs.clear();
  for (const auto& name : split_commas(f.criteria)) options.configs.push_back(f.schedule.config(parse_criterion(name)));
  if (options.configs.empty()) throw ConfigError("--criteria names no criterion");

  auto records = run_convergence_experiment(model, options);
  auto summary = summarize(records);

  fs::path agg = f.agg_csv.empty() ? sibling(f.out_csv, ".mean.csv") : fs::path(f.agg_csv);
  std::ostringstream rows, means;
  write_records_csv(rows, records);
  write_summary_csv(means, summary, f.clamp);
  write_text(f.out_csv, rows.str());
  write_text(agg, means.str());
  manifest.add_output(f.out_csv);
  manifest.add_output(agg);

  auto& cfg = manifest.config();
  cfg["model"] = f.model.empty() ? "builtin-default" : f.model;
  cfg["sizes"] = f.sizes;
  cfg["trials"] = f.trials;
  cfg["criteria"] = f.criteria;
  cfg["kl_clamp"] = f.clamp;
  cfg["parallel"] = f.parallel;
  f.schedule.record(cfg);
  manifest.write(manifest_path(f.out_csv, f.manifest));

  std::cerr << "wordclust synth: " << records.size() << " records (kl clamp " << format_significant(f.clamp)
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------- patterns

struct PatternFlags {
  std::string tree;
  std::string samples;
  std::string output;
  std::string manifest;
};

int cmd_patterns(const PatternFlags& f) {
  RunManifest manifest("patterns");
  ThesaurusTree tree = ThesaurusTree::load(f.tree);
  auto samples = load_slot_samples(f.samples);
  if (samples.empty()) throw EmptyDataError(f.samples + ": no slot samples");
  manifest.add_input(f.tree);
  manifest.add_input(f.samples);

  PatternSet patterns = learn_patterns(tree, samples);
  std::ostringstream dump;
  write_patterns(dump, patterns);
  write_text(f.output, dump.str());
  manifest.add_output(f.output);

  manifest.config() = {{"tree", f.tree}, {"samples", f.samples}, {"output", f.output}};
  manifest.write(manifest_path(f.output, f.manifest));
  std::cerr << "wordclust patterns: " << patterns.patterns().size() << " (head, prep) patterns\n";
  return 0;
}

// ---------------------------------------------------------------- disambiguate

struct DisambiguateFlags {
  std::string tuples;
  std::string chain;
  std::string tree;
  std::string ext_tree;
  std::string samples;
  std::string patterns;
  std::string ext_patterns;
  std::string assoc;
  std::string decisions;
  std::string report;
  std::string stage_report;
  std::string manifest;
};

int cmd_disambiguate(const DisambiguateFlags& f) {
  RunManifest manifest("disambiguate");
  auto stage_names = split_commas(f.chain);
  if (stage_names.empty()) throw ConfigError("--chain is empty");

  // Validate the whole chain before touching any file.
  for (const auto& name : stage_names) {
    if (name == "auto") {
      if (f.tree.empty() || (f.patterns.empty() && f.samples.empty()))
        throw ConfigError("stage 'auto' needs --tree and --patterns or --samples");
    } else if (name == "external") {
      if (f.ext_tree.empty() || (f.ext_patterns.empty() && f.samples.empty()))
        throw ConfigError("stage 'external' needs --ext-tree and --ext-patterns or --samples");
    } else if (name == "la") {
      if (f.assoc.empty()) throw ConfigError("stage 'la' needs --assoc");
    } else if (name != "default") {
      throw ConfigError("unknown stage '" + name + "' (expected auto, external, la, default)");
    }
  }

  auto tuples = load_tuples(f.tuples);
  if (tuples.empty()) throw EmptyDataError(f.tuples + ": no test tuples");
  manifest.add_input(f.tuples);

  std::optional<std::vector<SlotSample>> samples;
  auto training = [&]() -> const std::vector<SlotSample>& {
    if (!samples) {
      samples = load_slot_samples(f.samples);
      manifest.add_input(f.samples);
    }
    return *samples;
  };

  std::optional<ThesaurusTree> auto_tree, ext_tree;
  std::optional<PatternSet> auto_patterns, ext_patterns;
  std::optional<AssocCounts> assoc;
  std::vector<Decider> chain;
  for (const auto& name : stage_names) {
    if (name == "auto" && !auto_patterns) {
      auto_tree = ThesaurusTree::load(f.tree);
      manifest.add_input(f.tree);
      if (!f.patterns.empty()) {
        auto_patterns = load_patterns(f.patterns, *auto_tree);
        manifest.add_input(f.patterns);
      } else {
        auto_patterns = learn_patterns(*auto_tree, training());
      }
      chain.push_back(thesaurus_stage(*auto_patterns, Stage::AutoThesaurus));
    } else if (name == "external" && !ext_patterns) {
      ext_tree = ThesaurusTree::load(f.ext_tree);
      manifest.add_input(f.ext_tree);
      if (!f.ext_patterns.empty()) {
        ext_patterns = load_patterns(f.ext_patterns, *ext_tree);
        manifest.add_input(f.ext_patterns);
      } else {
        ext_patterns = learn_patterns(*ext_tree, training());
      }
      chain.push_back(thesaurus_stage(*ext_patterns, Stage::ExternalThesaurus));
    } else if (name == "la" && !assoc) {
      assoc = AssocCounts(load_slot_samples(f.assoc));
      manifest.add_input(f.assoc);
      chain.push_back(lexical_stage(*assoc));
    } else if (name == "default") {
      chain.push_back(default_stage());
    }
  }

  EvalReport report = evaluate(tuples, chain);
  fs::path stages = f.stage_report.empty() ? sibling(f.report, ".stages.csv") : fs::path(f.stage_report);
  std::ostringstream decisions, summary, per_stage;
  write_decisions_tsv(decisions, tuples, report);
  write_report_csv(summary, f.chain, report);
  write_stage_csv(per_stage, report);
  write_text(f.decisions, decisions.str());
  write_text(f.report, summary.str());
  write_text(stages, per_stage.str());
  manifest.add_output(f.decisions);
  manifest.add_output(f.report);
  manifest.add_output(stages);

  manifest.config() = {{"chain", f.chain},       {"tuples", f.tuples},     {"tree", f.tree},
                       {"ext_tree", f.ext_tree}, {"samples", f.samples},   {"patterns", f.patterns},
                       {"ext_patterns", f.ext_patterns}, {"assoc", f.assoc}};
  manifest.write(manifest_path(f.report, f.manifest));

  std::cerr << "wordclust disambiguate: coverage " << format_significant(report.coverage) << "%, accuracy "
            << (report.accuracy ? format_significant(*report.accuracy) + "%" : std::string("n/a")) << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"MDL hierarchical word clustering and tree-cut PP-attachment disambiguation"};
  app.name("wordclust");
  app.require_subcommand(1);

  ClusterFlags cluster;
  auto* c = app.add_subcommand("cluster", "Build a thesaurus tree from verb-noun co-occurrences");
  c->add_option("--input", cluster.input, "Co-occurrence TSV (verb, noun, count)")->required();
  c->add_option("--output", cluster.output, "Tree file to write")->required();
  c->add_option("--report", cluster.report, "Optional per-split description length CSV");
  c->add_option("--manifest", cluster.manifest, "Manifest path (default <output>.manifest.json)");
  c->add_flag("--parallel", cluster.parallel, "Recurse into subtrees concurrently");
  cluster.schedule.add_to(*c, true);

  SynthFlags synth;
  auto* s = app.add_subcommand("synth", "MDL vs MLE convergence experiment on a synthetic true model");
  s->add_option("--model", synth.model, "True model file (default: built-in 4-cluster model)");
  s->add_option("--sizes", synth.sizes, "Ascending sample sizes")->delimiter(',')->capture_default_str();
  s->add_option("--trials", synth.trials, "Trials per size")->capture_default_str();
  s->add_option("--criteria", synth.criteria, "Comma-separated criteria")->capture_default_str();
  s->add_option("--clamp", synth.clamp, "Lower clamp on estimated probabilities in KL");
  s->add_option("--out-csv", synth.out_csv, "Per-trial records CSV")->required();
  s->add_option("--agg-csv", synth.agg_csv, "Means CSV (default <out-csv>.mean.csv)");
  s->add_option("--manifest", synth.manifest, "Manifest path (default <out-csv>.manifest.json)");
  s->add_flag("--parallel", synth.parallel, "Run trials concurrently");
  synth.schedule.add_to(*s, false);

  PatternFlags patterns;
  auto* p = app.add_subcommand("patterns", "Learn tree-cut case-frame patterns");
  p->add_option("--tree", patterns.tree, "Thesaurus tree file")->required();
  p->add_option("--samples", patterns.samples, "Slot-sample TSV (head, prep, filler, count)")->required();
  p->add_option("--output", patterns.output, "Pattern dump to write")->required();
  p->add_option("--manifest", patterns.manifest, "Manifest path (default <output>.manifest.json)");

  DisambiguateFlags dis;
  auto* d = app.add_subcommand("disambiguate", "PP-attachment decisions with a backoff chain");
  d->add_option("--tuples", dis.tuples, "Test tuples TSV")->required();
  d->add_option("--chain", dis.chain, "Stages, comma-separated: auto, external, la, default")->required();
  d->add_option("--tree", dis.tree, "Automatically built thesaurus (stage auto)");
  d->add_option("--ext-tree", dis.ext_tree, "Hand-made thesaurus (stage external)");
  d->add_option("--samples", dis.samples, "Training slot samples for learning patterns");
  d->add_option("--patterns", dis.patterns, "Pattern dump for --tree instead of learning");
  d->add_option("--ext-patterns", dis.ext_patterns, "Pattern dump for --ext-tree instead of learning");
  d->add_option("--assoc", dis.assoc, "Slot samples used for lexical association (stage la)");
  d->add_option("--decisions", dis.decisions, "Per-tuple decisions TSV")->required();
  d->add_option("--report", dis.report, "Coverage/accuracy CSV")->required();
  d->add_option("--stage-report", dis.stage_report, "Per-stage CSV (default <report>.stages.csv)");
  d->add_option("--manifest", dis.manifest, "Manifest path (default <report>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "wordclust: " << e.what() << '\n';
    return 1;
  }

  try {
    if (c->parsed()) return cmd_cluster(cluster);
    if (s->parsed()) return cmd_synth(synth);
    if (p->parsed()) return cmd_patterns(patterns);
    if (d->parsed()) return cmd_disambiguate(dis);
  } catch (const ParseError& e) {
    std::cerr << "wordclust: " << e.what() << '\n';
    return 1;
  } catch (const EmptyDataError& e) {
    std::cerr << "wordclust: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "wordclust: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wordclust: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace wordclust::cli
