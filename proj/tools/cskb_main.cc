// Copyright 2026 The CSKB Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: build resources from generation records, query
// them, run evaluations and diagnostics, write snapshots and serve the API.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cskb/annotation_io.h"
#include "cskb/diagnostics.h"
#include "cskb/embedding_client.h"
#include "cskb/error.h"
#include "cskb/evaluate.h"
#include "cskb/ingest.h"
#include "cskb/pipeline.h"
#include "cskb/query.h"
#include "cskb/server.h"
#include "cskb/snapshot.h"
#include "cskb/text.h"
#include "cskb/verbalize.h"

namespace {

using namespace cskb;

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  return out;
}

void PrintReport(const std::string& what, const IngestReport& report,
                 std::size_t max_rows = 20) {
  std::cerr << what << ": " << report.records_read << " read, "
            << report.records_rejected << " rejected\n";
  for (std::size_t i = 0; i < report.rejections.size() && i < max_rows; ++i) {
    std::cerr << "  line " << report.rejections[i].line << ": "
              << report.rejections[i].reason << "\n";
  }
  if (report.rejections.size() > max_rows) {
    std::cerr << "  ... " << report.rejections.size() - max_rows << " more\n";
  }
}

// Where resources come from: snapshots and/or NAME=PATH assertion tables.
struct Sources {
  std::vector<std::string> snapshots;
  std::vector<std::string> tables;

  void Register(CLI::App* cmd) {
    cmd->add_option("-s,--snapshot", snapshots, "Snapshot file (repeatable)")
        ->envname("CSKB_SNAPSHOT")
        ->delimiter(',')
        ->allow_extra_args(false);
    cmd->add_option("-t,--table", tables,
                    "Assertion TSV as NAME=PATH (repeatable)")
        ->envname("CSKB_TABLE")
        ->delimiter(',')
        ->allow_extra_args(false);
  }

  Catalog Load() const {
    Catalog catalog;
    for (const std::string& path : snapshots) {
      Catalog loaded = LoadSnapshot(path);
      for (const auto& r : loaded.resources()) catalog.Add(r);
    }
    for (const std::string& table_arg : tables)
      catalog.Add(LoadTable(table_arg));
    if (catalog.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no resources: pass --snapshot or --table NAME=PATH");
    }
    return catalog;
  }

  static std::shared_ptr<const Resource> LoadTable(
      const std::string& table_arg) {
    std::size_t eq = table_arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--table expects NAME=PATH, got '" + table_arg + "'");
    }
    std::string name = table_arg.substr(0, eq);
    auto in = OpenInput(table_arg.substr(eq + 1));
    auto id = std::make_shared<const ResourceId>(
        ResourceId::Make(name, ResourceKind::kGenerated));
    AssertionTable table = ReadAssertionTable(in, id);
    PrintReport("table " + name, table.report, 5);
    bool all_scored = true;
    for (const Assertion& a : table.assertions)
      all_scored &= a.score.has_value();
    return BuildTableResource(
        std::move(table.assertions),
        ResourceId::Make(name, all_scored ? ResourceKind::kGenerated
                                          : ResourceKind::kTraining));
  }
};

const Resource& PickResource(const Catalog& catalog, const std::string& name) {
  if (!name.empty()) return catalog.Get(name);
  if (catalog.size() == 1) return *catalog.resources().front();
  throw Error(ErrorCode::kInvalidArgument,
              "several resources loaded; choose one with --resource");
}

TemplateTable LoadTemplates(const std::string& path) {
  TemplateTable table = TemplateTable::Defaults();
  if (!path.empty()) {
    auto in = OpenInput(path);
    std::stringstream buf;
    buf << in.rdbuf();
    table.ApplyOverrides(buf.str());
  }
  return table;
}

void PrintAssertion(const Assertion& a) {
  std::cout << a.global_rank << '\t' << a.subject << '\t'
            << PredicateName(a.predicate) << '\t' << a.object << '\t'
            << (a.score ? FormatScore(*a.score) : "-") << '\t' << a.local_rank
            << '\t' << (a.resource ? a.resource->name : "") << '\n';
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  for (std::string_view f : SplitFields(text, ',')) {
    if (!f.empty()) out.push_back(std::stod(std::string(f)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Materialized commonsense knowledge bases: build, query, "
      "evaluate and serve"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_format, ingest_path;
  auto* ingest = app.add_subcommand("ingest",
                                    "Validate an input file and "
                                    "print its ingest report");
  ingest->add_option("--format", ingest_format)
      ->required()
      ->check(CLI::IsMember({"generations", "assertions", "ground-truth",
                             "embeddings", "subjects"}));
  ingest->add_option("file", ingest_path)->required();

  // build
  std::string build_input, build_name, build_output, build_metadata,
      build_snapshot, build_training;
  std::uint32_t build_top_k = 10;
  unsigned build_threads = 1;
  bool build_drop_training = false;
  auto* build = app.add_subcommand(
      "build", "Score, deduplicate, truncate and rank generation records");
  build->add_option("-i,--input", build_input, "Generation records (JSONL)")
      ->required()
      ->envname("CSKB_INPUT");
  build->add_option("-n,--name", build_name, "Resource name")
      ->required()
      ->envname("CSKB_NAME");
  build->add_option("-o,--output", build_output, "Assertion TSV to write")
      ->required()
      ->envname("CSKB_OUTPUT");
  build->add_option("--metadata", build_metadata,
                    "Sidecar JSON (default: OUTPUT.meta.json)");
  build->add_option("--snapshot-out", build_snapshot, "Also write a snapshot");
  build->add_option("-k,--top-k", build_top_k, "Objects kept per pair")
      ->envname("CSKB_TOP_K")
      ->check(CLI::PositiveNumber);
  build->add_option("--threads", build_threads)
      ->envname("CSKB_THREADS")
      ->check(CLI::PositiveNumber);
  build->add_option("--training", build_training,
                    "Training assertion TSV for --drop-training-duplicates");
  build->add_flag("--drop-training-duplicates", build_drop_training);

  // select-subjects
  std::string select_table;
  std::size_t select_min = 2;
  auto* select = app.add_subcommand(
      "select-subjects",
      "Print subjects with at least --min assertions in a training table");
  select->add_option("table", select_table)->required();
  select->add_option("--min", select_min)->check(CLI::PositiveNumber);

  // Shared selection flags.
  std::string resource_name;
  auto add_resource = [&](CLI::App* cmd, Sources& sources) {
    sources.Register(cmd);
    cmd->add_option("-r,--resource", resource_name, "Resource name")
        ->envname("CSKB_RESOURCE");
  };

  Sources stats_src;
  std::uint32_t stats_top_n = 0;
  auto* stats = app.add_subcommand("stats", "Resource size and counts");
  add_resource(stats, stats_src);
  stats->add_option("--top-n", stats_top_n,
                    "Restrict to subject_rank <= N (e.g. 100 for Size@100)");

  Sources query_src;
  std::string query_subject, query_predicate;
  std::size_t query_k = 10;
  auto* query = app.add_subcommand("query", "Top assertions of a subject");
  add_resource(query, query_src);
  query->add_option("subject", query_subject)->required();
  query->add_option("-p,--predicate", query_predicate);
  query->add_option("-k", query_k)->check(CLI::PositiveNumber);

  Sources agg_src;
  std::string agg_predicate;
  std::size_t agg_k = 3;
  auto* aggregate =
      app.add_subcommand("aggregate", "Most common objects of a predicate");
  add_resource(aggregate, agg_src);
  aggregate->add_option("-p,--predicate", agg_predicate)->required();
  aggregate->add_option("-k", agg_k)->check(CLI::PositiveNumber);

  Sources join_src;
  std::string join_text;
  std::size_t join_limit = 0;
  bool join_count = false;
  auto* join = app.add_subcommand(
      "join", "Conjunctive query, e.g. '(?x, CapableOf, eat ?x)'");
  add_resource(join, join_src);
  join->add_option("query", join_text)->required();
  join->add_option("--limit", join_limit);
  join->add_flag("--count", join_count, "Aggregate counts by projection");

  Sources search_src;
  std::string search_needle, search_resources;
  std::size_t search_limit = 0;
  auto* search = app.add_subcommand("search",
                                    "Phrase search over subjects "
                                    "and objects");
  search_src.Register(search);
  search->add_option("needle", search_needle)->required();
  search->add_option("--resources", search_resources, "Comma list");
  search->add_option("--limit", search_limit);

  Sources diag_src;
  std::string diag_subject, diag_format = "text";
  auto* diagnose = app.add_subcommand(
      "diagnose", "Subject copying, quantity conflicts, plural redundancy");
  add_resource(diagnose, diag_src);
  diagnose->add_option("--subject", diag_subject);
  diagnose->add_option("--format", diag_format)
      ->check(CLI::IsMember({"text", "json"}));

  Sources eval_src;
  std::string eval_gt, eval_embeddings, eval_service, eval_templates,
      eval_thresholds = "0.96,0.98,1.0", eval_curve;
  std::uint32_t eval_top_n = 100;
  auto* eval = app.add_subcommand(
      "eval-recall", "Recall against ground-truth sentences via embeddings");
  add_resource(eval, eval_src);
  eval->add_option("--ground-truth", eval_gt)
      ->required()
      ->envname("CSKB_GROUND_TRUTH");
  eval->add_option("--embeddings", eval_embeddings, "Embedding store file")
      ->envname("CSKB_EMBEDDINGS");
  eval->add_option("--embedding-service", eval_service,
                   "Base URL of an embedding service for missing sentences")
      ->envname("CSKB_EMBEDDING_SERVICE");
  eval->add_option("--templates", eval_templates, "Template override JSON")
      ->envname("CSKB_TEMPLATES");
  eval->add_option("--thresholds", eval_thresholds);
  eval->add_option("--top-n", eval_top_n)->check(CLI::PositiveNumber);
  eval->add_option("--curve", eval_curve,
                   "Comma list of top-n values for a recall curve at the "
                   "first threshold");

  Sources sample_src;
  std::string sample_dimension, sample_output, sample_templates;
  std::size_t sample_size = 500;
  std::uint32_t sample_top_n = 0;
  std::uint64_t sample_seed = 0;
  auto* sample =
      app.add_subcommand("sample", "Draw assertions for crowd annotation");
  add_resource(sample, sample_src);
  sample->add_option("--dimension", sample_dimension)
      ->required()
      ->check(CLI::IsMember({"typicality", "saliency"}));
  sample->add_option("--size", sample_size)->check(CLI::PositiveNumber);
  sample->add_option("--top-n", sample_top_n,
                     "Pool restriction (default 100 typicality, 10 saliency)");
  sample->add_option("--seed", sample_seed)->envname("CSKB_SEED");
  sample->add_option("-o,--output", sample_output)->required();
  sample->add_option("--templates", sample_templates)
      ->envname("CSKB_TEMPLATES");

  std::string judge_tasks, judge_rows, judge_dimension;
  auto* judge = app.add_subcommand("aggregate-judgements",
                                   "Majority-vote labels and precision");
  judge->add_option("--tasks", judge_tasks, "Exported annotation CSV")
      ->required();
  judge->add_option("--judgements", judge_rows, "Judgement CSV")->required();
  judge->add_option("--dimension", judge_dimension)
      ->required()
      ->check(CLI::IsMember({"typicality", "saliency"}));

  Sources snap_src;
  std::string snap_output, snap_verify;
  auto* snapshot = app.add_subcommand(
      "snapshot", "Write resources into a snapshot, or verify one");
  snap_src.Register(snapshot);
  snapshot->add_option("-o,--output", snap_output);
  snapshot->add_option("--verify", snap_verify);

  ServiceConfig serve_config;
  std::vector<std::string> serve_snapshots;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  serve->add_option("-s,--snapshot", serve_snapshots)
      ->required()
      ->envname("CSKB_SNAPSHOT")
      ->delimiter(',');
  serve->add_option("--host", serve_config.host)->envname("CSKB_HOST");
  serve->add_option("--port", serve_config.port)->envname("CSKB_PORT");
  serve->add_option("--resources", serve_config.resources)
      ->envname("CSKB_RESOURCES")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto in = OpenInput(ingest_path);
      IngestReport report;
      if (ingest_format == "generations") {
        report = ReadGenerationRecords(in).report;
      } else if (ingest_format == "assertions") {
        report = ReadAssertionTable(
                     in, std::make_shared<const ResourceId>(ResourceId::Make(
                             "input", ResourceKind::kGenerated)))
                     .report;
      } else if (ingest_format == "ground-truth") {
        report = ReadGroundTruth(in).report;
      } else if (ingest_format == "embeddings") {
        auto load = ReadEmbeddings(in);
        std::cout << "dimension " << load.store.dimension() << "\n";
        report = load.report;
      } else {
        report.records_read = ReadSubjectList(in).size();
      }
      std::cout << "records_read " << report.records_read << "\n"
                << "records_rejected " << report.records_rejected << "\n";
      for (const auto& r : report.rejections) {
        std::cout << "line " << r.line << "\t" << r.reason << "\n";
      }
      return report.records_rejected == 0 ? 0 : 2;
    }

    if (build->parsed()) {
      auto in = OpenInput(build_input);
      GenerationBatch batch = ReadGenerationRecords(in);
      PrintReport("generation records", batch.report);
      PipelineConfig config;
      config.top_k_per_pair = build_top_k;
      config.threads = build_threads;
      config.drop_training_duplicates = build_drop_training;
      std::shared_ptr<const Resource> training;
      if (!build_training.empty()) {
        training = Sources::LoadTable("training=" + build_training);
      } else if (build_drop_training) {
        throw Error(ErrorCode::kInvalidArgument,
                    "--drop-training-duplicates needs --training");
      }
      auto resource = BuildResource(
          batch.records, ResourceId::Make(build_name, ResourceKind::kGenerated),
          config, training.get());
      auto out = OpenOutput(build_output);
      WriteAssertionTable(out,
                          std::vector<Assertion>(resource->assertions().begin(),
                                                 resource->assertions().end()));
      std::string meta_path =
          build_metadata.empty() ? build_output + ".meta.json" : build_metadata;
      auto meta = OpenOutput(meta_path);
      meta << ResourceMetadataJson(*resource) << "\n";
      if (!build_snapshot.empty()) {
        Catalog catalog;
        catalog.Add(resource);
        SaveSnapshot(catalog, build_snapshot);
      }
      std::cerr << "built " << resource->name() << ": " << resource->size()
                << " assertions\n";
      return 0;
    }

    if (select->parsed()) {
      auto in = OpenInput(select_table);
      auto id = std::make_shared<const ResourceId>(
          ResourceId::Make("training", ResourceKind::kTraining));
      AssertionTable table = ReadAssertionTable(in, id);
      PrintReport("table", table.report, 5);
      for (const std::string& s :
           SelectSubjects(table.assertions, select_min)) {
        std::cout << s << "\n";
      }
      return 0;
    }

    if (stats->parsed()) {
      Catalog catalog = stats_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      std::optional<std::uint32_t> top_n;
      if (stats_top_n > 0) top_n = stats_top_n;
      ResourceStats s = ComputeResourceStats(r, top_n);
      std::cout << "resource\t" << r.name() << "\n"
                << "assertions\t" << s.total << "\n"
                << "subjects\t" << s.subjects << "\n"
                << "pairs\t" << s.pairs << "\n"
                << "mean_objects_per_pair\t" << s.mean_objects_per_pair << "\n";
      for (Predicate p : kAllPredicates) {
        std::cout << PredicateName(p) << "\t"
                  << s.per_predicate[PredicateIndex(p)] << "\n";
      }
      return 0;
    }

    if (query->parsed()) {
      Catalog catalog = query_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      std::optional<Predicate> p;
      if (!query_predicate.empty()) p = ParsePredicate(query_predicate);
      for (const Assertion& a : TopAssertions(r, query_subject, p, query_k)) {
        PrintAssertion(a);
      }
      return 0;
    }

    if (aggregate->parsed()) {
      Catalog catalog = agg_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      for (const auto& row :
           AggregateObjects(r, ParsePredicate(agg_predicate), agg_k)) {
        std::cout << row.object << "\t" << row.frequency << "\n";
      }
      return 0;
    }

    if (join->parsed()) {
      Catalog catalog = join_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      ConjunctiveQuery q = ParseQuery(join_text);
      if (join_count) q.aggregate = true;
      auto rows = EvaluateConjunctive(r, q);
      std::size_t n = 0;
      for (const QueryRow& row : rows) {
        if (join_limit > 0 && n++ >= join_limit) break;
        std::cout << row.value << "\t" << row.count
                  << (row.plural_folded ? "\tplural-folded" : "") << "\n";
      }
      return 0;
    }

    if (search->parsed()) {
      Catalog catalog = search_src.Load();
      std::vector<const Resource*> resources;
      if (search_resources.empty()) {
        for (const auto& r : catalog.resources()) resources.push_back(r.get());
      } else {
        for (std::string_view name : SplitFields(search_resources, ',')) {
          resources.push_back(&catalog.Get(std::string(name)));
        }
      }
      auto hits = SearchText(resources, search_needle);
      std::size_t n = 0;
      for (const Assertion& a : hits) {
        if (search_limit > 0 && n++ >= search_limit) break;
        PrintAssertion(a);
      }
      return 0;
    }

    if (diagnose->parsed()) {
      Catalog catalog = diag_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      std::optional<std::string_view> subject;
      if (!diag_subject.empty()) subject = diag_subject;
      auto report = BuildDiagnosticsReport(r, subject);
      std::cout << (diag_format == "json" ? DiagnosticsReportJson(report)
                                          : DiagnosticsReportText(report))
                << "\n";
      return 0;
    }

    if (eval->parsed()) {
      Catalog catalog = eval_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      auto gt_in = OpenInput(eval_gt);
      GroundTruthSet gt = ReadGroundTruth(gt_in);
      PrintReport("ground truth", gt.report);
      EmbeddingStore store;
      if (!eval_embeddings.empty()) {
        auto emb_in = OpenInput(eval_embeddings);
        EmbeddingLoad load = ReadEmbeddings(emb_in);
        PrintReport("embeddings", load.report);
        store = std::move(load.store);
      }
      TemplateTable templates = LoadTemplates(eval_templates);
      std::vector<double> thresholds = ParseList(eval_thresholds);
      if (thresholds.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "no thresholds given");
      }
      std::vector<std::uint32_t> curve_n;
      for (double n : ParseList(eval_curve)) {
        curve_n.push_back(static_cast<std::uint32_t>(n));
      }
      if (!eval_service.empty()) {
        std::uint32_t max_n = eval_top_n;
        for (std::uint32_t n : curve_n) max_n = std::max(max_n, n);
        auto needed = RequiredSentences(r, gt.sentences, max_n, templates);
        std::size_t fetched =
            FillMissingEmbeddings(store, needed, EmbeddingClient(eval_service));
        std::cerr << "fetched " << fetched << " embeddings\n";
      }
      std::cout << "resource\t" << r.name() << "\n"
                << "top_n_per_subject\t" << eval_top_n << "\n";
      for (double t : thresholds) {
        RecallResult res = RecallAt(r, gt.sentences, store,
                                    RecallConfig{eval_top_n, t}, templates);
        std::printf(
            "t=%.2f\trecall %.4f (%zu/%zu)\tcovered-concept recall "
            "%.4f (%zu/%zu)\n",
            t, res.recall, res.matched, res.total, res.covered_recall,
            res.covered_matched, res.covered_total);
      }
      if (!curve_n.empty()) {
        for (auto [n, recall] :
             RecallCurve(r, gt.sentences, store, thresholds.front(), curve_n,
                         templates)) {
          std::printf("curve\tn=%u\trecall %.4f\n", n, recall);
        }
      }
      return 0;
    }

    if (sample->parsed()) {
      Catalog catalog = sample_src.Load();
      const Resource& r = PickResource(catalog, resource_name);
      SamplingConfig config =
          SamplingConfig::For(ParseDimension(sample_dimension), sample_seed);
      config.sample_size = sample_size;
      if (sample_top_n > 0) config.top_n_per_subject = sample_top_n;
      auto tasks =
          SampleForAnnotation(r, config, LoadTemplates(sample_templates));
      auto out = OpenOutput(sample_output);
      WriteAnnotationCsv(out, tasks);
      std::cerr << "wrote " << tasks.size() << " tasks to " << sample_output
                << "\n";
      return 0;
    }

    if (judge->parsed()) {
      auto tasks_in = OpenInput(judge_tasks);
      auto tasks = ReadAnnotationTasks(tasks_in);
      auto rows_in = OpenInput(judge_rows);
      JudgementImport imported = ReadJudgementCsv(rows_in, tasks);
      PrintReport("judgements", imported.report);
      Dimension dim = ParseDimension(judge_dimension);
      auto labels = LabelFromJudgements(imported.rows, dim);
      std::cout << MakePrecisionReport(labels, dim).Format() << "\n";
      return 0;
    }

    if (snapshot->parsed()) {
      if (!snap_verify.empty()) {
        Catalog catalog = LoadSnapshot(snap_verify);
        for (const auto& r : catalog.resources()) {
          std::cout << r->name() << "\t" << ResourceKindName(r->id().kind)
                    << "\t" << r->size() << "\n";
        }
        return 0;
      }
      if (snap_output.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "snapshot needs --output or "
                    "--verify");
      }
      Catalog catalog = snap_src.Load();
      std::uint32_t crc = SaveSnapshot(catalog, snap_output);
      std::printf("wrote %s (%zu resources, crc32 %08x)\n", snap_output.c_str(),
                  catalog.size(), crc);
      return 0;
    }

    if (serve->parsed()) {
      for (const std::string& s : serve_snapshots) {
        serve_config.snapshots.emplace_back(s);
      }
      return RunService(serve_config);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
