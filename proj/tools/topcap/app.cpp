#include "app.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "pipeline.hpp"
#include "plot.hpp"
#include "sweep.hpp"
#include "topcap/classifiers.hpp"
#include "topcap/corpus.hpp"
#include "topcap/error.hpp"
#include "topcap/features.hpp"
#include "topcap/learn.hpp"
#include "topcap/phones.hpp"
#include "topcap/text_util.hpp"
#include "topcap/textgrid.hpp"
#include "topcap/wav.hpp"

namespace topcap::cli {

namespace fs = std::filesystem;

namespace {

// Defaults follow the reference pipeline: d = 100, n = 6, skip = 5,
// amplitude 0.03, min length 500, min cloud 40.
struct Settings {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string config;
  std::string out = ".";

  // signal / embedding
  std::size_t dimension = 100;
  std::size_t n_windows = 6;
  std::size_t skip = 5;
  double amp_threshold = 0.03;
  std::size_t min_length = 500;
  std::size_t min_points = 40;

  // learning
  std::size_t folds = 5;
  double test_fraction = 0.3;
  std::size_t k = 5;
  bool no_standardize = false;
  std::string model = "all";

  // sweep
  std::string dims = "10,25,50,100";
  std::string delays = "desired";
  std::string skips = "5";
  std::size_t repeat = 1;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config " + path + ": expected a JSON object");
  return j;
}

template <class T>
void from_config(const Json& cfg, const char* key, T& value) {
  if (!cfg.contains(key)) return;
  try {
    value = cfg.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_config(const Json& cfg, Settings& s) {
  from_config(cfg, "seed", s.seed);
  from_config(cfg, "jobs", s.jobs);
  from_config(cfg, "out", s.out);
  from_config(cfg, "dimension", s.dimension);
  from_config(cfg, "n_windows", s.n_windows);
  from_config(cfg, "skip", s.skip);
  from_config(cfg, "amp_threshold", s.amp_threshold);
  from_config(cfg, "min_length", s.min_length);
  from_config(cfg, "min_points", s.min_points);
  from_config(cfg, "folds", s.folds);
  from_config(cfg, "test_fraction", s.test_fraction);
  from_config(cfg, "k", s.k);
  from_config(cfg, "model", s.model);
  from_config(cfg, "repeat", s.repeat);
  if (cfg.contains("standardize")) {
    bool standardize = true;
    from_config(cfg, "standardize", standardize);
    s.no_standardize = !standardize;
  }
  // Sweep lists may be given as arrays or as strings.
  auto list = [&](const char* key, std::string& value) {
    if (!cfg.contains(key)) return;
    const auto& v = cfg.at(key);
    if (v.is_string()) {
      value = v.get<std::string>();
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!joined.empty()) joined += ',';
        joined += x.is_string() ? x.get<std::string>() : x.dump();
      }
      value = joined;
    } else {
      throw InvalidArgument(std::string("config key '") + key + "': expected a list or string");
    }
  };
  list("dims", s.dims);
  list("delays", s.delays);
  list("skips", s.skips);
}

std::string find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

// Relative paths inside a config file are taken relative to that file.
fs::path config_relative(const std::string& config_path, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute() || config_path.empty()) return path;
  return fs::path(config_path).parent_path() / path;
}

PhoneClassTable resolve_phone_table(const std::string& table_path, const Json& cfg,
                                    const std::string& config_path, std::vector<InputHash>& inputs) {
  if (!table_path.empty()) {
    inputs.push_back(hash_input(table_path));
    return load_phone_table(table_path);
  }
  if (cfg.contains("phone_table")) {
    const auto& t = cfg.at("phone_table");
    if (t.is_string()) {
      const fs::path path = config_relative(config_path, t.get<std::string>());
      inputs.push_back(hash_input(path));
      return load_phone_table(path);
    }
    return parse_phone_table_json(t.dump());
  }
  return PhoneClassTable::defaults();
}

// Header-driven CSV of simple fields (no quoting).
std::vector<std::map<std::string, std::string>> read_table_csv(const std::string& text,
                                                               const std::string& what) {
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (header.empty()) {
      for (auto f : fields) header.emplace_back(trim(f));
      continue;
    }
    if (fields.size() != header.size())
      throw InvalidArgument(fmt::format("{} line {}: expected {} fields", what, line_no, header.size()));
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = std::string(trim(fields[i]));
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw InvalidArgument(what + ": empty file");
  for (const char* col : {"record_id", "label", "file"})
    if (std::find(header.begin(), header.end(), col) == header.end())
      throw InvalidArgument(what + ": missing column " + col);
  return rows;
}

void write_text(const fs::path& path, std::string_view text) { write_file_atomic(path, text); }

struct Context {
  const std::vector<std::string>& argv;
  Settings& s;
  const Json& cfg;
  std::ostream& out;
  std::ostream& err;

  fs::path out_dir() const {
    fs::path p(s.out);
    fs::create_directories(p);
    return p;
  }

  RunManifest manifest(std::string command) const {
    RunManifest m;
    m.command = std::move(command);
    m.argv = argv;
    m.seed = s.seed;
    if (!s.config.empty()) m.inputs.push_back(hash_input(s.config));
    return m;
  }
};

PipelineParams pipeline_params(const Settings& s) {
  PipelineParams p;
  p.clean = {s.amp_threshold, s.min_length};
  p.dimension = s.dimension;
  p.n_windows = s.n_windows;
  p.skip = s.skip;
  p.min_points = s.min_points;
  EmbeddingParams{p.dimension, 1, p.skip, p.n_windows}.validate();
  if (!(p.clean.amp_threshold >= 0.0)) throw InvalidArgument("amp threshold must be >= 0");
  return p;
}

Json pipeline_params_json(const PipelineParams& p) {
  return Json{{"amp_threshold", p.clean.amp_threshold}, {"min_length", p.clean.min_length},
              {"dimension", p.dimension},               {"n_windows", p.n_windows},
              {"skip", p.skip},                         {"min_points", p.min_points}};
}

std::vector<ModelKind> resolve_models(const std::string& name) {
  if (name == "all") return {kAllModels.begin(), kAllModels.end()};
  std::vector<ModelKind> out;
  for (auto part : split(name, ',')) out.push_back(parse_model_kind(trim(part)));
  return out;
}

std::vector<EvalReport> evaluate_models(const Dataset& dataset, const SplitSpec& spec,
                                        const std::vector<ModelKind>& models, const ModelOptions& opts,
                                        const fs::path& dir) {
  std::vector<EvalReport> reports;
  for (ModelKind kind : models) {
    EvalReport report = evaluate(dataset, spec, kind, opts);
    write_text(dir / fmt::format("report_{}.json", to_string(kind)), format_report_json(report));
    write_text(dir / fmt::format("roc_{}.csv", to_string(kind)), format_roc_csv(report.roc));
    reports.push_back(std::move(report));
  }
  write_text(dir / "summary.csv", format_summary_csv(reports));
  return reports;
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  std::string kind;
  int c = 4;
  double t_max = VariationSpec{}.t_max;
  double dt = VariationSpec{}.dt;
};

int cmd_synth(const Context& ctx, const SynthArgs& a) {
  VariationSpec spec{parse_variation_kind(a.kind), a.c, a.t_max, a.dt};
  const TimeSeries series = gen_variation(spec);
  const fs::path dir = ctx.out_dir();
  const fs::path file = dir / (series.id() + ".csv");
  write_series_csv(file, series);
  auto m = ctx.manifest("synth");
  m.params = {{"kind", std::string(to_string(spec.kind))}, {"c", spec.c},
              {"t_max", spec.t_max},                      {"dt", spec.dt},
              {"samples", series.size()},                 {"output", file.filename().string()}};
  write_manifest(dir, m);
  ctx.out << file.string() << "\n";
  return kExitOk;
}

struct CorpusArgs {
  SyntheticCorpusSpec spec;
};

int cmd_corpus(const Context& ctx, CorpusArgs a) {
  a.spec.seed = ctx.s.seed;
  const auto corpus = make_synthetic_corpus(a.spec);
  const fs::path dir = ctx.out_dir();
  std::string index = "record_id,label,file,status\n";
  for (const auto& r : corpus) {
    const std::string file = "records/" + r.series.id() + ".csv";
    write_series_csv(dir / file, r.series);
    index += fmt::format("{},{},{},ok\n", r.series.id(), to_string(r.label), file);
  }
  write_text(dir / "index.csv", index);
  auto m = ctx.manifest("corpus");
  m.params = {{"voiced", a.spec.voiced},          {"voiceless", a.spec.voiceless},
              {"length", a.spec.length},          {"sample_rate", a.spec.sample_rate},
              {"noise_sigma", a.spec.noise_sigma}, {"min_f0", a.spec.min_f0},
              {"max_f0", a.spec.max_f0},          {"seed", a.spec.seed}};
  write_manifest(dir, m);
  ctx.out << corpus.size() << " records written to " << dir.string() << "\n";
  return kExitOk;
}

struct IngestArgs {
  std::string wav;
  std::string textgrid;
  std::string table;
};

std::string_view status_name(SegmentStatus s) {
  switch (s) {
    case SegmentStatus::ok: return "ok";
    case SegmentStatus::unlisted_label: return "skipped-unlisted";
    case SegmentStatus::out_of_range: return "skipped-out-of-range";
  }
  return "?";
}

int cmd_ingest(const Context& ctx, const IngestArgs& a) {
  auto m = ctx.manifest("ingest");
  const PhoneClassTable table = resolve_phone_table(a.table, ctx.cfg, ctx.s.config, m.inputs);
  m.inputs.push_back(hash_input(a.wav));
  m.inputs.push_back(hash_input(a.textgrid));
  const TimeSeries audio = load_wav(a.wav);
  const auto intervals = load_textgrid(a.textgrid);
  const Segmentation seg = segment(audio, intervals, table);

  const fs::path dir = ctx.out_dir();
  std::string index = "record_id,label,file,status,phone,tier,start,end,first_sample,last_sample\n";
  std::size_t next_segment = 0;
  for (const auto& d : seg.decisions) {
    std::string id, label, file;
    if (d.status == SegmentStatus::ok) {
      const LabeledSegment& s = seg.segments.at(next_segment++);
      id = s.series.id();
      label = to_string(s.voicing);
      file = "segments/" + id + ".csv";
      write_series_csv(dir / file, s.series);
    }
    index += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", id, label, file, status_name(d.status),
                         d.interval.label, d.interval.tier, format_double(d.interval.start_s),
                         format_double(d.interval.end_s), d.first_sample, d.last_sample);
  }
  write_text(dir / "index.csv", index);
  m.params = {{"segments", seg.segments.size()},
              {"skipped_unlisted", seg.skipped_unlisted},
              {"skipped_out_of_range", seg.skipped_out_of_range},
              {"phone_table", Json::parse(format_phone_table_json(table))}};
  write_manifest(dir, m);
  ctx.out << fmt::format("{} segments, {} skipped (unlisted), {} skipped (out of range)\n",
                         seg.segments.size(), seg.skipped_unlisted, seg.skipped_out_of_range);
  return kExitOk;
}

struct PipelineArgs {
  std::string input;
  std::string label;
  bool evaluate = false;
};

std::vector<RecordInput> pipeline_inputs(const Context& ctx, const PipelineArgs& a, RunManifest& m) {
  std::vector<RecordInput> inputs;
  if (!a.input.empty()) {
    const fs::path in(a.input);
    if (fs::is_directory(in)) {
      const fs::path index = in / "index.csv";
      m.inputs.push_back(hash_input(index));
      for (const auto& row : read_table_csv(read_file(index), index.string())) {
        if (auto st = row.find("status"); st != row.end() && st->second != "ok") continue;
        const fs::path file = in / row.at("file");
        m.inputs.push_back(hash_input(file));
        inputs.push_back({read_series_csv(file).with_id(row.at("record_id")), parse_voicing(row.at("label"))});
      }
    } else {
      if (a.label.empty()) throw InvalidArgument("pipeline: --label is required for a single record");
      m.inputs.push_back(hash_input(in));
      inputs.push_back({read_series_csv(in), parse_voicing(a.label)});
    }
    return inputs;
  }
  if (!ctx.cfg.contains("corpus"))
    throw InvalidArgument("pipeline: give an input directory or file, or a \"corpus\" list in --config");
  const PhoneClassTable table = resolve_phone_table({}, ctx.cfg, ctx.s.config, m.inputs);
  const auto& corpus = ctx.cfg.at("corpus");
  if (!corpus.is_array()) throw InvalidArgument("config key 'corpus': expected a list");
  for (const auto& entry : corpus) {
    if (!entry.is_object() || !entry.contains("wav") || !entry.contains("textgrid"))
      throw InvalidArgument("config key 'corpus': entries need \"wav\" and \"textgrid\"");
    const fs::path wav = config_relative(ctx.s.config, entry.at("wav").get<std::string>());
    const fs::path tg = config_relative(ctx.s.config, entry.at("textgrid").get<std::string>());
    m.inputs.push_back(hash_input(wav));
    m.inputs.push_back(hash_input(tg));
    const auto seg = segment(load_wav(wav), load_textgrid(tg), table);
    for (const auto& s : seg.segments) inputs.push_back({s.series, s.voicing});
  }
  return inputs;
}

int cmd_pipeline(const Context& ctx, const PipelineArgs& a) {
  auto m = ctx.manifest("pipeline");
  const PipelineParams params = pipeline_params(ctx.s);
  const auto inputs = pipeline_inputs(ctx, a, m);
  {
    std::vector<std::string> ids;
    for (const auto& in : inputs) ids.push_back(in.series.id());
    std::sort(ids.begin(), ids.end());
    if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
      throw InvalidArgument("pipeline: duplicate record id " + *dup);
  }

  const fs::path dir = ctx.out_dir();
  fs::create_directories(dir / "diagrams");
  const auto outcomes = run_pipeline(inputs, params, ctx.s.jobs, [&](const RecordOutcome& o) {
    if (!o.diagrams.empty())
      write_text(dir / "diagrams" / (o.record_id + ".json"), format_diagrams_json(o.diagrams));
  });

  std::vector<FeatureRecord> features;
  std::size_t n_ok = 0, n_rejected = 0, n_failed = 0;
  for (const auto& o : outcomes) {
    if (o.feature) features.push_back(*o.feature);
    n_ok += o.status == RecordStatus::ok;
    n_rejected += o.status == RecordStatus::rejected;
    n_failed += o.status == RecordStatus::failed;
  }
  write_text(dir / "features.csv", format_features_csv(features));
  write_text(dir / "pipeline_index.csv", format_pipeline_index_csv(outcomes));

  m.params = pipeline_params_json(params);
  m.params["records"] = outcomes.size();
  m.params["ok"] = n_ok;
  m.params["rejected"] = n_rejected;
  m.params["failed"] = n_failed;

  if (a.evaluate) {
    const SplitSpec spec{ctx.s.test_fraction, ctx.s.folds, ctx.s.seed};
    spec.validate();
    const ModelOptions opts{ctx.s.k, !ctx.s.no_standardize};
    const auto models = resolve_models(ctx.s.model);
    m.params["evaluation"] = {{"test_fraction", spec.test_fraction}, {"folds", spec.folds},
                              {"k", opts.k},                         {"standardize", opts.standardize},
                              {"models", ctx.s.model}};
    const auto reports = evaluate_models(Dataset{features}, spec, models, opts, dir / "eval");
    for (const auto& r : reports)
      ctx.out << fmt::format("{}: accuracy {:.4f} auc {:.4f} cv {:.4f}\n", r.model, r.accuracy, r.auc,
                             r.mean_cv_accuracy);
  }
  write_manifest(dir, m);
  ctx.out << fmt::format("{} records: {} ok, {} rejected, {} failed\n", outcomes.size(), n_ok, n_rejected,
                         n_failed);
  if (n_failed > 0) {
    ctx.err << "error: " << n_failed << " record(s) failed; see pipeline_index.csv\n";
    return kExitInput;
  }
  return kExitOk;
}

struct TrainEvalArgs {
  std::string features;
};

int cmd_train_eval(const Context& ctx, const TrainEvalArgs& a) {
  auto m = ctx.manifest("train-eval");
  m.inputs.push_back(hash_input(a.features));
  const Dataset dataset{parse_features_csv(read_file(a.features))};
  const SplitSpec spec{ctx.s.test_fraction, ctx.s.folds, ctx.s.seed};
  spec.validate();
  const ModelOptions opts{ctx.s.k, !ctx.s.no_standardize};
  const auto models = resolve_models(ctx.s.model);
  const fs::path dir = ctx.out_dir();
  const auto reports = evaluate_models(dataset, spec, models, opts, dir);
  m.params = {{"test_fraction", spec.test_fraction}, {"folds", spec.folds}, {"k", opts.k},
              {"standardize", opts.standardize},     {"models", ctx.s.model}, {"records", dataset.records.size()}};
  write_manifest(dir, m);
  for (const auto& r : reports)
    ctx.out << fmt::format("{}: accuracy {:.4f} auc {:.4f} cv {:.4f}\n", r.model, r.accuracy, r.auc,
                           r.mean_cv_accuracy);
  return kExitOk;
}

struct SweepArgs {
  std::string record;
};

int cmd_sweep(const Context& ctx, const SweepArgs& a) {
  auto m = ctx.manifest("sweep");
  m.inputs.push_back(hash_input(a.record));
  const TimeSeries record = read_series_csv(a.record);
  SweepSpec spec;
  spec.dims = parse_size_list(ctx.s.dims);
  if (trim(ctx.s.delays) != "desired") spec.delays = parse_size_list(ctx.s.delays);
  spec.skips = parse_size_list(ctx.s.skips);
  spec.n_windows = ctx.s.n_windows;
  spec.repeat = ctx.s.repeat;
  const auto rows = run_sweep(record, spec);
  const fs::path dir = ctx.out_dir();
  write_text(dir / "sweep.csv", format_sweep_csv(rows));
  write_text(dir / "sweep_timing.csv", format_sweep_timing_csv(rows));
  m.params = {{"dims", spec.dims},
              {"delays", spec.delays ? Json(*spec.delays) : Json("desired")},
              {"skips", spec.skips},
              {"n_windows", spec.n_windows},
              {"repeat", spec.repeat}};
  write_manifest(dir, m);
  ctx.out << format_sweep_csv(rows);
  return kExitOk;
}

struct PlotArgs {
  std::string diagram;
  std::optional<int> dim;
  std::string output = "diagram.svg";
  std::string title;
};

int cmd_plot(const Context& ctx, const PlotArgs& a) {
  auto m = ctx.manifest("plot");
  m.inputs.push_back(hash_input(a.diagram));
  auto diagrams = parse_diagrams_json(read_file(a.diagram));
  if (a.dim)
    diagrams.erase(std::remove_if(diagrams.begin(), diagrams.end(),
                                  [&](const PersistenceDiagram& d) { return d.dim != *a.dim; }),
                   diagrams.end());
  const fs::path dir = ctx.out_dir();
  write_text(dir / a.output, render_diagram_svg(diagrams, a.title));
  m.params = {{"dim", a.dim ? Json(*a.dim) : Json("all")}, {"output", a.output}, {"title", a.title}};
  write_manifest(dir, m);
  return kExitOk;
}

struct PhArgs {
  std::string cloud;
  int max_dim = 1;
  std::optional<double> threshold;
};

int cmd_ph(const Context& ctx, const PhArgs& a) {
  auto m = ctx.manifest("ph");
  m.inputs.push_back(hash_input(a.cloud));
  const PointCloud cloud = parse_cloud_csv(read_file(a.cloud), fs::path(a.cloud).stem().string());
  const auto diagrams = rips_persistence(distance_matrix(cloud), RipsOptions{a.max_dim, a.threshold});
  const fs::path dir = ctx.out_dir();
  write_text(dir / "diagrams.json", format_diagrams_json(diagrams));
  write_text(dir / "diagrams.csv", format_diagrams_csv(diagrams));
  m.params = {{"max_dim", a.max_dim},
              {"threshold", a.threshold ? Json(*a.threshold) : Json("enclosing-radius")},
              {"points", cloud.size()}};
  write_manifest(dir, m);
  for (const auto& d : diagrams) ctx.out << fmt::format("dim {}: {} points\n", d.dim, d.points.size());
  return kExitOk;
}

struct EmbedArgs {
  std::string series;
  std::string delay = "auto";
};

int cmd_embed(const Context& ctx, const EmbedArgs& a) {
  auto m = ctx.manifest("embed");
  m.inputs.push_back(hash_input(a.series));
  const TimeSeries series = read_series_csv(a.series);
  EmbeddingParams params{ctx.s.dimension, 1, ctx.s.skip, ctx.s.n_windows};
  params.validate();
  Json period = nullptr;
  std::string rule = "given";
  if (trim(a.delay) == "auto") {
    const auto sel = select_delay(series, params.dimension, params.n_windows);
    params.delay = sel.delay;
    period = sel.period;
    rule = to_string(sel.rule);
  } else {
    const long long d = parse_int(trim(a.delay));
    if (d < 1) throw InvalidArgument("delay must be >= 1");
    params.delay = static_cast<std::size_t>(d);
  }
  const PointCloud cloud = embed(series, params);
  const fs::path dir = ctx.out_dir();
  const Json sidecar = {{"d", params.dimension}, {"tau", params.delay}, {"skip", params.skip},
                        {"T", period},           {"rule", rule},        {"n_windows", params.n_windows},
                        {"points", cloud.size()}};
  write_text(dir / "cloud.csv", format_cloud_csv(cloud));
  write_text(dir / "cloud.json", sidecar.dump(2) + "\n");
  m.params = sidecar;
  write_manifest(dir, m);
  ctx.out << fmt::format("{} points, dimension {}, delay {}\n", cloud.size(), params.dimension, params.delay);
  return kExitOk;
}

struct DensityArgs {
  std::string diagram;
  std::size_t bins_x = 16;
  std::size_t bins_y = 16;
  double cutoff = 0.5;
};

int cmd_density(const Context& ctx, const DensityArgs& a) {
  auto m = ctx.manifest("density");
  m.inputs.push_back(hash_input(a.diagram));
  const auto diagrams = parse_diagrams_json(read_file(a.diagram));
  auto it = std::find_if(diagrams.begin(), diagrams.end(), [](const auto& d) { return d.dim == 1; });
  if (it == diagrams.end()) throw InvalidArgument("density: no dimension-1 diagram in " + a.diagram);
  const DensityGrid grid = lower_region_density(*it, a.bins_x, a.bins_y, a.cutoff);
  const fs::path dir = ctx.out_dir();
  write_text(dir / "density.json", format_density_json(grid));
  m.params = {{"bins_x", a.bins_x}, {"bins_y", a.bins_y}, {"cutoff", a.cutoff}};
  write_manifest(dir, m);
  return kExitOk;
}

struct PcaArgs {
  std::string cloud;
};

int cmd_pca(const Context& ctx, const PcaArgs& a) {
  auto m = ctx.manifest("pca");
  m.inputs.push_back(hash_input(a.cloud));
  const PointCloud cloud = parse_cloud_csv(read_file(a.cloud), fs::path(a.cloud).stem().string());
  const PcaProjection proj = pca3(cloud);
  const fs::path dir = ctx.out_dir();
  write_text(dir / "pca.csv", format_pca_csv(proj));
  write_text(dir / "pca_ratios.json", format_pca_ratios_json(proj));
  m.params = {{"points", cloud.size()}, {"dimension", cloud.dimension()}};
  write_manifest(dir, m);
  return kExitOk;
}

// Swaps the recorded --out value for `out` (or appends one).
std::vector<std::string> retarget(std::vector<std::string> argv, const std::string& out) {
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out" && i + 1 < argv.size()) {
      argv[i + 1] = out;
      return argv;
    }
    if (argv[i].rfind("--out=", 0) == 0) {
      argv[i] = "--out=" + out;
      return argv;
    }
  }
  argv.insert(argv.begin(), {"--out", out});
  return argv;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
  const RunManifest m = parse_manifest_json(read_file(manifest_path));
  if (m.command == "replay") throw InvalidArgument("replay: manifest records a replay");
  auto argv = m.argv;
  if (!out_override.empty()) argv = retarget(std::move(argv), out_override);
  return dispatch(argv, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  s.config = find_config_arg(args);
  const Json cfg = load_config(s.config);
  apply_config(cfg, s);

  CLI::App app{"Topological voicing analysis of speech-like signals", "topcap"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", s.seed, "seed for every random choice");
  app.add_option("--jobs", s.jobs, "worker threads for the pipeline")->check(CLI::Range(1u, 1024u));
  app.add_option("--config", s.config, "JSON file of default parameters");
  app.add_option("--out", s.out, "output directory");

  std::function<int(const Context&)> action;

  auto add_signal_opts = [&](CLI::App* sub) {
    sub->add_option("--dim", s.dimension, "embedding dimension d");
    sub->add_option("--n-windows", s.n_windows, "delay multiplier n in tau = nT/d");
    sub->add_option("--skip", s.skip, "stride between embedded points");
  };
  auto add_learn_opts = [&](CLI::App* sub) {
    sub->add_option("--model", s.model, "knn, logistic, gaussian_nb, linear_svm, a comma list, or all");
    sub->add_option("--folds", s.folds, "cross-validation folds");
    sub->add_option("--test-fraction", s.test_fraction, "holdout fraction per class");
    sub->add_option("--k", s.k, "neighbours for knn");
    sub->add_flag("--no-standardize", s.no_standardize, "skip z-scoring of features");
  };

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a variation-rate test signal");
  synth_cmd->add_option("--kind", synth.kind, "frequency, amplitude or average_line")
      ->required()
      ->check(CLI::IsMember({"frequency", "amplitude", "average_line", "average-line"}));
  synth_cmd->add_option("--c", synth.c, "variation rate, 1 (fastest) to 4 (constant)")->check(CLI::Range(1, 4));
  synth_cmd->add_option("--t-max", synth.t_max, "time span")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dt", synth.dt, "time step")->check(CLI::PositiveNumber);
  synth_cmd->callback([&] { action = [&](const Context& c) { return cmd_synth(c, synth); }; });

  CorpusArgs corpus;
  auto* corpus_cmd = app.add_subcommand("corpus", "generate a synthetic voiced/voiceless corpus");
  corpus_cmd->add_option("--voiced", corpus.spec.voiced);
  corpus_cmd->add_option("--voiceless", corpus.spec.voiceless);
  corpus_cmd->add_option("--length", corpus.spec.length, "samples per record");
  corpus_cmd->add_option("--noise", corpus.spec.noise_sigma, "noise sigma on voiced records");
  corpus_cmd->callback([&] { action = [&](const Context& c) { return cmd_corpus(c, corpus); }; });

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "cut labelled phone segments from a WAV + TextGrid");
  ingest_cmd->add_option("--wav", ingest.wav)->required();
  ingest_cmd->add_option("--textgrid", ingest.textgrid)->required();
  ingest_cmd->add_option("--table", ingest.table, "phone class table (JSON)");
  ingest_cmd->callback([&] { action = [&](const Context& c) { return cmd_ingest(c, ingest); }; });

  PipelineArgs pipeline;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "records -> persistence features");
  pipeline_cmd->add_option("input", pipeline.input, "directory with index.csv, or one series CSV");
  pipeline_cmd->add_option("--label", pipeline.label, "label of a single-record input");
  pipeline_cmd->add_option("--amp-threshold", s.amp_threshold, "cleaning amplitude threshold");
  pipeline_cmd->add_option("--min-length", s.min_length, "minimum cleaned length");
  pipeline_cmd->add_option("--min-points", s.min_points, "minimum point-cloud size");
  pipeline_cmd->add_flag("--evaluate", pipeline.evaluate, "also train and evaluate classifiers");
  add_signal_opts(pipeline_cmd);
  add_learn_opts(pipeline_cmd);
  pipeline_cmd->callback([&] { action = [&](const Context& c) { return cmd_pipeline(c, pipeline); }; });

  TrainEvalArgs train;
  auto* train_cmd = app.add_subcommand("train-eval", "fit and score classifiers on a features CSV");
  train_cmd->add_option("features", train.features)->required();
  add_learn_opts(train_cmd);
  train_cmd->callback([&] { action = [&](const Context& c) { return cmd_train_eval(c, train); }; });

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "maximal persistence over dimension, delay and skip");
  sweep_cmd->add_option("record", sweep.record)->required();
  sweep_cmd->add_option("--dims", s.dims, "list such as 10,25,50,100");
  sweep_cmd->add_option("--delays", s.delays, "list, or 'desired'");
  sweep_cmd->add_option("--skips", s.skips, "list such as 1-10");
  sweep_cmd->add_option("--n-windows", s.n_windows);
  sweep_cmd->add_option("--repeat", s.repeat, "timing runs per row (minimum is kept)");
  sweep_cmd->callback([&] { action = [&](const Context& c) { return cmd_sweep(c, sweep); }; });

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "render a diagram JSON as SVG");
  plot_cmd->add_option("diagram", plot.diagram)->required();
  plot_cmd->add_option("--dim", plot.dim, "only this homology dimension");
  plot_cmd->add_option("--output", plot.output, "file name inside --out");
  plot_cmd->add_option("--title", plot.title);
  plot_cmd->callback([&] { action = [&](const Context& c) { return cmd_plot(c, plot); }; });

  PhArgs ph;
  auto* ph_cmd = app.add_subcommand("ph", "persistence diagrams of a point-cloud CSV");
  ph_cmd->add_option("cloud", ph.cloud)->required();
  ph_cmd->add_option("--max-dim", ph.max_dim)->check(CLI::Range(0, 1));
  ph_cmd->add_option("--threshold", ph.threshold, "filtration cutoff (default: enclosing radius)");
  ph_cmd->callback([&] { action = [&](const Context& c) { return cmd_ph(c, ph); }; });

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "delay-embed a series CSV into a point-cloud CSV");
  embed_cmd->add_option("series", embed_args.series)->required();
  embed_cmd->add_option("--delay", embed_args.delay, "integer, or 'auto' for the ACF rule");
  add_signal_opts(embed_cmd);
  embed_cmd->callback([&] { action = [&](const Context& c) { return cmd_embed(c, embed_args); }; });

  DensityArgs density;
  auto* density_cmd = app.add_subcommand("density", "lower-region density grid of a dimension-1 diagram");
  density_cmd->add_option("diagram", density.diagram)->required();
  density_cmd->add_option("--bins-x", density.bins_x)->check(CLI::PositiveNumber);
  density_cmd->add_option("--bins-y", density.bins_y)->check(CLI::PositiveNumber);
  density_cmd->add_option("--cutoff", density.cutoff)->check(CLI::Range(0.0, 1.0));
  density_cmd->callback([&] { action = [&](const Context& c) { return cmd_density(c, density); }; });

  PcaArgs pca;
  auto* pca_cmd = app.add_subcommand("pca", "three-component PCA projection of a point-cloud CSV");
  pca_cmd->add_option("cloud", pca.cloud)->required();
  pca_cmd->callback([&] { action = [&](const Context& c) { return cmd_pca(c, pca); }; });

  std::string replay_manifest;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", replay_manifest)->required();
  replay_cmd->add_option("--into", replay_out, "write to this directory instead of the recorded one");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (replay_cmd->parsed()) return cmd_replay(replay_manifest, replay_out, out, err);

  const Context ctx{args, s, cfg, out, err};
  return action(ctx);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace topcap::cli
