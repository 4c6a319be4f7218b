#include "cli.hpp"

#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "extrofit/embedding_io.hpp"
#include "extrofit/error.hpp"
#include "extrofit/extrofit.hpp"
#include "extrofit/lexicon.hpp"
#include "extrofit/retrofit.hpp"
#include "manifest.hpp"

namespace extrofit::cli {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void set_common(RunManifest& manifest, const CommonArgs& args) {
  manifest.set_option("lowercase", args.lowercase ? "true" : "false");
}

// Runs `body`; on a library error prints one diagnostic line and returns 1.
// The manifest is emitted either way.
template <typename Body>
int guarded(RunManifest& manifest, const CommonArgs& args, std::ostream& err, Body&& body) {
  int code = kExitOk;
  try {
    body();
  } catch (const Error& e) {
    err << "extrofit: error: " << e.what() << '\n';
    manifest.set_status(std::string("error: ") + std::string(to_string(e.code())));
    code = kExitRuntime;
  } catch (const std::exception& e) {
    err << "extrofit: error: " << e.what() << '\n';
    manifest.set_status("error");
    code = kExitRuntime;
  }
  err << manifest.to_json_line() << '\n';
  if (args.manifest) {
    try {
      manifest.append_to(*args.manifest);
    } catch (const Error& e) {
      err << "extrofit: error: " << e.what() << '\n';
      code = kExitRuntime;
    }
  }
  return code;
}

void warn_duplicates(const LoadStats& stats, std::ostream& err) {
  if (stats.duplicates_skipped > 0)
    err << "extrofit: warning: skipped " << stats.duplicates_skipped
        << " duplicate tokens (kept first occurrence)\n";
}

SaveOptions save_options(int precision, bool full) {
  SaveOptions s;
  s.precision = precision;
  s.full_precision = full;
  return s;
}

}  // namespace

std::optional<DatasetSpec> parse_dataset_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return std::nullopt;
  const auto format = parse_dataset_format(text.substr(0, eq));
  if (!format) return std::nullopt;
  DatasetSpec spec;
  spec.format = *format;
  std::stringstream rest(text.substr(eq + 1));
  std::string part;
  while (std::getline(rest, part, ','))
    if (!part.empty()) spec.paths.emplace_back(part);
  if (spec.paths.empty()) return std::nullopt;
  return spec;
}

int cmd_extrofit(const ExtrofitArgs& args, std::ostream& /*out*/, std::ostream& err) {
  RunManifest manifest("extrofit");
  set_common(manifest, args);
  manifest.set_option("input", args.input.string());
  manifest.set_option("lexicon", args.lexicon.string());
  manifest.set_option("output", args.output.string());
  manifest.set_option("expand", std::to_string(args.expand));
  manifest.set_option("components", args.components ? std::to_string(*args.components) : "input-dim");
  manifest.set_option("shrinkage", shortest(args.shrinkage));
  manifest.set_option("weighting", args.weighting);
  manifest.set_option("precision", args.full_precision ? "full" : std::to_string(args.precision));

  return guarded(manifest, args, err, [&] {
    manifest.add_input(args.input);
    manifest.add_input(args.lexicon);

    LoadStats stats;
    const auto vectors = load_text_embeddings(args.input, {args.lowercase, DuplicatePolicy::KeepFirst}, &stats);
    warn_duplicates(stats, err);
    manifest.set_count("vocab_size", static_cast<double>(vectors.rows()));
    manifest.set_count("input_dim", static_cast<double>(vectors.dim()));
    manifest.set_count("duplicates_skipped", static_cast<double>(stats.duplicates_skipped));

    const auto lexicon = load_lexicon(args.lexicon, vectors.vocab(), {args.lowercase});
    manifest.set_count("edges_kept", static_cast<double>(lexicon.graph.edge_count()));
    manifest.set_count("edges_dropped_oov", static_cast<double>(lexicon.edges_dropped_oov));

    const auto classes = build_classes(lexicon.graph, vectors.vocab_ptr());
    manifest.set_count("n_classes", static_cast<double>(classes.n_classes()));
    manifest.set_count("n_nonsingleton_classes", static_cast<double>(classes.n_nonsingleton_classes()));
    manifest.set_count("n_extrofitted", static_cast<double>(classes.n_covered_words()));

    ExtrofitConfig config;
    config.n_expand = args.expand;
    config.out_dim = args.components;
    config.shrinkage = args.shrinkage;
    config.weighting = args.weighting == "unweighted" ? Weighting::Unweighted : Weighting::ClassSize;
    const auto result = extrofit(vectors, classes, config);
    manifest.set_count("output_dim", static_cast<double>(result.vectors.dim()));
    manifest.set_count("ridge", result.model.ridge);
    manifest.set_count("top_eigenvalue", result.model.eigenvalues(0));

    save_text_embeddings(result.vectors, args.output, save_options(args.precision, args.full_precision));
  });
}

int cmd_retrofit(const RetrofitArgs& args, std::ostream& /*out*/, std::ostream& err) {
  RunManifest manifest("retrofit");
  set_common(manifest, args);
  manifest.set_option("input", args.input.string());
  manifest.set_option("lexicon", args.lexicon.string());
  manifest.set_option("output", args.output.string());
  manifest.set_option("iters", std::to_string(args.iters));
  manifest.set_option("alpha", shortest(args.alpha));
  manifest.set_option("beta", args.beta);
  manifest.set_option("precision", args.full_precision ? "full" : std::to_string(args.precision));

  return guarded(manifest, args, err, [&] {
    manifest.add_input(args.input);
    manifest.add_input(args.lexicon);

    LoadStats stats;
    const auto vectors = load_text_embeddings(args.input, {args.lowercase, DuplicatePolicy::KeepFirst}, &stats);
    warn_duplicates(stats, err);
    manifest.set_count("vocab_size", static_cast<double>(vectors.rows()));
    manifest.set_count("input_dim", static_cast<double>(vectors.dim()));
    manifest.set_count("duplicates_skipped", static_cast<double>(stats.duplicates_skipped));

    const auto lexicon = load_lexicon(args.lexicon, vectors.vocab(), {args.lowercase});
    manifest.set_count("edges_kept", static_cast<double>(lexicon.graph.edge_count()));
    manifest.set_count("edges_dropped_oov", static_cast<double>(lexicon.edges_dropped_oov));

    RetrofitConfig config;
    config.iterations = args.iters;
    config.alpha = args.alpha;
    config.beta_mode = args.beta == "constant" ? BetaMode::Constant : BetaMode::InverseDegree;
    RetrofitReport report;
    const auto result = retrofit(vectors, lexicon.graph, config, &report);
    manifest.set_count("sweeps_run", static_cast<double>(report.sweeps_run));
    manifest.set_count("final_mean_change", report.mean_change.empty() ? 0.0 : report.mean_change.back());

    save_text_embeddings(result, args.output, save_options(args.precision, args.full_precision));
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  RunManifest manifest("eval");
  set_common(manifest, args);
  manifest.set_option("vectors", args.vectors.string());
  manifest.set_option("format", args.format);
  for (std::size_t i = 0; i < args.datasets.size(); ++i) {
    std::string paths;
    for (const auto& p : args.datasets[i].paths) paths += (paths.empty() ? "" : ",") + p.string();
    manifest.set_option("dataset." + std::to_string(i), std::string(to_string(args.datasets[i].format)) + "=" + paths);
  }

  return guarded(manifest, args, err, [&] {
    manifest.add_input(args.vectors);
    for (const auto& spec : args.datasets)
      for (const auto& p : spec.paths) manifest.add_input(p);

    LoadStats stats;
    const auto vectors = load_text_embeddings(args.vectors, {args.lowercase, DuplicatePolicy::KeepFirst}, &stats);
    warn_duplicates(stats, err);
    manifest.set_count("vocab_size", static_cast<double>(vectors.rows()));

    struct Row {
      std::string name;
      std::optional<EvalReport> report;
      std::size_t n_scored = 0, n_skipped = 0;
      std::string error;
    };
    std::vector<Row> rows;
    for (const auto& spec : args.datasets) {
      Row row;
      row.name = std::string(to_string(spec.format));
      try {
        const auto dataset = load_dataset(spec.paths, spec.format, {args.lowercase});
        for (const auto& w : dataset.warnings) err << "extrofit: warning: " << row.name << ": " << w << '\n';
        for (const auto& pair : dataset.pairs) {
          if (vectors.lookup(pair.first) && vectors.lookup(pair.second))
            ++row.n_scored;
          else
            ++row.n_skipped;
        }
        row.report = evaluate(vectors, dataset);
        manifest.set_count(row.name + ".spearman", row.report->spearman);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        row.error = e.what();
        err << "extrofit: error: " << row.name << ": " << e.what() << '\n';
      }
      manifest.set_count(row.name + ".n_scored", static_cast<double>(row.n_scored));
      manifest.set_count(row.name + ".n_skipped_oov", static_cast<double>(row.n_skipped));
      rows.push_back(std::move(row));
    }

    if (args.format == "table") {
      out << std::left << std::setw(12) << "dataset" << std::right << std::setw(10) << "spearman"
          << std::setw(9) << "scored" << std::setw(9) << "skipped" << "  status\n";
      for (const auto& row : rows) {
        out << std::left << std::setw(12) << row.name << std::right << std::setw(10)
            << (row.report ? (std::ostringstream() << std::fixed << std::setprecision(4) << row.report->spearman).str() : "NA")
            << std::setw(9) << row.n_scored << std::setw(9) << row.n_skipped << "  "
            << (row.report ? "ok" : row.error) << '\n';
      }
    } else {
      for (const auto& row : rows) {
        if (row.report)
          out << to_tsv(*row.report) << '\n';
        else
          out << row.name << "\tNA\t" << row.n_scored << '\t' << row.n_skipped << '\n';
      }
    }
    out.flush();
  });
}

int cmd_neighbors(const NeighborsArgs& args, std::ostream& out, std::ostream& err) {
  RunManifest manifest("neighbors");
  set_common(manifest, args);
  manifest.set_option("vectors", args.vectors.string());
  manifest.set_option("word", args.word);
  manifest.set_option("top", std::to_string(args.top));

  return guarded(manifest, args, err, [&] {
    manifest.add_input(args.vectors);
    LoadStats stats;
    const auto vectors = load_text_embeddings(args.vectors, {args.lowercase, DuplicatePolicy::KeepFirst}, &stats);
    warn_duplicates(stats, err);
    manifest.set_count("vocab_size", static_cast<double>(vectors.rows()));

    std::string cue = args.word;
    if (args.lowercase)
      for (auto& c : cue) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    NeighborStats nstats;
    const auto neighbors = nearest_neighbors(vectors, cue, args.top, &nstats);
    if (nstats.zero_norm_skipped > 0)
      err << "extrofit: warning: skipped " << nstats.zero_norm_skipped << " zero-norm vectors\n";
    manifest.set_count("zero_norm_skipped", static_cast<double>(nstats.zero_norm_skipped));
    write_neighbors_tsv(out, neighbors);
    out.flush();
  });
}

int run(std::span<const std::string> argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enrich word embeddings with semantic lexicons and evaluate them", "extrofit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EXTROFIT_VERSION);

  auto add_common = [](CLI::App* sub, CommonArgs& common) {
    sub->add_flag("--lowercase", common.lowercase, "Lowercase tokens when reading every input");
    sub->add_option("--manifest", common.manifest, "Append the run manifest (JSON line) to this file");
  };

  ExtrofitArgs ex;
  auto* ex_cmd = app.add_subcommand("extrofit", "Expand, transfer synonym knowledge and LDA-project");
  ex_cmd->add_option("--input", ex.input, "Pretrained embeddings (text, optionally .gz)")->required();
  ex_cmd->add_option("--lexicon", ex.lexicon, "Synonym lexicon, one `head syn...` line per entry")->required();
  ex_cmd->add_option("--output", ex.output, "Where to write the enriched embeddings")->required();
  ex_cmd->add_option("--expand", ex.expand, "Number of expanded dimensions")->check(CLI::PositiveNumber)->capture_default_str();
  ex_cmd->add_option("--components", ex.components, "Output dimension (default: input dimension)")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--shrinkage", ex.shrinkage, "Relative shrinkage of the within-class scatter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ex_cmd->add_option("--weighting", ex.weighting, "Between-class scatter weighting")->check(CLI::IsMember({"class-size", "unweighted"}))->capture_default_str();
  ex_cmd->add_option("--precision", ex.precision, "Decimal places in the output")->check(CLI::PositiveNumber)->capture_default_str();
  ex_cmd->add_flag("--full-precision", ex.full_precision, "Write shortest round-trip values");
  add_common(ex_cmd, ex);

  RetrofitArgs re;
  auto* re_cmd = app.add_subcommand("retrofit", "Retrofitting baseline");
  re_cmd->add_option("--input", re.input, "Pretrained embeddings (text, optionally .gz)")->required();
  re_cmd->add_option("--lexicon", re.lexicon, "Synonym lexicon")->required();
  re_cmd->add_option("--output", re.output, "Where to write the retrofitted embeddings")->required();
  re_cmd->add_option("--iters", re.iters, "Number of sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  re_cmd->add_option("--alpha", re.alpha, "Weight of the original vector")->check(CLI::PositiveNumber)->capture_default_str();
  re_cmd->add_option("--beta", re.beta, "Neighbor weighting")->check(CLI::IsMember({"inverse-degree", "constant"}))->capture_default_str();
  re_cmd->add_option("--precision", re.precision, "Decimal places in the output")->check(CLI::PositiveNumber)->capture_default_str();
  re_cmd->add_flag("--full-precision", re.full_precision, "Write shortest round-trip values");
  add_common(re_cmd, re);

  EvalArgs ev;
  std::vector<std::string> dataset_texts;
  auto* ev_cmd = app.add_subcommand("eval", "Spearman correlation on word-similarity datasets");
  ev_cmd->add_option("--vectors", ev.vectors, "Embeddings to evaluate")->required();
  ev_cmd->add_option("--dataset", dataset_texts, "TAG=PATH[,PATH...], TAG in men3k|ws353|simlex999|rg65|generic")->required();
  ev_cmd->add_option("--format", ev.format, "Output format")->check(CLI::IsMember({"tsv", "table"}))->capture_default_str();
  add_common(ev_cmd, ev);

  NeighborsArgs nb;
  auto* nb_cmd = app.add_subcommand("neighbors", "Top-k nearest words by cosine similarity");
  nb_cmd->add_option("--vectors", nb.vectors, "Embeddings to query")->required();
  nb_cmd->add_option("--word", nb.word, "Cue word")->required();
  nb_cmd->add_option("--top", nb.top, "Number of neighbors")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(nb_cmd, nb);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << EXTROFIT_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "extrofit: " << e.what() << '\n';
    const CLI::App* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failing->help();
    return kExitUsage;
  }

  if (ex_cmd->parsed()) return cmd_extrofit(ex, out, err);
  if (re_cmd->parsed()) return cmd_retrofit(re, out, err);
  if (nb_cmd->parsed()) return cmd_neighbors(nb, out, err);

  for (const auto& text : dataset_texts) {
    auto spec = parse_dataset_spec(text);
    if (!spec) {
      err << "extrofit: --dataset '" << text
          << "': expected TAG=PATH[,PATH...] with TAG in men3k|ws353|simlex999|rg65|generic\n";
      err << ev_cmd->help();
      return kExitUsage;
    }
    ev.datasets.push_back(std::move(*spec));
  }
  return cmd_eval(ev, out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, out, err);
}

}  // namespace extrofit::cli
