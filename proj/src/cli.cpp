#include "matchpoint/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchpoint/analytics.hpp"
#include "matchpoint/config_io.hpp"
#include "matchpoint/csv.hpp"
#include "matchpoint/errors.hpp"
#include "matchpoint/ingest.hpp"
#include "matchpoint/profile_io.hpp"
#include "matchpoint/records_io.hpp"

namespace matchpoint {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kExitFooter =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown flag, bad flag value, missing subcommand)\n"
    "  3  config or schema error (malformed JSON, wrong field, bad version)\n"
    "  4  data error (missing or unreadable file, unparseable data, invalid profile)\n"
    "  5  internal error (failed simulation, unexpected failure)\n"
    "Failures print one JSON line on stderr: {\"error\", \"exit_code\", \"message\"}.";

// Failure that carries its own exit code.
struct CliFailure {
  ExitCode code;
  std::string message;
};

struct IngestArgs {
  std::string input, mapping, player, smoothing, provenance, out, report;
  bool strict_shot_types = false;
  bool include_opponents = false;
};

struct SimulateArgs {
  std::string config, out, summary;
  std::optional<int> parallelism, matches;
  std::optional<std::uint64_t> seed;
};

struct SweepArgs {
  std::string config, param, out, json_out;
  std::vector<std::string> values;
  std::optional<int> parallelism, matches;
  std::optional<std::uint64_t> seed;
};

struct AnalyzeArgs {
  std::string matches, outdir, side = "A";
  std::vector<std::string> emit{"histogram", "win_summary", "patterns"};
  int top_k = 5;
  int histogram_cap = kDefaultHistogramCap;
  bool no_return_direction = false;
};

struct ValidateArgs {
  std::string profile;
};

struct Args {
  IngestArgs ingest;
  SimulateArgs simulate;
  SweepArgs sweep;
  AnalyzeArgs analyze;
  ValidateArgs validate;
};

std::unique_ptr<CLI::App> build_app(Args& a) {
  auto app = std::make_unique<CLI::App>(
      "Data-driven tennis shot simulation: build skill profiles from charted rallies, "
      "play bots and tree-search agents against them, and analyse the results.",
      "matchpoint");
  app->require_subcommand(1);
  app->footer(kExitFooter);

  auto* ingest = app->add_subcommand("ingest", "Estimate a skill profile from a charting CSV");
  ingest->add_option("--input", a.ingest.input, "Charting points CSV")->required();
  ingest->add_option("--mapping", a.ingest.mapping,
                     "Column mapping JSON (default: Match Charting Project layout)");
  ingest->add_option("--player", a.ingest.player,
                     "Count only this player's shots (default: all shots, the Average profile)");
  ingest->add_flag("--include-opponents", a.ingest.include_opponents,
                   "With --player, also count the opponents' shots in those rallies");
  ingest->add_option("--smoothing", a.ingest.smoothing,
                     "none or laplace:ALPHA (default: laplace:1 with --player, else none)");
  ingest->add_flag("--strict-shot-types", a.ingest.strict_shot_types,
                   "Count only forehand and backhand groundstrokes");
  ingest->add_option("--provenance", a.ingest.provenance,
                     "Provenance string stored in the profile");
  ingest->add_option("--out", a.ingest.out, "Profile JSON to write")->required();
  ingest->add_option("--report", a.ingest.report, "Ingest report JSON to write");
  ingest->footer(kExitFooter);

  auto* simulate = app->add_subcommand("simulate", "Play a seeded batch of matches");
  simulate->add_option("--config", a.simulate.config, "Simulation config JSON")->required();
  simulate->add_option("--out", a.simulate.out, "Match records JSONL to write")->required();
  simulate->add_option("--summary", a.simulate.summary,
                       "Batch summary JSON to write (default: stdout)");
  simulate->add_option("--parallelism", a.simulate.parallelism,
                       "Worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", a.simulate.seed, "Master seed (overrides config)");
  simulate->add_option("--matches", a.simulate.matches, "Number of matches (overrides config)")
      ->check(CLI::PositiveNumber);
  simulate->footer(kExitFooter);

  auto* sweep = app->add_subcommand("sweep", "Re-run a batch once per value of an MCTS parameter");
  sweep->add_option("--config", a.sweep.config,
                    "Simulation config JSON; agent_a must be an mcts agent")
      ->required();
  sweep->add_option("--param", a.sweep.param, "Parameter of agent_a to vary")
      ->required()
      ->check(CLI::IsMember({"c", "iterations"}));
  sweep->add_option("--values", a.sweep.values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", a.sweep.out, "Sweep CSV to write")->required();
  sweep->add_option("--json", a.sweep.json_out, "Sweep JSON to write");
  sweep->add_option("--parallelism", a.sweep.parallelism, "Worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", a.sweep.seed, "Master seed (overrides config)");
  sweep->add_option("--matches", a.sweep.matches, "Matches per value (overrides config)")
      ->check(CLI::PositiveNumber);
  sweep->footer(kExitFooter);

  auto* analyze = app->add_subcommand("analyze", "Compute reports from match records");
  analyze->add_option("--matches", a.analyze.matches, "Match records JSONL")->required();
  analyze->add_option("--emit", a.analyze.emit, "Comma-separated: histogram,win_summary,patterns")
      ->delimiter(',')
      ->check(CLI::IsMember({"histogram", "win_summary", "patterns"}))
      ->capture_default_str();
  analyze->add_option("--outdir", a.analyze.outdir, "Directory for <artifact>.csv and .json")
      ->required();
  analyze->add_option("--side", a.analyze.side, "Server whose patterns are mined")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  analyze->add_option("--top-k", a.analyze.top_k, "Patterns kept per serve scenario")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--histogram-cap", a.analyze.histogram_cap,
                      "Longest rally length with its own bin")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_flag("--no-return-direction", a.analyze.no_return_direction,
                    "Replace the return direction in patterns with a wildcard");
  analyze->footer(kExitFooter);

  auto* validate = app->add_subcommand("validate", "Check a skill profile");
  validate->add_option("--profile", a.validate.profile, "Profile JSON")->required();
  validate->footer(kExitFooter);

  return app;
}

// Output files are checked before any work starts.
void check_output_path(const std::string& path) {
  if (path.empty()) return;
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw FileError("output directory does not exist: " + parent.string());
  }
}

void check_input_path(const std::string& path) {
  if (!fs::is_regular_file(path)) throw FileError("cannot open " + path);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  body(out);
  if (!out) throw FileError("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& doc) {
  write_file(path, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

Smoothing parse_smoothing(const std::string& s) {
  if (s == "none") return Smoothing::none();
  if (s == "laplace") return Smoothing::laplace(1.0);
  if (s.rfind("laplace:", 0) == 0) {
    std::string rest = s.substr(8);
    double alpha = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), alpha);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && alpha > 0.0) {
      return Smoothing::laplace(alpha);
    }
  }
  throw CliFailure{kExitUsage, "--smoothing: expected none or laplace:ALPHA with ALPHA > 0, got \"" +
                                   s + "\""};
}

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  // Named-player tables are sparse, so they default to add-one smoothing.
  const std::string smoothing_name =
      !a.smoothing.empty() ? a.smoothing : (a.player.empty() ? "none" : "laplace:1");
  const Smoothing smoothing = parse_smoothing(smoothing_name);
  check_input_path(a.input);
  ColumnMapping mapping;
  if (!a.mapping.empty()) {
    check_input_path(a.mapping);
    mapping = ColumnMapping::from_json(parse_json_document(read_text_file(a.mapping)));
  }
  check_output_path(a.out);
  check_output_path(a.report);

  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw FileError("cannot open " + a.input);
  IngestOptions options;
  options.filter = a.player.empty() ? PlayerFilter::all() : PlayerFilter::player(a.player);
  options.filter.include_opponents = a.include_opponents;
  options.strict_shot_types = a.strict_shot_types;
  CorpusIngestor ingestor(options);
  RallyRowReader reader(in, mapping);
  RallyRow row;
  for (;;) {
    auto status = reader.next(row);
    if (status == RallyRowReader::Status::End) break;
    if (status == RallyRowReader::Status::Unreadable) {
      ingestor.add_unreadable();
    } else if (status == RallyRowReader::Status::Row) {
      ingestor.add_row(row);
    }
  }

  // A misspelt --player would otherwise yield a pure-prior profile.
  if (ingestor.counts().rally_count == 0) {
    throw ProfileError("no rallies matched in " + a.input +
                       (a.player.empty() ? std::string() : " for player " + a.player));
  }

  std::string provenance = a.provenance;
  if (provenance.empty()) {
    provenance = fs::path(a.input).filename().string() +
                 (a.player.empty() ? " all players" : " player " + a.player) + ", smoothing " +
                 smoothing_name;
  }
  SkillProfile profile = finalize_profile(ingestor.counts(), smoothing, provenance);
  save_profile(profile, a.out);
  if (!a.report.empty()) write_json(a.report, report_to_json(make_report(ingestor.counts())));
  out << "ingested " << ingestor.counts().rally_count << " rallies ("
      << ingestor.counts().skipped_rallies << " skipped), "
      << ingestor.counts().classified_shots << " shots -> " << a.out << "\n";
  return kExitOk;
}

BatchConfig load_with_overrides(const std::string& path, std::optional<int> parallelism,
                                std::optional<std::uint64_t> seed, std::optional<int> matches) {
  check_input_path(path);
  BatchConfig batch = load_batch_config(path);
  if (parallelism) batch.parallelism = *parallelism;
  if (seed) batch.master_seed = *seed;
  if (matches) batch.n_matches = *matches;
  batch.validate();
  return batch;
}

void require_complete(const BatchSummary& summary) {
  if (summary.failed.empty()) return;
  const auto& f = summary.failed.front();
  throw CliFailure{kExitInternal, "match " + std::to_string(f.index) + " failed: " + f.message};
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  BatchConfig batch = load_with_overrides(a.config, a.parallelism, a.seed, a.matches);
  check_output_path(a.out);
  check_output_path(a.summary);
  BatchResult result = run_batch(batch);
  write_jsonl(fs::path(a.out), result.records);
  json summary = summary_to_json(result.summary);
  if (a.summary.empty()) {
    out << summary.dump(2) << '\n';
  } else {
    write_json(a.summary, summary);
  }
  require_complete(result.summary);
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  BatchConfig base = load_with_overrides(a.config, a.parallelism, a.seed, a.matches);
  if (!std::holds_alternative<MctsConfig>(base.agent_a)) {
    throw ConfigError("sweep: agent_a must be an mcts agent");
  }
  check_output_path(a.out);
  check_output_path(a.json_out);

  std::vector<BatchConfig> batches;
  for (const auto& v : a.values) {
    BatchConfig b = base;
    auto& m = std::get<MctsConfig>(b.agent_a);
    std::size_t used = 0;
    try {
      if (a.param == "c") {
        m.exploration_c = std::stod(v, &used);
      } else {
        m.iterations = std::stoi(v, &used);
      }
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) {
      throw CliFailure{kExitUsage, "--values: \"" + v + "\" is not a valid " + a.param};
    }
    b.validate();
    batches.push_back(std::move(b));
  }

  std::vector<std::pair<std::string, BatchSummary>> summaries;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    BatchResult r = run_batch(batches[i]);
    require_complete(r.summary);
    summaries.emplace_back(a.param + "=" + a.values[i], std::move(r.summary));
  }
  auto rows = sweep_report(summaries);
  write_file(a.out, [&](std::ostream& o) { write_sweep_csv(o, rows); });
  if (!a.json_out.empty()) write_json(a.json_out, sweep_to_json(rows));
  for (const auto& row : rows) {
    out << row.label << ": points " << format_number(row.point_win_rate) << "%, matches "
        << format_number(row.match_win_rate) << "%\n";
  }
  return kExitOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  check_input_path(a.matches);
  if (!fs::is_directory(a.outdir)) {
    std::error_code ec;
    fs::create_directories(a.outdir, ec);
    if (ec) throw FileError("cannot create " + a.outdir + ": " + ec.message());
  }
  auto records = read_jsonl(fs::path(a.matches));
  if (records.empty()) throw CliFailure{kExitData, a.matches + ": no match records"};

  // Emit in a fixed order regardless of how --emit lists them.
  auto wanted = [&](const char* name) {
    return std::find(a.emit.begin(), a.emit.end(), name) != a.emit.end();
  };
  const fs::path dir = a.outdir;
  auto emit = [&](const std::string& name, const json& doc,
                  const std::function<void(std::ostream&)>& csv) {
    write_file(dir / (name + ".csv"), csv);
    write_json(dir / (name + ".json"), doc);
    out << "wrote " << (dir / (name + ".csv")).string() << " and .json\n";
  };

  if (wanted("histogram")) {
    auto h = rally_length_distribution(records, a.histogram_cap);
    emit("histogram", histogram_to_json(h), [&](std::ostream& o) { write_histogram_csv(o, h); });
  }
  if (wanted("win_summary")) {
    auto s = win_summary(records);
    emit("win_summary", win_summary_to_json(s),
         [&](std::ostream& o) { write_win_summary_csv(o, s); });
  }
  if (wanted("patterns")) {
    PatternOptions options;
    options.include_return = !a.no_return_direction;
    auto p = top_patterns(records, a.side == "A" ? Player::A : Player::B, a.top_k, options);
    emit("patterns", patterns_to_json(p), [&](std::ostream& o) { write_patterns_csv(o, p); });
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  check_input_path(a.profile);
  SkillProfile profile = profile_from_json_unchecked(parse_json_document(read_text_file(a.profile)));
  auto report = validate_profile(profile);
  if (!report.ok()) {
    std::string msg = std::to_string(report.issues.size()) + " issue(s): ";
    for (std::size_t i = 0; i < report.issues.size(); ++i) {
      out << report.issues[i].describe() << '\n';
      if (i > 0) msg += "; ";
      msg += report.issues[i].describe();
    }
    throw CliFailure{kExitData, msg};
  }
  out << "OK " << profile.context_count() << " contexts\n";
  return kExitOk;
}

const char* kind_of(ExitCode code) {
  switch (code) {
    case kExitUsage: return "usage";
    case kExitSchema: return "schema";
    case kExitData: return "data";
    case kExitInternal: return "internal";
    default: return "ok";
  }
}

int fail(std::ostream& err, ExitCode code, const std::string& message) {
  err << json{{"error", kind_of(code)}, {"exit_code", static_cast<int>(code)},
              {"message", message}}
             .dump()
      << '\n';
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a;
  auto app = build_app(a);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kExitUsage, e.what());
  }

  try {
    if (app->got_subcommand("ingest")) return cmd_ingest(a.ingest, out);
    if (app->got_subcommand("simulate")) return cmd_simulate(a.simulate, out);
    if (app->got_subcommand("sweep")) return cmd_sweep(a.sweep, out);
    if (app->got_subcommand("analyze")) return cmd_analyze(a.analyze, out);
    if (app->got_subcommand("validate")) return cmd_validate(a.validate, out);
    return fail(err, kExitUsage, "no subcommand");
  } catch (const CliFailure& f) {
    return fail(err, f.code, f.message);
  } catch (const SchemaError& e) {
    return fail(err, kExitSchema, e.what());
  } catch (const ConfigError& e) {
    return fail(err, kExitSchema, e.what());
  } catch (const FileError& e) {
    return fail(err, kExitData, e.what());
  } catch (const ParseError& e) {
    return fail(err, kExitData, e.what());
  } catch (const ProfileError& e) {
    return fail(err, kExitData, e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitInternal, e.what());
  }
}

std::map<std::string, std::vector<std::string>> registered_flags() {
  Args a;
  auto app = build_app(a);
  std::map<std::string, std::vector<std::string>> flags;
  auto collect = [](const CLI::App& sub) {
    std::vector<std::string> names;
    for (const auto* opt : sub.get_options()) {
      for (const auto& n : opt->get_lnames()) names.push_back("--" + n);
    }
    std::sort(names.begin(), names.end());
    return names;
  };
  flags[""] = collect(*app);
  for (const auto* sub : app->get_subcommands({})) flags[sub->get_name()] = collect(*sub);
  return flags;
}

std::string help_text(const std::string& subcommand) {
  Args a;
  auto app = build_app(a);
  if (subcommand.empty()) return app->help();
  return app->get_subcommand(subcommand)->help();
}

}  // namespace matchpoint
