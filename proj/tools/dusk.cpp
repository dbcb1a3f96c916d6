// Command-line front end: fit, replay, simulate, predict, listen, serve.

#include "dusk/calibration.hpp"
#include "dusk/contact.hpp"
#include "dusk/decoder.hpp"
#include "dusk/expert_model.hpp"
#include "dusk/layout.hpp"
#include "dusk/lexicon.hpp"
#include "dusk/metrics.hpp"
#include "dusk/recognizer.hpp"
#include "dusk/server.hpp"
#include "dusk/session_log.hpp"
#include "dusk/simulation.hpp"
#include "dusk/udp_listener.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

using namespace dusk;

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Layout load_layout(const std::string& path) {
  if (path.empty()) return default_layout();
  auto layout = layout_from_json(read_json(path));
  validate(layout);
  return layout;
}

CalibrationProfile load_profile(const std::string& path, const Layout& layout) {
  if (path.empty()) return synth_profile(layout);
  return profile_from_json(read_json(path));
}

std::optional<Lexicon> load_lexicon_or_default(const std::string& path, bool needed) {
  if (!needed && path.empty()) return std::nullopt;
  const std::string file = path.empty() ? std::string(DUSK_DEFAULT_LEXICON) : path;
  auto load = load_lexicon_file(file);
  for (const auto& w : load.warnings) std::cerr << "lexicon: " << w << '\n';
  return std::move(load.lexicon);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

struct Common {
  std::string layout;
  std::string profile;
  std::string lexicon;
};

void add_layout(CLI::App* cmd, Common& c) {
  cmd->add_option("--layout", c.layout, "Layout JSON (default: built-in QWERTY)")
      ->check(CLI::ExistingFile);
}

void add_profile(CLI::App* cmd, Common& c) {
  cmd->add_option("--profile", c.profile, "Calibration profile JSON (default: synthetic)")
      ->check(CLI::ExistingFile);
}

void add_lexicon(CLI::App* cmd, Common& c) {
  cmd->add_option("--lexicon", c.lexicon, "Lexicon TSV (default: bundled 5k words)")
      ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-thumb stroke keyboard decoder and tools"};
  app.require_subcommand(1);
  Common common;

  // fit
  std::string fit_log, fit_out, fit_pad = "134x63", fit_timing;
  auto* fit = app.add_subcommand("fit", "Fit a calibration profile from a calibration log");
  fit->add_option("log", fit_log, "Calibration log (JSONL)")->required()->check(CLI::ExistingFile);
  fit->add_option("-o,--output", fit_out, "Profile JSON")->required();
  fit->add_option("--pad", fit_pad, "Touchpad size in mm, WxH");
  fit->add_option("--timing", fit_timing, "Also write the per-key timing table (CSV)");
  add_layout(fit, common);

  // replay
  std::string replay_log, replay_report, replay_csv;
  bool no_predictions = false;
  auto* replay = app.add_subcommand("replay", "Decode a session log and report metrics");
  replay->add_option("log", replay_log, "Session log (JSONL)")->required()->check(CLI::ExistingFile);
  replay->add_option("--report", replay_report, "Metrics report JSON ('-' for stdout)")->required();
  replay->add_option("--csv", replay_csv, "Per-phrase metrics CSV");
  replay->add_flag("--no-predictions", no_predictions, "Disable autocorrect and completion");
  add_profile(replay, common);
  add_layout(replay, common);
  add_lexicon(replay, common);

  // simulate
  double noise = 0;
  std::uint64_t seed = 1;
  std::string phrases_file, simulate_out = "-";
  std::size_t calibration_reps = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic gesture log");
  simulate->add_option("--noise", noise, "Noise level lambda (multiples of the key spread)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", seed, "Random seed");
  auto* phrases_opt = simulate->add_option("--phrases", phrases_file, "One phrase per line")
                          ->check(CLI::ExistingFile);
  auto* calibration_opt =
      simulate->add_option("--calibration", calibration_reps,
                           "Write a calibration log with this many trials per key and thumb");
  phrases_opt->excludes(calibration_opt);
  simulate->add_option("-o,--output", simulate_out, "Output log ('-' for stdout)");
  add_profile(simulate, common);
  add_layout(simulate, common);

  // predict
  std::string timing_file, corpus_file;
  auto* predict = app.add_subcommand("predict", "Predict peak expert WPM");
  predict->add_option("--timing", timing_file, "Timing table CSV")->required()->check(CLI::ExistingFile);
  predict->add_option("--corpus", corpus_file, "Corpus word<TAB>count (default: bundled lexicon)")
      ->check(CLI::ExistingFile);
  add_layout(predict, common);

  // listen
  std::uint16_t listen_port = kDefaultTuioPort;
  std::string listen_pad = "134x63", listen_out;
  double listen_duration = 0;
  auto* listen = app.add_subcommand("listen", "Record TUIO contacts as a gesture log");
  listen->add_option("--port", listen_port, "UDP port");
  listen->add_option("--pad", listen_pad, "Touchpad size in mm, WxH");
  listen->add_option("-o,--output", listen_out, "Output log (JSONL)")->required();
  listen->add_option("--duration", listen_duration, "Stop after this many seconds (0: until Ctrl-C)");

  // serve
  ServerOptions serve_options;
  std::uint16_t tuio_port = 0;
  std::string static_dir;
  bool serve_no_predictions = false;
  auto* serve = app.add_subcommand("serve", "Run the interactive WebSocket service");
  serve->add_option("--port", serve_options.port, "HTTP/WebSocket port");
  serve->add_option("--address", serve_options.address, "Bind address");
  serve->add_option("--static-dir", static_dir, "Directory of web client assets")
      ->check(CLI::ExistingDirectory);
  auto* tuio_opt = serve->add_option("--tuio-port", tuio_port, "Also accept TUIO on this UDP port");
  serve->add_flag("--no-predictions", serve_no_predictions, "Disable autocorrect and completion");
  add_profile(serve, common);
  add_layout(serve, common);
  add_lexicon(serve, common);

  // helpers
  std::string synth_out, synth_pad = "134x63";
  double spread = kDefaultSpreadMm, mm_per_key = kDefaultMmPerKey;
  auto* synth = app.add_subcommand("synth-profile", "Write the analytic default profile");
  synth->add_option("-o,--output", synth_out, "Profile JSON ('-' for stdout)")->required();
  synth->add_option("--pad", synth_pad, "Touchpad size in mm, WxH");
  synth->add_option("--spread", spread, "Endpoint standard deviation, mm")->check(CLI::PositiveNumber);
  synth->add_option("--mm-per-key", mm_per_key, "Stroke length per key width, mm")
      ->check(CLI::PositiveNumber);
  add_layout(synth, common);

  std::string export_templates_out, export_layout_out;
  auto* templates = app.add_subcommand("templates", "Write the 56 canonical stroke templates");
  templates->add_option("-o,--output", export_templates_out, "Templates JSON ('-' for stdout)")
      ->required();
  auto* layout_cmd = app.add_subcommand("layout", "Write the default layout");
  layout_cmd->add_option("-o,--output", export_layout_out, "Layout JSON ('-' for stdout)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      const auto layout = load_layout(common.layout);
      const PadSpec pad = parse_pad(fit_pad);
      const auto log = read_session_log_file(fit_log);
      const auto report = fit_profile(log, layout, pad);
      write_text(fit_out, to_json(report.profile).dump(2) + "\n");
      std::cerr << "fitted " << report.profile.model_count() << " key models from "
                << report.stats.considered << " trials (retention " << report.stats.retention()
                << ")\n";
      for (const auto& g : report.stats.omitted) {
        std::cerr << "omitted " << to_string(g.key) << "/" << to_string(g.thumb) << ": "
                  << g.survivors << " of " << g.total << " trials survived\n";
      }
      if (!fit_timing.empty()) {
        const auto timing = derive_timing_table(log, pad, report.profile.tap_threshold_mm);
        for (const auto& w : timing.warnings) std::cerr << "timing: " << w << '\n';
        std::ofstream out(fit_timing);
        if (!out) throw Error("cannot write " + fit_timing);
        write_timing_csv(out, timing.table);
      }
    } else if (*replay) {
      const auto layout = load_layout(common.layout);
      auto profile = load_profile(common.profile, layout);
      auto lexicon = load_lexicon_or_default(common.lexicon, !no_predictions);
      const auto model = DecoderModel::create(std::move(profile), layout, std::move(lexicon));
      const auto log = read_session_log_file(replay_log);
      const auto traces = replay_session(log, model, {!no_predictions});
      std::vector<PhraseMetrics> metrics;
      for (const auto& t : traces) metrics.push_back(phrase_metrics(t));
      write_text(replay_report, metrics_report(metrics).dump(2) + "\n");
      if (!replay_csv.empty()) {
        std::ofstream out(replay_csv);
        if (!out) throw Error("cannot write " + replay_csv);
        write_metrics_csv(out, metrics);
      }
    } else if (*simulate) {
      const auto layout = load_layout(common.layout);
      auto profile = load_profile(common.profile, layout);
      Simulator sim(std::move(profile), layout, noise, seed);
      std::vector<GestureLogRecord> log;
      if (*calibration_opt) {
        log = sim.calibration_log(calibration_reps);
      } else if (*phrases_opt) {
        log = sim.session_log(read_lines(phrases_file));
      } else {
        throw Error("simulate needs --phrases or --calibration");
      }
      if (simulate_out == "-") {
        write_session_log(std::cout, log);
      } else {
        write_session_log_file(simulate_out, log);
      }
    } else if (*predict) {
      const auto layout = load_layout(common.layout);
      std::ifstream timing_in(timing_file);
      const auto timing = read_timing_csv(timing_in);
      if (const auto missing = timing.missing(layout); !missing.empty()) {
        std::string keys;
        for (auto k : missing) keys += " " + to_string(k);
        throw Error("timing table lacks:" + keys);
      }
      auto corpus = load_lexicon_file(
          corpus_file.empty() ? std::string(DUSK_DEFAULT_LEXICON) : corpus_file,
          std::numeric_limits<std::size_t>::max());
      for (const auto& w : corpus.warnings) std::cerr << "corpus: " << w << '\n';
      std::cout << to_json(corpus_prediction(corpus.lexicon.entries(), timing, layout)).dump(2)
                << '\n';
    } else if (*listen) {
      const PadSpec pad = parse_pad(listen_pad);
      std::ofstream out(listen_out);
      if (!out) throw Error("cannot write " + listen_out);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      TuioListener listener(pad, listen_port);
      std::cerr << "listening for TUIO on udp/" << listener.port() << '\n';
      GestureAssembler assembler;
      const auto deadline = std::chrono::steady_clock::now() +
                            std::chrono::duration<double>(listen_duration);
      std::size_t gestures = 0;
      while (!g_interrupted &&
             (listen_duration <= 0 || std::chrono::steady_clock::now() < deadline)) {
        auto event = listener.pop_for(std::chrono::milliseconds(100));
        if (!event) continue;
        try {
          if (auto g = assembler.feed(*event)) {
            GestureLogRecord r;
            r.thumb = infer_thumb(*g, pad);
            r.pointer_id = g->pointer_id;
            r.gesture = std::move(*g);
            out << format_log_line(r) << '\n' << std::flush;
            ++gestures;
          }
        } catch (const ContactError& e) {
          std::cerr << "dropped event: " << e.what() << '\n';
        }
      }
      listener.stop();
      const auto s = listener.stats();
      std::cerr << gestures << " gestures; " << s.datagrams << " datagrams, " << s.malformed
                << " malformed, " << s.tracker.duplicate_frames << " duplicate frames, "
                << s.tracker.rejected_frames << " rejected frames, " << s.ignored_messages
                << " ignored messages\n";
    } else if (*serve) {
      const auto layout = load_layout(common.layout);
      auto profile = load_profile(common.profile, layout);
      auto lexicon = load_lexicon_or_default(common.lexicon, !serve_no_predictions);
      const auto model = DecoderModel::create(std::move(profile), layout, std::move(lexicon));
      serve_options.session.predictions_enabled = !serve_no_predictions;
      if (!static_dir.empty()) serve_options.static_dir = static_dir;
      if (*tuio_opt) serve_options.tuio_port = tuio_port;
      Server server(model, serve_options);
      std::cerr << "serving on http://" << serve_options.address << ":" << server.port()
                << " (WebSocket at /ws)";
      if (auto p = server.tuio_port()) std::cerr << ", TUIO on udp/" << *p;
      std::cerr << '\n';
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::thread watcher([&] {
        while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(200));
        server.stop();
      });
      server.run();
      g_interrupted = true;
      watcher.join();
    } else if (*synth) {
      const auto layout = load_layout(common.layout);
      write_text(synth_out, to_json(synth_profile(layout, parse_pad(synth_pad), spread, mm_per_key))
                                    .dump(2) + "\n");
    } else if (*templates) {
      write_text(export_templates_out, templates_to_json(canonical_templates()).dump(2) + "\n");
    } else if (*layout_cmd) {
      write_text(export_layout_out, to_json(default_layout()).dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "dusk: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
