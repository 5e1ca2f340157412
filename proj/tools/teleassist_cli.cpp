// teleassist command-line entry point: replay, bench, serve, config.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "teleassist/bench.hpp"
#include "teleassist/io.hpp"
#include "teleassist/replay.hpp"
#include "teleassist/session.hpp"
#include "teleassist/websocket.hpp"

namespace ta = teleassist;

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::stringstream one(item);
    T value{};
    if (!(one >> value) || !one.eof()) throw std::invalid_argument(std::string("bad ") + what + " list: " + text);
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
  return out;
}

ta::EngineConfig config_or_default(const std::string& path) {
  return path.empty() ? ta::EngineConfig{} : ta::load_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_replay(const std::string& scene_path, const std::string& trace_path, const std::string& mode_text,
               const std::string& config_path, const std::string& out_path, int workers) {
  const ta::SceneDescription scene = ta::load_scene(scene_path);
  ta::EngineConfig config = config_or_default(config_path);
  if (workers >= 0) config.workers = workers;
  const auto trace = ta::load_trace(trace_path);
  std::optional<ta::Mode> mode;
  if (!mode_text.empty()) {
    mode = ta::parse_mode(mode_text);
    if (!mode) throw std::invalid_argument("unknown mode \"" + mode_text + "\" (explicit, implicit, none)");
  }
  const ta::ReplayResult result = ta::replay(scene, config, trace, mode);
  write_text(out_path, ta::format_event_log(result.events));
  // Keep stdout clean for the event log when it goes there.
  std::ostream& report = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
  report << result.summary.to_json().dump(2) << '\n';
  return 0;
}

int run_bench(const std::string& scene_path, const std::string& candidates, const std::string& workers,
              const std::string& csv_path, int warmups, int reps) {
  const ta::SceneDescription scene = ta::load_scene(scene_path);
  ta::BenchOptions options;
  options.warmups = warmups;
  options.repetitions = reps;
  const auto records = ta::run_bench(scene, parse_list<std::size_t>(candidates, "candidate"),
                                     parse_list<int>(workers, "worker"), options);
  ta::write_bench_table(std::cout, records);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    ta::write_bench_csv(out, records);
  }
  return 0;
}

int run_serve(const std::string& scene_path, const std::string& config_path, int port,
              const std::string& bind, const std::string& scene_dir) {
  ta::SceneDescription scene = ta::load_scene(scene_path);
  ta::EngineConfig config = config_or_default(config_path);
  std::filesystem::path dir = scene_dir.empty() ? std::filesystem::path(scene_path).parent_path()
                                                : std::filesystem::path(scene_dir);

  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ta::ws::SessionServer server(ta::Session(std::move(scene), std::move(config), dir),
                               ta::ws::ServerOptions{bind, static_cast<std::uint16_t>(port)});
  const std::uint16_t bound = server.start();
  std::cout << "listening on ws://" << bind << ':' << bound << "/" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  std::cout << "stopped" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleoperation assistance engine"};
  app.require_subcommand(1);

  std::string scene, trace, mode, config, out, candidates = "1000,7125,20000,100000", workers_list = "1,8", csv;
  std::string bind = "127.0.0.1", scene_dir;
  int workers = -1, port = 8765, warmups = 5, reps = 50;

  auto* replay = app.add_subcommand("replay", "Replay a trace and write the event log");
  replay->add_option("--scene", scene, "Scene file")->required();
  replay->add_option("--trace", trace, "Trace file")->required();
  replay->add_option("--mode", mode, "Force a mode for the whole run: explicit, implicit or none");
  replay->add_option("--config", config, "Engine config file");
  replay->add_option("--out", out, "Event log destination (default stdout)");
  replay->add_option("--workers", workers, "Worker threads for candidate filtering");

  auto* bench = app.add_subcommand("bench", "Time the assistance query across candidate and worker counts");
  bench->add_option("--scene", scene, "Scene file")->required();
  bench->add_option("--candidates", candidates, "Comma-separated candidate counts");
  bench->add_option("--workers", workers_list, "Comma-separated worker counts");
  bench->add_option("--csv", csv, "CSV destination");
  bench->add_option("--warmups", warmups, "Untimed warmup runs");
  bench->add_option("--reps", reps, "Timed repetitions");

  auto* serve = app.add_subcommand("serve", "Run a live session endpoint");
  serve->add_option("--scene", scene, "Initial scene file")->required();
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--config", config, "Engine config file");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--scene-dir", scene_dir, "Directory for load_scene by name (default: the scene's directory)");

  auto* cfg = app.add_subcommand("config", "Print the default engine config");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*replay) return run_replay(scene, trace, mode, config, out, workers);
    if (*bench) return run_bench(scene, candidates, workers_list, csv, warmups, reps);
    if (*serve) return run_serve(scene, config, port, bind, scene_dir);
    if (*cfg) {
      std::cout << ta::config_to_json(ta::EngineConfig{}).dump(2) << '\n';
      return 0;
    }
  } catch (const ta::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
