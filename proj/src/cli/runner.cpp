#include "lqg/cli/runner.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <ctime>
#include <fstream>
#include <ostream>

#include "lqg/cli/suites.hpp"

namespace lqg::cli {

namespace fs = std::filesystem;

namespace {

// Paths the signal handler removes: the run's outputs and its lock. Fixed
// storage so the handler touches nothing that allocates.
constexpr std::size_t kMaxTracked = 256, kMaxPath = 4096;
std::array<std::array<char, kMaxPath>, kMaxTracked> g_tracked{};
std::atomic<std::size_t> g_count{0};

void remove_tracked() {
  const std::size_t n = g_count.load();
  for (std::size_t i = n; i-- > 0;) ::unlink(g_tracked[i].data());
}

extern "C" void on_signal(int sig) {
  remove_tracked();
  std::signal(sig, SIG_DFL);
  std::raise(sig);
}

void track(const fs::path& path) {
  const std::string s = path.string();
  const std::size_t i = g_count.load();
  if (i == kMaxTracked || s.size() >= kMaxPath) throw std::runtime_error("too many output files");
  std::memcpy(g_tracked[i].data(), s.c_str(), s.size() + 1);
  g_count.store(i + 1);
}

// Installs the handlers for one run; on unwinding without commit() the
// tracked files are removed.
class Transaction {
public:
  Transaction() {
    g_count = 0;
    old_int_ = std::signal(SIGINT, on_signal);
    old_term_ = std::signal(SIGTERM, on_signal);
  }
  ~Transaction() {
    std::signal(SIGINT, old_int_);
    std::signal(SIGTERM, old_term_);
    if (!committed_) remove_tracked();
    g_count = 0;
  }
  Transaction(const Transaction&) = delete;
  Transaction& operator=(const Transaction&) = delete;
  void commit() { committed_ = true; }

private:
  void (*old_int_)(int);
  void (*old_term_)(int);
  bool committed_ = false;
};

std::string utc_now(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  track(path);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string version() { return LQG_VERSION; }

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST)
      throw std::runtime_error("output directory " + dir.string() + " is locked by another run (" + path_.string() + ")");
    throw std::runtime_error("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

OutputLock::~OutputLock() { ::unlink(path_.c_str()); }

int run_suite(const ExperimentConfig& config, std::ostream& log) {
  try {
    const Suite& suite = find_suite(config.suite);
    suite.validate(config);
    fs::create_directories(config.out);
    OutputLock lock(config.out);
    Transaction tx;
    track(config.out / ".lock");
    fs::remove(config.out / "manifest.json");

    const auto start = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();
    log << suite.name << ": running (seed " << config.seed << ", workers " << config.workers << ")" << std::endl;
    SuiteOutput out = suite.run(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<std::string> files;
    auto config_json = to_json(config);
    config_json.erase("out");
    write_text(config.out / "config.json", config_json.dump(2) + "\n");
    files.push_back("config.json");
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : out.reports) reports.push_back(to_json(r));
    write_text(config.out / "reports.json", reports.dump(2) + "\n");
    files.push_back("reports.json");
    for (const auto& [name, table] : out.tables) {
      write_text(config.out / name, table.str());
      files.push_back(name);
    }
    for (const auto& [name, writer] : out.binaries) {
      track(config.out / name);
      writer(config.out / name);
      files.push_back(name);
    }

    nlohmann::json listed = nlohmann::json::array();
    for (const auto& name : files) {
      const fs::path p = config.out / name;
      listed.push_back({{"name", name}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    const auto end = std::chrono::system_clock::now();
    const int status = out.inconclusive() ? kInconclusive : kOk;
    const nlohmann::json manifest = {{"suite", suite.name},
                                     {"config_hash", config_hash(config)},
                                     {"version", version()},
                                     {"start_time", utc_now(start)},
                                     {"end_time", utc_now(end)},
                                     {"wall_seconds", wall},
                                     {"exit_status", status},
                                     {"files", listed}};
    const fs::path staged = config.out / "manifest.json.tmp";
    write_text(staged, manifest.dump(2) + "\n");
    fs::rename(staged, config.out / "manifest.json");
    tx.commit();

    std::size_t flagged = 0;
    for (const auto& r : out.reports) flagged += r.inconclusive;
    log << suite.name << ": " << out.reports.size() << " reports, " << flagged << " inconclusive, "
        << format_double(std::round(wall * 10) / 10) << " s -> " << config.out.string() << std::endl;
    return status;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << std::endl;
    return kError;
  }
}

int run_all(const ExperimentConfig& config, std::ostream& log) {
  bool error = false, inconclusive = false;
  for (const std::string& name : acceptance_suites()) {
    ExperimentConfig c = config;
    c.suite = name;
    c.out = config.out / name;
    const int status = run_suite(c, log);
    error |= status == kError;
    inconclusive |= status == kInconclusive;
  }
  return error ? kError : inconclusive ? kInconclusive : kOk;
}

}  // namespace lqg::cli
