#pragma once
// Runs the ocsnspd executable in a scratch directory and captures its streams.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <sys/wait.h>

namespace cli {

namespace fs = std::filesystem;

struct Result {
  int exit_code = -1;
  std::string out, err;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void spit(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
}

class Scratch {
 public:
  explicit Scratch(const std::string& tag) {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("ocsnspd-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  fs::path operator/(const std::string& name) const { return dir_ / name; }
  const fs::path& dir() const { return dir_; }

  // `args` is appended to the executable path verbatim (shell syntax).
  Result run(const std::string& args) const {
    const auto out = dir_ / ".stdout", err = dir_ / ".stderr";
    const std::string cmd = "cd '" + dir_.string() + "' && '" OCS_CLI_PATH "' " + args + " >'" + out.string() +
                            "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

inline std::string source_path(const std::string& rel) { return std::string(OCS_SOURCE_DIR) + "/" + rel; }

// Compares `actual` with a checked-in golden file. With OCS_UPDATE_GOLDEN set,
// rewrites the golden instead and reports a match.
inline bool matches_golden(const std::string& name, const std::string& actual) {
  const fs::path golden = source_path("tests/golden/" + name);
  if (std::getenv("OCS_UPDATE_GOLDEN")) {
    spit(golden, actual);
    return true;
  }
  return fs::exists(golden) && slurp(golden) == actual;
}

// Value of `key` in a space-separated key=value record ("" when absent).
inline std::string field(const std::string& record, const std::string& key) {
  const std::string needle = key + "=";
  std::size_t pos = 0;
  while ((pos = record.find(needle, pos)) != std::string::npos) {
    if (pos == 0 || record[pos - 1] == ' ' || record[pos - 1] == '\n') {
      const auto start = pos + needle.size();
      const auto end = record.find_first_of(" \n", start);
      return record.substr(start, end == std::string::npos ? std::string::npos : end - start);
    }
    pos += needle.size();
  }
  return "";
}

}  // namespace cli
