#pragma once

// Golden CLI transcripts: "args: ..." and "exit: N" headers, then the table
// output after "--- table" and the --json output after "--- json".

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace golden {

inline std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

struct Golden {
  std::vector<std::string> args;
  int exit_code = 0;
  std::string table;
  std::string json_text;
};

inline Golden load(const std::filesystem::path& path) {
  std::ifstream in(path);
  Golden g;
  std::string line, *target = nullptr;
  while (std::getline(in, line)) {
    if (line.rfind("args: ", 0) == 0 && !target) {
      g.args = split(line.substr(6));
    } else if (line.rfind("exit: ", 0) == 0 && !target) {
      g.exit_code = std::stoi(line.substr(6));
    } else if (line == "--- table") {
      target = &g.table;
    } else if (line == "--- json") {
      target = &g.json_text;
    } else if (target) {
      *target += line + "\n";
    }
  }
  return g;
}

inline std::vector<std::filesystem::path> files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".golden") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> with_json(std::vector<std::string> args) {
  args.push_back("--json");
  return args;
}

}  // namespace golden
