#include "modlab/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "modlab/error.hpp"

namespace modlab::io {

namespace fs = std::filesystem;

void write_text_atomic(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_jsonl(const fs::path& path, const std::vector<nlohmann::json>& rows) {
  std::string text;
  for (const auto& r : rows) text += r.dump() + '\n';
  write_text_atomic(path, text);
}

void read_jsonl(const fs::path& path, const std::function<void(const nlohmann::json&)>& row) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      row(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw ValidationError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace modlab::io
