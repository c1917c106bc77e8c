#include "hprr/jsonl.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hprr/error.hpp"

namespace hprr::io {

bool is_header_line(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t");
  if (pos == line.npos || line[pos] != '{') return false;
  if (line.find("\"_header\"") == line.npos) return false;
  const auto j = nlohmann::json::parse(line, nullptr, false);
  return j.is_object() && j.contains("_header");
}

void for_each_record_line(const std::string& path,
                          const std::function<void(std::size_t, std::string_view)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (is_header_line(line)) continue;
    fn(line_no, line);
  }
}

nlohmann::json header_record(std::string_view command, std::uint64_t seed) {
  return {{"_header", {{"tool", "hprr"}, {"command", command}, {"seed", seed}}}};
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot replace " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hprr::io
