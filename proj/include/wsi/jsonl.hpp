#pragma once

#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "wsi/errors.hpp"

namespace wsi {

// Streams a UTF-8 JSON-lines file; blank lines are skipped. The callback
// receives the 1-based line number. Malformed lines raise ParseError.
inline void for_each_jsonl(
    const std::string& path,
    const std::function<void(int, const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    fn(lineno, obj);
  }
}

}  // namespace wsi
