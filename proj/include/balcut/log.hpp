#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <json.hpp>

namespace balcut {

// JSON-lines event sink. Wall-clock timings and diagnostics go here, never
// into result documents (results must be byte-identical across reruns).
class JsonlLogger {
 public:
  JsonlLogger() = default;

  static JsonlLogger to_stderr() {
    JsonlLogger l;
    l.out_ = &std::cerr;
    return l;
  }

  static JsonlLogger to_file(const std::string& path) {
    JsonlLogger l;
    l.file_ = std::make_shared<std::ofstream>(path);
    l.out_ = l.file_.get();
    return l;
  }

  bool enabled() const { return out_ != nullptr; }

  void line(const nlohmann::json& j) {
    if (out_) *out_ << j.dump() << "\n";
  }

 private:
  std::ostream* out_ = nullptr;
  std::shared_ptr<std::ofstream> file_;
};

}  // namespace balcut
