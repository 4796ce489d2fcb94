#pragma once

#include <stdexcept>
#include <string>

namespace dfrsim {

// Configuration problem (unparseable file, unknown key, bad value).
// what() carries "file:line: message" when a line is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, const std::string& message)
      : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + message
                                    : file + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

// Filesystem failure while writing results.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace dfrsim
