#pragma once

#include <stdexcept>
#include <string>

namespace ghostphase {

enum class ErrorKind {
  configuration,  // bad parameters or grid/plane mismatch
  numerical,      // sampling, aliasing or resolution precondition
  io,             // filesystem failures
  data,           // malformed input data (envelope files, arrays)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_config(const std::string& what);
[[noreturn]] void throw_numerical(const std::string& what);
[[noreturn]] void throw_io(const std::string& what);
[[noreturn]] void throw_data(const std::string& what);

}  // namespace ghostphase
