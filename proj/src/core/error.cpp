#include "core/error.hpp"

namespace ghostphase {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::numerical: return "numerical precondition error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::data: return "data error";
  }
  return "error";
}

void throw_config(const std::string& what) { throw Error(ErrorKind::configuration, what); }
void throw_numerical(const std::string& what) { throw Error(ErrorKind::numerical, what); }
void throw_io(const std::string& what) { throw Error(ErrorKind::io, what); }
void throw_data(const std::string& what) { throw Error(ErrorKind::data, what); }

}  // namespace ghostphase
