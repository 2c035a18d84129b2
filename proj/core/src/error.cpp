#include "fdmimo/error.hpp"

namespace fdmimo {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::InvalidEdge: return "invalid-edge";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace fdmimo
