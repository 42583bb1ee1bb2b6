#include "facet/error.hpp"

namespace facet {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Duplicate: return "duplicate error";
        case ErrorKind::Format: return "format error";
        case ErrorKind::NotFound: return "not-found error";
        case ErrorKind::Size: return "size error";
        case ErrorKind::Shape: return "shape error";
        case ErrorKind::Degeneracy: return "degeneracy error";
        case ErrorKind::Data: return "data error";
        case ErrorKind::Bound: return "bound error";
        case ErrorKind::Alignment: return "alignment error";
        case ErrorKind::Coverage: return "coverage error";
        case ErrorKind::Source: return "source error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Usage: return "usage error";
        case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

}  // namespace facet
