#include "fplab/error.hpp"

namespace fplab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Budget: return "budget";
        case ErrorKind::EmptyCell: return "empty-cell";
        case ErrorKind::EmptySet: return "empty-set";
        case ErrorKind::Scheme: return "scheme";
        case ErrorKind::Estimator: return "estimator";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Inconsistency: return "inconsistency";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace fplab
