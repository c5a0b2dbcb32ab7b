#pragma once

#include <stdexcept>
#include <string>

namespace garchm {

// Stable numeric codes; the C API and the CLI exit-code mapping rely on them.
enum class ErrorCode {
    invalid_argument = 1,
    parse = 2,
    data = 3,
    no_root = 4,
    non_stationary = 5,
    singular_matrix = 6,
    not_converged = 7,
    too_few_replicates = 8,
    internal = 9,
};

class GarchError : public std::runtime_error {
public:
    GarchError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgumentError : GarchError {
    explicit InvalidArgumentError(const std::string& what)
        : GarchError(ErrorCode::invalid_argument, what) {}
};

struct ParseError : GarchError {
    explicit ParseError(const std::string& what) : GarchError(ErrorCode::parse, what) {}
};

struct DataError : GarchError {
    explicit DataError(const std::string& what) : GarchError(ErrorCode::data, what) {}
};

// Identifiability objective does not bracket a root on the searched interval.
struct NoRootError : GarchError {
    explicit NoRootError(const std::string& what) : GarchError(ErrorCode::no_root, what) {}
};

struct NonStationaryError : GarchError {
    explicit NonStationaryError(const std::string& what)
        : GarchError(ErrorCode::non_stationary, what) {}
};

struct SingularMatrixError : GarchError {
    explicit SingularMatrixError(const std::string& what)
        : GarchError(ErrorCode::singular_matrix, what) {}
};

struct NotConvergedError : GarchError {
    explicit NotConvergedError(const std::string& what)
        : GarchError(ErrorCode::not_converged, what) {}
};

struct TooFewReplicatesError : GarchError {
    explicit TooFewReplicatesError(const std::string& what)
        : GarchError(ErrorCode::too_few_replicates, what) {}
};

}  // namespace garchm
