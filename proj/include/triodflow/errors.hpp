#ifndef TRIODFLOW_ERRORS_HPP
#define TRIODFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace triodflow {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateSegment : Error { using Error::Error; };
struct InvalidLocator : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };
struct JunctionSolveFailed : Error { using Error::Error; };
struct TopologyMismatch : Error { using Error::Error; };
struct InvalidHorizon : Error { using Error::Error; };
struct InsufficientRecords : Error { using Error::Error; };
struct NotEmbedded : Error { using Error::Error; };
struct CutNotTransversal : Error { using Error::Error; };
struct CollinearPoints : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace triodflow

#endif
