#pragma once

#include <stdexcept>

namespace gfrft {

// Everything thrown by the library derives from Error so callers (and the CLI)
// can map failures to exit codes in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };

struct NonHermitian : Error { using Error::Error; };
struct NonUnitary : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct BranchPole : Error { using Error::Error; };
struct SingularSubproblem : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };

struct DisconnectedAfterRetries : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace gfrft
