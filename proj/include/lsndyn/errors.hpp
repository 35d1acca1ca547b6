#pragma once

#include <stdexcept>
#include <string>

namespace lsndyn {

// Failure classes map one-to-one onto CLI exit codes.

/// Bad configuration or command-line usage (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be analyzed: unreadable, malformed, empty,
/// or outside the declared windows (exit 3).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch or broken invariant between pipeline stages (exit 4).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIngest = 3;
inline constexpr int kExitConsistency = 4;

}  // namespace lsndyn
