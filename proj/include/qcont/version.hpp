#pragma once

namespace qcont {

inline constexpr const char* kToolName = "qcont";
inline constexpr const char* kVersion = "1.0.0";
/// Bumped whenever an emitted JSON layout changes incompatibly.
inline constexpr int kSchemaVersion = 1;

}  // namespace qcont
