#pragma once

namespace lpptw {

inline constexpr const char* kLibraryVersion = "0.4.0";
inline constexpr int kReportFormatVersion = 1;

}  // namespace lpptw
