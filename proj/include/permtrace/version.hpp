#pragma once

#ifndef PERMTRACE_VERSION
#define PERMTRACE_VERSION "0.0.0"
#endif

namespace permtrace {

inline constexpr const char* kVersion = PERMTRACE_VERSION;

}  // namespace permtrace
