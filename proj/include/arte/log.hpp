#pragma once

#include <spdlog/spdlog.h>

namespace arte {

/// Library logger. Level comes from the ARTE_LOG environment variable
/// (trace, debug, info, warn, error, off); default is warn.
spdlog::logger& log();

}  // namespace arte
