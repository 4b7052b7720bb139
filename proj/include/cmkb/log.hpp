#pragma once

#include <string_view>

namespace cmkb {

// Sets the spdlog level from KB_LOG (trace, debug, info, warn, error, off).
// Unset or unknown values leave the level at "warn".
void init_logging();
void set_log_level(std::string_view level);

}  // namespace cmkb
