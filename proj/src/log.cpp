#include "cmkb/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace cmkb {

void set_log_level(std::string_view level) {
    const auto parsed = spdlog::level::from_str(std::string(level));
    // from_str maps unknown names to "off"; keep the default instead.
    if (parsed == spdlog::level::off && level != "off") {
        spdlog::set_level(spdlog::level::warn);
        return;
    }
    spdlog::set_level(parsed);
}

void init_logging() {
    static const bool once = [] {
        auto logger = spdlog::stderr_color_mt("kb");
        spdlog::set_default_logger(logger);
        spdlog::set_pattern("%Y-%m-%dT%H:%M:%S%z [%l] %v");
        return true;
    }();
    (void)once;
    const char* env = std::getenv("KB_LOG");
    set_log_level(env ? env : "warn");
}

}  // namespace cmkb
