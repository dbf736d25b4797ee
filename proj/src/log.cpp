#include "cgmos/log.hpp"

#include <iostream>
#include <mutex>

namespace cgmos {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h;
    return h;
}

}  // namespace

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) {
        handler()(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

}  // namespace cgmos
