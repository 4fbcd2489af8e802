#pragma once

#include <functional>
#include <string_view>

namespace hlds::diag {

using Sink = std::function<void(std::string_view)>;

// Warnings go to stderr unless a sink is installed. Returns the previous sink.
Sink set_warning_sink(Sink sink);
void warn(std::string_view message);

} // namespace hlds::diag
