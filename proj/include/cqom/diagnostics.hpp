// diagnostics.hpp: warning sink shared by all modules

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cqom::diag {

using Sink = std::function<void(const std::string&)>;

// Emits a warning through the installed sink (stderr by default). Thread-safe.
void warn(const std::string& message);

// Replaces the process-wide sink; returns the previous one.
Sink set_sink(Sink sink);

// Collects the warnings issued on the constructing thread for the lifetime
// of the object instead of forwarding them to the sink. Captures nest. Used
// by tests and by the CLI to record warnings in the manifest.
class ScopedCapture {
public:
    ScopedCapture();
    ~ScopedCapture();
    ScopedCapture(const ScopedCapture&) = delete;
    ScopedCapture& operator=(const ScopedCapture&) = delete;

    std::vector<std::string> messages() const;
    bool contains(const std::string& fragment) const;

private:
    struct State;
    State* state_;
};

} // namespace cqom::diag
