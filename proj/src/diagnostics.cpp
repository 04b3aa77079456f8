#include "cqom/diagnostics.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace cqom::diag {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

thread_local std::vector<std::string>* thread_capture = nullptr;

} // namespace

void warn(const std::string& message) {
    if (thread_capture) {
        thread_capture->push_back(message);
        return;
    }
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(message);
}

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

struct ScopedCapture::State {
    std::vector<std::string> messages;
    std::vector<std::string>* outer{nullptr};
};

ScopedCapture::ScopedCapture() : state_(new State) {
    state_->outer = thread_capture;
    thread_capture = &state_->messages;
}

ScopedCapture::~ScopedCapture() {
    thread_capture = state_->outer;
    delete state_;
}

std::vector<std::string> ScopedCapture::messages() const { return state_->messages; }

bool ScopedCapture::contains(const std::string& fragment) const {
    return std::any_of(state_->messages.begin(), state_->messages.end(),
                       [&](const std::string& m) { return m.find(fragment) != std::string::npos; });
}

} // namespace cqom::diag
