// support.hpp: shared fixtures for the test programs

#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "cqom/model.hpp"
#include "cqom/units.hpp"

namespace cqom::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("cqom_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline double mode_spacing(const WaveguideModel& m) { return two_pi / m.geometry.length_m; }

// k*a of mode index n.
inline double ka_of_mode(int n, const WaveguideModel& m) { return n * mode_spacing(m) * m.geometry.radius_m; }

} // namespace cqom::testing
