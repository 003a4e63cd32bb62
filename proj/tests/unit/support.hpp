#pragma once
// Shared helpers for the unit tests.

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "dnasim/random.hpp"
#include "dnasim/sequence.hpp"

namespace testing {

inline dnasim::BitStream random_bits(dnasim::RandomSource& rng, std::size_t n) {
    dnasim::BitStream b(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i, rng.next() >> 63);
    return b;
}

inline dnasim::DnaSequence random_dna(dnasim::RandomSource& rng, std::size_t n) {
    dnasim::DnaSequence s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_index(static_cast<int>(rng.below(4)));
    return s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dnasim_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
