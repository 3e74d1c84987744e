#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

namespace test_helpers {

// Self-cleaning temp file seeded with `content`.
class TempFile {
public:
    explicit TempFile(const std::string& content, const std::string& suffix = ".csv") {
        static std::atomic<unsigned> counter{0};
        auto dir = std::filesystem::temp_directory_path();
        path_ = dir / ("epindex_test_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++) + suffix);
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace test_helpers
