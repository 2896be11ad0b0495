#pragma once

#include <filesystem>
#include <fstream>
#include <string>

// Fresh per-test scratch directory under the system temp root.
inline std::string test_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sforge_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline std::string path_join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool same_bytes(const std::string& a, const std::string& b) {
    return read_text(a) == read_text(b);
}
