#pragma once

// Scratch-file and subprocess helpers shared by the test binaries.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

namespace testutil {

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs a shell command; returns the child's exit code (negative if the shell
// itself could not run or the child died on a signal).
inline int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -2;
}

// Strips lines carrying wall-clock readings so outputs can be compared across
// runs; timing lives in dedicated keys/columns by design.
inline std::string without_timing_lines(const std::string& text) {
    static const char* keys[] = {"\"seconds\"",       "\"construct_seconds\"",
                                 "\"solve_seconds\"", "\"construct_s\"",
                                 "\"solve_s\"",       "\"speedup\""};
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        bool timing = false;
        for (const char* key : keys)
            if (line.find(key) != std::string::npos) timing = true;
        if (!timing) out << line << '\n';
    }
    return out.str();
}

}  // namespace testutil
