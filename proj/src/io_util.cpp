#include "slbi/io_util.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace slbi {

std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_digest: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char chunk[65536];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char out[17];
    const auto r = std::to_chars(out, out + sizeof(out), h, 16);
    std::string hex(out, r.ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

}  // namespace slbi
