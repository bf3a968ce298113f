#ifndef COPOL_CSV_HPP
#define COPOL_CSV_HPP

#include <charconv>
#include <cstdint>
#include <string>

namespace copol {

// shortest round-trip decimal representation (bit-exact reload)
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// FNV-1a of a byte string, hex-encoded; used for manifest checksums
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf, 16);
}

} // namespace copol

#endif
