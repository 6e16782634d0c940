#include "dome/hash.hpp"

#include <array>

namespace dome {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string binding_digest(const std::map<std::string, std::string>& bindings) {
    // std::map iterates in key order already.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [name, value] : bindings) {
        h = fnv1a64(name, h);
        h = fnv1a64(std::string_view("\x1f", 1), h);
        h = fnv1a64(value, h);
        h = fnv1a64(std::string_view("\x1e", 1), h);
    }
    return to_hex(h);
}

std::string text_digest(std::string_view text) {
    return to_hex(fnv1a64(text));
}

}  // namespace dome
