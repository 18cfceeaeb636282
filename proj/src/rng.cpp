#include "posers/rng.hpp"

namespace posers {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix_seed(seed, h);
}

void Rng::fill_letters(std::span<char> out) {
    static constexpr char kAcgt[4] = {'A', 'C', 'G', 'T'};
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t bits = engine_();
        for (int k = 0; k < 32 && i < out.size(); ++k, ++i) {
            out[i] = kAcgt[bits & 3u];
            bits >>= 2;
        }
    }
}

}  // namespace posers
