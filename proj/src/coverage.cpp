#include "gtf/coverage.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>

#include "gtf/error.hpp"

namespace gtf {

namespace {

std::array<uint8_t, 256> build_lookup() {
    std::array<uint8_t, 256> t{};
    t[0] = 0;
    t[1] = 1 << 0;
    t[2] = 1 << 1;
    t[3] = 1 << 2;
    for (int i = 4; i <= 7; ++i) t[i] = 1 << 3;
    for (int i = 8; i <= 15; ++i) t[i] = 1 << 4;
    for (int i = 16; i <= 31; ++i) t[i] = 1 << 5;
    for (int i = 32; i <= 127; ++i) t[i] = 1 << 6;
    for (int i = 128; i <= 255; ++i) t[i] = 1 << 7;
    return t;
}

const std::array<uint8_t, 256> kClassLookup = build_lookup();

}  // namespace

uint8_t bucket_class(uint8_t count) { return kClassLookup[count]; }

CoverageMap::CoverageMap(size_t map_size) {
    if (map_size == 0 || (map_size & (map_size - 1)) != 0)
        throw ConfigError("coverage map size must be a power of two");
    bytes_.assign(map_size, 0);
}

CoverageMap classify_hits(const CoverageMap& map) {
    CoverageMap out(map.size());
    for (size_t i = 0; i < map.size(); ++i) out.data()[i] = kClassLookup[map[i]];
    return out;
}

bool VirginMap::has_new_bits(const CoverageMap& map) {
    if (map.size() != bytes_.size())
        throw SizeMismatchError("coverage map size " + std::to_string(map.size()) +
                                " does not match virgin map size " +
                                std::to_string(bytes_.size()));
    bool new_bits = false;
    const uint8_t* src = map.data();
    // Word-at-a-time skip over untouched regions; maps are sparse.
    size_t i = 0;
    size_t words = bytes_.size() / 8;
    for (size_t w = 0; w < words; ++w, i += 8) {
        uint64_t chunk;
        std::memcpy(&chunk, src + i, 8);
        if (chunk == 0) continue;
        for (size_t j = i; j < i + 8; ++j) {
            uint8_t cls = kClassLookup[src[j]];
            if (cls & ~bytes_[j]) new_bits = true;
            bytes_[j] |= cls;
        }
    }
    for (; i < bytes_.size(); ++i) {
        uint8_t cls = kClassLookup[src[i]];
        if (cls & ~bytes_[i]) new_bits = true;
        bytes_[i] |= cls;
    }
    return new_bits;
}

bool VirginMap::fold_sparse(const std::vector<std::pair<uint32_t, uint8_t>>& snapshot) {
    bool new_bits = false;
    for (auto [slot, count] : snapshot) {
        uint8_t cls = kClassLookup[count];
        uint8_t& v = bytes_[slot & (bytes_.size() - 1)];
        if (cls & ~v) new_bits = true;
        v |= cls;
    }
    return new_bits;
}

size_t VirginMap::tuple_count() const {
    size_t n = 0;
    for (uint8_t b : bytes_) n += std::popcount(b);
    return n;
}

void VirginMap::merge_from(const VirginMap& other) {
    if (other.bytes_.size() != bytes_.size())
        throw SizeMismatchError("virgin map size mismatch in merge");
    for (size_t i = 0; i < bytes_.size(); ++i) bytes_[i] |= other.bytes_[i];
}

void write_map_file(const std::string& path, const CoverageMap& map) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ProtocolError("cannot open map file for writing: " + path);
    size_t written = std::fwrite(map.data(), 1, map.size(), f);
    std::fclose(f);
    if (written != map.size()) throw ProtocolError("short write to map file: " + path);
}

CoverageMap read_map_file(const std::string& path, size_t expected_size) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw ProtocolError("cannot open map file for reading: " + path);
    CoverageMap map(expected_size);
    size_t got = std::fread(map.data(), 1, expected_size, f);
    // Exactly map_size bytes, nothing trailing.
    char extra;
    size_t more = std::fread(&extra, 1, 1, f);
    std::fclose(f);
    if (got != expected_size || more != 0)
        throw SizeMismatchError("map file " + path + " is not exactly " +
                                std::to_string(expected_size) + " bytes");
    return map;
}

}  // namespace gtf
