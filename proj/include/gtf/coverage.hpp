#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gtf {

constexpr size_t kDefaultMapSize = 262144;

// Hit counter -> bucket class bitmask. Classes: 1, 2, 3, 4-7, 8-15, 16-31,
// 32-127, 128-255 map to bits 0..7; zero stays zero.
uint8_t bucket_class(uint8_t count);

// Fixed array of saturating hit counters. map_size must be a power of two.
class CoverageMap {
  public:
    explicit CoverageMap(size_t map_size = kDefaultMapSize);

    size_t size() const { return bytes_.size(); }
    const uint8_t* data() const { return bytes_.data(); }
    uint8_t* data() { return bytes_.data(); }
    uint8_t operator[](size_t i) const { return bytes_[i]; }

    void hit(size_t slot) {
        uint8_t& b = bytes_[slot & (bytes_.size() - 1)];
        if (b != 0xff) ++b;
    }
    void clear() { std::fill(bytes_.begin(), bytes_.end(), 0); }

    bool operator==(const CoverageMap& o) const { return bytes_ == o.bytes_; }

  private:
    std::vector<uint8_t> bytes_;
};

// Every counter replaced by its bucket class bitmask.
CoverageMap classify_hits(const CoverageMap& map);

// Accumulates the bucket classes seen per slot over a campaign.
class VirginMap {
  public:
    explicit VirginMap(size_t map_size = kDefaultMapSize) : bytes_(map_size, 0) {}

    size_t size() const { return bytes_.size(); }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

    // True iff the map shows a (slot, class) pair this virgin map has not seen;
    // folds the map in regardless. Throws SizeMismatchError.
    bool has_new_bits(const CoverageMap& map);

    // Same fold over a sparse (slot, count) snapshot; slots absent from the
    // snapshot are zero by convention.
    bool fold_sparse(const std::vector<std::pair<uint32_t, uint8_t>>& snapshot);

    // Number of (slot, class) pairs seen so far.
    size_t tuple_count() const;

    void merge_from(const VirginMap& other);

  private:
    std::vector<uint8_t> bytes_;
};

// Raw byte image of the map, exactly map_size bytes.
void write_map_file(const std::string& path, const CoverageMap& map);
CoverageMap read_map_file(const std::string& path, size_t expected_size);

}  // namespace gtf
