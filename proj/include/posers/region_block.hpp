#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posers {

/// Fixed-length regions stored back to back in one buffer. This is the
/// layout every bulk kernel works on.
class RegionBlock {
public:
    RegionBlock() = default;
    explicit RegionBlock(std::size_t length) : length_(length) {}

    std::size_t length() const { return length_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    std::string_view operator[](std::size_t i) const {
        return {data_.data() + i * length_, length_};
    }
    std::span<char> mutable_region(std::size_t i) { return {data_.data() + i * length_, length_}; }

    /// Appends one region; throws ValidationError if its length differs.
    void push_back(std::string_view region);
    void append(const RegionBlock& other);
    void reserve(std::size_t n) { data_.reserve(n * length_); }
    /// Grows or shrinks to n regions; new regions are filled with 'A'.
    void resize(std::size_t n);

    std::string_view data() const { return data_; }

    std::vector<std::string> to_strings() const;
    static RegionBlock from_strings(std::size_t length, std::span<const std::string> regions);

    friend bool operator==(const RegionBlock&, const RegionBlock&) = default;

private:
    std::size_t length_ = 0;
    std::size_t count_ = 0;
    std::string data_;
};

}  // namespace posers
