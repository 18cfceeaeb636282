#include "posers/region_block.hpp"

#include "posers/error.hpp"

namespace posers {

void RegionBlock::push_back(std::string_view region) {
    if (region.size() != length_)
        throw ValidationError("region length " + std::to_string(region.size()) + " != " + std::to_string(length_));
    data_.append(region);
    ++count_;
}

void RegionBlock::append(const RegionBlock& other) {
    if (other.empty()) return;
    if (other.length_ != length_) throw ValidationError("cannot append regions of a different length");
    data_.append(other.data_);
    count_ += other.count_;
}

void RegionBlock::resize(std::size_t n) {
    data_.resize(n * length_, 'A');
    count_ = n;
}

std::vector<std::string> RegionBlock::to_strings() const {
    std::vector<std::string> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.emplace_back((*this)[i]);
    return out;
}

RegionBlock RegionBlock::from_strings(std::size_t length, std::span<const std::string> regions) {
    RegionBlock block(length);
    block.reserve(regions.size());
    for (const auto& r : regions) block.push_back(r);
    return block;
}

}  // namespace posers
