#include "opn/multiset.hpp"

#include <stdexcept>

namespace opn {

Multiset::Multiset(std::initializer_list<std::pair<const std::string, Count>> init) {
    for (const auto& [color, n] : init) add(color, n);
}

void Multiset::add(const std::string& color, Count n) {
    if (n < 0) throw std::invalid_argument("negative multiplicity for color " + color);
    if (n == 0) return;
    counts_[color] += n;
}

void Multiset::add(const Multiset& other) {
    for (const auto& [color, n] : other.counts_) counts_[color] += n;
}

bool Multiset::remove(const Multiset& other) {
    if (!contains(other)) return false;
    for (const auto& [color, n] : other.counts_) {
        auto it = counts_.find(color);
        it->second -= n;
        if (it->second == 0) counts_.erase(it);
    }
    return true;
}

Multiset::Count Multiset::count(const std::string& color) const {
    auto it = counts_.find(color);
    return it == counts_.end() ? 0 : it->second;
}

Multiset::Count Multiset::total() const {
    Count sum = 0;
    for (const auto& [color, n] : counts_) sum += n;
    return sum;
}

bool Multiset::contains(const Multiset& other) const {
    for (const auto& [color, n] : other.counts_) {
        if (count(color) < n) return false;
    }
    return true;
}

}  // namespace opn
