#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>

namespace opn {

struct TokenColor {
    std::string name;

    friend auto operator<=>(const TokenColor&, const TokenColor&) = default;
};

/// A finite multiset of token colors. Counts are strictly positive; a color
/// with count zero is simply absent, so equality is structural.
class Multiset {
public:
    using Count = std::int64_t;
    using Storage = std::map<std::string, Count>;

    Multiset() = default;
    Multiset(std::initializer_list<std::pair<const std::string, Count>> init);

    /// Adds `n` copies of `color`. `n` must be non-negative.
    void add(const std::string& color, Count n = 1);
    void add(const Multiset& other);

    /// Removes `other` from this multiset. Returns false and leaves the
    /// multiset untouched when `other` is not contained.
    bool remove(const Multiset& other);

    [[nodiscard]] Count count(const std::string& color) const;
    [[nodiscard]] Count total() const;
    [[nodiscard]] bool empty() const { return counts_.empty(); }
    [[nodiscard]] std::size_t distinct() const { return counts_.size(); }

    /// Sub-multiset test: every color occurs in `*this` at least as often as
    /// in `other`.
    [[nodiscard]] bool contains(const Multiset& other) const;

    [[nodiscard]] const Storage& counts() const { return counts_; }
    [[nodiscard]] auto begin() const { return counts_.begin(); }
    [[nodiscard]] auto end() const { return counts_.end(); }

    friend Multiset operator+(Multiset lhs, const Multiset& rhs) {
        lhs.add(rhs);
        return lhs;
    }

    friend bool operator==(const Multiset&, const Multiset&) = default;
    friend auto operator<=>(const Multiset&, const Multiset&) = default;

private:
    Storage counts_;
};

}  // namespace opn
