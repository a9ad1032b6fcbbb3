#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>

namespace bnsl {

/// Index of a variable, in [0, n).
using VariableId = std::uint32_t;

/// Largest supported variable count; one bit per variable in a machine word.
inline constexpr std::size_t kMaxVariables = 64;

/// A subset of variables packed into a single 64-bit word. Identifies an
/// order-graph node and doubles as a parent set.
class VarSet {
public:
    constexpr VarSet() noexcept = default;
    constexpr explicit VarSet(std::uint64_t bits) noexcept : bits_(bits) {}

    static constexpr VarSet single(VariableId v) noexcept { return VarSet{std::uint64_t{1} << v}; }

    /// {0, 1, ..., n-1}
    static constexpr VarSet full(std::size_t n) noexcept
    {
        return VarSet{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
    }

    constexpr std::uint64_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

    constexpr bool contains(VariableId v) const noexcept { return (bits_ >> v) & 1u; }
    constexpr bool is_subset_of(VarSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }

    constexpr VarSet with(VariableId v) const noexcept { return VarSet{bits_ | (std::uint64_t{1} << v)}; }
    constexpr VarSet without(VariableId v) const noexcept { return VarSet{bits_ & ~(std::uint64_t{1} << v)}; }

    /// Lowest member; undefined on the empty set.
    constexpr VariableId first() const noexcept { return static_cast<VariableId>(std::countr_zero(bits_)); }

    friend constexpr VarSet operator|(VarSet a, VarSet b) noexcept { return VarSet{a.bits_ | b.bits_}; }
    friend constexpr VarSet operator&(VarSet a, VarSet b) noexcept { return VarSet{a.bits_ & b.bits_}; }
    /// Set difference.
    friend constexpr VarSet operator-(VarSet a, VarSet b) noexcept { return VarSet{a.bits_ & ~b.bits_}; }

    friend constexpr bool operator==(VarSet, VarSet) noexcept = default;
    /// Orders by the bit pattern read as an unsigned integer.
    friend constexpr auto operator<=>(VarSet a, VarSet b) noexcept { return a.bits_ <=> b.bits_; }

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = VariableId;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = VariableId;

        constexpr iterator() noexcept = default;
        constexpr explicit iterator(std::uint64_t rest) noexcept : rest_(rest) {}

        constexpr VariableId operator*() const noexcept { return static_cast<VariableId>(std::countr_zero(rest_)); }
        constexpr iterator& operator++() noexcept
        {
            rest_ &= rest_ - 1;
            return *this;
        }
        constexpr iterator operator++(int) noexcept
        {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend constexpr bool operator==(iterator, iterator) noexcept = default;

    private:
        std::uint64_t rest_ = 0;
    };

    /// Members in ascending index order.
    constexpr iterator begin() const noexcept { return iterator{bits_}; }
    constexpr iterator end() const noexcept { return iterator{0}; }

private:
    std::uint64_t bits_ = 0;
};

}  // namespace bnsl

template <>
struct std::hash<bnsl::VarSet> {
    std::size_t operator()(bnsl::VarSet s) const noexcept
    {
        // splitmix64 finalizer
        std::uint64_t z = s.bits() + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};
