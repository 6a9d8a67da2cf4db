#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iterator>

namespace wtc {

/// Dense event index, unique within one PES. Ids form the range 0..|E|-1.
using EventId = std::uint32_t;

/// Small set of events backed by a 64-bit mask. All PESs in this library
/// are capped at EventSet::capacity events.
class EventSet {
public:
  static constexpr std::size_t capacity = 64;

  constexpr EventSet() = default;

  static constexpr EventSet from_bits(std::uint64_t bits) { return EventSet(bits); }
  static constexpr EventSet single(EventId e) { return EventSet(std::uint64_t{1} << e); }
  /// {0, 1, ..., n-1}
  static constexpr EventSet first_n(std::size_t n) {
    return EventSet(n >= capacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr bool contains(EventId e) const { return (bits_ >> e) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr void insert(EventId e) { bits_ |= std::uint64_t{1} << e; }
  constexpr void erase(EventId e) { bits_ &= ~(std::uint64_t{1} << e); }

  constexpr EventSet with(EventId e) const { return EventSet(bits_ | (std::uint64_t{1} << e)); }
  constexpr EventSet without(EventId e) const { return EventSet(bits_ & ~(std::uint64_t{1} << e)); }

  /// Least element; set must be non-empty.
  constexpr EventId front() const { return static_cast<EventId>(std::countr_zero(bits_)); }

  constexpr bool subset_of(EventSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(EventSet other) const { return (bits_ & other.bits_) != 0; }

  friend constexpr EventSet operator|(EventSet a, EventSet b) { return EventSet(a.bits_ | b.bits_); }
  friend constexpr EventSet operator&(EventSet a, EventSet b) { return EventSet(a.bits_ & b.bits_); }
  friend constexpr EventSet operator-(EventSet a, EventSet b) { return EventSet(a.bits_ & ~b.bits_); }
  constexpr EventSet& operator|=(EventSet o) { bits_ |= o.bits_; return *this; }
  constexpr EventSet& operator&=(EventSet o) { bits_ &= o.bits_; return *this; }

  friend constexpr bool operator==(EventSet a, EventSet b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator!=(EventSet a, EventSet b) { return a.bits_ != b.bits_; }
  /// Order by cardinality, then by mask value: a stable enumeration order.
  friend constexpr bool operator<(EventSet a, EventSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits_ < b.bits_;
  }

  class iterator {
  public:
    using value_type = EventId;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr EventId operator*() const { return static_cast<EventId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
    constexpr iterator operator++(int) { iterator t = *this; ++*this; return t; }
    friend constexpr bool operator==(iterator a, iterator b) { return a.rest_ == b.rest_; }
    friend constexpr bool operator!=(iterator a, iterator b) { return a.rest_ != b.rest_; }

  private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

private:
  constexpr explicit EventSet(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

}  // namespace wtc
