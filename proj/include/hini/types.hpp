#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace hini {

// Dense ids. Interning assigns them in lexicographic order of the names, so
// comparing ids compares names.
enum class EntityId : std::uint32_t {};
enum class TypeId : std::uint32_t {};
enum class RelationId : std::uint32_t {};

template <typename Id>
constexpr std::uint32_t index(Id id) noexcept {
  return static_cast<std::uint32_t>(id);
}

/// A relation traversed forward (u -R-> v) or backward (v -R~-> u).
struct DirectedRelation {
  RelationId relation{};
  bool inverted = false;

  constexpr DirectedRelation inverse() const noexcept {
    return {relation, !inverted};
  }
  /// Slot in the per-direction adjacency tables.
  constexpr std::uint32_t slot() const noexcept {
    return 2 * index(relation) + (inverted ? 1U : 0U);
  }
  static constexpr DirectedRelation from_slot(std::uint32_t slot) noexcept {
    return {RelationId{slot / 2}, (slot % 2) == 1};
  }

  friend constexpr auto operator<=>(const DirectedRelation&,
                                    const DirectedRelation&) = default;
};

/// Ordered entity pair (source, target).
struct EntityPair {
  EntityId source{};
  EntityId target{};

  friend constexpr auto operator<=>(const EntityPair&,
                                    const EntityPair&) = default;
};

constexpr std::uint64_t pack(EntityPair p) noexcept {
  return (static_cast<std::uint64_t>(index(p.source)) << 32) |
         index(p.target);
}

// Error hierarchy. The CLI maps each category to its own exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (files, meta-path strings).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition or referenced something
/// that does not exist.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Entity lookups that fail because the entity is not in the graph.
class UnknownEntityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A configured resource budget (path-instance cap, nnz budget) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace hini

template <>
struct std::hash<hini::EntityPair> {
  std::size_t operator()(const hini::EntityPair& p) const noexcept {
    return std::hash<std::uint64_t>{}(hini::pack(p));
  }
};

template <>
struct std::hash<hini::DirectedRelation> {
  std::size_t operator()(const hini::DirectedRelation& r) const noexcept {
    return std::hash<std::uint32_t>{}(r.slot());
  }
};
