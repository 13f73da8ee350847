#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linklabel {

using NodeId = std::uint32_t;
using Label = std::uint8_t;
using ClusterId = std::uint32_t;

// Errors raised by the library. Each maps onto one CLI exit class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

// Ordered set of edge labels. Label ids are the dense indices 0..size-1 and
// the order is fixed for the lifetime of a model; tie-breaking depends on it.
class LabelAlphabet {
 public:
  explicit LabelAlphabet(std::vector<std::string> names);

  // {"+", "-"}: label 0 is positive, label 1 negative.
  static LabelAlphabet signs();
  // {"0", "1", ..., "n-1"}.
  static LabelAlphabet numbered(std::size_t n);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Label l) const { return names_.at(l); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Label> find(std::string_view name) const;

  friend bool operator==(const LabelAlphabet&, const LabelAlphabet&) = default;

 private:
  std::vector<std::string> names_;
};

// A concrete label or ANY. At node level ANY is the union of the per-label
// tail sets; at cluster level it is likewise a set union, never a sum.
class LabelSelector {
 public:
  static constexpr std::uint8_t kAnyCode = 0xFF;

  constexpr LabelSelector(Label l) : code_(l) {}  // NOLINT: implicit by intent
  static constexpr LabelSelector any() { return LabelSelector(kAnyCode, 0); }

  constexpr bool is_any() const { return code_ == kAnyCode; }
  constexpr Label label() const { return code_; }
  constexpr std::uint8_t code() const { return code_; }

  // Dense slot in tables that carry an ANY column after the labels.
  constexpr std::size_t slot(std::size_t label_count) const {
    return is_any() ? label_count : code_;
  }

  friend constexpr bool operator==(LabelSelector, LabelSelector) = default;

 private:
  constexpr LabelSelector(std::uint8_t code, int) : code_(code) {}
  std::uint8_t code_;
};

inline constexpr LabelSelector kAny = LabelSelector::any();

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  Label label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct OutEntry {
  NodeId head = 0;
  Label label = 0;

  friend bool operator==(const OutEntry&, const OutEntry&) = default;
};

}  // namespace linklabel
