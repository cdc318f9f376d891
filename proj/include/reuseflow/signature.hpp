#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>

#include "reuseflow/dag.hpp"

namespace reuseflow {

/// 256-bit content digest of a node's computation (SHA-256).
class Signature {
 public:
  static constexpr const char* kHashName = "sha256";

  Signature() = default;
  explicit Signature(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}
  /// Throws std::invalid_argument unless `hex` is 64 lowercase hex digits.
  static Signature from_hex(const std::string& hex);

  std::string hex() const;
  const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }

  friend auto operator<=>(const Signature&, const Signature&) = default;

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

/// Merkle signature: hashes the code string and the parent signatures in
/// declared input order.
Signature signature(const OperatorDecl& node, std::span<const Signature> parent_sigs);

}  // namespace reuseflow
