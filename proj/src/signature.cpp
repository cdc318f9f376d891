#include "reuseflow/signature.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace reuseflow {

namespace {

struct DigestDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

void put_u64(EVP_MD_CTX* ctx, std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * (7 - i)));
  EVP_DigestUpdate(ctx, buf, sizeof buf);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

Signature Signature::from_hex(const std::string& hex) {
  if (hex.size() != 64) throw std::invalid_argument("signature must be 64 hex digits");
  std::array<std::uint8_t, 32> bytes{};
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit in signature");
    bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return Signature(bytes);
}

std::string Signature::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Signature signature(const OperatorDecl& node, std::span<const Signature> parent_sigs) {
  std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 unavailable");
  static constexpr char kDomain[] = "reuseflow.node.v1";
  EVP_DigestUpdate(ctx.get(), kDomain, sizeof kDomain);
  put_u64(ctx.get(), node.code.size());
  EVP_DigestUpdate(ctx.get(), node.code.data(), node.code.size());
  put_u64(ctx.get(), parent_sigs.size());
  for (const auto& p : parent_sigs) EVP_DigestUpdate(ctx.get(), p.bytes().data(), p.bytes().size());
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), out.data(), &len);
  return Signature(out);
}

}  // namespace reuseflow
