#include "prefboard/core/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

namespace {
void append_field(std::string& out, std::string_view tag, std::string_view value) {
  const std::string canon = text::canonical(value);
  out.append(tag);
  out.push_back(':');
  out.append(std::to_string(canon.size()));
  out.push_back(':');
  out.append(canon);
  out.push_back('\n');
}
}  // namespace

std::string canonical_bytes(const std::vector<Turn>& turns, std::string_view response_a,
                            std::string_view response_b) {
  std::string out = "prefboard-instance-v1\n";
  out.append("turns:" + std::to_string(turns.size()) + "\n");
  for (const auto& t : turns) {
    append_field(out, "role", t.role);
    append_field(out, "text", t.text);
  }
  append_field(out, "response_a", response_a);
  append_field(out, "response_b", response_b);
  return out;
}

std::string canonical_hash(const PreferenceInstance& instance) {
  return sha256_hex(canonical_bytes(instance.turns, instance.response_a, instance.response_b));
}

std::string criteria_hash(const std::vector<std::string>& items) {
  std::string out = "prefboard-criteria-v1\n";
  for (const auto& item : items) append_field(out, "item", item);
  return sha256_hex(out);
}

}  // namespace prefboard
