#include "atlas/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

#include "corpus_tree.hpp"

namespace atlas {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("sha256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0x0F]);
  }
  return out;
}

std::string tree_digest(const std::map<std::string, std::string>& files) {
  std::string manifest;
  for (const auto& [path, content] : files) {
    manifest += path;
    manifest += '\0';
    manifest += sha256_hex(content);
    manifest += '\n';
  }
  return sha256_hex(manifest);
}

std::string corpus_digest(const std::filesystem::path& root) {
  return tree_digest(detail::read_corpus_tree(root).files);
}

}  // namespace atlas
