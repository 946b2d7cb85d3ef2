#include "jisa/hash.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

#include "jisa/errors.hpp"

namespace jisa {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  void update(const void* data, std::size_t len) { EVP_DigestUpdate(ctx_.get(), data, len); }
  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
      out += kHex[digest[k] >> 4];
      out += kHex[digest[k] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string pieces_hash(std::span<const Piece> pieces) {
  Sha256 h;
  for (const auto& p : pieces) {
    const std::uint32_t header[2] = {static_cast<std::uint32_t>(p.id), static_cast<std::uint32_t>(p.size)};
    h.update(header, sizeof header);
    h.update(p.pixels.data(), p.pixels.size());
  }
  return h.hex();
}

}  // namespace jisa
