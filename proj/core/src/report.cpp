#include "thirsty/report.hpp"

#include "thirsty/errors.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

namespace thirsty {

namespace {

std::string to_hex(const unsigned char* md, unsigned int len) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(digits[md[i] >> 4]);
    out.push_back(digits[md[i] & 0x0f]);
  }
  return out;
}

using MdCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

} // namespace

std::string sha256_hex(const unsigned char* data, std::size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(data, len, md, &md_len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  return to_hex(md, md_len);
}

std::string sha256_hex(const std::string& bytes) {
  return sha256_hex(reinterpret_cast<const unsigned char*>(bytes.data()),
                    bytes.size());
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for digesting");
  MdCtx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  char buf[1 << 16];
  while (true) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(got)) != 1)
      throw IoError("SHA-256 digest failed");
    if (!in) {
      if (in.bad())
        throw IoError("failed reading '" + path + "'");
      break;
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &md_len) != 1)
    throw IoError("SHA-256 digest failed");
  return to_hex(md, md_len);
}

void RunManifest::add_input(const std::string& path) {
  inputs.push_back(FileDigest{path, sha256_file(path)});
}

} // namespace thirsty
