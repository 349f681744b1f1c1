#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "loopy/rng.hpp"
#include "loopy/types.hpp"

namespace loopy::io {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read for checksum: " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char h[3];
    std::snprintf(h, sizeof(h), "%02x", digest[i]);
    hex += h;
  }
  return hex;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& config_echo,
                    const std::vector<std::string>& output_files) {
  nlohmann::json m;
  m["tool"] = "loopy";
  m["version"] = kVersion;
  m["generator"] = GaussianRng::name();
  m["command"] = command;
  const auto now = std::chrono::system_clock::now();
  m["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                          now.time_since_epoch())
                          .count();
  m["config"] = config_echo;
  m["outputs"] = nlohmann::json::array();
  for (const std::string& f : output_files)
    m["outputs"].push_back({{"file", f}, {"sha256", sha256_file(out_dir + "/" + f)}});
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir);
  out << m.dump(2) << "\n";
}

}  // namespace loopy::io
