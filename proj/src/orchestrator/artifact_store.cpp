#include "surfkit/orchestrator/artifact_store.hpp"

#include "surfkit/error.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

namespace surfkit::orchestrator {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::IoError, "SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path pending_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".pending";
  return p;
}

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::IoError, "cannot write " + tmp.string());
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error(Errc::IoError, "write failed for " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error(Errc::IoError, "flush failed for " + tmp.string());
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "rename to " + path.string() + " failed: " + ec.message());
}

std::string read_verified(const std::filesystem::path& path, const std::string& sha256) {
  // The final path is tried again last: a concurrent commit may move the
  // pending file into place between the first two reads.
  for (const auto& candidate : {path, pending_path(path), path}) {
    std::error_code ec;
    if (!std::filesystem::exists(candidate, ec)) continue;
    std::string bytes;
    try {
      bytes = read_file(candidate);
    } catch (const Error&) {
      continue;
    }
    if (sha256_hex(bytes) == sha256) return bytes;
  }
  throw Error(Errc::IntegrityError, "content of " + path.filename().string() + " does not match the recorded digest");
}

}  // namespace surfkit::orchestrator
