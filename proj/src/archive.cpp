#include "oscn/archive.hpp"

#include <zlib.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <memory>

#include "oscn/errors.hpp"

namespace oscn {

namespace {

constexpr std::size_t kBlock = 512;

struct GzCloser {
  void operator()(gzFile f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<std::remove_pointer_t<gzFile>, GzCloser>;

std::string inflateAll(const std::filesystem::path& path) {
  GzHandle in(gzopen(path.c_str(), "rb"));
  if (!in) throw IngestError("cannot open archive: " + path.string());
  std::string out;
  std::array<char, 1 << 16> buf{};
  while (true) {
    const int n = gzread(in.get(), buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      int code = 0;
      throw IngestError("corrupt gzip stream in " + path.string() + ": " + gzerror(in.get(), &code));
    }
    if (n == 0) break;
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  return out;
}

std::string fieldString(const char* field, std::size_t width) {
  return std::string(field, strnlen(field, width));
}

std::uint64_t parseSize(const char* field) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(field);
  if (bytes[0] & 0x80) {  // base-256 encoding
    std::uint64_t v = bytes[0] & 0x7F;
    for (int i = 1; i < 12; ++i) v = (v << 8) | bytes[i];
    return v;
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 12; ++i) {
    const char ch = field[i];
    if (ch == ' ' && v == 0) continue;
    if (ch < '0' || ch > '7') break;
    v = v * 8 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

std::string paxPath(std::string_view records) {
  std::string path;
  while (!records.empty()) {
    const auto space = records.find(' ');
    if (space == std::string_view::npos) break;
    std::size_t len = 0;
    for (char ch : records.substr(0, space)) {
      if (ch < '0' || ch > '9') return path;
      len = len * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (len <= space || len > records.size()) break;
    std::string_view record = records.substr(space + 1, len - space - 1);
    if (!record.empty() && record.back() == '\n') record.remove_suffix(1);
    if (record.starts_with("path=")) path = std::string(record.substr(5));
    records.remove_prefix(len);
  }
  return path;
}

bool allZero(std::string_view block) {
  for (char ch : block) {
    if (ch != '\0') return false;
  }
  return true;
}

}  // namespace

std::vector<ArchiveMember> readTarGz(const std::filesystem::path& path) {
  const std::string data = inflateAll(path);
  std::vector<ArchiveMember> members;
  std::string pendingName;
  std::size_t pos = 0;
  while (pos + kBlock <= data.size()) {
    const std::string_view header(data.data() + pos, kBlock);
    if (allZero(header)) break;
    const char* h = header.data();
    const std::uint64_t size = parseSize(h + 124);
    const char type = h[156];
    pos += kBlock;
    if (size > data.size() - pos) throw IngestError("truncated tar member in " + path.string());
    const std::string_view body(data.data() + pos, size);
    pos += (size + kBlock - 1) / kBlock * kBlock;

    if (type == 'L') {
      pendingName = fieldString(body.data(), body.size());
      continue;
    }
    if (type == 'x') {
      pendingName = paxPath(body);
      continue;
    }
    if (type != '0' && type != '\0' && type != '7') {
      pendingName.clear();
      continue;
    }
    std::string name = fieldString(h, 100);
    if (std::memcmp(h + 257, "ustar", 5) == 0) {
      const std::string prefix = fieldString(h + 345, 155);
      if (!prefix.empty()) name = prefix + "/" + name;
    }
    if (!pendingName.empty()) name = std::move(pendingName);
    pendingName.clear();
    while (name.starts_with("./")) name.erase(0, 2);
    members.push_back(ArchiveMember{std::move(name), std::string(body)});
  }
  return members;
}

void writeTarGz(const std::filesystem::path& path, const std::vector<ArchiveMember>& members) {
  std::string tar;
  for (const auto& m : members) {
    std::array<char, kBlock> h{};
    std::string name = m.path;
    std::string prefix;
    if (name.size() > 100) {
      const auto cut = name.rfind('/', 155);
      if (cut == std::string::npos || name.size() - cut - 1 > 100) {
        throw IngestError("path too long for ustar: " + name);
      }
      prefix = name.substr(0, cut);
      name = name.substr(cut + 1);
    }
    std::memcpy(h.data(), name.data(), name.size());
    std::snprintf(h.data() + 100, 8, "%07o", 0644);
    std::snprintf(h.data() + 108, 8, "%07o", 0);
    std::snprintf(h.data() + 116, 8, "%07o", 0);
    std::snprintf(h.data() + 124, 12, "%011llo", static_cast<unsigned long long>(m.content.size()));
    std::snprintf(h.data() + 136, 12, "%011o", 0);
    h[156] = '0';
    std::memcpy(h.data() + 257, "ustar", 6);
    std::memcpy(h.data() + 263, "00", 2);
    std::memcpy(h.data() + 345, prefix.data(), prefix.size());
    std::memset(h.data() + 148, ' ', 8);
    unsigned sum = 0;
    for (char ch : h) sum += static_cast<unsigned char>(ch);
    std::snprintf(h.data() + 148, 7, "%06o", sum);
    h[155] = ' ';
    tar.append(h.data(), h.size());
    tar.append(m.content);
    tar.append((kBlock - m.content.size() % kBlock) % kBlock, '\0');
  }
  tar.append(2 * kBlock, '\0');

  GzHandle out(gzopen(path.c_str(), "wb9"));
  if (!out) throw IngestError("cannot create archive: " + path.string());
  if (!tar.empty() && gzwrite(out.get(), tar.data(), static_cast<unsigned>(tar.size())) == 0) {
    throw IngestError("cannot write archive: " + path.string());
  }
}

}  // namespace oscn
