#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace oscn {

struct ArchiveMember {
  std::string path;
  std::string content;
};

/// Regular files of a gzip-compressed tar archive (ustar, GNU long names and
/// pax path records). Throws IngestError on unreadable or malformed input.
std::vector<ArchiveMember> readTarGz(const std::filesystem::path& path);

/// Writes a gzip-compressed ustar archive; used to build fixtures.
void writeTarGz(const std::filesystem::path& path, const std::vector<ArchiveMember>& members);

}  // namespace oscn
