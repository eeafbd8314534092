#pragma once

#include "surfkit/geometry/types.hpp"

#include <filesystem>
#include <optional>
#include <string_view>

namespace surfkit::geom {

enum class CloudFormat { XyzAscii, Ply };
enum class PlyEncoding { Ascii, BinaryLittleEndian };

/// Parses "xyz" / "xyz-ascii" / "ply". Throws InvalidParameter otherwise.
CloudFormat parse_cloud_format(std::string_view name);
/// Infers the format from the file extension (.ply, anything else is xyz).
CloudFormat format_from_extension(const std::filesystem::path& path);

/// Loads a cloud and converts it to meters.
///
/// xyz-ascii: one point per line, optional integer 4th column (scan-line id),
/// optional "# unit: mm|m" header (default mm).
/// ply: ascii or binary_little_endian; vertex properties x,y,z and optionally
/// nx,ny,nz and line_id; "comment unit: mm|m" (default m).
/// `unit_override` wins over any header.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format,
                      std::optional<LengthUnit> unit_override = std::nullopt);

/// xyz-ascii is written in meters with 12 significant digits; binary PLY
/// stores doubles and is exact.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                PlyEncoding encoding = PlyEncoding::BinaryLittleEndian);

}  // namespace surfkit::geom
