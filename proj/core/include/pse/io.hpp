#pragma once

#include <filesystem>
#include <string>

#include "pse/mass_map.hpp"

namespace pse {

/// Binary mask from a PGM (P5) file or a CSV fixture of integers. Nonzero
/// pixels become weight 1. An all-zero mask loads fine and is flagged at
/// evaluation.
MassMap2D load_mask(const std::filesystem::path& path);

/// Depth from a grayscale PFM ("Pf") or a CSV of reals. Non-finite values are
/// rejected with the offending pixel named.
DepthMap load_depth(const std::filesystem::path& path,
                    DepthConvention convention = DepthConvention::Depth);

/// Nonnegative attention weights from a PFM or CSV file.
MassMap2D load_attention(const std::filesystem::path& path);

/// Raw float grid from a PFM or CSV file, rows top to bottom.
RealGrid load_float_map(const std::filesystem::path& path);

/// In-memory variants used by the loaders; `origin` names the source in
/// error messages.
MassMap2D parse_mask(const std::string& bytes, const std::string& origin = "<memory>");
RealGrid parse_float_map(const std::string& bytes, const std::string& origin = "<memory>");

/// Writes a P5 PGM with maxval 255 (member pixels as 255).
void write_mask_pgm(const std::filesystem::path& path, const MassMap2D& mask);

/// Writes a little-endian grayscale PFM; rows are stored bottom to top as the
/// format requires.
void write_pfm(const std::filesystem::path& path, const RealGrid& grid);
std::string encode_pfm(const RealGrid& grid);

}  // namespace pse
