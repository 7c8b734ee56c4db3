#pragma once

#include <filesystem>

#include "panqa/band.hpp"

namespace panqa {

enum class ImageFormat { Pgm, Csv };

// Plain (P2) vs raw (P5) PGM. Loading auto-detects from the magic number;
// this only selects the output encoding.
enum class PgmEncoding { Binary, Plain };

// PGM bit depth is inferred from maxval: <=63 -> 6, <=255 -> 8, else 16.
// CSV carries no depth of its own and defaults to 8 unless overridden.
// Parse failures name the offending row/column.
Band load_band(const std::filesystem::path& path, ImageFormat format,
               int csv_bit_depth = 8);

// PGM quantizes DNs to integers (round half up, range-checked against the
// band's declared depth); CSV writes full-precision reals that parse back
// bit-identically.
void save_band(const Band& band, const std::filesystem::path& path,
               ImageFormat format, PgmEncoding encoding = PgmEncoding::Binary);

}  // namespace panqa
