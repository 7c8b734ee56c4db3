#include "panqa/raster_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace panqa {

namespace {

int depth_from_maxval(long maxval) {
    if (maxval <= 63) return 6;
    if (maxval <= 255) return 8;
    return 16;
}

// Token reader for the PGM header and plain raster: skips whitespace and
// '#' comments (comment runs to end of line).
class PnmTokenizer {
public:
    explicit PnmTokenizer(std::istream& in) : in_(in) {}

    long next_number(const std::string& what) {
        skip_separators();
        long value = 0;
        bool any = false;
        int c = in_.peek();
        while (c >= '0' && c <= '9') {
            in_.get();
            value = value * 10 + (c - '0');
            if (value > 0xFFFFFFL) throw Error("PGM: " + what + " is out of range");
            any = true;
            c = in_.peek();
        }
        if (!any) throw Error("PGM: malformed header, expected " + what);
        return value;
    }

    bool at_end() {
        skip_separators();
        return in_.peek() == EOF;
    }

    // Consumes exactly the single whitespace byte that separates the header
    // from raw P5 data.
    void consume_raster_separator() {
        const int c = in_.get();
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
            throw Error("PGM: malformed header, missing separator before pixel data");
        }
    }

private:
    void skip_separators() {
        for (;;) {
            int c = in_.peek();
            if (c == '#') {
                while (c != '\n' && c != EOF) c = in_.get();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                in_.get();
                continue;
            }
            return;
        }
    }

    std::istream& in_;
};

Band load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
        throw Error("PGM: '" + path.string() + "' is not a P2/P5 file");
    }
    const bool binary = magic[1] == '5';

    PnmTokenizer tok(in);
    const long cols = tok.next_number("width");
    const long rows = tok.next_number("height");
    const long maxval = tok.next_number("maxval");
    if (cols <= 0 || rows <= 0) {
        throw Error("PGM: '" + path.string() + "' has non-positive dimensions");
    }
    if (maxval <= 0 || maxval > 65535) {
        throw Error("PGM: '" + path.string() + "' maxval " + std::to_string(maxval) +
                    " outside [1, 65535]");
    }

    Band band(static_cast<int>(rows), static_cast<int>(cols), depth_from_maxval(maxval));
    if (binary) {
        tok.consume_raster_separator();
        const int bytes_per_sample = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(band.pixel_count() * bytes_per_sample);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
            throw Error("PGM: '" + path.string() + "' truncated pixel data");
        }
        for (std::size_t k = 0; k < band.pixel_count(); ++k) {
            long dn;
            if (bytes_per_sample == 2) {
                dn = (static_cast<long>(buf[2 * k]) << 8) | buf[2 * k + 1];  // big-endian
            } else {
                dn = buf[k];
            }
            if (dn > maxval) {
                throw Error("PGM: DN " + std::to_string(dn) + " at row " +
                            std::to_string(k / band.cols) + ", col " +
                            std::to_string(k % band.cols) + " exceeds maxval " +
                            std::to_string(maxval));
            }
            band.values[k] = static_cast<double>(dn);
        }
    } else {
        for (std::size_t k = 0; k < band.pixel_count(); ++k) {
            const std::string pos = "row " + std::to_string(k / band.cols) + ", col " +
                                    std::to_string(k % band.cols);
            long dn;
            try {
                dn = tok.next_number("sample");
            } catch (const Error&) {
                throw Error("PGM: '" + path.string() + "' truncated or malformed at " + pos);
            }
            if (dn > maxval) {
                throw Error("PGM: DN " + std::to_string(dn) + " at " + pos +
                            " exceeds maxval " + std::to_string(maxval));
            }
            band.values[k] = static_cast<double>(dn);
        }
    }
    return band;
}

Band load_csv(const std::filesystem::path& path, int bit_depth) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");

    std::vector<double> values;
    int cols = -1;
    int row = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        int col = 0;
        std::size_t pos = 0;
        for (;;) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            // tolerate surrounding blanks
            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            if (first == std::string::npos) {
                throw Error("CSV: empty cell at row " + std::to_string(row) + ", col " +
                            std::to_string(col));
            }
            cell = cell.substr(first, last - first + 1);
            double dn;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), dn);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw Error("CSV: cannot parse '" + cell + "' at row " + std::to_string(row) +
                            ", col " + std::to_string(col));
            }
            values.push_back(dn);
            ++col;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (cols == -1) {
            cols = col;
        } else if (col != cols) {
            throw Error("CSV: ragged row " + std::to_string(row) + " has " +
                        std::to_string(col) + " cells, expected " + std::to_string(cols));
        }
        ++row;
    }
    if (row == 0 || cols <= 0) throw Error("CSV: '" + path.string() + "' is empty");

    Band band;
    band.rows = row;
    band.cols = cols;
    band.bit_depth = bit_depth;
    band.values = std::move(values);
    check_band(band, "CSV '" + path.string() + "'");
    return band;
}

std::string format_real(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void save_pgm(const Band& band, const std::filesystem::path& path, PgmEncoding encoding) {
    const long maxval = (1L << band.bit_depth) - 1;
    std::vector<long> quantized(band.pixel_count());
    for (std::size_t k = 0; k < band.pixel_count(); ++k) {
        const long dn = static_cast<long>(round_half_up(band.values[k]));
        if (dn < 0 || dn > maxval) {
            throw Error("PGM: DN " + std::to_string(band.values[k]) + " at row " +
                        std::to_string(k / band.cols) + ", col " +
                        std::to_string(k % band.cols) + " quantizes outside [0, " +
                        std::to_string(maxval) + "]");
        }
        quantized[k] = dn;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << (encoding == PgmEncoding::Binary ? "P5" : "P2") << "\n"
        << band.cols << " " << band.rows << "\n"
        << maxval << "\n";
    if (encoding == PgmEncoding::Binary) {
        std::vector<unsigned char> buf;
        if (maxval > 255) {
            buf.resize(quantized.size() * 2);
            for (std::size_t k = 0; k < quantized.size(); ++k) {
                buf[2 * k] = static_cast<unsigned char>(quantized[k] >> 8);
                buf[2 * k + 1] = static_cast<unsigned char>(quantized[k] & 0xFF);
            }
        } else {
            buf.resize(quantized.size());
            for (std::size_t k = 0; k < quantized.size(); ++k) {
                buf[k] = static_cast<unsigned char>(quantized[k]);
            }
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
    } else {
        for (int i = 0; i < band.rows; ++i) {
            for (int j = 0; j < band.cols; ++j) {
                out << quantized[static_cast<std::size_t>(i) * band.cols + j]
                    << (j + 1 == band.cols ? "\n" : " ");
            }
        }
    }
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void save_csv(const Band& band, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    for (int i = 0; i < band.rows; ++i) {
        for (int j = 0; j < band.cols; ++j) {
            out << format_real(band.at(i, j)) << (j + 1 == band.cols ? "\n" : ",");
        }
    }
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

Band load_band(const std::filesystem::path& path, ImageFormat format, int csv_bit_depth) {
    if (format == ImageFormat::Pgm) return load_pgm(path);
    return load_csv(path, csv_bit_depth);
}

void save_band(const Band& band, const std::filesystem::path& path, ImageFormat format,
               PgmEncoding encoding) {
    if (band.rows <= 0 || band.cols <= 0 ||
        band.values.size() != static_cast<std::size_t>(band.rows) * band.cols) {
        throw Error("save: band is structurally invalid");
    }
    if (format == ImageFormat::Pgm) {
        save_pgm(band, path, encoding);
    } else {
        save_csv(band, path);
    }
}

}  // namespace panqa
