#include "captchalab/imgcore/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

#include "captchalab/error.hpp"

namespace captchalab::imgcore {

std::vector<std::uint8_t> pgm_encode(const RasterImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space_and_comments();
    long v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > std::numeric_limits<int>::max()) throw CodecError(std::string("PGM ") + what + " too large");
      ++digits;
    }
    if (digits == 0) throw CodecError(std::string("malformed PGM header: expected ") + what);
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance() noexcept { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterImage pgm_decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw CodecError("not a binary PGM (expected magic P5)");
  }
  HeaderReader r(bytes.subspan(2));
  const long width = r.number("width");
  const long height = r.number("height");
  const long maxval = r.number("maxval");
  if (width < 1 || height < 1) throw CodecError("PGM dimensions must be positive");
  if (maxval != 255) throw CodecError("unsupported PGM maxval " + std::to_string(maxval));
  const std::size_t header_end = 2 + r.pos();
  if (header_end >= bytes.size() || !std::isspace(bytes[header_end])) {
    throw CodecError("malformed PGM header: missing separator before payload");
  }
  const std::size_t start = header_end + 1;
  const auto need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - start < need) {
    throw CodecError("truncated PGM payload: need " + std::to_string(need) + " bytes, have " +
                     std::to_string(bytes.size() - start));
  }
  if (bytes.size() - start > need) throw CodecError("trailing bytes after PGM payload");
  return RasterImage(static_cast<int>(width), static_cast<int>(height),
                     std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                               bytes.end()));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CodecError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RasterImage read_pgm(const std::filesystem::path& path) {
  return pgm_decode(read_file_bytes(path));
}

void write_pgm(const std::filesystem::path& path, const RasterImage& img) {
  const auto bytes = pgm_encode(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CodecError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CodecError("short write to " + path.string());
}

}  // namespace captchalab::imgcore
