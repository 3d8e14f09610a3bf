#include "pairscan/image_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "pairscan/error.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan {

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    fail(ErrorKind::Io, std::string("PNG decode failed: ") + image.message);
  }
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  const int channels = gray ? 1 : 3;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  // Composite any alpha onto black.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&image, &background, data.data(), 0, nullptr)) {
    png_image_free(&image);
    fail(ErrorKind::Io, std::string("PNG decode failed: ") + image.message);
  }
  return RasterImage(static_cast<int>(image.width), static_cast<int>(image.height), channels,
                     std::move(data));
}

namespace {

void append_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void no_flush(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  require(!img.empty(), ErrorKind::InvalidArgument, "cannot encode an empty image");
  std::vector<std::uint8_t> out;
  out.reserve(img.data().size() / 2 + 1024);
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  const std::size_t stride = static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.channels());
  for (std::size_t y = 0; y < rows.size(); ++y) {
    rows[y] = const_cast<png_bytep>(img.data().data() + y * stride);
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorKind::Io, "PNG encode failed: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::Io, "PNG encode failed");
  }
  png_set_write_fn(png, &out, append_to_vector, no_flush);
  png_set_compression_level(png, 3);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

RasterImage read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_png(bytes);
  } catch (const Error& e) {
    fail(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
  const auto bytes = encode_png(img);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace pairscan
