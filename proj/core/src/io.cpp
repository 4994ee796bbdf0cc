#include "cafda/io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "cafda/error.hpp"

namespace cafda::io {

namespace fs = std::filesystem;

namespace {

struct PngImage {
  png_image image{};
  PngImage() { image.version = PNG_IMAGE_VERSION; }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

std::vector<std::uint8_t> decode_png(const fs::path& path, png_uint_32 format, std::size_t channels,
                                     std::size_t& height, std::size_t& width) {
  PngImage png;
  if (png_image_begin_read_from_file(&png.image, path.c_str()) == 0) {
    throw IoError("cannot read PNG '" + path.string() + "': " + png.image.message);
  }
  png.image.format = format;
  height = png.image.height;
  width = png.image.width;
  std::vector<std::uint8_t> buffer(height * width * channels);
  if (png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr) == 0) {
    throw IoError("cannot decode PNG '" + path.string() + "': " + png.image.message);
  }
  return buffer;
}

}  // namespace

Image read_png(const fs::path& path) {
  std::size_t h = 0, w = 0;
  const auto bytes = decode_png(path, PNG_FORMAT_RGB, 3, h, w);
  if (h == 0 || w == 0) throw IoError("empty PNG '" + path.string() + "'");
  Image img(h, w, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    auto dst = img.channel(c).values();
    for (std::size_t i = 0; i < h * w; ++i) dst[i] = bytes[i * 3 + c] / 255.0;
  }
  return img;
}

Mask read_mask_png(const fs::path& path) {
  std::size_t h = 0, w = 0;
  auto bytes = decode_png(path, PNG_FORMAT_GRAY, 1, h, w);
  if (h == 0 || w == 0) throw IoError("empty PNG '" + path.string() + "'");
  return Mask(h, w, std::move(bytes));
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

[[noreturn]] void png_fail(png_structp png, png_const_charp message) {
  *static_cast<std::string*>(png_get_error_ptr(png)) = message;
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

std::vector<std::uint8_t> encode_bytes(const std::uint8_t* data, std::size_t height,
                                       std::size_t width, png_uint_32 format) {
  const int channels = format == PNG_FORMAT_RGB ? 3 : 1;
  std::string message;
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_ignore_warning);
  if (png == nullptr) throw IoError("PNG encode failed: out of memory");
  png_infop info = png_create_info_struct(png);
  std::vector<png_const_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = data + y * width * static_cast<std::size_t>(channels);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed: " + message);
  }
  png_set_write_fn(png, &out, png_append, nullptr);
  png_set_compression_level(png, 1);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> interleave_bytes(const Image& img) {
  const std::size_t n = img.height() * img.width();
  const std::size_t channels = img.channels();
  std::vector<std::uint8_t> bytes(n * channels);
  for (std::size_t c = 0; c < channels; ++c) {
    auto src = img.channel(c).values();
    for (std::size_t i = 0; i < n; ++i) bytes[i * channels + c] = quantize(src[i]);
  }
  return bytes;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_uint_32 format = 0;
  switch (img.channels()) {
    case 1: format = PNG_FORMAT_GRAY; break;
    case 3: format = PNG_FORMAT_RGB; break;
    default: throw ValidationError("encode_png: only 1- or 3-channel images are supported");
  }
  const auto bytes = interleave_bytes(img);
  return encode_bytes(bytes.data(), img.height(), img.width(), format);
}

std::vector<std::uint8_t> encode_mask_png(const Mask& mask) {
  if (mask.empty()) throw ValidationError("encode_mask_png: empty mask");
  return encode_bytes(mask.data(), mask.height(), mask.width(), PNG_FORMAT_GRAY);
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_text_file(const fs::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_png(const fs::path& path, const Image& img) { write_file(path, encode_png(img)); }

void write_mask_png(const fs::path& path, const Mask& mask) {
  write_file(path, encode_mask_png(mask));
}

namespace {

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void on_jpeg_error(j_common_ptr info) {
  auto* err = reinterpret_cast<JpegError*>(info->err);
  (*info->err->format_message)(info, err->message);
  std::longjmp(err->jump, 1);
}

// Kept free of C++ objects with destructors between setjmp and longjmp.
bool jpeg_encode(const std::uint8_t* rgb, int height, int width, int components, int quality,
                 unsigned char** out, unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_jpeg_error;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = components;
  cinfo.in_color_space = components == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(rgb + static_cast<std::size_t>(cinfo.next_scanline) *
                                                  static_cast<std::size_t>(width * components));
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

bool jpeg_decode(const unsigned char* data, unsigned long size, std::uint8_t* out, int height,
                 int width, int components, char* message) {
  jpeg_decompress_struct dinfo{};
  JpegError err{};
  dinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_jpeg_error;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&dinfo);
    return false;
  }
  jpeg_create_decompress(&dinfo);
  jpeg_mem_src(&dinfo, data, size);
  jpeg_read_header(&dinfo, TRUE);
  dinfo.out_color_space = components == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_start_decompress(&dinfo);
  if (static_cast<int>(dinfo.output_width) != width ||
      static_cast<int>(dinfo.output_height) != height ||
      dinfo.output_components != components) {
    std::snprintf(message, JMSG_LENGTH_MAX, "unexpected decoded geometry");
    jpeg_destroy_decompress(&dinfo);
    return false;
  }
  while (dinfo.output_scanline < dinfo.output_height) {
    JSAMPROW row = out + static_cast<std::size_t>(dinfo.output_scanline) *
                             static_cast<std::size_t>(width * components);
    jpeg_read_scanlines(&dinfo, &row, 1);
  }
  jpeg_finish_decompress(&dinfo);
  jpeg_destroy_decompress(&dinfo);
  return true;
}

}  // namespace

Image jpeg_roundtrip(const Image& img, int quality) {
  if (quality < 1 || quality > 100) throw ValidationError("jpeg quality must be in [1,100]");
  if (img.channels() != 1 && img.channels() != 3) {
    throw ValidationError("jpeg_roundtrip: only 1- or 3-channel images are supported");
  }
  const int components = static_cast<int>(img.channels());
  const int height = static_cast<int>(img.height());
  const int width = static_cast<int>(img.width());
  const auto bytes = interleave_bytes(img);

  unsigned char* encoded = nullptr;
  unsigned long encoded_size = 0;
  char message[JMSG_LENGTH_MAX] = {};
  const bool ok = jpeg_encode(bytes.data(), height, width, components, quality, &encoded,
                              &encoded_size, message);
  std::unique_ptr<unsigned char, decltype(&std::free)> guard(encoded, &std::free);
  if (!ok) throw IoError(std::string("JPEG encode failed: ") + message);

  std::vector<std::uint8_t> decoded(bytes.size());
  if (!jpeg_decode(encoded, encoded_size, decoded.data(), height, width, components, message)) {
    throw IoError(std::string("JPEG decode failed: ") + message);
  }
  Image out(img.height(), img.width(), img.channels());
  const std::size_t n = img.height() * img.width();
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto dst = out.channel(c).values();
    for (std::size_t i = 0; i < n; ++i) dst[i] = decoded[i * img.channels() + c] / 255.0;
  }
  return out;
}

std::vector<fs::path> list_png_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: '" + dir.string() + "'");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace cafda::io
