#include "coral/wire/picture.hpp"

#include <csetjmp>
#include <cstdio>

#include <jpeglib.h>

namespace coral::wire {

namespace {

struct JpegErrorTrap {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
  std::longjmp(trap->jump, 1);
}

void check_channels(std::uint8_t channels) {
  if (channels != 1 && channels != 3) {
    throw UnsupportedChannelCount("picture codec supports 1 or 3 channels, got " +
                                  std::to_string(channels));
  }
}

std::vector<std::uint8_t> encode_jpeg(const Image& image, int quality) {
  JpegErrorTrap trap;
  jpeg_compress_struct cinfo;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = jpeg_error_exit;

  unsigned char* buffer = nullptr;
  unsigned long buffer_size = 0;
  if (setjmp(trap.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buffer != nullptr) free(buffer);
    throw JpegError("jpeg compression failed");
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &buffer_size);
  cinfo.image_width = image.width;
  cinfo.image_height = image.height;
  cinfo.input_components = image.channels;
  cinfo.in_color_space = image.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE /* force baseline */);
  jpeg_start_compress(&cinfo, TRUE);

  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    const JSAMPLE* row = image.pixels.data() + cinfo.next_scanline * stride;
    JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buffer, buffer + buffer_size);
  free(buffer);
  return out;
}

Image decode_jpeg(std::span<const std::uint8_t> payload, const PacketHeader& header) {
  JpegErrorTrap trap;
  jpeg_decompress_struct cinfo;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = jpeg_error_exit;
  if (setjmp(trap.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw JpegError("jpeg decompression failed");
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, payload.data(), payload.size());
  if (jpeg_read_header(&cinfo, TRUE) != JPEG_HEADER_OK) {
    jpeg_destroy_decompress(&cinfo);
    throw JpegError("not a jpeg stream");
  }
  cinfo.out_color_space = header.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);

  if (cinfo.output_width != header.width || cinfo.output_height != header.height ||
      cinfo.output_components != header.channels) {
    jpeg_abort_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    throw HeaderPayloadMismatch("jpeg geometry disagrees with packet header");
  }

  Image image(header.width, header.height, header.channels);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW rows[1] = {image.pixels.data() + cinfo.output_scanline * stride};
    jpeg_read_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return image;
}

}  // namespace

std::vector<std::uint8_t> encode_picture(const Image& image, Encoding encoding,
                                         int quality) {
  check_channels(image.channels);
  if (encoding == Encoding::kRaw) {
    return image.pixels;
  }
  return encode_jpeg(image, quality);
}

Image decode_picture(std::span<const std::uint8_t> payload,
                     const PacketHeader& header) {
  check_channels(header.channels);
  if (header.encoding == Encoding::kRaw) {
    const std::size_t expected =
        static_cast<std::size_t>(header.width) * header.height * header.channels;
    if (payload.size() != expected) {
      throw HeaderPayloadMismatch("raw payload of " +
                                  std::to_string(payload.size()) +
                                  " bytes does not match header geometry");
    }
    Image image(header.width, header.height, header.channels);
    image.pixels.assign(payload.begin(), payload.end());
    return image;
  }
  return decode_jpeg(payload, header);
}

}  // namespace coral::wire
