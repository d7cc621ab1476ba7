#include "coral/image.hpp"

#include <algorithm>
#include <cmath>

namespace coral {

namespace {

// Source span covered by one output coordinate under area integration:
// indices [lo, hi) with one fractional-coverage weight per source sample,
// stored consecutively in a shared pool.
struct Span {
  int lo = 0;
  int hi = 0;
  std::size_t weight_off = 0;
};

void build_spans(std::uint16_t src_n, std::uint16_t dst_n,
                 std::vector<Span>& spans, std::vector<double>& weights) {
  const double scale = static_cast<double>(src_n) / dst_n;
  spans.resize(dst_n);
  weights.clear();
  for (std::uint16_t i = 0; i < dst_n; ++i) {
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    Span& s = spans[i];
    s.lo = static_cast<int>(std::floor(lo));
    s.hi = std::min<int>(static_cast<int>(std::ceil(hi)), src_n);
    s.weight_off = weights.size();
    for (int k = s.lo; k < s.hi; ++k) {
      weights.push_back(std::min<double>(k + 1, hi) - std::max<double>(k, lo));
    }
  }
}

}  // namespace

Image resize_area(const Image& src, std::uint16_t dst_w, std::uint16_t dst_h) {
  if (dst_w == src.width && dst_h == src.height) return src;
  Image dst(dst_w, dst_h, src.channels);
  const std::size_t ch = src.channels;
  const std::size_t src_row = static_cast<std::size_t>(src.width) * ch;

  if (src.width % dst_w == 0 && src.height % dst_h == 0) {
    // Integral ratio: every output pixel averages an exact sx-by-sy block.
    const unsigned sx = src.width / dst_w;
    const unsigned sy = src.height / dst_h;
    const unsigned area = sx * sy;
    for (std::uint16_t y = 0; y < dst_h; ++y) {
      const std::uint8_t* block_row =
          src.pixels.data() + static_cast<std::size_t>(y) * sy * src_row;
      std::uint8_t* out =
          dst.pixels.data() + static_cast<std::size_t>(y) * dst_w * ch;
      for (std::uint16_t x = 0; x < dst_w; ++x) {
        const std::uint8_t* block = block_row + static_cast<std::size_t>(x) * sx * ch;
        for (std::size_t c = 0; c < ch; ++c) {
          unsigned acc = 0;
          for (unsigned iy = 0; iy < sy; ++iy) {
            const std::uint8_t* p = block + iy * src_row + c;
            for (unsigned ix = 0; ix < sx; ++ix) acc += p[ix * ch];
          }
          out[static_cast<std::size_t>(x) * ch + c] =
              static_cast<std::uint8_t>((acc + area / 2) / area);
        }
      }
    }
    return dst;
  }

  // General ratio: integrate the covered source box; edge samples are
  // weighted by their covered fraction.
  std::vector<Span> xs, ys;
  std::vector<double> wx, wy;
  build_spans(src.width, dst_w, xs, wx);
  build_spans(src.height, dst_h, ys, wy);
  const double inv_area = (static_cast<double>(dst_w) / src.width) *
                          (static_cast<double>(dst_h) / src.height);
  std::vector<double> acc(ch);
  for (std::uint16_t y = 0; y < dst_h; ++y) {
    const Span& sy = ys[y];
    const double* wyp = wy.data() + sy.weight_off;
    std::uint8_t* out =
        dst.pixels.data() + static_cast<std::size_t>(y) * dst_w * ch;
    for (std::uint16_t x = 0; x < dst_w; ++x) {
      const Span& sx = xs[x];
      const double* wxp = wx.data() + sx.weight_off;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int iy = sy.lo; iy < sy.hi; ++iy) {
        const double wyv = wyp[iy - sy.lo];
        const std::uint8_t* p = src.pixels.data() +
                                static_cast<std::size_t>(iy) * src_row +
                                static_cast<std::size_t>(sx.lo) * ch;
        for (int ix = sx.lo; ix < sx.hi; ++ix) {
          const double w = wxp[ix - sx.lo] * wyv;
          for (std::size_t c = 0; c < ch; ++c) acc[c] += w * p[c];
          p += ch;
        }
      }
      for (std::size_t c = 0; c < ch; ++c) {
        out[static_cast<std::size_t>(x) * ch + c] = static_cast<std::uint8_t>(
            std::lround(std::clamp(acc[c] * inv_area, 0.0, 255.0)));
      }
    }
  }
  return dst;
}

Image resize_nearest(const Image& src, std::uint16_t dst_w, std::uint16_t dst_h) {
  if (dst_w == src.width && dst_h == src.height) return src;
  Image dst(dst_w, dst_h, src.channels);
  const std::size_t ch = src.channels;
  const std::size_t src_row = static_cast<std::size_t>(src.width) * ch;

  std::vector<std::uint32_t> xmap(dst_w);
  for (std::uint16_t x = 0; x < dst_w; ++x) {
    xmap[x] = static_cast<std::uint32_t>(
        std::min<std::size_t>(static_cast<std::size_t>(x) * src.width / dst_w,
                              src.width - 1));
  }
  for (std::uint16_t y = 0; y < dst_h; ++y) {
    const std::size_t sy = std::min<std::size_t>(
        static_cast<std::size_t>(y) * src.height / dst_h, src.height - 1);
    const std::uint8_t* row = src.pixels.data() + sy * src_row;
    std::uint8_t* out =
        dst.pixels.data() + static_cast<std::size_t>(y) * dst_w * ch;
    if (ch == 1) {
      for (std::uint16_t x = 0; x < dst_w; ++x) out[x] = row[xmap[x]];
    } else {
      for (std::uint16_t x = 0; x < dst_w; ++x) {
        const std::uint8_t* p = row + static_cast<std::size_t>(xmap[x]) * ch;
        for (std::size_t c = 0; c < ch; ++c) {
          out[static_cast<std::size_t>(x) * ch + c] = p[c];
        }
      }
    }
  }
  return dst;
}

}  // namespace coral
