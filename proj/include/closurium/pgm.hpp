#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "closurium/errors.hpp"

namespace closurium {

struct pgm_image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint16_t maxval = 255;
  std::vector<std::uint16_t> pixels; // row-major
};

// Reads P2 (ASCII) and P5 (binary, maxval <= 255) images.
inline pgm_image read_pgm(std::istream& in) {
  auto next_token = [&in]() -> std::string {
    std::string tok;
    while (in) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      if (std::isspace(c)) {
        in.get();
        continue;
      }
      break;
    }
    in >> tok;
    return tok;
  };

  std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw validation_error("not a PGM file");
  pgm_image img;
  try {
    img.width = std::stoul(next_token());
    img.height = std::stoul(next_token());
    img.maxval = static_cast<std::uint16_t>(std::stoul(next_token()));
  } catch (const std::exception&) {
    throw validation_error("malformed PGM header");
  }
  if (img.maxval == 0) throw validation_error("malformed PGM header");
  std::size_t n = img.width * img.height;
  img.pixels.resize(n);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      long v = 0;
      if (!(in >> v)) throw validation_error("truncated PGM data");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    if (img.maxval > 255) throw validation_error("binary PGM maxval > 255 not supported");
    in.get(); // single whitespace after maxval
    for (std::size_t i = 0; i < n; ++i) {
      int c = in.get();
      if (c == EOF) throw validation_error("truncated PGM data");
      img.pixels[i] = static_cast<std::uint16_t>(c);
    }
  }
  return img;
}

inline pgm_image read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open " + path);
  return read_pgm(in);
}

// Writes ASCII P2 so outputs diff cleanly and stay bit-exact.
inline void write_pgm(std::ostream& out, const pgm_image& img, const std::string& comment = "") {
  out << "P2\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << img.width << " " << img.height << "\n" << img.maxval << "\n";
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      if (x) out << " ";
      out << img.pixels[y * img.width + x];
    }
    out << "\n";
  }
}

} // namespace closurium
