#include "ppr/io.hpp"

#include <json.hpp>
#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace ppr {
namespace {

using nlohmann::json;

void write_binary(const std::filesystem::path& path, const void* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<char> read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  in.read(buf.data(), size);
  if (!in) throw std::runtime_error("read failed: " + path.string());
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return json::parse(in);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

std::vector<unsigned char> to_gray8(const RealImage& img) {
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::vector<unsigned char> bytes(static_cast<std::size_t>(img.size()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    for (Eigen::Index j = 0; j < img.cols(); ++j)
      bytes[k++] = static_cast<unsigned char>(std::lround((img(i, j) - lo) * scale));
  return bytes;
}

RealImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P2") throw std::runtime_error("unsupported PGM: " + path.string());
  const auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("truncated PGM header");
  };
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("PGM: only 8-bit supported");

  RealImage img(height, width);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> row(static_cast<std::size_t>(width));
    for (int i = 0; i < height; ++i) {
      in.read(reinterpret_cast<char*>(row.data()), width);
      if (!in) throw std::runtime_error("truncated PGM data");
      for (int j = 0; j < width; ++j) img(i, j) = static_cast<double>(row[static_cast<std::size_t>(j)]) / maxval;
    }
  } else {
    for (int i = 0; i < height; ++i)
      for (int j = 0; j < width; ++j) img(i, j) = std::stod(next_token()) / maxval;
  }
  return img;
}

RealImage read_png(const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw std::runtime_error("cannot open: " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (fp) std::fclose(fp);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("PNG decode failed: " + path.string());
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR)
    png_set_rgb_to_gray(png, 1, -1.0, -1.0);
  png_read_update_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  std::vector<unsigned char> row(png_get_rowbytes(png, info));
  RealImage img(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
  for (png_uint_32 i = 0; i < height; ++i) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 j = 0; j < width; ++j)
      img(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j] / 255.0;
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

}  // namespace

void write_c128(const std::filesystem::path& path, const ComplexImage& img) {
  std::vector<double> raw(static_cast<std::size_t>(img.size()) * 2);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      raw[k++] = img(i, j).real();
      raw[k++] = img(i, j).imag();
    }
  write_binary(path, raw.data(), raw.size() * sizeof(double));
  write_json(sidecar(path), json{{"height", img.rows()}, {"width", img.cols()}, {"dtype", "c128"}});
}

ComplexImage read_c128(const std::filesystem::path& path) {
  const json meta = read_json(sidecar(path));
  if (meta.at("dtype").get<std::string>() != "c128")
    throw std::runtime_error("unexpected dtype in " + sidecar(path).string());
  const auto rows = meta.at("height").get<Eigen::Index>();
  const auto cols = meta.at("width").get<Eigen::Index>();
  const auto buf = read_binary(path);
  if (buf.size() != static_cast<std::size_t>(rows * cols) * 2 * sizeof(double))
    throw std::runtime_error("c128 payload size mismatch: " + path.string());
  const double* raw = reinterpret_cast<const double*>(buf.data());
  ComplexImage img(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      img(i, j) = Complex(raw[k], raw[k + 1]);
      k += 2;
    }
  return img;
}

void write_phaseless(const std::filesystem::path& path, const PhaselessData& data) {
  write_binary(path, data.f.data(), static_cast<std::size_t>(data.f.size()) * sizeof(double));
  write_json(sidecar(path),
             json{{"m", data.f.size()},
                  {"kind", data.model.kind == NoiseKind::Poisson ? "poisson" : "gaussian"},
                  {"level", std::isinf(data.model.level) ? json("inf") : json(data.model.level)},
                  {"seed", data.seed}});
}

PhaselessData read_phaseless(const std::filesystem::path& path) {
  const json meta = read_json(sidecar(path));
  const auto m = meta.at("m").get<Eigen::Index>();
  const auto buf = read_binary(path);
  if (buf.size() != static_cast<std::size_t>(m) * sizeof(double))
    throw std::runtime_error("f64 payload size mismatch: " + path.string());
  PhaselessData data;
  data.f = Eigen::Map<const RealVector>(reinterpret_cast<const double*>(buf.data()), m);
  data.model.kind =
      meta.at("kind").get<std::string>() == "poisson" ? NoiseKind::Poisson : NoiseKind::Gaussian;
  data.model.level = meta.at("level").is_string() ? std::numeric_limits<double>::infinity()
                                                  : meta.at("level").get<double>();
  data.seed = meta.at("seed").get<std::uint64_t>();
  return data;
}

RealImage read_grayscale(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm" || ext == ".PGM") return read_pgm(path);
  return read_png(path);
}

void write_png_gray(const std::filesystem::path& path, const RealImage& img) {
  const auto bytes = to_gray8(img);
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open for writing: " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (fp) std::fclose(fp);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("PNG encode failed: " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()),
               static_cast<png_uint_32>(img.rows()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    png_write_row(png, const_cast<png_bytep>(bytes.data() + i * img.cols()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void write_pgm_gray(const std::filesystem::path& path, const RealImage& img) {
  const auto bytes = to_gray8(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_history_csv(const std::filesystem::path& path, const RunHistory& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "iter,rel_err,snr_db,fidelity,pnp_residual\n";
  char line[256];
  for (const auto& r : history.records) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.rel_err, r.snr_db,
                  r.fidelity, r.pnp_residual);
    out << line;
  }
}

}  // namespace ppr
