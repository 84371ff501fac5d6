#include "zenn/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zenn/rng.hpp"

namespace zenn {

double synth1d_target(double x) {
  return x + 0.125 * std::sin(10.0 * x) + 0.135 * std::cos(5.0 * x) + 0.115 * std::sin(50.0 * x);
}

Dataset synth1d(int n_points, double x_lo, double x_hi, std::uint64_t seed, double noise_std) {
  if (n_points < 1) throw std::invalid_argument("synth1d: need at least one point");
  if (!(x_lo < x_hi)) throw std::invalid_argument("synth1d: empty x range");
  if (noise_std < 0.0) throw std::invalid_argument("synth1d: negative noise std");
  Dataset d;
  d.in_dim = 1;
  d.out_dim = 1;
  Rng rng(seed);
  for (int i = 0; i < n_points; ++i) {
    double x = rng.uniform(x_lo, x_hi);
    double y = synth1d_target(x);
    if (noise_std > 0.0) y += rng.normal(0.0, noise_std);
    d.push({&x, 1}, {&y, 1});
  }
  return d;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset load_jena_csv(const std::string& path, const std::string& column, int max_rows) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV file has no header row: " + path);
  std::vector<std::string> header = split_csv_line(line);
  auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw IoError("CSV column not found: \"" + column + "\" in " + path);
  std::size_t col = static_cast<std::size_t>(it - header.begin());

  std::vector<double> values;
  int row = 0;
  while (row < max_rows && std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() <= col)
      throw IoError("CSV row " + std::to_string(row + 2) + " has too few fields: " + path);
    const std::string& cell = fields[col];
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || !std::isfinite(v))
      throw IoError("CSV row " + std::to_string(row + 2) + " is not numeric: \"" + cell + "\"");
    values.push_back(v);
    ++row;
  }
  if (values.empty()) throw IoError("CSV file has no data rows: " + path);
  if (static_cast<int>(values.size()) < max_rows)
    std::fprintf(stderr, "warning: %s has only %zu rows (requested %d)\n", path.c_str(),
                 values.size(), max_rows);

  Dataset d;
  d.in_dim = 1;
  d.out_dim = 1;
  const int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    double x = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    d.push({&x, 1}, {&values[static_cast<std::size_t>(i)], 1});
  }
  return d;
}

// ---------------------------------------------------------------------------
// PPM

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
bool next_ppm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      break;
    }
  }
  if (c == EOF) return false;
  do {
    tok += static_cast<char>(c);
  } while ((c = in.get()) != EOF && !std::isspace(c));
  return true;
}

double norm_coord(int index, int dim) {
  return dim > 1 ? static_cast<double>(index) / static_cast<double>(dim - 1) : 0.0;
}

}  // namespace

ImageDataset load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PPM file: " + path);
  std::string tok;
  if (!next_ppm_token(in, tok) || tok != "P6") throw IoError("not a binary PPM (P6) file: " + path);
  int width = 0, height = 0, maxval = 0;
  auto read_int = [&](int& out) {
    if (!next_ppm_token(in, tok)) throw IoError("truncated PPM header: " + path);
    try {
      out = std::stoi(tok);
    } catch (const std::exception&) {
      throw IoError("bad PPM header token \"" + tok + "\": " + path);
    }
  };
  read_int(width);
  read_int(height);
  read_int(maxval);
  if (width <= 0 || height <= 0) throw IoError("bad PPM dimensions: " + path);
  if (maxval != 255) throw IoError("unsupported PPM maxval (must be 255): " + path);
  // The header ends with exactly one whitespace byte, already consumed by
  // the tokenizer.
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw IoError("truncated PPM payload: " + path);

  ImageDataset img;
  img.width = width;
  img.height = height;
  img.data.in_dim = 2;
  img.data.out_dim = 3;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      double xy[2] = {norm_coord(col, width), norm_coord(row, height)};
      std::size_t base = (static_cast<std::size_t>(row) * width + col) * 3;
      double rgb[3] = {bytes[base] / 255.0, bytes[base + 1] / 255.0, bytes[base + 2] / 255.0};
      img.data.push(xy, rgb);
    }
  }
  return img;
}

void save_ppm(const ImageDataset& image, const std::string& path) {
  if (image.width <= 0 || image.height <= 0 ||
      image.data.size() != image.width * image.height || image.data.out_dim != 3)
    throw std::invalid_argument("save_ppm: inconsistent image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create PPM file: " + path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> bytes(static_cast<std::size_t>(image.width) * image.height * 3);
  for (int i = 0; i < image.data.size(); ++i) {
    std::span<const double> rgb = image.data.target(i);
    for (int c = 0; c < 3; ++c) {
      double v = std::lround(rgb[static_cast<std::size_t>(c)] * 255.0);
      v = std::clamp(v, 0.0, 255.0);
      bytes[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(c)] =
          static_cast<unsigned char>(v);
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing PPM payload: " + path);
}

ImageDataset predicted_image(const Model& model, int width, int height) {
  if (input_dim(model) != 2 || output_dim(model) != 3)
    throw std::invalid_argument("predicted_image: model must map R^2 -> R^3");
  ImageDataset img;
  img.width = width;
  img.height = height;
  img.data.in_dim = 2;
  img.data.out_dim = 3;
  double rgb[3];
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      double xy[2] = {norm_coord(col, width), norm_coord(row, height)};
      model_eval(model, xy, rgb);
      for (double& v : rgb) v = std::clamp(v, 0.0, 1.0);
      img.data.push(xy, rgb);
    }
  }
  return img;
}

}  // namespace zenn
