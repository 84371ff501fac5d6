#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "zenn/dataset.hpp"
#include "zenn/model.hpp"

namespace zenn {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The 1d benchmark target.
double synth1d_target(double x);

// n points sampled uniformly on [x_lo, x_hi] (seeded), targets from
// synth1d_target plus optional Gaussian noise. All samples labeled train.
Dataset synth1d(int n_points, double x_lo, double x_hi, std::uint64_t seed,
                double noise_std = 0.0);

// Reads the named column of a CSV file with a header row; inputs are the
// row index rescaled to [0, 1], targets the column values. Stops after
// max_rows data rows; a shorter file is accepted with a warning on stderr.
Dataset load_jena_csv(const std::string& path, const std::string& column = "T (degC)",
                      int max_rows = 3000);

// Image as a regression dataset: one record per pixel, inputs are the
// normalized coordinates (column/(width-1), row/(height-1)), targets the
// RGB channels scaled to [0, 1]. A 1-pixel dimension maps to coordinate 0.
struct ImageDataset {
  int width = 0;
  int height = 0;
  Dataset data;  // in_dim 2, out_dim 3, pixels row-major (row by row)
};

// Binary PPM (P6), maxval 255 only.
ImageDataset load_ppm(const std::string& path);
void save_ppm(const ImageDataset& image, const std::string& path);

// Evaluates the model on every pixel coordinate of a width x height grid,
// clamping predictions to [0, 1]. The model must map R^2 -> R^3.
ImageDataset predicted_image(const Model& model, int width, int height);

}  // namespace zenn
