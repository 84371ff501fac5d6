#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "zenn/dataio.hpp"

using namespace zenn;

namespace {

std::string fixture(const std::string& name) { return std::string(ZENN_FIXTURES_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("synth1d target closed-form points") {
  CHECK(synth1d_target(0.0) == doctest::Approx(0.135).epsilon(1e-15));
  // the three sinusoids vanish simultaneously at pi/2
  CHECK(synth1d_target(std::numbers::pi / 2) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("synth1d sampling is seeded, in range and noise-free by default") {
  Dataset a = synth1d(200, 0.0, 2.0, 42);
  Dataset b = synth1d(200, 0.0, 2.0, 42);
  CHECK(a.inputs == b.inputs);
  CHECK(a.targets == b.targets);
  CHECK(a.size() == 200);
  for (int i = 0; i < a.size(); ++i) {
    double x = a.input(i)[0];
    CHECK(x >= 0.0);
    CHECK(x < 2.0);
    CHECK(std::abs(a.target(i)[0] - synth1d_target(x)) < 1e-15);
  }
  Dataset c = synth1d(200, 0.0, 2.0, 43);
  CHECK(a.inputs != c.inputs);
  CHECK_THROWS_AS(synth1d(0, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth1d(10, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("jena csv fixture loads index-scaled inputs") {
  Dataset d = load_jena_csv(fixture("jena_tiny.csv"));
  REQUIRE(d.size() == 3);
  CHECK(d.input(0)[0] == 0.0);
  CHECK(d.input(1)[0] == 0.5);
  CHECK(d.input(2)[0] == 1.0);
  CHECK(d.target(0)[0] == 1.0);
  CHECK(d.target(1)[0] == 2.0);
  CHECK(d.target(2)[0] == 3.0);
}

TEST_CASE("jena csv error paths") {
  CHECK_THROWS_AS(load_jena_csv(fixture("jena_tiny.csv"), "humidity"), IoError);
  CHECK_THROWS_AS(load_jena_csv(fixture("does_not_exist.csv")), IoError);

  std::string bad = "bad_rows_tmp.csv";
  {
    std::ofstream f(bad);
    f << "T (degC)\n1.0\nnot-a-number\n";
  }
  CHECK_THROWS_AS(load_jena_csv(bad), IoError);
  std::remove(bad.c_str());
}

TEST_CASE("jena csv accepts short files with a warning") {
  Dataset d = load_jena_csv(fixture("jena_tiny.csv"), "T (degC)", 10);
  CHECK(d.size() == 3);
}

TEST_CASE("demo temperature series has the expected shape") {
  Dataset d = load_jena_csv(fixture("temperature_series_demo.csv"), "T (degC)", 3000);
  CHECK(d.size() == 400);
  for (int i = 0; i < d.size(); ++i) CHECK(std::isfinite(d.target(i)[0]));
}

TEST_CASE("1x1 ppm maps to a single centered record") {
  ImageDataset img = load_ppm(fixture("white1x1.ppm"));
  CHECK(img.width == 1);
  CHECK(img.height == 1);
  REQUIRE(img.data.size() == 1);
  CHECK(img.data.input(0)[0] == 0.0);
  CHECK(img.data.input(0)[1] == 0.0);
  for (int c = 0; c < 3; ++c) CHECK(img.data.target(0)[static_cast<std::size_t>(c)] == 1.0);
}

TEST_CASE("2x2 ppm fixture decodes known bytes") {
  ImageDataset img = load_ppm(fixture("rgb2x2.ppm"));
  REQUIRE(img.data.size() == 4);
  // row-major records; coordinates (col/(w-1), row/(h-1))
  CHECK(img.data.input(0)[0] == 0.0);
  CHECK(img.data.input(0)[1] == 0.0);
  CHECK(img.data.input(1)[0] == 1.0);
  CHECK(img.data.input(1)[1] == 0.0);
  CHECK(img.data.input(2)[0] == 0.0);
  CHECK(img.data.input(2)[1] == 1.0);
  CHECK(img.data.target(0)[0] == 1.0);  // red
  CHECK(img.data.target(0)[1] == 0.0);
  CHECK(img.data.target(1)[1] == 1.0);  // green
  CHECK(img.data.target(2)[2] == 1.0);  // blue
  for (int c = 0; c < 3; ++c) CHECK(img.data.target(3)[static_cast<std::size_t>(c)] == 1.0);
}

TEST_CASE("ppm load-save round trip is bit-identical") {
  for (const char* name : {"rgb2x2.ppm", "texture64.ppm"}) {
    ImageDataset img = load_ppm(fixture(name));
    std::string out = std::string("roundtrip_tmp_") + name;
    save_ppm(img, out);
    CHECK(slurp(out) == slurp(fixture(name)));
    std::remove(out.c_str());
  }
}

TEST_CASE("ppm error paths") {
  std::string p3 = "p3_tmp.ppm";
  {
    std::ofstream f(p3, std::ios::binary);
    f << "P3\n1 1\n255\n255 255 255\n";
  }
  CHECK_THROWS_AS(load_ppm(p3), IoError);
  std::remove(p3.c_str());

  std::string maxval = "maxval_tmp.ppm";
  {
    std::ofstream f(maxval, std::ios::binary);
    f << "P6\n1 1\n65535\n";
    f.write("\0\0\0\0\0\0", 6);
  }
  CHECK_THROWS_AS(load_ppm(maxval), IoError);
  std::remove(maxval.c_str());

  std::string trunc = "trunc_tmp.ppm";
  {
    std::ofstream f(trunc, std::ios::binary);
    f << "P6\n2 2\n255\n";
    f.write("\0\0\0", 3);
  }
  CHECK_THROWS_AS(load_ppm(trunc), IoError);
  std::remove(trunc.c_str());
}

TEST_CASE("random_split partitions deterministically") {
  Dataset d = synth1d(4, 0.0, 1.0, 9);
  Dataset s = random_split(d, 0.75, 11);
  CHECK(s.count(Split::train) == 3);
  CHECK(s.count(Split::validation) == 1);
  Dataset s2 = random_split(d, 0.75, 11);
  CHECK(s.split == s2.split);
  Dataset s3 = random_split(d, 0.75, 12);
  CHECK(s.size() == s3.size());

  Dataset big = synth1d(10000, 0.0, 1.0, 5);
  Dataset bs = random_split(big, 0.75, 1);
  CHECK(bs.count(Split::train) == 7500);
  CHECK(bs.count(Split::validation) == 2500);

  Dataset tiny = synth1d(1, 0.0, 1.0, 2);
  CHECK_THROWS_AS(random_split(tiny, 0.75, 3), std::invalid_argument);
  CHECK_THROWS_AS(random_split(d, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(random_split(d, 1.0, 3), std::invalid_argument);
}

TEST_CASE("predicted_image clamps and matches the model on the grid") {
  DeepModel m;
  m.layers.emplace_back(DenseLayer::make(2, 3, 0.0, Activation::identity));
  std::vector<double> p = {2.0, 0.0, 0.0, -1.0, 0.0, 0.5, 0.25, 0.5, 0.2};
  set_params(m, p);
  Model model = m;
  ImageDataset img = predicted_image(model, 3, 2);
  CHECK(img.data.size() == 6);
  for (int i = 0; i < img.data.size(); ++i)
    for (int c = 0; c < 3; ++c) {
      double v = img.data.target(i)[static_cast<std::size_t>(c)];
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}
