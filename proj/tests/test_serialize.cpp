#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "zenn/serialize.hpp"
#include "zenn/stochastics.hpp"

using namespace zenn;

namespace {

std::string fixture(const std::string& name) { return std::string(ZENN_FIXTURES_DIR) + "/" + name; }

DeepModel fancy_model() {
  DeepModel m;
  std::vector<Layer> parts;
  parts.emplace_back(RandoZeNNLayer::make(2, 8, 12, 0.5, Activation::sine, 71));
  parts.emplace_back(RandoZeNNLayer::make(2, 8, 12, 0.5, Activation::cosine, 72));
  m.layers.emplace_back(ConcatLayer::make(std::move(parts)));
  m.layers.emplace_back(DenseLayer::make(24, 6, 1.1, Activation::relu));
  m.layers.emplace_back(KAZeNNLayer::make(6, 2, 3, 1.3, Activation::sine));
  m.layers.emplace_back(DenseLayer::make(2, 2, 0.0, Activation::identity));
  m.validate();
  InitSpec spec = InitSpec::defaults(123);
  spec.b1 = Dist::uniform(-0.5, 0.5);
  init_model(m, spec);
  return m;
}

std::vector<double> flat_params(const Model& m) {
  std::vector<double> p(static_cast<std::size_t>(param_count(m)));
  get_params(m, p);
  return p;
}

}  // namespace

TEST_CASE("shallow round-trip is bit-exact") {
  Rng rng(1);
  ShallowZeNN net = oracle::random_zenn(rng, 7, 1.23456789012345, Activation::sigmoid);
  Model m = net;
  Model back = deserialize_model(serialize_model(m));
  REQUIRE(std::holds_alternative<ShallowZeNN>(back));
  const ShallowZeNN& b = std::get<ShallowZeNN>(back);
  CHECK(b.n == net.n);
  CHECK(b.alpha == net.alpha);
  CHECK(b.act == net.act);
  CHECK(flat_params(back) == flat_params(m));

  ShallowMLP mlp = oracle::random_mlp(rng, 5, 0.5, Activation::sine);
  Model m2 = mlp;
  Model back2 = deserialize_model(serialize_model(m2));
  REQUIRE(std::holds_alternative<ShallowMLP>(back2));
  CHECK(std::get<ShallowMLP>(back2).beta == mlp.beta);
  CHECK(flat_params(back2) == flat_params(m2));
}

TEST_CASE("deep round-trip preserves structure, parameters and outputs") {
  Model m = fancy_model();
  std::string text = serialize_model(m);
  Model back = deserialize_model(text);
  REQUIRE(std::holds_alternative<DeepModel>(back));
  CHECK(flat_params(back) == flat_params(m));

  // same indices and frequency data -> bitwise identical outputs
  std::vector<double> x = {0.123, -0.456}, y1(2), y2(2);
  model_eval(m, x, y1);
  model_eval(back, x, y2);
  CHECK(y1 == y2);

  // second round trip reproduces the document exactly
  CHECK(serialize_model(back) == text);
}

TEST_CASE("fourier layers serialize their frequency matrix") {
  DeepModel m;
  m.layers.emplace_back(FourierLayer::make(2, 6, 10.0, false, 3));
  m.layers.emplace_back(DenseLayer::make(12, 1, 0.0, Activation::identity));
  InitSpec spec = InitSpec::defaults(5);
  init_model(m, spec);
  Model model = m;
  Model back = deserialize_model(serialize_model(model));
  const DeepModel& bm = std::get<DeepModel>(back);
  CHECK(std::get<FourierLayer>(bm.layers[0].v).bmat == std::get<FourierLayer>(m.layers[0].v).bmat);
}

TEST_CASE("malformed documents are rejected with the malformed error") {
  CHECK_THROWS_AS(deserialize_model(""), MalformedModelError);
  CHECK_THROWS_AS(deserialize_model("not-a-model v1"), MalformedModelError);
  CHECK_THROWS_AS(deserialize_model("zenn-model v1 shallow_zenn n 2"), MalformedModelError);

  Model m = ShallowZeNN::make(2, 1.0, Activation::sine);
  std::string text = serialize_model(m);
  std::string truncated = text.substr(0, text.size() / 2);
  CHECK_THROWS_AS(deserialize_model(truncated), MalformedModelError);
}

TEST_CASE("version and size mismatches raise their own error types") {
  CHECK_THROWS_AS(deserialize_model("zenn-model v2 shallow_zenn n 1 alpha 1 activation sine "
                                    "params 4 0 0 0 0 end"),
                  VersionMismatchError);
  CHECK_THROWS_AS(deserialize_model("zenn-model v1 shallow_zenn n 2 alpha 1 activation sine "
                                    "params 4 0 0 0 0 end"),
                  DimMismatchError);
}

TEST_CASE("hand-written minimal document parses to the expected network") {
  Model m = load_model_file(fixture("minimal_zenn.model"));
  REQUIRE(std::holds_alternative<ShallowZeNN>(m));
  const ShallowZeNN& net = std::get<ShallowZeNN>(m);
  CHECK(net.n == 1);
  CHECK(net.alpha == 1.5);
  CHECK(net.act == Activation::sine);
  CHECK(net.neurons[0].w1 == 0.25);
  CHECK(net.neurons[0].b1 == -0.5);
  CHECK(net.neurons[0].w2 == 2.0);
  CHECK(net.neurons[0].b2 == 0.125);
}

TEST_CASE("save/load file round-trip") {
  Model m = fancy_model();
  std::string path = "roundtrip_tmp.model";
  save_model_file(m, path);
  Model back = load_model_file(path);
  CHECK(flat_params(back) == flat_params(m));
  std::remove(path.c_str());
}
