#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/serialize.hpp"

using namespace qlab;
using qlab::testing::sup_diff;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qlab_unit_" + name);
}

}  // namespace

TEST(Serialize, JsonRoundTripEveryKind) {
  const Grid g({8, 10, 12}, {1.0, 2.0, 3.0});
  const SymTensor2Field h = random_sym2(g, {1, 0.3, 2}, Variance::upper);
  const StoredField back = from_json(to_json(store(h)));
  EXPECT_EQ(back.kind, FieldKind::sym2);
  EXPECT_EQ(back.variance, Variance::upper);
  EXPECT_EQ(back.grid.resolution(), g.resolution());
  EXPECT_EQ(back.grid.period(), g.period());
  EXPECT_EQ(sup_diff(back.as_sym2(), h), 0.0);

  const VectorField v = random_vector(g, {1, 1.0, 3});
  EXPECT_EQ(sup_diff(from_json(to_json(store(v))).as_vector(), v), 0.0);
  const ScalarField f = random_scalar(g, {1, 1.0, 4});
  EXPECT_EQ(sup_diff(from_json(to_json(store(f))).as_scalar(), f), 0.0);
  Tensor2Field t(g, Variance::lower);
  for (std::size_t k = 0; k < t.raw().size(); ++k) t.raw()[k] = 0.5 * k;
  EXPECT_EQ(sup_diff(from_json(to_json(store(t))).as_tensor2(), t), 0.0);
}

TEST(Serialize, BinaryRoundTripIsBitExact) {
  const MetricField m = random_perturbed_metric(Grid(3, 8), {2, 0.05, 9});
  std::stringstream ss;
  write_binary(ss, store(m));
  const StoredField back = read_binary(ss);
  EXPECT_EQ(sup_diff(MetricField(back.as_sym2()).lower(), m.lower()), 0.0);
}

TEST(Serialize, FilesPickFormatFromExtension) {
  const ScalarField f = random_scalar(Grid(2, 8), {2, 1.0, 1});
  for (const char* name : {"f.json", "f.bin"}) {
    const auto p = temp_path(name);
    save(p, store(f));
    EXPECT_EQ(sup_diff(load(p).as_scalar(), f), 0.0);
    std::filesystem::remove(p);
  }
}

TEST(Serialize, KindMismatchThrows) {
  const StoredField s = store(ScalarField(Grid(2, 8), 1.0));
  EXPECT_THROW(s.as_sym2(), std::invalid_argument);
}

TEST(Serialize, MalformedDocumentsThrow) {
  const nlohmann::json good = to_json(store(ScalarField(Grid(2, 8), 1.0)));
  auto broken = [&](auto edit) {
    nlohmann::json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(from_json(broken([](auto& j) { j.erase("kind"); })), std::invalid_argument);
  EXPECT_THROW(from_json(broken([](auto& j) { j["kind"] = "spinor"; })), std::invalid_argument);
  EXPECT_THROW(from_json(broken([](auto& j) { j["dim"] = 3; })), std::invalid_argument);
  EXPECT_THROW(from_json(broken([](auto& j) { j["components"][0].erase(0); })),
               std::invalid_argument);
  EXPECT_THROW(from_json(broken([](auto& j) { j["variance"] = 7; })), std::invalid_argument);
  EXPECT_THROW(from_json(nlohmann::json::array()), std::invalid_argument);
}

TEST(Serialize, TruncatedBinaryThrows) {
  std::stringstream ss;
  write_binary(ss, store(ScalarField(Grid(2, 8), 1.0)));
  std::string bytes = ss.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 8));
  EXPECT_THROW(read_binary(cut), std::invalid_argument);
  std::stringstream junk("not a field at all");
  EXPECT_THROW(read_binary(junk), std::invalid_argument);
}
