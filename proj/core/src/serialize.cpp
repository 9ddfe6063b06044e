#include "qlab/serialize.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qlab {

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'L', 'A', 'B', 'F', 'L', 'D', '1'};

int component_count(FieldKind k, int n) {
  switch (k) {
    case FieldKind::scalar: return 1;
    case FieldKind::vector: return n;
    case FieldKind::sym2: return sym_size(n);
    case FieldKind::tensor2: return n * n;
  }
  return 0;
}

FieldKind kind_from(const std::string& s) {
  if (s == "scalar") return FieldKind::scalar;
  if (s == "vector") return FieldKind::vector;
  if (s == "sym2") return FieldKind::sym2;
  if (s == "tensor2") return FieldKind::tensor2;
  throw std::invalid_argument("field: unknown kind '" + s + "'");
}

Variance variance_from(const std::string& s) {
  if (s == "lower") return Variance::lower;
  if (s == "upper") return Variance::upper;
  throw std::invalid_argument("field: unknown variance '" + s + "'");
}

template <class F>
StoredField store_data(const F& f, FieldKind k) {
  return StoredField(k, f.variance(), f.grid(),
                     std::vector<double>(f.raw().begin(), f.raw().end()));
}

template <class F>
F restore(const StoredField& s, FieldKind expected, F out) {
  if (s.kind != expected)
    throw std::invalid_argument("field: stored kind is " + std::string(to_string(s.kind)));
  if (s.data.size() != out.raw().size())
    throw std::invalid_argument("field: data length does not match the grid");
  std::copy(s.data.begin(), s.data.end(), out.raw().begin());
  return out;
}

nlohmann::json header(const StoredField& f) {
  return {{"dim", f.grid.dim()},
          {"resolution", f.grid.resolution()},
          {"period", f.grid.period()},
          {"kind", to_string(f.kind)},
          {"variance", to_string(f.variance)}};
}

StoredField from_header(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    auto res = j.at("resolution").get<std::vector<int>>();
    auto per = j.at("period").get<std::vector<double>>();
    if (static_cast<int>(res.size()) != dim || static_cast<int>(per.size()) != dim)
      throw std::invalid_argument("field: resolution/period length differs from dim");
    return StoredField(kind_from(j.at("kind").get<std::string>()),
                       variance_from(j.at("variance").get<std::string>()),
                       Grid(std::move(res), std::move(per)));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field: bad header: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::vector: return "vector";
    case FieldKind::sym2: return "sym2";
    case FieldKind::tensor2: return "tensor2";
  }
  return "?";
}

ScalarField StoredField::as_scalar() const {
  return restore(*this, FieldKind::scalar, ScalarField(grid));
}
VectorField StoredField::as_vector() const {
  return restore(*this, FieldKind::vector, VectorField(grid, variance));
}
SymTensor2Field StoredField::as_sym2() const {
  return restore(*this, FieldKind::sym2, SymTensor2Field(grid, variance));
}
Tensor2Field StoredField::as_tensor2() const {
  return restore(*this, FieldKind::tensor2, Tensor2Field(grid, variance));
}

StoredField store(const ScalarField& f) { return store_data(f, FieldKind::scalar); }
StoredField store(const VectorField& f) { return store_data(f, FieldKind::vector); }
StoredField store(const SymTensor2Field& f) { return store_data(f, FieldKind::sym2); }
StoredField store(const Tensor2Field& f) { return store_data(f, FieldKind::tensor2); }
StoredField store(const MetricField& g) { return store(g.lower()); }

nlohmann::json to_json(const StoredField& f) {
  nlohmann::json j = header(f);
  const std::size_t pts = f.grid.size();
  auto comps = nlohmann::json::array();
  const int nc = component_count(f.kind, f.grid.dim());
  for (int c = 0; c < nc; ++c)
    comps.push_back(std::vector<double>(f.data.begin() + c * pts, f.data.begin() + (c + 1) * pts));
  j["components"] = std::move(comps);
  return j;
}

StoredField from_json(const nlohmann::json& j) {
  StoredField f = from_header(j);
  const std::size_t pts = f.grid.size();
  const int nc = component_count(f.kind, f.grid.dim());
  try {
    const auto& comps = j.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != nc)
      throw std::invalid_argument("field: expected " + std::to_string(nc) + " components");
    f.data.reserve(nc * pts);
    for (const auto& c : comps) {
      auto v = c.get<std::vector<double>>();
      if (v.size() != pts) throw std::invalid_argument("field: component length mismatch");
      f.data.insert(f.data.end(), v.begin(), v.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field: bad components: ") + e.what());
  }
  return f;
}

void write_binary(std::ostream& os, const StoredField& f) {
  const std::string h = header(f).dump();
  const std::uint64_t len = h.size();
  os.write(kMagic.data(), kMagic.size());
  os.write(reinterpret_cast<const char*>(&len), sizeof len);
  os.write(h.data(), static_cast<std::streamsize>(h.size()));
  os.write(reinterpret_cast<const char*>(f.data.data()),
           static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!os) throw std::runtime_error("field: write failed");
}

StoredField read_binary(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::invalid_argument("field: not a binary field file");
  std::uint64_t len = 0;
  is.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!is || len > (1u << 20)) throw std::invalid_argument("field: bad header length");
  std::string h(len, '\0');
  is.read(h.data(), static_cast<std::streamsize>(len));
  if (!is) throw std::invalid_argument("field: truncated header");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(h);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field: bad header: ") + e.what());
  }
  StoredField f = from_header(j);
  f.data.resize(component_count(f.kind, f.grid.dim()) * f.grid.size());
  is.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!is) throw std::invalid_argument("field: truncated data");
  return f;
}

void save(const std::filesystem::path& path, const StoredField& f) {
  if (path.extension() == ".json") {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("field: cannot open " + path.string());
    os << to_json(f).dump() << '\n';
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("field: cannot open " + path.string());
  write_binary(os, f);
}

StoredField load(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("field: cannot open " + path.string());
    try {
      return from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("field: ") + e.what());
    }
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field: cannot open " + path.string());
  return read_binary(is);
}

}  // namespace qlab
