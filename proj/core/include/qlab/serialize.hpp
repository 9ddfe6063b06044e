#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qlab/field.hpp"

namespace qlab {

/// Field kinds understood by the fixture format.
enum class FieldKind { scalar, vector, sym2, tensor2 };

std::string_view to_string(FieldKind k);

/// Any sampled field together with its kind. Components are stored exactly as
/// in FieldData (component-major, row-major points).
struct StoredField {
  StoredField(FieldKind kind, Variance variance, Grid grid, std::vector<double> data = {})
      : kind(kind), variance(variance), grid(std::move(grid)), data(std::move(data)) {}

  FieldKind kind;
  Variance variance;
  Grid grid;
  std::vector<double> data;

  ScalarField as_scalar() const;
  VectorField as_vector() const;
  SymTensor2Field as_sym2() const;
  Tensor2Field as_tensor2() const;
};

StoredField store(const ScalarField& f);
StoredField store(const VectorField& f);
StoredField store(const SymTensor2Field& f);
StoredField store(const Tensor2Field& f);
StoredField store(const MetricField& g);

/// {dim, resolution, period, kind, variance, components: [[...], ...]}.
nlohmann::json to_json(const StoredField& f);
/// Throws std::invalid_argument on a malformed document.
StoredField from_json(const nlohmann::json& j);

/// "QLABFLD1", little-endian u64 header length, JSON header without
/// components, then the raw doubles.
void write_binary(std::ostream& os, const StoredField& f);
StoredField read_binary(std::istream& is);

/// Picks the format from the extension: ".json" or anything else (binary).
void save(const std::filesystem::path& path, const StoredField& f);
StoredField load(const std::filesystem::path& path);

}  // namespace qlab
