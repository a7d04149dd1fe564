#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "passivity/experiments.h"
#include "passivity/kernels.h"
#include "passivity/kyp.h"
#include "passivity/system_model.h"

namespace passivity {

inline constexpr const char* kModelSchemaVersion = "1.0";

/// JSON model file: {"schema_version", "n", "m", "A", "B", "C", "D", "X"?}
/// with every matrix a list of rows and every entry a [re, im] pair.
struct ModelFile {
  std::string schema_version = kModelSchemaVersion;
  StateSpaceModel model;
  std::optional<HermitianMatrix> X;
  std::optional<Certificate> certificate;  // X classified on load
};

/// Throws kParse (with the offending field) or kIo.
ModelFile parse_model_text(const std::string& text,
                           const Tolerances& tol = {});
ModelFile parse_model(const std::string& path, const Tolerances& tol = {});

std::string write_model_text(const StateSpaceModel& model,
                             const std::optional<HermitianMatrix>& x = {});
void write_model(const std::string& path, const StateSpaceModel& model,
                 const std::optional<HermitianMatrix>& x = {});

/// Header line plus one line per row, values in %.17g.
std::string format_csv(const CsvTable& table);
void emit_csv(const CsvTable& table, const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace passivity
