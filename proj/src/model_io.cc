#include "passivity/model_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace passivity {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void ParseFail(const std::string& where, const std::string& what) {
  throw PassivityError(ErrorCode::kParse, where + ": " + what);
}

double ReadNumber(const json& v, const std::string& where) {
  if (!v.is_number()) ParseFail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) ParseFail(where, "non-finite entry");
  return x;
}

Matrix ReadMatrix(const json& doc, const char* name, int rows, int cols) {
  if (!doc.contains(name)) ParseFail(name, "missing");
  const json& v = doc.at(name);
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    ParseFail(name, "dimension mismatch: expected " + std::to_string(rows) +
                        " rows");
  }
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    const std::string rname = std::string(name) + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      ParseFail(rname, "dimension mismatch: expected " + std::to_string(cols) +
                           " columns");
    }
    for (int j = 0; j < cols; ++j) {
      const json& e = row[j];
      const std::string ename = rname + "[" + std::to_string(j) + "]";
      if (!e.is_array() || e.size() != 2) {
        ParseFail(ename, "expected a [re, im] pair");
      }
      out(i, j) = Complex(ReadNumber(e[0], ename + "[0]"),
                          ReadNumber(e[1], ename + "[1]"));
    }
  }
  return out;
}

ordered_json MatrixJson(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

int ReadCount(const json& doc, const char* name) {
  if (!doc.contains(name) || !doc.at(name).is_number_integer()) {
    ParseFail(name, "expected an integer");
  }
  const int v = doc.at(name).get<int>();
  if (v < 1) ParseFail(name, "must be >= 1");
  return v;
}

}  // namespace

ModelFile parse_model_text(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PassivityError(ErrorCode::kParse,
                         "malformed JSON at byte " + std::to_string(e.byte) +
                             ": " + e.what());
  }
  if (!doc.is_object()) ParseFail("document", "expected an object");
  ModelFile f;
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_string()) {
    ParseFail("schema_version", "missing");
  }
  f.schema_version = doc.at("schema_version").get<std::string>();
  if (f.schema_version != kModelSchemaVersion) {
    ParseFail("schema_version", "unsupported version " + f.schema_version);
  }
  const int n = ReadCount(doc, "n");
  const int m = ReadCount(doc, "m");
  f.model.A = ReadMatrix(doc, "A", n, n);
  f.model.B = ReadMatrix(doc, "B", n, m);
  f.model.C = ReadMatrix(doc, "C", m, n);
  f.model.D = ReadMatrix(doc, "D", m, m);
  if (doc.contains("X")) {
    f.X = HermitianMatrix(ReadMatrix(doc, "X", n, n));
    f.certificate = classify_certificate(*f.X, f.model, tol);
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PassivityError(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile parse_model(const std::string& path, const Tolerances& tol) {
  return parse_model_text(read_file(path), tol);
}

std::string write_model_text(const StateSpaceModel& model,
                             const std::optional<HermitianMatrix>& x) {
  model.Validate();
  ordered_json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["n"] = model.n();
  doc["m"] = model.m();
  doc["A"] = MatrixJson(model.A);
  doc["B"] = MatrixJson(model.B);
  doc["C"] = MatrixJson(model.C);
  doc["D"] = MatrixJson(model.D);
  if (x) doc["X"] = MatrixJson(x->matrix());
  return doc.dump(2) + "\n";
}

void write_model(const std::string& path, const StateSpaceModel& model,
                 const std::optional<HermitianMatrix>& x) {
  const std::string text = write_model_text(model, x);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw PassivityError(ErrorCode::kIo, "cannot write " + path);
  }
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += "\r\n";
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
    }
    out += "\r\n";
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << format_csv(table))) {
    throw PassivityError(ErrorCode::kIo, "cannot write " + path);
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace passivity
