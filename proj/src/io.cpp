#include "qot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace qot {

namespace {

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, std::string(what) + ": NaN or Inf");
  return x;
}

cplx complex_entry(const json& v) {
  if (v.is_number()) return {finite_number(v, "matrix entry"), 0.0};
  if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::InvalidInput, "matrix entry must be [re, im]");
  return {finite_number(v[0], "matrix entry"), finite_number(v[1], "matrix entry")};
}

json real_entry(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "refusing to serialize NaN or Inf");
  return x;
}

}  // namespace

json matrix_to_json(const CMatrix& m, const std::string& kind, const std::string& tag) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "matrix_to_json: not square");
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({real_entry(m(i, j).real()), real_entry(m(i, j).imag())});
    rows.push_back(row);
  }
  json j = {{"dim", m.rows()}, {"entries", rows}};
  if (!kind.empty()) j["kind"] = kind;
  if (!tag.empty()) j["tag"] = tag;
  return j;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries")) throw Error(ErrorCode::InvalidInput, "matrix JSON needs \"entries\"");
  const json& e = j["entries"];
  if (!e.is_array() || e.empty()) throw Error(ErrorCode::InvalidInput, "\"entries\" must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(e.size());
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long>() != n)
      throw Error(ErrorCode::DimensionMismatch, "\"dim\" does not match the number of rows");
  }
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = e[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_entry(row[c]);
  }
  return m;
}

json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.op, "density"); }

DensityMatrix density_from_json(const json& j) {
  if (j.contains("kind") && j["kind"] != "density")
    throw Error(ErrorCode::InvalidInput, "expected kind \"density\"");
  return validate_density(matrix_from_json(j));
}

json cost_to_json(const CostOperator& c) {
  json j = matrix_to_json(c.op, "cost", to_string(c.tag));
  j["sites"] = c.sites;
  return j;
}

CostOperator cost_from_json(const json& j) {
  if (j.contains("kind") && j["kind"] != "cost") throw Error(ErrorCode::InvalidInput, "expected kind \"cost\"");
  const CMatrix m = matrix_from_json(j);
  std::vector<int> sites;
  if (j.contains("sites")) {
    sites = j["sites"].get<std::vector<int>>();
  } else {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.rows()))));
    if (n * n != m.rows()) throw Error(ErrorCode::DimensionMismatch, "cost dim is not a square; give \"sites\"");
    sites = {n, n};
  }
  CostOperator c = custom_cost(m, sites);
  if (j.contains("tag")) c.tag = cost_tag_from_string(j["tag"].get<std::string>());
  return c;
}

json plan_to_json(const RMatrix& x) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < x.cols(); ++k) row.push_back(real_entry(x(i, k)));
    rows.push_back(row);
  }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"entries", rows}};
}

RMatrix plan_from_json(const json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw Error(ErrorCode::InvalidInput, "plan JSON needs rows, cols and entries");
  const long m = j["rows"].get<long>(), n = j["cols"].get<long>();
  const json& e = j["entries"];
  if (!e.is_array() || static_cast<long>(e.size()) != m) throw Error(ErrorCode::DimensionMismatch, "plan row count");
  RMatrix x(m, n);
  for (long i = 0; i < m; ++i) {
    if (!e[i].is_array() || static_cast<long>(e[i].size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "plan column count");
    for (long k = 0; k < n; ++k) x(i, k) = finite_number(e[i][k], "plan entry");
  }
  return x;
}

RVector probability_from_json(const json& j) {
  if (j.is_array() || (j.contains("kind") && j["kind"] == "probability")) {
    const json& e = j.is_array() ? j : j["entries"];
    if (!e.is_array() || e.empty()) throw Error(ErrorCode::InvalidInput, "probability entries must be an array");
    RVector p(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) p(i) = finite_number(e[i], "probability entry");
    check_probability(p, "probability vector");
    return p;
  }
  const DensityMatrix rho = density_from_json(j);
  const CMatrix off = rho.op - CMatrix(rho.op.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorCode::InvalidInput, "density is not diagonal");
  return rho.op.diagonal().real();
}

json solution_to_json(const SdpSolution& sol, const CertificateReport* cert) {
  json j = {{"value", real_entry(sol.value)},
            {"gap", real_entry(sol.gap)},
            {"status", to_string(sol.status)},
            {"iterations", sol.iterations},
            {"primal_infeasibility", real_entry(sol.primal_infeasibility)},
            {"dual_infeasibility", real_entry(sol.dual_infeasibility)},
            {"coupling", matrix_to_json(sol.coupling, "coupling")},
            {"certificate", matrix_to_json(sol.certificate, "certificate")}};
  json pots = json::array();
  for (const auto& s : sol.sigma) pots.push_back(matrix_to_json(s, "potential"));
  j["potentials"] = pots;
  if (cert) {
    j["check"] = {{"complementarity", cert->complementarity},
                  {"min_eig_certificate", cert->min_eig_certificate},
                  {"marginal_error_a", cert->marginal_error_a},
                  {"marginal_error_b", cert->marginal_error_b},
                  {"rank_certificate", cert->rank_certificate},
                  {"rank_coupling", cert->rank_coupling},
                  {"face_only", cert->face_only},
                  {"pass", cert->pass}};
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string format_double(double v) {
  char buf[64];
  // %.17g semantics: 17 significant digits always round-trip a double.
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
  out_ << '\n';
}

}  // namespace qot
