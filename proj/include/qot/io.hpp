#pragma once

#include "qot/classical.hpp"
#include "qot/cost.hpp"
#include "qot/sdp.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qot {

using json = nlohmann::json;

// {"dim": n, "entries": [[[re, im], ...], ...]} row-major; kind and tag are added when non-empty.
json matrix_to_json(const CMatrix& m, const std::string& kind = "", const std::string& tag = "");
// Rejects ragged rows, non-numeric entries, NaN and Inf.
CMatrix matrix_from_json(const json& j);

json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

// Cost files carry "sites"; a missing "sites" means two equal factors.
json cost_to_json(const CostOperator& c);
CostOperator cost_from_json(const json& j);

// {"rows": m, "cols": n, "entries": [[...], ...]}
json plan_to_json(const RMatrix& x);
RMatrix plan_from_json(const json& j);

// A probability vector file is either {"kind": "probability", "entries": [...]} or a diagonal density.
RVector probability_from_json(const json& j);

json solution_to_json(const SdpSolution& sol, const CertificateReport* cert = nullptr);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// 17 significant digits, '.' decimal, locale independent.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

}  // namespace qot
