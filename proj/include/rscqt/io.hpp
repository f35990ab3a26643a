#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rscqt/design.hpp"
#include "rscqt/estimator.hpp"
#include "rscqt/qops.hpp"
#include "rscqt/simulator.hpp"

namespace rscqt {
namespace io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using nlohmann::json;

// GateSet schema:
// { "dim": d, "rho": [[re,im],...], "povm": {"label": [[re,im],...], ...},
//   "gates": [{"name": str, "hs": [[f,...],...]}, ...] }
// Complex matrices are flat row-major lists of [re, im] pairs.
json gate_set_to_json(const GateSet& s);
GateSet gate_set_from_json(const json& j);

json sequence_set_to_json(const SequenceSet& id);
SequenceSet sequence_set_from_json(const json& j);

json fiducials_to_json(const FiducialDesign& fd);
FiducialDesign fiducials_from_json(const json& j);

json table_to_json(const DistributionTable& table);
DistributionTable table_from_json(const json& j);

json estimate_to_json(const EstimateResult& result);
EstimateResult estimate_from_json(const json& j);

// CSV: header "sequence,outcome,count"; sequence dash-joined, empty = "-".
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(const std::string& text);

json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const json& j);
std::string load_text(const std::filesystem::path& path);
void save_text(const std::filesystem::path& path, const std::string& text);

// Shortest decimal form that round-trips a double.
std::string format_double(double v);

}  // namespace io
}  // namespace rscqt
