#include "rscqt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rscqt {
namespace io {

namespace {

json complex_matrix_to_json(const Cmat& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

Cmat complex_matrix_from_json(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim * dim)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(dim * dim) + " [re,im] pairs");
  Cmat m(dim, dim);
  int k = 0;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const json& e = j[k++];
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument(std::string(what) + ": entry is not [re,im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json real_matrix_to_json(const Rmat& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Rmat real_matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string(what) + ": expected a matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Rmat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw std::invalid_argument(std::string(what) + ": ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

}  // namespace

json gate_set_to_json(const GateSet& s) {
  json j;
  j["dim"] = s.dim();
  j["rho"] = complex_matrix_to_json(s.rho.mat);
  json povm = json::object();
  for (const auto& [label, effect] : s.povm.effects)
    povm[label] = complex_matrix_to_json(effect);
  j["povm"] = povm;
  json gates = json::array();
  for (const auto& g : s.gates)
    gates.push_back({{"name", g.name}, {"hs", real_matrix_to_json(g.hs)}});
  j["gates"] = gates;
  return j;
}

GateSet gate_set_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("rho") || !j.contains("povm") ||
      !j.contains("gates"))
    throw std::invalid_argument("gate set JSON missing dim/rho/povm/gates");
  const int dim = j.at("dim").get<int>();
  if (dim < 2) throw std::invalid_argument("dim must be at least 2");
  GateSet s;
  s.rho.mat = complex_matrix_from_json(j.at("rho"), dim, "rho");
  for (const auto& [label, mat] : j.at("povm").items())
    s.povm.effects[label] = complex_matrix_from_json(mat, dim, "povm effect");
  if (s.povm.effects.empty()) throw std::invalid_argument("povm has no effects");
  for (const auto& g : j.at("gates")) {
    Rmat hs = real_matrix_from_json(g.at("hs"), "gate hs");
    if (hs.rows() != dim * dim || hs.cols() != dim * dim)
      throw std::invalid_argument("gate hs must be d^2 x d^2");
    s.gates.push_back({g.value("name", ""), std::move(hs)});
  }
  if (s.gates.empty()) throw std::invalid_argument("gate set has no gates");
  return s;
}

json sequence_set_to_json(const SequenceSet& id) {
  json seqs = json::array();
  for (const auto& seq : id.sequences()) seqs.push_back(seq);
  return json{{"sequences", seqs}};
}

SequenceSet sequence_set_from_json(const json& j) {
  std::vector<GateIndexSequence> seqs;
  for (const auto& s : j.at("sequences")) seqs.push_back(s.get<GateIndexSequence>());
  return SequenceSet(seqs);
}

json fiducials_to_json(const FiducialDesign& fd) {
  json prep = json::array(), meas = json::array();
  for (const auto& seq : fd.prep_fiducials.sequences()) prep.push_back(seq);
  for (const auto& seq : fd.meas_fiducials.sequences()) meas.push_back(seq);
  return json{{"prep_fiducials", prep}, {"meas_fiducials", meas},
              {"num_gates", fd.num_gates}};
}

FiducialDesign fiducials_from_json(const json& j) {
  FiducialDesign fd;
  for (const auto& s : j.at("prep_fiducials"))
    fd.prep_fiducials.insert(s.get<GateIndexSequence>());
  for (const auto& s : j.at("meas_fiducials"))
    fd.meas_fiducials.insert(s.get<GateIndexSequence>());
  fd.num_gates = j.at("num_gates").get<int>();
  if (fd.prep_fiducials.empty() || fd.meas_fiducials.empty())
    throw std::invalid_argument("fiducial sets must be non-empty");
  return fd;
}

json table_to_json(const DistributionTable& table) {
  json rows = json::object();
  for (size_t k = 0; k < table.sequences.size(); ++k) {
    json dist = json::object();
    for (size_t w = 0; w < table.outcomes.size(); ++w)
      dist[table.outcomes[w]] = table.rows[k](static_cast<int>(w));
    rows[format_sequence(table.sequences[k])] = dist;
  }
  return json{{"outcomes", table.outcomes}, {"shots", table.shots}, {"rows", rows}};
}

DistributionTable table_from_json(const json& j) {
  DistributionTable table;
  table.outcomes = j.at("outcomes").get<std::vector<std::string>>();
  table.shots = j.value("shots", 0L);
  for (const auto& [key, dist] : j.at("rows").items()) {
    Rvec p(static_cast<int>(table.outcomes.size()));
    for (size_t w = 0; w < table.outcomes.size(); ++w)
      p(static_cast<int>(w)) = dist.at(table.outcomes[w]).get<double>();
    table.add_row(parse_sequence(key), std::move(p));
  }
  return table;
}

json estimate_to_json(const EstimateResult& result) {
  return json{{"gate_set", gate_set_to_json(result.estimate)},
              {"loss_value", result.loss_value},
              {"reg_value", result.reg_value},
              {"objective_value", result.objective_value},
              {"r_used", result.r_used},
              {"iterations", result.iterations},
              {"converged", result.converged},
              {"initial_point", result.initial_point}};
}

EstimateResult estimate_from_json(const json& j) {
  EstimateResult r;
  r.estimate = gate_set_from_json(j.at("gate_set"));
  r.loss_value = j.at("loss_value").get<double>();
  r.reg_value = j.at("reg_value").get<double>();
  r.objective_value = j.at("objective_value").get<double>();
  r.r_used = j.at("r_used").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.initial_point = j.value("initial_point", "");
  return r;
}

std::string dataset_to_csv(const Dataset& ds) {
  std::ostringstream os;
  os << "sequence,outcome,count\n";
  for (size_t r = 0; r < ds.sequences.size(); ++r)
    for (size_t w = 0; w < ds.outcomes.size(); ++w)
      os << format_sequence(ds.sequences[r]) << ',' << ds.outcomes[w] << ','
         << ds.counts[r][w] << '\n';
  return os.str();
}

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "sequence,outcome,count")
    throw std::invalid_argument("dataset CSV must start with 'sequence,outcome,count'");

  // rows keep their first-appearance order so a round-trip is faithful
  std::vector<GateIndexSequence> order;
  std::map<GateIndexSequence, std::map<std::string, long>> rows;
  std::set<std::string> outcome_set;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("malformed dataset CSV line: " + line);
    GateIndexSequence seq = parse_sequence(line.substr(0, c1));
    std::string outcome = line.substr(c1 + 1, c2 - c1 - 1);
    long count = std::stol(line.substr(c2 + 1));
    if (count < 0) throw std::invalid_argument("negative count in dataset CSV");
    if (rows.find(seq) == rows.end()) order.push_back(seq);
    rows[seq][outcome] += count;
    outcome_set.insert(outcome);
  }
  if (rows.empty()) throw std::invalid_argument("dataset CSV has no rows");

  Dataset ds;
  ds.outcomes.assign(outcome_set.begin(), outcome_set.end());
  long shots = -1;
  for (const auto& seq : order) {
    const auto& counts = rows.at(seq);
    std::vector<long> row;
    long total = 0;
    for (const auto& outcome : ds.outcomes) {
      auto it = counts.find(outcome);
      long c = it == counts.end() ? 0 : it->second;
      row.push_back(c);
      total += c;
    }
    if (shots < 0)
      shots = total;
    else if (total != shots)
      throw std::invalid_argument("sequence " + format_sequence(seq) +
                                  " has a different repetition count");
    ds.sequences.push_back(seq);
    ds.counts.push_back(std::move(row));
  }
  ds.shots = shots;
  return ds;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string load_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

}  // namespace io
}  // namespace rscqt
