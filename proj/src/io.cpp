#include "qcont/io.hpp"

#include <fstream>
#include <sstream>

namespace qcont {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
  return v.get<int>();
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

json rectangular_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rectangular_from_json(const json& entries, int rows, int cols, const std::string& where) {
  if (!entries.is_array()) fail(where, "entries must be an array of rows");
  if (entries.size() != static_cast<std::size_t>(rows)) {
    fail(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(entries.size()));
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json& row = entries[i];
    const std::string rw = at(where, i);
    if (!row.is_array()) fail(rw, "row must be an array");
    if (row.size() != static_cast<std::size_t>(cols)) {
      fail(rw, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      const json& z = row[k];
      const std::string zw = at(rw, k);
      if (z.is_number()) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number(z, zw);
      } else if (z.is_array() && z.size() == 2) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            cplx(number(z[0], at(zw, 0)), number(z[1], at(zw, 1)));
      } else {
        fail(zw, "entry must be [re, im]");
      }
    }
  }
  return m;
}

// Library errors raised while building a value are re-labelled with the location.
template <class F>
auto located(const std::string& where, F build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(e.kind(), where + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                origin + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json load_json(const std::string& path) { return parse_json(read_file(path), path); }

Matrix matrix_from_json(const json& entries, int dim, const std::string& where) {
  if (dim < 1 || dim > kMaxOperatorDim) fail(where, "dim " + std::to_string(dim) + " out of range");
  return rectangular_from_json(entries, dim, dim, where);
}

json matrix_to_json(const Matrix& m) { return rectangular_to_json(m); }

HermitianOperator operator_from_json(const json& j, const std::string& where) {
  const int dim = int_field(j, "dim", where);
  const Matrix m = matrix_from_json(field(j, "entries", where), dim, at(where, "entries"));
  return located(where, [&] { return HermitianOperator::from_matrix(m); });
}

DensityMatrix state_from_json(const json& j, const std::string& where) {
  const HermitianOperator op = operator_from_json(j, where);
  return located(where, [&] { return DensityMatrix::from_operator(op); });
}

BipartiteDensityMatrix bipartite_from_json(const json& j, const std::string& where) {
  DensityMatrix rho = state_from_json(j, where);
  const int dA = int_field(j, "dA", where);
  const int dB = int_field(j, "dB", where);
  return located(where, [&] { return BipartiteDensityMatrix(rho, dA, dB); });
}

json state_to_json(const DensityMatrix& rho) {
  return {{"dim", rho.dim()}, {"entries", matrix_to_json(rho.matrix())}};
}

json state_to_json(const BipartiteDensityMatrix& rho) {
  json j = state_to_json(rho.state());
  j["dA"] = rho.dA();
  j["dB"] = rho.dB();
  return j;
}

QuantumChannel channel_from_json(const json& j, const std::string& where) {
  const int din = int_field(j, "din", where);
  const int dout = int_field(j, "dout", where);
  if (din < 1 || din > kMaxFactorDim || dout < 1 || dout > kMaxFactorDim) {
    fail(where, "din/dout out of range");
  }
  const json& list = field(j, "kraus", where);
  if (!list.is_array() || list.empty()) fail(at(where, "kraus"), "expected a non-empty array");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < list.size(); ++i) {
    kraus.push_back(rectangular_from_json(list[i], dout, din, at(at(where, "kraus"), i)));
  }
  return located(where, [&] { return QuantumChannel::from_kraus(std::move(kraus)); });
}

json channel_to_json(const QuantumChannel& channel) {
  json list = json::array();
  for (const Matrix& k : channel.kraus()) list.push_back(rectangular_to_json(k));
  return {{"din", channel.din()}, {"dout", channel.dout()}, {"kraus", std::move(list)}};
}

FreeSet free_set_from_json(const json& j, const std::string& where) {
  const json& list = field(j, "generators", where);
  if (!list.is_array() || list.empty()) fail(at(where, "generators"), "expected a non-empty array");
  std::vector<DensityMatrix> gens;
  for (std::size_t i = 0; i < list.size(); ++i) {
    gens.push_back(state_from_json(list[i], at(at(where, "generators"), i)));
  }
  const int center = int_field(j, "star_center_index", where);
  return located(where, [&] { return FreeSet(std::move(gens), center); });
}

ChannelSet channel_set_from_json(const json& j, const std::string& where) {
  const bool bare = j.is_array();
  const json& list = bare ? j : field(j, "channels", where);
  const std::string lw = bare ? where : at(where, "channels");
  if (!list.is_array() || list.empty()) fail(lw, "expected a non-empty array");
  std::vector<QuantumChannel> chans;
  for (std::size_t i = 0; i < list.size(); ++i) chans.push_back(channel_from_json(list[i], at(lw, i)));
  return located(where, [&] { return ChannelSet(std::move(chans)); });
}

json free_set_to_json(const FreeSet& F) {
  json list = json::array();
  for (const DensityMatrix& g : F.generators()) list.push_back(state_to_json(g));
  return {{"star_center_index", F.star_center_index()}, {"generators", std::move(list)}};
}

json channel_set_to_json(const ChannelSet& L) {
  json list = json::array();
  for (const QuantumChannel& c : L.channels()) list.push_back(channel_to_json(c));
  return {{"channels", std::move(list)}};
}

DensityMatrix read_state(const std::string& path) { return state_from_json(load_json(path), path + "#"); }
BipartiteDensityMatrix read_bipartite(const std::string& path) {
  return bipartite_from_json(load_json(path), path + "#");
}
QuantumChannel read_channel(const std::string& path) {
  return channel_from_json(load_json(path), path + "#");
}
FreeSet read_free_set(const std::string& path) { return free_set_from_json(load_json(path), path + "#"); }
ChannelSet read_channel_set(const std::string& path) {
  return channel_set_from_json(load_json(path), path + "#");
}

}  // namespace qcont
