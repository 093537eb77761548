#pragma once

#include <string>

#include <json.hpp>

#include "qcont/filtered.hpp"

namespace qcont {

using json = nlohmann::json;

/// Reads and parses a JSON file. Parse errors name the path and byte offset.
json load_json(const std::string& path);
json parse_json(const std::string& text, const std::string& origin);

// QOP-JSON: {"dim": n, "entries": [[[re, im], ...], ...]} row-major, optional "dA", "dB".
// `where` prefixes error messages (a path, or path plus JSON pointer).

Matrix matrix_from_json(const json& entries, int dim, const std::string& where);
json matrix_to_json(const Matrix& m);

HermitianOperator operator_from_json(const json& j, const std::string& where);
DensityMatrix state_from_json(const json& j, const std::string& where);
BipartiteDensityMatrix bipartite_from_json(const json& j, const std::string& where);
json state_to_json(const DensityMatrix& rho);
json state_to_json(const BipartiteDensityMatrix& rho);

// QCH-JSON: {"din": , "dout": , "kraus": [entries, ...]}.
QuantumChannel channel_from_json(const json& j, const std::string& where);
json channel_to_json(const QuantumChannel& channel);

// {"star_center_index": k, "generators": [QOP, ...]} and {"channels": [QCH, ...]};
// a bare list is accepted for a channel set.
FreeSet free_set_from_json(const json& j, const std::string& where);
ChannelSet channel_set_from_json(const json& j, const std::string& where);
json free_set_to_json(const FreeSet& F);
json channel_set_to_json(const ChannelSet& L);

DensityMatrix read_state(const std::string& path);
BipartiteDensityMatrix read_bipartite(const std::string& path);
QuantumChannel read_channel(const std::string& path);
FreeSet read_free_set(const std::string& path);
ChannelSet read_channel_set(const std::string& path);

}  // namespace qcont
