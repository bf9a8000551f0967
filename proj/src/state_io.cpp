#include "qclose/state_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qclose {

namespace {

// Norm deviation beyond which a loaded state is renormalized with a warning.
constexpr double kNormWarnTol = 1e-6;

}  // namespace

LoadedState parse_state_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid state JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw InputError("state file must be a non-empty JSON array of [re, im] pairs");
  }
  const std::size_t d = doc.size();
  if ((d & (d - 1)) != 0 || d < 2) {
    throw InputError("state length " + std::to_string(d) +
                     " is not a power of two >= 2");
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const auto& entry = doc[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw InputError("state entry " + std::to_string(i) +
                       " is not an [re, im] pair");
    }
    const double re = entry[0].get<double>();
    const double im = entry[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw NumericError("non-finite amplitude at index " + std::to_string(i));
    }
    amps(static_cast<Eigen::Index>(i)) = Complex{re, im};
  }
  int num_qubits = 0;
  while ((std::size_t{1} << num_qubits) < d) ++num_qubits;

  const double norm = amps.norm();
  if (!(norm > 1e-9)) {
    throw NumericError("state has (near-)zero norm");
  }
  LoadedState loaded{StateVector(num_qubits, amps / norm, 1e-9), false, 0.0};
  loaded.norm_deviation = std::fabs(norm - 1.0);
  loaded.renormalized = loaded.norm_deviation > kNormWarnTol;
  return loaded;
}

LoadedState read_state_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot read state file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_state_json(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(path + ": " + e.what());
  }
}

std::string state_to_json(const StateVector& state) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    const Complex a = state.amplitude(i);
    arr.push_back({a.real(), a.imag()});
  }
  return arr.dump();
}

void write_state_json(const StateVector& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write state file '" + path + "'");
  }
  out << state_to_json(state) << '\n';
  if (!out) {
    throw InputError("failed writing state file '" + path + "'");
  }
}

}  // namespace qclose
