#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "hypermoment/moment_state.hpp"

namespace hypermoment {

// Canonical comma form: (2,0) -> "2,0".
inline std::string index_key(const MultiIndex& a) {
  std::string key;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(a[i]);
  }
  return key;
}

inline MultiIndex parse_index_key(const std::string& key, int D) {
  MultiIndex a;
  std::istringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      a.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad multi-index key: " + key);
    }
  }
  if (static_cast<int>(a.size()) != D)
    throw ValidationError("multi-index key has wrong dimension: " + key);
  return a;
}

template <typename Scalar>
nlohmann::json state_to_json(const MomentState<Scalar>& s) {
  nlohmann::json j;
  j["D"] = s.D;
  j["M"] = s.M;
  j["rho"] = s.rho;
  j["u"] = std::vector<Scalar>(s.u.data(), s.u.data() + s.D);
  j["theta"] = s.theta;
  nlohmann::json f = nlohmann::json::object();
  const auto& table = index_table(s.D, s.M);
  for (int pos = s.D + 1; pos < table.size(); ++pos)
    if (s.f[pos - s.D - 1] != Scalar(0))
      f[index_key(table.index(pos))] = s.f[pos - s.D - 1];
  j["f"] = f;
  return j;
}

template <typename Scalar = double>
MomentState<Scalar> state_from_json(const nlohmann::json& j) {
  for (const char* key : {"D", "M", "rho", "u", "theta"})
    if (!j.contains(key))
      throw ValidationError(std::string("state JSON missing field: ") + key);
  int D = j.at("D").get<int>();
  int M = j.at("M").get<int>();
  if (D < 1) throw ValidationError("dimension must be at least 1");
  auto uvals = j.at("u").get<std::vector<Scalar>>();
  if (static_cast<int>(uvals.size()) != D)
    throw ValidationError("velocity length must equal D");
  DenseVector<Scalar> u(D);
  for (int d = 0; d < D; ++d) u[d] = uvals[d];
  std::map<MultiIndex, Scalar> f;
  if (j.contains("f"))
    for (const auto& [key, value] : j.at("f").items())
      f[parse_index_key(key, D)] = value.template get<Scalar>();
  return make_state<Scalar>(D, M, j.at("rho").template get<Scalar>(), u,
                            j.at("theta").template get<Scalar>(), f);
}

template <typename Scalar>
nlohmann::json vector_to_json(const DenseVector<Scalar>& v) {
  return std::vector<Scalar>(v.data(), v.data() + v.size());
}

template <typename Scalar>
nlohmann::json matrix_to_json(const DenseMatrix<Scalar>& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    std::vector<Scalar> row(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) row[j] = A(i, j);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hypermoment
