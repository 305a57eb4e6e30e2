#include "nmk/states.hpp"

#include <cmath>
#include <stdexcept>

namespace nmk {

namespace {
const double s2 = std::sqrt(2.0);
const cxd im(0.0, 1.0);

std::vector<cxd> tensor(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  std::vector<cxd> out(a.size() * b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

std::vector<cxd> add(std::vector<cxd> a, const std::vector<cxd>& b, cxd coeff) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += coeff * b[i];
  return a;
}
}  // namespace

std::vector<cxd> ket(const std::string& label) {
  if (label == "H") return {1.0, 0.0};
  if (label == "V") return {0.0, 1.0};
  if (label == "+") return {1.0 / s2, 1.0 / s2};
  if (label == "-") return {1.0 / s2, -1.0 / s2};
  if (label == "R") return {1.0 / s2, im / s2};
  if (label == "L") return {1.0 / s2, -im / s2};
  throw std::invalid_argument("ket: unknown label '" + label + "'");
}

DensityMatrix state_1q(const std::string& label) { return DensityMatrix::pure(ket(label)); }

DensityMatrix state_2q(const std::string& label) {
  const auto hh = tensor(ket("H"), ket("H"));
  const auto vv = tensor(ket("V"), ket("V"));
  const auto hv = tensor(ket("H"), ket("V"));
  const auto vh = tensor(ket("V"), ket("H"));
  if (label == "phi+") return DensityMatrix::pure(add(hh, vv, 1.0));
  if (label == "phi-") return DensityMatrix::pure(add(hh, vv, -1.0));
  if (label == "psi+") return DensityMatrix::pure(add(hv, vh, 1.0));
  if (label == "psi-") return DensityMatrix::pure(add(hv, vh, -1.0));
  if (label == "S1")
    return DensityMatrix::pure(add(tensor(ket("H"), ket("+")), tensor(ket("V"), ket("-")), 1.0));
  if (label == "S2")
    return DensityMatrix::pure(add(tensor(ket("H"), ket("+")), tensor(ket("V"), ket("-")), -1.0));
  if (label == "S3")
    return DensityMatrix::pure(add(tensor(ket("H"), ket("-")), tensor(ket("V"), ket("+")), 1.0));
  if (label == "S4")
    return DensityMatrix::pure(add(tensor(ket("H"), ket("-")), tensor(ket("V"), ket("+")), -1.0));
  if (label.size() == 2)
    return DensityMatrix::pure(
        tensor(ket(label.substr(0, 1)), ket(label.substr(1, 1))));
  throw std::invalid_argument("state_2q: unknown label '" + label + "'");
}

const std::vector<std::pair<std::string, std::string>>& table_one_pairs() {
  static const std::vector<std::pair<std::string, std::string>> rows = {
      {"H", "V"}, {"H", "+"}, {"H", "-"}, {"H", "R"}, {"H", "L"},
      {"V", "+"}, {"V", "-"}, {"V", "R"}, {"V", "L"}, {"+", "-"},
      {"+", "R"}, {"+", "L"}, {"-", "R"}, {"-", "L"}, {"R", "L"},
  };
  return rows;
}

const std::vector<std::pair<std::string, std::string>>& table_two_pairs() {
  static const std::vector<std::pair<std::string, std::string>> rows = {
      {"phi+", "phi-"}, {"phi+", "psi+"}, {"phi+", "psi-"}, {"phi-", "psi+"},
      {"phi-", "psi-"}, {"psi+", "psi-"}, {"S1", "S2"},     {"S1", "S3"},
      {"S1", "S4"},     {"S2", "S3"},     {"S2", "S4"},     {"S3", "S4"},
      {"HH", "VV"},     {"HH", "HV"},     {"HH", "H+"},     {"HH", "HR"},
      {"HH", "++"},     {"HH", "RR"},     {"++", "--"},     {"++", "H+"},
      {"++", "HR"},     {"++", "RR"},     {"--", "H-"},     {"RR", "LL"},
  };
  return rows;
}

}  // namespace nmk
