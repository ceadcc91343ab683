#include <charconv>
#include <string>

#include "kslog/errors.hpp"
#include "kslog/rate_model.hpp"

namespace kslog {

RateModel RateModel::from_spec(std::string_view spec) {
  if (spec == "cfn") return cfn();
  constexpr std::string_view prefix = "binary-asymmetric:";
  if (spec.starts_with(prefix)) {
    const std::string_view rest = spec.substr(prefix.size());
    double pi_plus = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), pi_plus);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw ValidationError("binary-asymmetric: cannot parse pi_plus '" + std::string(rest) + "'");
    return binary_asymmetric(pi_plus);
  }
  throw ValidationError("unknown model '" + std::string(spec) + "'");
}

RateModel RateModel::from_json(const nlohmann::json& j) {
  if (j.is_string()) return from_spec(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("model must be a string or an object");
  if (!j.contains("pi") || !j.contains("Q")) throw ValidationError("model object needs 'pi' and 'Q'");
  std::vector<double> pi;
  Matrix q;
  try {
    pi = j.at("pi").get<std::vector<double>>();
    const auto rows = j.at("Q").get<std::vector<std::vector<double>>>();
    q = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != q.cols()) throw ValidationError("Q rows have unequal length");
      for (std::size_t c = 0; c < rows[r].size(); ++c) q(r, c) = rows[r][c];
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
  if (j.contains("phi")) {
    if (!j.at("phi").is_number_integer() || j.at("phi").get<long long>() != static_cast<long long>(pi.size()))
      throw ValidationError("model: 'phi' does not match the length of 'pi'");
  }
  return build(q, std::move(pi));
}

nlohmann::json RateModel::to_json() const {
  nlohmann::json q = nlohmann::json::array();
  for (std::size_t r = 0; r < q_.rows(); ++r) {
    auto row = q_.row(r);
    q.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"phi", num_states()}, {"pi", pi_}, {"Q", q}};
}

}  // namespace kslog
