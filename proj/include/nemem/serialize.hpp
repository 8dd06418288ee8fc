#pragma once

#include <string>

#include "json.hpp"
#include "nemem/membrane.hpp"
#include "nemem/microstructure.hpp"
#include "nemem/relaxation_oracle.hpp"
#include "nemem/verification.hpp"

namespace nemem {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that reads back to the same double; '.' as the
/// decimal separator regardless of locale.  inf/nan print as "inf", "-inf", "nan".
std::string format_double(double x);

/// Nested row arrays; non-finite entries become null.
Json to_json(const Eigen::MatrixXd& M);
Json to_json_number(double x);

Json to_json(const DiscreteYoungMeasure& nu);
Json to_json(const OracleResult& res);
Json to_json(const StressState& st);
Json to_json(const CheckResult& c);
Json to_json(const SuiteReport& rep);

}  // namespace nemem
