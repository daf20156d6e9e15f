#pragma once

// JSON forms of domains, maps, budgets and reports. Complex numbers are [re, im].

#include <json.hpp>

#include "koblab/contraction.hpp"
#include "koblab/estimator.hpp"
#include "koblab/invariants.hpp"

namespace koblab {

using json = nlohmann::ordered_json;

json to_json(cplx z);
json to_json(std::span<const cplx> z);
cplx complex_from_json(const json& j);
CVec cvec_from_json(const json& j);

/// "0.5", "-2i", "1+0.5i", "0.3-1e-2i".
cplx parse_complex(const std::string& s);
/// Comma-separated complex coordinates.
CVec parse_cvec(const std::string& s);

Domain domain_from_json(const json& j);
json domain_to_json(const Domain& d);

PolyMap polymap_from_json(const json& j);
json polymap_to_json(const PolyMap& f);

/// Overrides the fields present in j.
OptimizerBudget budget_from_json(const json& j, OptimizerBudget base = {});
json budget_to_json(const OptimizerBudget& b);

/// Reads a file, or parses the argument itself when it starts with '{'.
json load_json_arg(const std::string& arg);

json curve_to_json(const SampledCurve& c);
json mesh_to_json(const SphereMeshMap& m);
json report_to_json(const InvariantReport& r);
json report_to_json(const MeasureReport& r);
json report_to_json(const MonotonicityReport& r);
json report_to_json(const UniformMonotonicity& r);
json report_to_json(const FixedPointReport& r);
json report_to_json(const DegreeCollapse& r);

}  // namespace koblab
