#pragma once

// JSON wire formats: multivectors as {"n", "coeffs": {"": r, "1": r,
// "12": r, ...}} with multi-index keys as digit strings and zeros
// omitted; operators as {"n", "m", "entries"}. Real representations
// export as dense CSV for external inspection.

#include <string>

#include "json.hpp"

#include "cliffspec/module.hpp"

namespace cliffspec {

using Json = nlohmann::ordered_json;

Json to_json(const Multivector& s);
Multivector multivector_from_json(const Json& j);

Json to_json(const Paravector& p);
Paravector paravector_from_json(const Json& j);

Json to_json(const CliffordOperator& T);
CliffordOperator operator_from_json(const Json& j);

/// Dense CSV, one matrix row per line, 17 significant digits.
void export_real_rep_csv(const Eigen::MatrixXd& rep, const std::string& path);

/// Deterministic 17-significant-digit rendering, shared by all emitters.
std::string format_g17(double v);

} // namespace cliffspec
