#pragma once

#include <nlohmann/json.hpp>

#include "mvframe/frame.hpp"

namespace mvframe {

// ordered_json keeps emission order stable, which the reproducibility
// contract of the lab depends on.
using json = nlohmann::ordered_json;

// {"shape": [s, r, |G|], "entries": [[re, im], ...]} in the fixed
// vectorization order.
json matfn_to_json(const MatFn& f);
MatFn matfn_from_json(const SpaceSpec& spec, const json& j);

// {"dim": D, "matrix": [[re, im], ...]} row-major; structured operators also
// carry "kind" (and "phi" for multiplication operators).
json linop_to_json(const LinOp& op);
LinOp linop_from_json(const SpaceSpec& spec, const json& j);

json frame_report_to_json(const FrameReport& report);
json op_report_to_json(const OpReport& report);
json riesz_check_to_json(const RieszCheck& check);

// Manifest: generator JSON, basis construction parameters, optional dual
// family in MatFn format.
json riesz_manifest_to_json(const RieszBasis& rb);

}  // namespace mvframe
