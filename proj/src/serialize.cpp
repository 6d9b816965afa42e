#include "mvframe/serialize.hpp"

#include "mvframe/errors.hpp"

namespace mvframe {

namespace {

json complex_array(const Eigen::VectorXcd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(json::array({v[i].real(), v[i].imag()}));
  return arr;
}

Eigen::VectorXcd complex_vector(const json& arr, Eigen::Index expected,
                                const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != expected)
    throw Error(std::string(what) + ": expected " + std::to_string(expected) +
                " [re, im] pairs");
  Eigen::VectorXcd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    const json& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2)
      throw Error(std::string(what) + ": entries must be [re, im] pairs");
    v[i] = cplx(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

const char* kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::module_map: return "module_map";
    case OpKind::multiplication: return "multiplication";
    case OpKind::permutation: return "permutation";
    default: return "general";
  }
}

OpKind kind_from_name(const std::string& name) {
  if (name == "module_map") return OpKind::module_map;
  if (name == "multiplication") return OpKind::multiplication;
  if (name == "permutation") return OpKind::permutation;
  return OpKind::general;
}

}  // namespace

json matfn_to_json(const MatFn& f) {
  return {{"shape", {f.space().rows(), f.space().cols(), f.space().group().size()}},
          {"entries", complex_array(f.coords())}};
}

MatFn matfn_from_json(const SpaceSpec& spec, const json& j) {
  const auto& shape = j.at("shape");
  if (shape.size() != 3 || shape[0].get<int>() != spec.rows() ||
      shape[1].get<int>() != spec.cols() ||
      shape[2].get<int>() != spec.group().size())
    throw DimensionError("matfn_from_json: shape does not match the space");
  return MatFn(spec,
               complex_vector(j.at("entries"), spec.ambient_dim(), "matfn entries"));
}

json linop_to_json(const LinOp& op) {
  const auto& m = op.matrix();
  json matrix = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      matrix.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  json out{{"dim", op.dim()}, {"kind", kind_name(op.kind())}, {"matrix", matrix}};
  if (op.kind() == OpKind::multiplication && op.phi())
    out["phi"] = complex_array(*op.phi());
  return out;
}

LinOp linop_from_json(const SpaceSpec& spec, const json& j) {
  const int d = spec.ambient_dim();
  if (j.at("dim").get<int>() != d)
    throw DimensionError("linop_from_json: dim does not match the space");
  const Eigen::VectorXcd flat =
      complex_vector(j.at("matrix"), static_cast<Eigen::Index>(d) * d, "operator");
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = flat[static_cast<Eigen::Index>(i) * d + k];
  const OpKind kind =
      j.contains("kind") ? kind_from_name(j["kind"].get<std::string>()) : OpKind::general;
  LinOp op(spec, std::move(m), kind);
  if (kind == OpKind::multiplication && j.contains("phi"))
    op.set_phi(complex_vector(j["phi"], spec.group().size(), "phi"));
  return op;
}

json frame_report_to_json(const FrameReport& report) {
  json out{{"lower_bound", report.lower_bound},
           {"upper_bound", report.upper_bound},
           {"is_frame", report.is_frame},
           {"completeness_defect", report.completeness_defect},
           {"parseval_distance", report.parseval_distance}};
  if (report.reconstruction_error)
    out["reconstruction_error"] = *report.reconstruction_error;
  if (report.witness) out["witness"] = matfn_to_json(*report.witness);
  return out;
}

json op_report_to_json(const OpReport& report) {
  json out{{"is_trace_self_adjoint", report.is_trace_self_adjoint},
           {"is_matrix_adjointable", report.is_matrix_adjointable},
           {"is_positive", report.is_positive},
           {"min_eigenvalue", report.min_eigenvalue},
           {"operator_norm", report.operator_norm}};
  if (report.witness) {
    out["witness"] = {{"f", matfn_to_json(report.witness->f)},
                      {"g", matfn_to_json(report.witness->g)}};
  }
  return out;
}

json riesz_check_to_json(const RieszCheck& check) {
  return {{"report", frame_report_to_json(check.report)},
          {"lower_limit", check.lower_limit},
          {"upper_limit", check.upper_limit},
          {"bounds_ok", check.bounds_ok},
          {"defect_ok", check.defect_ok},
          {"reconstruction_ok", check.reconstruction_ok},
          {"passed", check.passed}};
}

json riesz_manifest_to_json(const RieszBasis& rb) {
  json out{{"onb",
            {{"group", rb.onb.spec.group().orders()},
             {"s", rb.onb.spec.rows()},
             {"r", rb.onb.spec.cols()},
             {"count", rb.onb.functions.size()}}},
           {"generator", linop_to_json(rb.generator)}};
  if (rb.has_dual()) {
    json dual = json::array();
    for (const MatFn& g : rb.dual_functions) dual.push_back(matfn_to_json(g));
    out["dual"] = std::move(dual);
  }
  return out;
}

}  // namespace mvframe
