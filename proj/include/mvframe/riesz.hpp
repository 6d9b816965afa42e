#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mvframe/errors.hpp"
#include "mvframe/operators.hpp"

namespace mvframe {

// Thrown when a would-be Riesz generator fails the matrix-adjointability
// requirement; carries the violating canonical pair.
class AdjointabilityError : public Error {
 public:
  AdjointabilityError(const std::string& what, AdjointWitness w)
      : Error(what), witness(std::make_shared<AdjointWitness>(std::move(w))) {}
  std::shared_ptr<const AdjointWitness> witness;
};

// A matrix-valued orthonormal basis {E_k}: <E_k, E_j> = delta_{kj} I_s and the
// module span of the family is the whole space.
struct MatONB {
  SpaceSpec spec;
  std::vector<MatFn> functions;
  int block_count = 1;  // q = r / s
};

// With q = r/s and scalar basis {e_n}: E_{(n,c)}(x) = e_n(x) * S_c, where S_c
// selects column block c. Index order is n outer, c inner, N = |G| * q.
// Requires s | r.
MatONB canonical_onb(const SpaceSpec& spec);

// {U E_k} for a validated bijective, matrix-adjointable generator U.
struct RieszBasis {
  MatONB onb;
  LinOp generator;
  std::vector<MatFn> functions;
  std::vector<MatFn> dual_functions;  // empty until dual_basis attaches it

  bool has_dual() const { return !dual_functions.empty(); }
};

// The single validated path to a RieszBasis: rejects non-adjointable
// generators (with witness) and numerically singular ones.
RieszBasis apply_generator(const LinOp& generator, const MatONB& onb);

struct NamedOp {
  std::string name;
  LinOp op;
};

// Generators I+T, I+S, I+T+S, I+TS (when TS = ST), and I+T+...+T^n.
// T and S must be positive and matrix-adjointable.
std::vector<NamedOp> build_positive_classes(const LinOp& t, const LinOp* s,
                                            int power_sum_n = 0);

// (I - T)^{-1} for matrix-adjointable T with ||T|| < 1; checks the Neumann
// partial sums against the geometric tail bound on the way.
LinOp build_neumann(const LinOp& t);
LinOp neumann_partial_sum(const LinOp& t, int n);

// n-fold repeated PSD square root T^{1/2^n}; T must be positive, invertible,
// matrix-adjointable.
LinOp build_sqrt_chain(const LinOp& t, int n);

// I + P1 and I + P2 for the split T = P1 - P2, P1 = ((T^2)^{1/2} + T)/2,
// P2 = ((T^2)^{1/2} - T)/2; verifies P1 P2 = 0.
std::pair<LinOp, LinOp> build_jordan_parts(const LinOp& t);

// (1/||T||)(T +- i(||T||^2 I - T^2)^{1/2}) for self-adjoint T != 0; both
// parts are unitary and average to T/||T||.
std::pair<LinOp, LinOp> build_unitary_parts(const LinOp& t);

// The four unitaries assembled from the Cartesian parts T + T^* and
// -i(T - T^*); an omega is absent when its part vanishes.
struct CartesianUnitaries {
  std::array<std::optional<LinOp>, 4> omega;
};
CartesianUnitaries build_cartesian_unitaries(const LinOp& t);

// g_k = (U^{-1})^* E_k; caches into rb and returns the stored family.
const std::vector<MatFn>& dual_basis(RieszBasis& rb);

// T = (U^{-1})^* U^{-1}; verified to map f_k to g_k and to be positive.
LinOp holub_map(RieszBasis& rb);

// For positive invertible adjointable T: the basis q_k = (T^{1/2})^{-1} E_k
// together with its dual h_k = T^{1/2} E_k; T maps each q_k to h_k.
std::pair<RieszBasis, std::vector<MatFn>> holub_basis_for_positive(
    const LinOp& t, const MatONB& onb);

}  // namespace mvframe
