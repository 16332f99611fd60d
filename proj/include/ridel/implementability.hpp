#pragma once

// Whether some agent prior makes a given choice distribution optimal, with a
// certificate either way.

#include <optional>
#include <vector>

#include "ridel/core.hpp"

namespace ridel {

struct FeasibilityCertificate {
  bool feasible;
  std::optional<Belief> mu;          // prior implementing beta
  std::vector<double> dual_witness;  // z over actions, normalized so sum z = -1
};

/// Looks for mu >= 0 with sum mu = 1 and D_i(mu) = 1 on C(beta), D_k(mu) <= 1 off it.
/// Otherwise returns z with sum_i z_i e^{u_ij/lambda} >= 0 for every state j,
/// z_k >= 0 off C(beta) and sum z < 0, which rules such a prior out.
FeasibilityCertificate implementability_check(const ChoiceDistribution& beta, const PayoffMatrix& u,
                                              double lambda);

/// Max violation of the first-order system by mu (zero-mass states included).
double implementation_error(const Belief& mu, const ChoiceDistribution& beta, const PayoffMatrix& u,
                            double lambda);

/// Max violation of the witness inequalities, with each state column of
/// e^{u/lambda} scaled to unit maximum. Returns +inf if sum z >= 0.
double witness_violation(const std::vector<double>& z, const ChoiceDistribution& beta, const PayoffMatrix& u,
                         double lambda);

/// Three states, three actions: a_1 and a_2 pay ln 3 in their own state only,
/// a_3 pays ln(2 + eps) everywhere. For lambda = 1 and eps > 0 no prior
/// implements an interior beta.
PayoffMatrix nonimplementable_payoffs(double eps = 0.1);

}  // namespace ridel
