#pragma once

// One-parameter sweeps of the two-state model, written as CSV.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace ridel {

enum class SweepParameter { agent_mu, principal_mu, lambda, tau_bar };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

/// Values held fixed while one of them is swept.
struct SweepBase {
  double agent_mu = 0.5;
  double principal_mu = 0.7;
  double lambda = 1.0;
  double tau_bar = 0.0;
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::agent_mu;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 1001;
  std::vector<std::string> outputs;
  SweepBase base;
};

/// Known output columns, in canonical order.
const std::vector<std::string>& sweep_columns();

/// fig1: precisions against the agent's belief. fig2: the principal's payoff
/// against the agent's belief at mu_p = 0.7. fig3: the optimal agent belief
/// against mu_p. fig4: optimal and aligned precisions against mu_p.
SweepSpec sweep_preset(const std::string& name);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Row k evaluates at lo + (hi - lo) * k / (steps - 1). The swept parameter is
/// always the first column.
SweepTable run_sweep(const SweepSpec& spec);

/// Comma-separated, header first, 12 significant digits.
void write_csv(const SweepTable& table, std::ostream& out);
std::string format_number(double v);

}  // namespace ridel
