#pragma once

#include <span>
#include <vector>

#include "eitgate/observables.hpp"

namespace eitgate {

enum class LadderConvention { AsPrinted, Absorptive };

struct LadderParams {
  double n_atoms = 1.0;
  double g_p = 0.0;
  double g_t = 0.0;
  double delta_p = 0.0;
  double delta_t = 0.0;
  double gamma21 = 0.0;
  double gamma32 = 0.0;
  int n_max = 3;
  LadderConvention convention = LadderConvention::AsPrinted;

  void validate() const;
};

// G2: every atom in |2>. E1, E3: one atom in |1> or |3>.
enum LadderAtom : int { kG2 = 0, kE1 = 1, kE3 = 2 };

struct LadderState {
  int atom = kG2;
  int n_p = 0;
  int n_t = 0;
};

// Atom-major, then n_p, then n_t; size 3 (n_max + 1)^2.
std::vector<LadderState> ladder_basis(int n_max);

std::size_t ladder_index(int n_max, const LadderState& s);

GateModel build_ladder_model(const LadderParams& params);

struct LadderResult {
  GateResult gate;
  double max_edge_population = 0.0;
};

// Throws TruncationLeakage when population with n_p = n_max or n_t = n_max
// exceeds 1e-3 for any basis input or the phase input.
LadderResult ladder_metrics(const LadderParams& params,
                            std::span<const double> times,
                            const GateSettings& settings = {});

}  // namespace eitgate
