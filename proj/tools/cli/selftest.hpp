#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "tdisp/display.hpp"

namespace tdisp::cli {

enum class Profile { quick, full };

struct CriterionResult {
  std::string id;
  std::string title;
  bool ok = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

/// Display with random structure matrix (redrawn until invertible).
Display random_display(std::mt19937_64& rng, const RingPtr& R, int n, int h, int d);

// One function per acceptance criterion. The quick profile restricts the
// grids to p = 2.
CriterionResult check_witt_correctness(Profile profile);
CriterionResult check_predisplay_suite(std::uint64_t seed);
CriterionResult check_vsharp_suite(std::uint64_t seed);
CriterionResult check_unit_hom_vanishing();
CriterionResult check_mass_formula(Profile profile);
CriterionResult check_isom_oracle();
CriterionResult check_dieudonne_round_trip(std::uint64_t seed);
CriterionResult check_nilpotence_slopes();
CriterionResult check_duality();
/// Runs classify twice into scratch_dir (a fresh temporary directory when
/// empty) and compares the files byte for byte.
CriterionResult check_determinism(const std::string& scratch_dir);

std::vector<CriterionResult> run_acceptance_grid(Profile profile, std::uint64_t seed, const std::string& scratch_dir);
std::string format_result(const CriterionResult& r);
int cmd_selftest(Profile profile, std::uint64_t seed, const std::string& scratch_dir, std::ostream& out);

}  // namespace tdisp::cli
