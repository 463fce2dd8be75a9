#pragma once

// Three-way check of the P^2/Z_3 invariant table: mirror pipeline, cyclotomic
// oracle and the published window.

#include "orbidisk/mirror.hpp"
#include "orbidisk/oracle.hpp"

#include <string>

namespace orbidisk {

struct P2Z3Report {
    long amax = 0;
    long bmax = 0;
    Rat truncation;
    InvariantTable pipeline;      ///< [b][a] from beta_112
    InvariantTable pipeline_122;  ///< [b][a] = coefficient of tau_112^b tau_122^a for beta_122
    InvariantTable oracle;
    std::size_t paper_checked = 0;
    std::size_t paper_matched = 0;
    std::vector<std::string> mismatches;
    bool oracle_series_match = false;  ///< whole series of beta_112 and beta_122, not only the window
    bool symmetric = false;
    bool diagonal_zero = false;
    bool reciprocal_integral = false;
    bool divisible_by_six = false;  ///< nonzero entries with a + b >= 2
    bool sign_alternates = false;

    bool ok() const {
        return mismatches.empty() && oracle_series_match && symmetric && diagonal_zero && reciprocal_integral &&
               divisible_by_six && sign_alternates;
    }
};

/// P^2/Z_3 with its age-one extras.
StackyFan p2z3_fan();

P2Z3Report verify_p2z3(long amax, long bmax);
std::string render_report(const P2Z3Report& report);

/// The beta's generating function in the oracle's (tau_112, tau_122) ring.
TruncatedSeries pipeline_in_oracle_ring(const DiskGeneratingFunction& g, const RingPtr& ring);

}  // namespace orbidisk
