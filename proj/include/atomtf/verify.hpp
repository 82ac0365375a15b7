#pragma once

#include <cstdint>
#include <iosfwd>

namespace atomtf {

/// Runs the cross-module invariant suite (quadrature exactness, Newton
/// consistency, Coulomb norm positivity, TF and TFDW solution invariants,
/// drop algebra, screened-potential identities) and prints one line per
/// check.  Returns the number of violations; deterministic for a fixed seed.
int run_verify(std::uint64_t seed, std::ostream& os);

} // namespace atomtf
