#pragma once

#include <ostream>

namespace eikjump {

// Recomputes the worked examples end to end: the two jump-functional values
// on the attached-diamond domain, the two on the four-square chain, and the
// one-dimensional tent. Prints one PASS/FAIL line per value and returns the
// number of failures.
int run_examples(std::ostream& os);

}  // namespace eikjump
