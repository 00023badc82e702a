#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "cusplab/surface.hpp"

namespace cusplab::cli {

inline constexpr int kSchema = 1;
inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0, kViolation = 1, kUsage = 2, kNumerical = 3;

// LR words of length 2..max_len with both letters, one per class under cyclic
// rotation and swapping L with R. Each class is named by its largest member
// ('R' > 'L'); the list is ordered by length, then lexicographically.
std::vector<std::string> corpus(int max_len);

// A surface file followed by "rep <edge>: <perm...>" lines and optionally
// "preferred_sheet <k>".
CoverMap parse_cover(const std::string& text);

// Worker count: CUSPLAB_THREADS if set and positive, otherwise 1.
int worker_count();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cusplab::cli
