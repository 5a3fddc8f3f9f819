#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace garmod {

enum class SeamSideId { A, B };

// Explicit pair list between segment ids of side A and side B, ordered along the seam.
struct SeamMatching {
    std::vector<std::pair<int, int>> pairs;

    int match_count(int segment_id) const;
    std::vector<int> partners(int segment_id) const;
    bool operator==(const SeamMatching&) const = default;
};

// 1 <= longer/shorter <= 2 on active counts, or both sides empty.
bool ratio_ok(size_t n, size_t m);

// Identity matching; throws LengthMismatch.
SeamMatching init_matching(const std::vector<int>& side_a, const std::vector<int>& side_b);

// Planar matching of the given active sides that uses the fewest gathered pairs and, among
// those, changes the match sets of the fewest surviving segments relative to `previous`.
// Remaining ties put gathers at the lowest ordinal. Throws RatioViolation.
SeamMatching rebalance(const SeamMatching& previous, const std::vector<int>& active_a,
                       const std::vector<int>& active_b);

// `new_id` enters `side` so that it sits at `ordinal` among that side's active segments.
SeamMatching rematch_on_insert(const SeamMatching& current, const std::vector<int>& active_a,
                               const std::vector<int>& active_b, SeamSideId side, size_t ordinal,
                               int new_id);

// `segment_id` leaves its side. Throws InfeasibleFold when no valid matching remains.
SeamMatching rematch_on_deactivate(const SeamMatching& current, const std::vector<int>& active_a,
                                   const std::vector<int>& active_b, int segment_id);

// Structural problems of a matching against its active sides; empty when valid.
// Checks coverage, 1-2 match rule, consecutive partners, no chained doubles, and planarity.
std::vector<std::string> matching_violations(const SeamMatching& matching,
                                             const std::vector<int>& active_a,
                                             const std::vector<int>& active_b);

// Segment ids whose partner set differs between two matchings.
std::vector<int> changed_segments(const SeamMatching& before, const SeamMatching& after);

}  // namespace garmod
