#include "garmod/seam_graph.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>

#include "garmod/error.hpp"

namespace garmod {

int SeamMatching::match_count(int segment_id) const {
    int n = 0;
    for (const auto& [a, b] : pairs) n += (a == segment_id) + (b == segment_id);
    return n;
}

std::vector<int> SeamMatching::partners(int segment_id) const {
    std::vector<int> out;
    for (const auto& [a, b] : pairs) {
        if (a == segment_id) out.push_back(b);
        if (b == segment_id) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool ratio_ok(size_t n, size_t m) {
    if (n == 0 || m == 0) return n == m;
    return n <= 2 * m && m <= 2 * n;
}

SeamMatching init_matching(const std::vector<int>& side_a, const std::vector<int>& side_b) {
    if (side_a.size() != side_b.size()) {
        throw Error(ErrorCode::LengthMismatch, "seam sides have " + std::to_string(side_a.size()) +
                                                   " and " + std::to_string(side_b.size()) +
                                                   " segments");
    }
    SeamMatching m;
    for (size_t i = 0; i < side_a.size(); ++i) m.pairs.emplace_back(side_a[i], side_b[i]);
    return m;
}

namespace {

using PartnerMap = std::map<int, std::vector<int>>;

PartnerMap partner_map(const SeamMatching& m) {
    PartnerMap out;
    for (const auto& [a, b] : m.pairs) {
        out[a].push_back(b);
        out[b].push_back(a);
    }
    for (auto& [id, v] : out) std::sort(v.begin(), v.end());
    return out;
}

struct Shape {
    int da, db;
};
// Order matters for reconstruction: gathered shapes are tried first so gathers land early.
constexpr Shape kShapes[3] = {{2, 1}, {1, 2}, {1, 1}};

struct Cost {
    int gathers = INT_MAX / 4;
    int changes = INT_MAX / 4;

    bool operator<(const Cost& o) const {
        return gathers != o.gathers ? gathers < o.gathers : changes < o.changes;
    }
    bool operator==(const Cost& o) const = default;
};

}  // namespace

SeamMatching rebalance(const SeamMatching& previous, const std::vector<int>& a,
                       const std::vector<int>& b) {
    size_t n = a.size(), m = b.size();
    if (!ratio_ok(n, m)) {
        throw Error(ErrorCode::RatioViolation, "seam would have " + std::to_string(n) + " vs " +
                                                   std::to_string(m) + " active segments");
    }
    SeamMatching out;
    if (n == 0) return out;

    PartnerMap old = partner_map(previous);
    auto changed = [&](int id, std::vector<int> now) {
        std::sort(now.begin(), now.end());
        auto it = old.find(id);
        if (it == old.end()) return 1;
        return it->second == now ? 0 : 1;
    };
    auto group_changes = [&](size_t i, size_t j, Shape s) {
        if (s.da == 1 && s.db == 1) return changed(a[i], {b[j]}) + changed(b[j], {a[i]});
        if (s.da == 2) {
            return changed(a[i], {b[j]}) + changed(a[i + 1], {b[j]}) +
                   changed(b[j], {a[i], a[i + 1]});
        }
        return changed(b[j], {a[i]}) + changed(b[j + 1], {a[i]}) + changed(a[i], {b[j], b[j + 1]});
    };

    std::vector<std::vector<Cost>> dp(n + 1, std::vector<Cost>(m + 1));
    dp[n][m] = Cost{0, 0};
    for (size_t i = n + 1; i-- > 0;) {
        for (size_t j = m + 1; j-- > 0;) {
            if (i == n && j == m) continue;
            Cost best;
            for (Shape s : kShapes) {
                if (i + s.da > n || j + s.db > m) continue;
                const Cost& rest = dp[i + s.da][j + s.db];
                if (rest.gathers >= INT_MAX / 4) continue;
                Cost c{rest.gathers + (s.da + s.db == 3 ? 1 : 0),
                       rest.changes + group_changes(i, j, s)};
                if (c < best) best = c;
            }
            dp[i][j] = best;
        }
    }
    if (dp[0][0].gathers >= INT_MAX / 4) {
        throw Error(ErrorCode::RatioViolation, "no planar matching exists");
    }
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        for (Shape s : kShapes) {
            if (i + s.da > n || j + s.db > m) continue;
            const Cost& rest = dp[i + s.da][j + s.db];
            if (rest.gathers >= INT_MAX / 4) continue;
            Cost c{rest.gathers + (s.da + s.db == 3 ? 1 : 0), rest.changes + group_changes(i, j, s)};
            if (!(c == dp[i][j])) continue;
            if (s.da == 1 && s.db == 1) {
                out.pairs.emplace_back(a[i], b[j]);
            } else if (s.da == 2) {
                out.pairs.emplace_back(a[i], b[j]);
                out.pairs.emplace_back(a[i + 1], b[j]);
            } else {
                out.pairs.emplace_back(a[i], b[j]);
                out.pairs.emplace_back(a[i], b[j + 1]);
            }
            i += static_cast<size_t>(s.da);
            j += static_cast<size_t>(s.db);
            break;
        }
    }
    return out;
}

SeamMatching rematch_on_insert(const SeamMatching& current, const std::vector<int>& active_a,
                               const std::vector<int>& active_b, SeamSideId side, size_t ordinal,
                               int new_id) {
    std::vector<int> a = active_a, b = active_b;
    std::vector<int>& target = side == SeamSideId::A ? a : b;
    if (ordinal > target.size()) throw Error(ErrorCode::InvalidArgument, "insert ordinal out of range");
    target.insert(target.begin() + static_cast<long>(ordinal), new_id);
    return rebalance(current, a, b);
}

SeamMatching rematch_on_deactivate(const SeamMatching& current, const std::vector<int>& active_a,
                                   const std::vector<int>& active_b, int segment_id) {
    std::vector<int> a = active_a, b = active_b;
    auto drop = [&](std::vector<int>& v) {
        auto it = std::find(v.begin(), v.end(), segment_id);
        if (it == v.end()) return false;
        v.erase(it);
        return true;
    };
    if (!drop(a) && !drop(b)) {
        throw Error(ErrorCode::UnknownSegment, "segment " + std::to_string(segment_id) +
                                                   " is not active in this seam");
    }
    try {
        return rebalance(current, a, b);
    } catch (const Error& e) {
        throw Error(ErrorCode::InfeasibleFold,
                    "opposite side cannot absorb the removed segment (" + std::string(e.what()) + ")");
    }
}

std::vector<std::string> matching_violations(const SeamMatching& matching,
                                             const std::vector<int>& a,
                                             const std::vector<int>& b) {
    std::vector<std::string> out;
    std::map<int, size_t> ord_a, ord_b;
    for (size_t i = 0; i < a.size(); ++i) ord_a[a[i]] = i;
    for (size_t j = 0; j < b.size(); ++j) ord_b[b[j]] = j;
    if (!ratio_ok(a.size(), b.size())) {
        out.push_back("length ratio " + std::to_string(a.size()) + ":" + std::to_string(b.size()) +
                      " exceeds 2:1");
    }
    std::vector<std::vector<size_t>> pa(a.size()), pb(b.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& [x, y] : matching.pairs) {
        auto ia = ord_a.find(x);
        auto jb = ord_b.find(y);
        if (ia == ord_a.end() || jb == ord_b.end()) {
            out.push_back("pair (" + std::to_string(x) + "," + std::to_string(y) +
                          ") references an inactive or foreign segment");
            continue;
        }
        if (!seen.insert({x, y}).second) {
            out.push_back("duplicate pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
            continue;
        }
        pa[ia->second].push_back(jb->second);
        pb[jb->second].push_back(ia->second);
    }
    auto check_side = [&](const std::vector<std::vector<size_t>>& p, const std::vector<int>& ids,
                          const std::vector<std::vector<size_t>>& other) {
        for (size_t i = 0; i < p.size(); ++i) {
            std::vector<size_t> v = p[i];
            std::sort(v.begin(), v.end());
            if (v.empty() || v.size() > 2) {
                out.push_back("segment " + std::to_string(ids[i]) + " has " +
                              std::to_string(v.size()) + " matches");
                continue;
            }
            if (v.size() == 2) {
                if (v[1] != v[0] + 1) {
                    out.push_back("segment " + std::to_string(ids[i]) +
                                  " matches non-consecutive segments");
                }
                for (size_t q : v) {
                    if (other[q].size() != 1) {
                        out.push_back("segment " + std::to_string(ids[i]) +
                                      " is gathered onto a segment that is itself gathered");
                    }
                }
            }
        }
    };
    check_side(pa, a, pb);
    check_side(pb, b, pa);
    for (size_t i = 0; i < pa.size(); ++i) {
        for (size_t i2 = i + 1; i2 < pa.size(); ++i2) {
            for (size_t j : pa[i]) {
                for (size_t j2 : pa[i2]) {
                    if (j2 < j) {
                        out.push_back("matching crosses between segments " + std::to_string(a[i]) +
                                      " and " + std::to_string(a[i2]));
                    }
                }
            }
        }
    }
    return out;
}

std::vector<int> changed_segments(const SeamMatching& before, const SeamMatching& after) {
    PartnerMap pb = partner_map(before), pa = partner_map(after);
    std::set<int> ids;
    for (const auto& [id, v] : pb) ids.insert(id);
    for (const auto& [id, v] : pa) ids.insert(id);
    std::vector<int> out;
    for (int id : ids) {
        auto x = pb.find(id);
        auto y = pa.find(id);
        std::vector<int> vx = x == pb.end() ? std::vector<int>{} : x->second;
        std::vector<int> vy = y == pa.end() ? std::vector<int>{} : y->second;
        if (vx != vy) out.push_back(id);
    }
    return out;
}

}  // namespace garmod
