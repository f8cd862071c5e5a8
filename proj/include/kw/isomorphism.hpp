#pragma once

#include <vector>

#include "kw/map.hpp"

namespace kw {

// Canonical form of a connected map under orientation-preserving dart
// relabeling: BFS labeling from every start dart over the moves {rot, rev},
// lexicographic minimum of the resulting (rot, rev, theta) encoding.
// Adequate at desk scale; used by the self-duality tests.
inline std::vector<long long> canonical_form(const IsoradialMap& m) {
  std::vector<long long> best;
  std::vector<int> label(m.n_darts), order(m.n_darts);
  for (int start = 0; start < m.n_darts; ++start) {
    std::fill(label.begin(), label.end(), -1);
    int next = 0;
    order[next] = start;
    label[start] = next++;
    for (int head = 0; head < m.n_darts; ++head) {
      int d = order[head];
      for (int nb : {m.rot[d], m.rev[d]}) {
        if (label[nb] < 0) {
          label[nb] = next;
          order[next++] = nb;
        }
      }
    }
    std::vector<long long> enc;
    enc.reserve(4 * m.n_darts);
    for (int i = 0; i < m.n_darts; ++i) {
      int d = order[i];
      const AnglePi& t = m.theta_of_dart(d);
      enc.push_back(label[m.rot[d]]);
      enc.push_back(label[m.rev[d]]);
      enc.push_back(t.units().num());
      enc.push_back(t.units().den());
    }
    if (best.empty() || enc < best) best = std::move(enc);
  }
  return best;
}

inline bool isomorphic(const IsoradialMap& a, const IsoradialMap& b) {
  if (a.n_darts != b.n_darts) return false;
  return canonical_form(a) == canonical_form(b);
}

}  // namespace kw
