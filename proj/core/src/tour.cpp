#include "recon/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace recon {

namespace {

// Large finite stand-in for infeasible legs so deltas stay well defined.
constexpr double kBig = 1e15;

double cost(const TimeMatrix& m, std::size_t a, std::size_t b) {
  const double t = m(a, b);
  return std::isfinite(t) ? t : kBig;
}

struct Move {
  enum Kind { kTwoOpt, kOrOpt } kind = kTwoOpt;
  std::size_t i = 0;
  std::size_t j = 0;  // last index of the segment
  std::size_t p = 0;  // insert after this position (Or-opt)
  bool reversed = false;
};

void apply_move(std::vector<std::size_t>& s, const Move& mv) {
  if (mv.kind == Move::kTwoOpt) {
    std::reverse(s.begin() + static_cast<std::ptrdiff_t>(mv.i),
                 s.begin() + static_cast<std::ptrdiff_t>(mv.j) + 1);
    return;
  }
  std::vector<std::size_t> seg(s.begin() + static_cast<std::ptrdiff_t>(mv.i),
                               s.begin() + static_cast<std::ptrdiff_t>(mv.j) + 1);
  if (mv.reversed) std::reverse(seg.begin(), seg.end());
  std::vector<std::size_t> out;
  out.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k >= mv.i && k <= mv.j) continue;
    out.push_back(s[k]);
    if (k == mv.p) out.insert(out.end(), seg.begin(), seg.end());
  }
  s = std::move(out);
}

}  // namespace

double sequence_cost(const TimeMatrix& m, std::span<const std::size_t> seq) {
  double total = 0.0;
  for (std::size_t k = 1; k < seq.size(); ++k) total += m(seq[k - 1], seq[k]);
  return total;
}

std::vector<std::size_t> nearest_neighbor_order(const TimeMatrix& m, std::size_t start,
                                                std::span<const std::size_t> visit,
                                                std::size_t end) {
  std::vector<std::size_t> seq{start};
  std::vector<char> used(visit.size(), 0);
  std::size_t cur = start;
  for (std::size_t step = 0; step < visit.size(); ++step) {
    std::size_t best = visit.size();
    double best_t = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < visit.size(); ++c) {
      if (used[c]) continue;
      const double t = cost(m, cur, visit[c]);
      if (best == visit.size() || t < best_t) {
        best = c;
        best_t = t;
      }
    }
    used[best] = 1;
    cur = visit[best];
    seq.push_back(cur);
  }
  seq.push_back(end);
  return seq;
}

void cheapest_insertion(const TimeMatrix& m, std::vector<std::size_t>& seq,
                        std::span<const std::size_t> insert) {
  for (const std::size_t x : insert) {
    std::size_t best_pos = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < seq.size(); ++k) {
      const double d = cost(m, seq[k - 1], x) + cost(m, x, seq[k]) - cost(m, seq[k - 1], seq[k]);
      if (d < best) {
        best = d;
        best_pos = k;
      }
    }
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(best_pos), x);
  }
}

std::size_t improve_order(const TimeMatrix& m, std::vector<std::size_t>& seq,
                          std::size_t move_limit) {
  std::size_t applied = 0;
  const std::size_t n = seq.size();
  if (n < 4) return 0;
  std::vector<double> fwd(n, 0.0);
  std::vector<double> bwd(n, 0.0);
  while (applied < move_limit) {
    const auto& s = seq;
    for (std::size_t k = 1; k < n; ++k) {
      fwd[k] = fwd[k - 1] + cost(m, s[k - 1], s[k]);
      bwd[k] = bwd[k - 1] + cost(m, s[k], s[k - 1]);
    }
    // Cost of the interior path s[i..j] walked forward or backward.
    const auto seg_f = [&](std::size_t i, std::size_t j) { return fwd[j] - fwd[i]; };
    const auto seg_b = [&](std::size_t i, std::size_t j) { return bwd[j] - bwd[i]; };

    Move best_move;
    double best = -kMinImprovementS;
    bool found = false;

    for (std::size_t i = 1; i + 2 < n; ++i) {
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        const double before = cost(m, s[i - 1], s[i]) + seg_f(i, j) + cost(m, s[j], s[j + 1]);
        const double after = cost(m, s[i - 1], s[j]) + seg_b(i, j) + cost(m, s[i], s[j + 1]);
        const double d = after - before;
        if (d < best) {
          best = d;
          best_move = {Move::kTwoOpt, i, j, 0, true};
          found = true;
        }
      }
    }
    for (std::size_t len = 1; len <= 3; ++len) {
      for (std::size_t i = 1; i + len < n; ++i) {
        const std::size_t j = i + len - 1;
        const double removed = cost(m, s[i - 1], s[i]) + seg_f(i, j) + cost(m, s[j], s[j + 1]) -
                               cost(m, s[i - 1], s[j + 1]);
        for (std::size_t p = 0; p + 1 < n; ++p) {
          if (p + 1 >= i && p <= j) continue;
          const double gap = cost(m, s[p], s[p + 1]);
          for (const bool rev : {false, true}) {
            if (rev && len == 1) continue;
            const double added =
                rev ? cost(m, s[p], s[j]) + seg_b(i, j) + cost(m, s[i], s[p + 1]) - gap
                    : cost(m, s[p], s[i]) + seg_f(i, j) + cost(m, s[j], s[p + 1]) - gap;
            const double d = added - removed;
            if (d < best) {
              best = d;
              best_move = {Move::kOrOpt, i, j, p, rev};
              found = true;
            }
          }
        }
      }
    }
    if (!found) break;
    apply_move(seq, best_move);
    ++applied;
  }
  return applied;
}

}  // namespace recon
