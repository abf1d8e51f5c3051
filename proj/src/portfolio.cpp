#include "driftgate/portfolio.hpp"

#include <algorithm>

namespace driftgate {

double WeightFrame::long_sum() const {
  double s = 0.0;
  for (const auto& p : positions)
    if (p.weight > 0.0) s += p.weight;
  return s;
}

double WeightFrame::short_sum() const {
  double s = 0.0;
  for (const auto& p : positions)
    if (p.weight < 0.0) s += p.weight;
  return s;
}

double WeightFrame::gross() const {
  double s = 0.0;
  for (const auto& p : positions) s += std::abs(p.weight);
  return s;
}

double WeightFrame::net() const {
  double s = 0.0;
  for (const auto& p : positions) s += p.weight;
  return s;
}

double WeightFrame::weight_of(std::size_t ticker) const {
  auto it = std::lower_bound(positions.begin(), positions.end(), ticker,
                             [](const Position& p, std::size_t t) { return p.ticker < t; });
  return it != positions.end() && it->ticker == ticker ? it->weight : 0.0;
}

namespace {

constexpr double kSideBudget = 0.5;

// Water-filling: clip names above the cap, spread the excess over the rest in
// proportion to their current weight. Infeasible caps fall back to equal weight.
void apply_cap(std::vector<double>& side, double cap) {
  if (side.empty()) return;
  if (cap * static_cast<double>(side.size()) <= kSideBudget) {
    std::fill(side.begin(), side.end(), kSideBudget / static_cast<double>(side.size()));
    return;
  }
  std::vector<char> clipped(side.size(), 0);
  while (true) {
    double excess = 0.0;
    double free_total = 0.0;
    bool changed = false;
    for (std::size_t i = 0; i < side.size(); ++i) {
      if (clipped[i]) continue;
      if (side[i] > cap) {
        excess += side[i] - cap;
        side[i] = cap;
        clipped[i] = 1;
        changed = true;
      }
    }
    if (!changed) break;
    for (std::size_t i = 0; i < side.size(); ++i)
      if (!clipped[i]) free_total += side[i];
    if (free_total <= 0.0) break;
    for (std::size_t i = 0; i < side.size(); ++i)
      if (!clipped[i]) side[i] += excess * side[i] / free_total;
  }
}

}  // namespace

bool build_positions(std::span<const double> edge, std::vector<Position>& out, const WeightOptions& options) {
  out.clear();
  for (std::size_t j = 0; j < edge.size(); ++j)
    if (!is_missing(edge[j]) && edge[j] != 0.0) out.push_back({j, edge[j]});
  return positions_from_entries(out, options);
}

bool positions_from_entries(std::vector<Position>& out, const WeightOptions& options) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (const auto& p : out) {
    lo = std::min(lo, p.weight);
    hi = std::max(hi, p.weight);
    sum += p.weight;
  }
  const std::size_t n = out.size();
  if (n < 2 || lo == hi) {
    out.clear();
    return false;
  }

  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& p : out) ss += (p.weight - mean) * (p.weight - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  double long_total = 0.0;
  double short_total = 0.0;
  for (auto& p : out) {
    p.weight = (p.weight - mean) / sd;
    if (p.weight > 0.0) long_total += p.weight;
    if (p.weight < 0.0) short_total -= p.weight;
  }
  if (long_total <= 0.0 || short_total <= 0.0) {
    out.clear();
    return false;
  }
  for (auto& p : out) {
    if (p.weight > 0.0) p.weight = kSideBudget * p.weight / long_total;
    else if (p.weight < 0.0) p.weight = kSideBudget * p.weight / short_total;
  }
  std::erase_if(out, [](const Position& p) { return p.weight == 0.0; });

  if (options.max_weight) {
    std::vector<double> lw, sw;
    for (const auto& p : out) {
      if (p.weight > 0.0) lw.push_back(p.weight);
      else sw.push_back(-p.weight);
    }
    apply_cap(lw, *options.max_weight);
    apply_cap(sw, *options.max_weight);
    std::size_t li = 0, si = 0;
    for (auto& p : out) p.weight = p.weight > 0.0 ? lw[li++] : -sw[si++];
  }
  return true;
}

WeightFrame build_weights(const SignalFrame& edge, const WeightOptions& options) {
  WeightFrame frame{edge.date, {}};
  build_positions(edge.values, frame.positions, options);
  return frame;
}

}  // namespace driftgate
