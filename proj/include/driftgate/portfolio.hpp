#pragma once

#include <optional>

#include "driftgate/signals.hpp"

namespace driftgate {

struct Position {
  std::size_t ticker;  // index into the panel's ticker list
  double weight;       // signed fraction of capital
};

struct WeightFrame {
  Date date{};
  std::vector<Position> positions;  // ascending ticker index, non-zero weights only

  bool flat() const { return positions.empty(); }
  double long_sum() const;
  double short_sum() const;
  double gross() const;
  double net() const;
  double weight_of(std::size_t ticker) const;
};

struct WeightOptions {
  /// Per-name cap on |weight|; excess is redistributed pro-rata within the side.
  std::optional<double> max_weight;
};

/// Market-neutral long/short weights from an EDGE cross-section: z-score the
/// non-zero EDGE names, go long z > 0 and short z < 0 in proportion to |z|,
/// each side normalized to 50% of capital. Degenerate inputs give a flat frame.
WeightFrame build_weights(const SignalFrame& edge, const WeightOptions& options = {});

/// Same as build_weights but over a raw EDGE row; replaces `out` with the
/// positions in ascending ticker order. Returns false (and leaves `out`
/// empty) on a flat day.
bool build_positions(std::span<const double> edge, std::vector<Position>& out, const WeightOptions& options = {});

/// In-place variant over the non-zero, non-missing EDGE entries of a row
/// (ticker ascending, `weight` holding the EDGE value).
bool positions_from_entries(std::vector<Position>& entries, const WeightOptions& options = {});

}  // namespace driftgate
