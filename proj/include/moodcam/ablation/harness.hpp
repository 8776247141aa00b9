#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/parallel.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/learn/lopo.hpp"

namespace moodcam::ablation {

enum class mode { remove_group, only_group };

constexpr std::string_view to_string(mode m) {
  return m == mode::remove_group ? "remove_group" : "only_group";
}

/// Column indices kept by the given mode for group `g`.
inline std::vector<std::size_t> ablation_columns(const feature_schema& schema, feature_group g, mode m) {
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < schema.size(); ++c)
    if ((schema[c].group == g) == (m == mode::only_group)) keep.push_back(c);
  return keep;
}

inline sample_set select_columns(const sample_set& in, const std::vector<std::size_t>& columns) {
  sample_set out;
  out.kind = in.kind;
  out.lag_days = in.lag_days;
  out.dropped = in.dropped;
  auto schema = std::make_shared<feature_schema>();
  for (std::size_t c : columns) schema->push_back((*in.schema)[c]);
  out.schema = schema;
  out.rows.reserve(in.rows.size());
  for (const auto& r : in.rows) {
    sample_row row = r;
    row.values.clear();
    for (std::size_t c : columns) row.values.push_back(r.values[c]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline sample_set ablate(const sample_set& in, feature_group g, mode m) {
  auto cols = ablation_columns(*in.schema, g, m);
  if (cols.empty())
    throw error(errc::empty_schema, std::string(to_string(m)) + " on " + std::string(to_string(g)) +
                                        " leaves no columns");
  return select_columns(in, cols);
}

struct horizon_input {
  std::string label;  // e.g. "at_moment", "next_day_lag1"
  const sample_set* samples = nullptr;
};

struct ablation_cell {
  feature_group group;
  std::string horizon;
  target tgt;
  std::size_t columns = 0;
  std::optional<double> f1;
  std::optional<double> auc;
  std::string error;  // empty on success
};

struct ablation_grid {
  mode kind = mode::remove_group;
  std::vector<ablation_cell> cells;  // group-major, then horizon, then target

  const ablation_cell* find(feature_group g, std::string_view h, target t) const {
    for (const auto& c : cells)
      if (c.group == g && c.horizon == h && c.tgt == t) return &c;
    return nullptr;
  }
};

/// Evaluates every (group, horizon, target) cell with LOPO. Failures are recorded in the cell.
inline ablation_grid run_ablation(const std::vector<horizon_input>& horizons, mode m,
                                  const learn::lopo_config& cfg) {
  ablation_grid grid;
  grid.kind = m;
  for (feature_group g : all_feature_groups)
    for (const auto& h : horizons)
      for (target t : {target::valence, target::arousal}) grid.cells.push_back({g, h.label, t, 0, std::nullopt, std::nullopt, {}});

  learn::lopo_config inner = cfg;
  inner.threads = 1;
  inner.keep_audit_ids = false;
  const std::size_t per_group = horizons.size() * 2;
  parallel_for(grid.cells.size(), cfg.threads, [&](std::size_t i) {
    auto& cell = grid.cells[i];
    const auto& h = horizons[(i % per_group) / 2];
    try {
      if (!h.samples || h.samples->rows.empty())
        throw error(errc::data_error, "no samples for horizon " + h.label);
      auto subset = ablate(*h.samples, cell.group, m);
      cell.columns = subset.width();
      auto result = learn::lopo_evaluate(subset, cell.tgt, inner);
      cell.f1 = result.pooled_f1;
      cell.auc = result.pooled_auc;
      if (!cell.auc) cell.error = "pooled AUC undefined (single-class held-out labels)";
    } catch (const error& e) {
      cell.error = e.what();
    }
  });
  return grid;
}

}  // namespace moodcam::ablation
