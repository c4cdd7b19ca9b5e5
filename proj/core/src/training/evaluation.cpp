#include "pcc/training/evaluation.hpp"

#include "pcc/error.hpp"

#include <algorithm>

namespace pcc {

Completer model_completer(CompletionModel& model) {
  model.set_training(false);
  return [&model](const ShapeSample& sample, Seed seed) {
    return model.complete(sample.partial, seed);
  };
}

std::vector<ShapeEvaluation> evaluate_shapes(const Dataset& dataset,
                                             const std::vector<std::size_t>& indices, double radius,
                                             Seed eval_seed, const SampleSizes& sizes,
                                             const Completer& completer) {
  if (!(radius > 0.0 && radius < 1.0)) throw InvalidArgument("radius must lie in (0, 1)");
  std::vector<ShapeEvaluation> out;
  out.reserve(indices.size());
  for (std::size_t idx : indices) {
    const ShapeEntry& shape = dataset.shapes.at(idx);
    const ShapeSample sample =
        make_sample(shape.cloud, radius, derive_seed(eval_seed, {idx}), sizes);
    const CompletionResult result = completer(sample, derive_seed(eval_seed, {idx, 1}));
    ShapeEvaluation e;
    e.shape_index = idx;
    e.category = shape.category;
    e.refined = directional_errors(result.refined, sample.complete);
    e.merged = directional_errors(result.merged.points, sample.complete);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CategoryMetrics> aggregate_by_category(const std::vector<ShapeEvaluation>& evals,
                                                   bool use_refined) {
  std::vector<CategoryMetrics> rows;
  CategoryMetrics overall{"overall", {}, 0};
  auto add = [](CategoryMetrics& m, const DirectionalErrors& e) {
    m.errors.pred_to_gt += e.pred_to_gt;
    m.errors.gt_to_pred += e.gt_to_pred;
    m.errors.chamfer += e.chamfer;
    ++m.count;
  };
  for (const auto& ev : evals) {
    const DirectionalErrors& e = use_refined ? ev.refined : ev.merged;
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const CategoryMetrics& m) { return m.category == ev.category; });
    if (it == rows.end()) {
      rows.push_back({ev.category, {}, 0});
      it = rows.end() - 1;
    }
    add(*it, e);
    add(overall, e);
  }
  if (overall.count == 0) return {};
  rows.push_back(overall);
  for (auto& m : rows) {
    const double n = static_cast<double>(m.count);
    m.errors.pred_to_gt /= n;
    m.errors.gt_to_pred /= n;
    m.errors.chamfer /= n;
  }
  return rows;
}

}  // namespace pcc
