#pragma once

#include "pcc/geometry/shape_sample.hpp"
#include "pcc/metrics/chamfer.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/training/dataset.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pcc {

/// Completes the partial cloud of a sample. Models are wrapped by model_completer().
using Completer = std::function<CompletionResult(const ShapeSample&, Seed)>;

/// Puts the model in eval mode and returns a completer around it.
Completer model_completer(CompletionModel& model);

struct ShapeEvaluation {
  std::size_t shape_index = 0;
  std::string category;
  DirectionalErrors refined;  // refined output vs complete ground truth
  DirectionalErrors merged;   // merged points before refinement vs complete ground truth
};

/// One sphere split per shape, seeded by (eval_seed, shape index) independently of the radius,
/// so sweeps over radii and ablations share centers.
std::vector<ShapeEvaluation> evaluate_shapes(const Dataset& dataset,
                                             const std::vector<std::size_t>& indices, double radius,
                                             Seed eval_seed, const SampleSizes& sizes,
                                             const Completer& completer);

struct CategoryMetrics {
  std::string category;
  DirectionalErrors errors;  // unscaled means
  std::size_t count = 0;
};

/// Per-category means in order of first appearance, followed by an "overall" row.
std::vector<CategoryMetrics> aggregate_by_category(const std::vector<ShapeEvaluation>& evals,
                                                   bool use_refined);

inline constexpr Seed kDefaultEvalSeed = 2024;

}  // namespace pcc
