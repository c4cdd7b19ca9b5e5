#include "pcc/cli/gradcheck_suite.hpp"

#include "pcc/error.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/models/joint_loss.hpp"
#include "pcc/nn/batch_norm.hpp"
#include "pcc/nn/broadcast_linear.hpp"
#include "pcc/nn/layers.hpp"

#include <fmt/format.h>

#include <functional>
#include <memory>
#include <random>

namespace pcc::cli {
namespace {

using nn::Tensor;

Tensor random_tensor(const nn::Shape& shape, Rng& rng, double scale = 1.0) {
  Tensor t(shape);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& v : t.values()) v = static_cast<nn::Real>(u(rng));
  return t;
}

/// Passes forward through and scales the input gradient, so the check must fail.
class Corrupted : public nn::Module {
 public:
  explicit Corrupted(nn::Module& inner) : Module(inner.name()), inner_(inner) {}
  Tensor forward(const Tensor& x) override { return inner_.forward(x); }
  Tensor backward(const Tensor& g) override {
    Tensor out = inner_.backward(g);
    for (auto& v : out.values()) v *= nn::Real(1.5);
    return out;
  }
  void collect_parameters(std::vector<nn::Parameter*>& out) override {
    inner_.collect_parameters(out);
  }

 private:
  nn::Module& inner_;
};

/// Local input is the module input; the global block is held as a parameter.
class BroadcastAdapter : public nn::Module {
 public:
  BroadcastAdapter(std::size_t local, std::size_t global, std::size_t out, std::size_t batch,
                   Rng& rng)
      : Module("broadcast_linear"), layer_("broadcast_linear", local, global, out, rng),
        global_("broadcast_linear.global_input", {batch, global}) {
    global_.value = random_tensor({batch, global}, rng);
  }
  Tensor forward(const Tensor& x) override { return layer_.forward(x, global_.value); }
  Tensor backward(const Tensor& g) override {
    auto [gl, gg] = layer_.backward(g);
    global_.grad += gg;
    return gl;
  }
  void collect_parameters(std::vector<nn::Parameter*>& out) override {
    layer_.collect_parameters(out);
    out.push_back(&global_);
  }

 private:
  nn::BroadcastLinear layer_;
  nn::Parameter global_;
};

/// Encoder followed by a decoder with a fixed sampling seed.
class MpnAdapter : public nn::Module {
 public:
  MpnAdapter(std::string name, const ModelConfig& config, Rng& rng)
      : Module(std::move(name)), encoder_(config.encoder_widths, config.feature_dim, rng) {
    if (config.decoder == DecoderKind::kMlp) {
      decoder_ = std::make_unique<MlpDecoder>(config.feature_dim, config.mlp_hidden,
                                              config.missing_points, rng);
    } else {
      decoder_ = std::make_unique<MorphingDecoder>(config.feature_dim, config.morph_hidden,
                                                   config.missing_points, config.morph_networks,
                                                   rng);
    }
  }
  Tensor forward(const Tensor& x) override { return decoder_->decode(encoder_.forward(x), 3); }
  Tensor backward(const Tensor& g) override { return encoder_.backward(decoder_->backward(g)); }
  void collect_parameters(std::vector<nn::Parameter*>& out) override {
    encoder_.collect_parameters(out);
    decoder_->collect_parameters(out);
  }

 private:
  MpnEncoder encoder_;
  std::unique_ptr<Decoder> decoder_;
};

/// Coordinates are the module input; the label channel is fixed (alternating 0 and 1).
class PrnAdapter : public nn::Module {
 public:
  PrnAdapter(const ModelConfig& config, Rng& rng)
      : Module("prn"), refiner_(config.refiner_widths, config.refiner_head, rng) {}
  Tensor forward(const Tensor& x) override {
    Tensor labeled({x.dim(0), 4, x.dim(2)});
    for (std::size_t b = 0; b < x.dim(0); ++b) {
      for (std::size_t n = 0; n < x.dim(2); ++n) {
        for (std::size_t c = 0; c < 3; ++c) labeled.at(b, c, n) = x.at(b, c, n);
        labeled.at(b, 3, n) = nn::Real(n % 2);
      }
    }
    return refiner_.forward(labeled);
  }
  Tensor backward(const Tensor& g) override {
    const Tensor full = refiner_.backward(g);
    Tensor out({full.dim(0), 3, full.dim(2)});
    for (std::size_t b = 0; b < full.dim(0); ++b) {
      for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t n = 0; n < full.dim(2); ++n) out.at(b, c, n) = full.at(b, c, n);
      }
    }
    return out;
  }
  void collect_parameters(std::vector<nn::Parameter*>& out) override {
    refiner_.collect_parameters(out);
  }

 private:
  PointRefiner refiner_;
};

/// Random weights everywhere so no gradient path starts out at exactly zero.
void randomize(nn::Module& m, Rng& rng) {
  for (auto* p : m.parameters()) p->value = random_tensor(p->value.shape(), rng, 0.5);
}

nn::GradCheckReport check_module(const std::string& entry, nn::Module& module, const Tensor& input,
                                 double tolerance, const GradcheckSuiteOptions& options) {
  nn::GradCheckOptions o;
  o.tolerance = tolerance;
  o.seed = options.seed;
  if (options.corrupt == entry) {
    Corrupted wrapper(module);
    return nn::grad_check(wrapper, input, o);
  }
  return nn::grad_check(module, input, o);
}

PointCloud random_cloud(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
  return c;
}

/// Joint loss of the whole model under fixed matchings and a fixed merge selection.
nn::GradCheckReport check_end_to_end(DecoderKind kind, const GradcheckSuiteOptions& options) {
  ModelConfig config = ModelConfig::toy();
  config.decoder = kind;
  CompletionModel model(config, derive_seed(options.seed, {static_cast<std::uint64_t>(kind)}));
  Rng rng(derive_seed(options.seed, {17}));
  const std::size_t n = config.output_points;
  const std::vector<PointCloud> partial{random_cloud(n, rng)};
  const std::vector<PointCloud> missing_gt{random_cloud(config.missing_points, rng)};
  const std::vector<PointCloud> complete_gt{random_cloud(n, rng)};
  const Tensor x = tensor_from_clouds(partial);
  constexpr Seed kPassSeed = 5;

  const CompletionPass pass = model.forward(x, kPassSeed);
  const BatchLoss loss =
      batch_joint_loss(pass.missing_pred, missing_gt, pass.refined, complete_gt);
  model.zero_grad();
  model.backward(pass, loss.grad_missing, loss.grad_refined);

  auto objective = [&]() {
    const CompletionPass p = model.forward(x, kPassSeed, &pass.merges);
    return fixed_matching_loss(p.missing_pred, missing_gt, p.refined, complete_gt,
                               loss.missing_matchings, loss.refined_matchings);
  };
  nn::GradCheckReport report;
  report.name = fmt::format("model.end_to_end.{}", to_string(kind));
  report.tolerance = kComposedTolerance;
  nn::GradCheckOptions o;
  o.tolerance = kComposedTolerance;
  for (auto* p : model.parameters()) {
    const Tensor analytic = p->grad;
    report.max_parameter_error =
        std::max(report.max_parameter_error,
                 nn::compare_with_central_differences(p->value.values(), analytic.values(),
                                                      objective, o));
    report.entries += p->value.size();
  }
  return report;
}

struct SuiteEntry {
  std::string name;
  std::function<nn::GradCheckReport(const GradcheckSuiteOptions&, Rng&)> run;
};

template <typename Make>
SuiteEntry module_entry(std::string name, nn::Shape input_shape, double tolerance, Make make,
                        bool randomize_params = false) {
  return {name, [=](const GradcheckSuiteOptions& o, Rng& rng) {
            auto module = make(name, rng);
            if (randomize_params) randomize(*module, rng);
            return check_module(name, *module, random_tensor(input_shape, rng), tolerance, o);
          }};
}

std::vector<SuiteEntry> suite() {
  const double lt = kLayerTolerance, ct = kComposedTolerance;
  std::vector<SuiteEntry> e;
  e.push_back(module_entry("shared_linear", {2, 3, 6}, lt, [](const std::string& n, Rng& r) {
    return std::make_unique<nn::SharedLinear>(n, 3, 5, r);
  }));
  e.push_back(module_entry("fully_connected", {3, 6}, lt, [](const std::string& n, Rng& r) {
    return std::make_unique<nn::FullyConnected>(n, 6, 4, r);
  }));
  e.push_back(module_entry("batch_norm.train", {2, 4, 5}, lt, [](const std::string& n, Rng& r) {
    auto bn = std::make_unique<nn::BatchNorm>(n, 4);
    bn->gamma().value = random_tensor({4}, r);
    bn->beta().value = random_tensor({4}, r);
    return bn;
  }));
  e.push_back(module_entry("batch_norm.train_features", {5, 4}, lt,
                           [](const std::string& n, Rng& r) {
                             auto bn = std::make_unique<nn::BatchNorm>(n, 4);
                             bn->gamma().value = random_tensor({4}, r);
                             bn->beta().value = random_tensor({4}, r);
                             return bn;
                           }));
  e.push_back(module_entry("batch_norm.eval", {2, 4, 5}, lt, [](const std::string& n, Rng& r) {
    auto bn = std::make_unique<nn::BatchNorm>(n, 4);
    bn->gamma().value = random_tensor({4}, r);
    bn->beta().value = random_tensor({4}, r);
    bn->running_mean() = random_tensor({4}, r, 0.3);
    for (auto& v : bn->running_var().values()) v = nn::Real(0.5) + std::abs(v);
    bn->set_training(false);
    return bn;
  }));
  e.push_back(module_entry("relu", {2, 3, 7}, lt, [](const std::string& n, Rng&) {
    return std::make_unique<nn::ReLU>(n);
  }));
  e.push_back(module_entry("tanh", {2, 3, 7}, lt, [](const std::string& n, Rng&) {
    return std::make_unique<nn::Tanh>(n);
  }));
  e.push_back(module_entry("max_pool", {2, 3, 7}, lt, [](const std::string& n, Rng&) {
    return std::make_unique<nn::MaxPoolPoints>(n);
  }));
  e.push_back(module_entry("broadcast_linear", {2, 3, 5}, lt, [](const std::string&, Rng& r) {
    return std::make_unique<BroadcastAdapter>(3, 4, 5, 2, r);
  }));
  e.push_back(module_entry("mpn.mlp", {2, 3, 16}, ct, [](const std::string& n, Rng& r) {
    ModelConfig c = ModelConfig::toy();
    c.decoder = DecoderKind::kMlp;
    return std::make_unique<MpnAdapter>(n, c, r);
  }));
  e.push_back(module_entry("mpn.mbd", {2, 3, 16}, ct, [](const std::string& n, Rng& r) {
    return std::make_unique<MpnAdapter>(n, ModelConfig::toy(), r);
  }));
  e.push_back(module_entry(
      "prn", {2, 3, 16}, ct,
      [](const std::string&, Rng& r) { return std::make_unique<PrnAdapter>(ModelConfig::toy(), r); },
      true));
  e.push_back({"model.end_to_end.mlp", [](const GradcheckSuiteOptions& o, Rng&) {
                 return check_end_to_end(DecoderKind::kMlp, o);
               }});
  e.push_back({"model.end_to_end.mbd", [](const GradcheckSuiteOptions& o, Rng&) {
                 return check_end_to_end(DecoderKind::kMorphing, o);
               }});
  return e;
}

}  // namespace

bool GradcheckSuiteReport::passed() const { return failures().empty(); }

std::vector<std::string> GradcheckSuiteReport::failures() const {
  std::vector<std::string> out;
  for (const auto& r : entries) {
    if (!r.passed()) out.push_back(r.name);
  }
  return out;
}

std::vector<std::string> gradcheck_suite_names() {
  std::vector<std::string> names;
  for (const auto& entry : suite()) names.push_back(entry.name);
  return names;
}

GradcheckSuiteReport run_gradcheck_suite(const GradcheckSuiteOptions& options) {
  GradcheckSuiteReport report;
  const auto entries = suite();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Rng rng(derive_seed(options.seed, {i}));
    nn::GradCheckReport r = entries[i].run(options, rng);
    r.name = entries[i].name;
    report.entries.push_back(std::move(r));
  }
  return report;
}

std::string format_gradcheck_report(const GradcheckSuiteReport& report) {
  std::string out;
  for (const auto& r : report.entries) {
    out += fmt::format("{:<28} max_rel_error={:.3e} tolerance={:.0e} {}\n", r.name, r.max_error(),
                       r.tolerance, r.passed() ? "PASS" : "FAIL");
  }
  return out;
}

}  // namespace pcc::cli
