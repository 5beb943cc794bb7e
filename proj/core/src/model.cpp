// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avsync/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "avsync/errors.hpp"
#include "avsync/ops.hpp"
#include "avsync/seed.hpp"

namespace avsync {
namespace {

std::string extent_string(const Extent3& e) {
  return std::to_string(e.t) + "x" + std::to_string(e.h) + "x" + std::to_string(e.w);
}

Extent3 parse_extent(const std::string& s) {
  Extent3 e;
  char x1 = 0, x2 = 0;
  std::istringstream is(s);
  if (!(is >> e.t >> x1 >> e.h >> x2 >> e.w) || x1 != 'x' || x2 != 'x') {
    throw ConfigError("bad extent '" + s + "' in architecture description");
  }
  return e;
}

Shape parse_shape(const std::string& s) {
  Shape shape;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, 'x')) shape.push_back(std::stoul(part));
  check_shape(shape);
  return shape;
}

void describe_stream(std::ostringstream& os, const std::string& name, const StreamSpec& s) {
  os << "stream " << name << " input " << shape_string(s.input) << "\n";
  for (const auto& b : s.blocks) {
    os << "conv " << b.name << " " << b.out_channels << " " << extent_string(b.kernel) << " "
       << extent_string(b.stride) << "\n";
    if (b.pool) os << "pool " << b.pool->name << " " << extent_string(b.pool->kernel) << " "
                   << extent_string(b.pool->stride) << "\n";
  }
  for (const auto& [hname, width] : s.hidden) os << "hidden " << hname << " " << width << "\n";
  os << "head " << s.head_name << "\n";
}

}  // namespace

Architecture Architecture::standard(std::size_t zeta) {
  const Extent3 one{1, 1, 1};
  Architecture a;
  a.embedding = zeta;
  const PoolSpec spatial_pool{"", {1, 3, 3}, {1, 2, 2}};
  auto vpool = [&](const char* name) {
    PoolSpec p = spatial_pool;
    p.name = name;
    return p;
  };
  a.visual.input = {9, 60, 100, 1};
  a.visual.blocks = {
      {"Conv1", 16, {3, 3, 3}, one, vpool("Pool1")},
      {"Conv2", 32, {3, 3, 3}, one, vpool("Pool2")},
      {"Conv3", 64, {3, 3, 3}, one, vpool("Pool3")},
      {"Conv4", 128, {3, 3, 3}, one, std::nullopt},
  };
  a.visual.hidden = {{"FC5", 256}};
  a.visual.head_name = "FC6";

  // Speech cubes enter as [T=15, H=40 bands, W=3 channels, C=1]; frequency-only pooling.
  auto apool = [](const char* name) { return PoolSpec{name, {1, 2, 1}, {1, 2, 1}}; };
  a.audio.input = {15, 40, 3, 1};
  a.audio.blocks = {
      {"Conv1", 16, {3, 5, 3}, one, apool("Pool1")},
      {"Conv2-1", 32, {3, 4, 1}, one, std::nullopt},
      {"Conv2-2", 32, {3, 4, 1}, one, apool("Pool2")},
      {"Conv3-1", 64, {3, 3, 1}, one, std::nullopt},
      {"Conv3-2", 64, {3, 3, 1}, one, std::nullopt},
      {"Conv4", 128, {3, 2, 1}, one, std::nullopt},
  };
  a.audio.head_name = "FC5";
  return a;
}

Architecture Architecture::scaled(double factor) const {
  if (!(factor > 0)) throw ConfigError("width scale must be positive");
  auto shrink = [factor](std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * factor)));
  };
  Architecture a = *this;
  for (StreamSpec* s : {&a.visual, &a.audio}) {
    for (auto& b : s->blocks) b.out_channels = shrink(b.out_channels);
    for (auto& h : s->hidden) h.second = shrink(h.second);
  }
  return a;
}

std::string Architecture::describe() const {
  std::ostringstream os;
  os << "embedding " << embedding << "\n";
  describe_stream(os, "visual", visual);
  describe_stream(os, "audio", audio);
  return os.str();
}

Architecture Architecture::parse(const std::string& text) {
  Architecture a;
  a.visual = {};
  a.audio = {};
  StreamSpec* current = nullptr;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string kind;
    is >> kind;
    if (kind == "embedding") {
      is >> a.embedding;
    } else if (kind == "stream") {
      std::string name, input_kw, shape;
      is >> name >> input_kw >> shape;
      if (name == "visual") {
        current = &a.visual;
      } else if (name == "audio") {
        current = &a.audio;
      } else {
        throw ConfigError("unknown stream '" + name + "'");
      }
      current->input = parse_shape(shape);
    } else if (!current) {
      throw ConfigError("architecture line before any stream: " + line);
    } else if (kind == "conv") {
      ConvBlockSpec b;
      std::string k, s;
      is >> b.name >> b.out_channels >> k >> s;
      b.kernel = parse_extent(k);
      b.stride = parse_extent(s);
      current->blocks.push_back(b);
    } else if (kind == "pool") {
      if (current->blocks.empty()) throw ConfigError("pool without a preceding conv");
      PoolSpec p;
      std::string k, s;
      is >> p.name >> k >> s;
      p.kernel = parse_extent(k);
      p.stride = parse_extent(s);
      current->blocks.back().pool = p;
    } else if (kind == "hidden") {
      std::string name;
      std::size_t width = 0;
      is >> name >> width;
      current->hidden.emplace_back(name, width);
    } else if (kind == "head") {
      is >> current->head_name;
    } else {
      throw ConfigError("unknown architecture line: " + line);
    }
    if (is.fail()) throw ConfigError("malformed architecture line: " + line);
  }
  return a;
}

std::uint64_t Architecture::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void ModelConfig::validate() const {
  if (zeta < 1) throw ConfigError("embedding size zeta must be >= 1");
  if (!(mu > 0)) throw ConfigError("contrastive margin mu must be > 0");
  if (!(lambda >= 0)) throw ConfigError("regularization weight lambda must be >= 0");
  if (!(rho >= 0) || rho >= 1) throw ConfigError("dropout rho must be in [0, 1)");
}

CoupledModel::CoupledModel(Architecture arch, ModelConfig config, std::uint64_t seed)
    : arch_(std::move(arch)), config_(config), seed_(seed) {
  config_.validate();
  if (arch_.embedding != config_.zeta) {
    throw ConfigError("architecture embedding " + std::to_string(arch_.embedding) + " != zeta " +
                      std::to_string(config_.zeta));
  }
  visual_ = build_stream(arch_.visual, derive_seed(seed, 1));
  audio_ = build_stream(arch_.audio, derive_seed(seed, 2));
}

CoupledModel::Stream CoupledModel::build_stream(const StreamSpec& spec, std::uint64_t seed) {
  if (spec.input.size() != 4) throw ShapeError("stream input must be [T, H, W, C]");
  Stream s;
  s.spec = spec;
  std::size_t t = spec.input[0], h = spec.input[1], w = spec.input[2], c = spec.input[3];
  std::uint64_t salt = 0;
  for (const auto& b : spec.blocks) {
    ConvBlock block{b, Conv3dLayer::create(c, b.out_channels, b.kernel, b.stride, derive_seed(seed, salt++)),
                    BatchNormLayer::create(b.out_channels), PReluLayer::create(b.out_channels)};
    t = window_output_extent(t, b.kernel.t, b.stride.t);
    h = window_output_extent(h, b.kernel.h, b.stride.h);
    w = window_output_extent(w, b.kernel.w, b.stride.w);
    c = b.out_channels;
    if (b.pool) {
      t = window_output_extent(t, b.pool->kernel.t, b.pool->stride.t);
      h = window_output_extent(h, b.pool->kernel.h, b.pool->stride.h);
      w = window_output_extent(w, b.pool->kernel.w, b.pool->stride.w);
    }
    s.blocks.push_back(std::move(block));
  }
  std::size_t features = t * h * w * c;
  for (const auto& [name, width] : spec.hidden) {
    s.hidden.push_back({name, LinearLayer::create(features, width, derive_seed(seed, salt++)),
                        PReluLayer::create(width)});
    features = width;
  }
  s.head = LinearLayer::create(features, arch_.embedding, derive_seed(seed, salt++));
  // He init would put the initial pair distance near sqrt(4 * zeta), far
  // beyond any sensible margin; shrink the head so it starts near 1.
  const Real head_gain = Real(1) / (2 * std::sqrt(static_cast<Real>(arch_.embedding)));
  for (Real& w : s.head.weights.data()) w *= head_gain;
  return s;
}

Var CoupledModel::run_stream(Stream& stream, Var x, const ForwardOptions& options, LayerTrace* trace) {
  const Shape& in = stream.spec.input;
  const std::size_t per_sample = shape_size(in);
  if (x.size() % per_sample != 0 || x.value().rank() < 2) {
    throw ShapeError("stream input " + shape_string(x.shape()) + " is not a batch of " + shape_string(in));
  }
  const std::size_t n = x.shape()[0];
  if (n * per_sample != x.size()) {
    throw ShapeError("stream input " + shape_string(x.shape()) + " is not a batch of " + shape_string(in));
  }
  Var h = ops::reshape(x, {n, in[0], in[1], in[2], in[3]});
  const bool train = options.mode == Mode::kTrain;
  const bool update = train && options.update_bn_stats;
  auto record = [&](const std::string& name, const Var& v) {
    if (!trace) return;
    Shape s(v.shape().begin() + 1, v.shape().end());
    trace->emplace_back(name, s);
  };

  for (auto& block : stream.blocks) {
    h = conv3d(h, block.conv);
    h = batchnorm(h, block.bn, options.mode, update);
    h = prelu(h, block.act);
    record(block.spec.name, h);
    if (block.spec.pool) {
      h = maxpool3d(h, block.spec.pool->kernel, block.spec.pool->stride);
      record(block.spec.pool->name, h);
    }
  }
  h = ops::reshape(h, {n, h.size() / n});
  std::uint64_t layer = 0;
  for (auto& hidden : stream.hidden) {
    h = fully_connected(h, hidden.fc);
    h = prelu(h, hidden.act);
    if (options.apply_dropout) h = dropout(h, config_.rho, options.mode, derive_seed(options.dropout_seed, layer++));
    record(hidden.name, h);
  }
  h = fully_connected(h, stream.head);
  record(stream.spec.head_name, h);
  return h;
}

Var CoupledModel::embed_visual(Var cubes, const ForwardOptions& options, LayerTrace* trace) {
  return run_stream(visual_, cubes, options, trace);
}

Var CoupledModel::embed_audio(Var cubes, const ForwardOptions& options, LayerTrace* trace) {
  ForwardOptions audio_options = options;
  audio_options.dropout_seed = derive_seed(options.dropout_seed, 0xA0D10);
  return run_stream(audio_, cubes, audio_options, trace);
}

namespace {

std::vector<Real> single_embedding(CoupledModel& model, const Tensor& cube, Mode mode, bool visual) {
  if (mode == Mode::kTrain) throw ContractError("single-cube forward needs infer mode (batch norm)");
  const Shape& expect = visual ? model.architecture().visual.input : model.architecture().audio.input;
  if (shape_size(cube.shape()) != shape_size(expect)) {
    throw ShapeError(std::string(visual ? "visual" : "audio") + " cube " + shape_string(cube.shape()) +
                     " does not match " + shape_string(expect));
  }
  Tape tape(Tape::Mode::kNoGrad);
  Shape batched = cube.shape();
  batched.insert(batched.begin(), 1);
  Var x = tape.constant(cube.reshaped(batched));
  ForwardOptions opts{mode, false, false, 0};
  Var e = visual ? model.embed_visual(x, opts) : model.embed_audio(x, opts);
  auto d = e.value().data();
  return {d.begin(), d.end()};
}

}  // namespace

std::vector<Real> CoupledModel::visual_forward(const Tensor& cube, Mode mode) {
  if (cube.shape() != arch_.visual.input) {
    throw ShapeError("visual cube must be " + shape_string(arch_.visual.input) + ", got " + shape_string(cube.shape()));
  }
  return single_embedding(*this, cube, mode, true);
}

std::vector<Real> CoupledModel::audio_forward(const Tensor& cube, Mode mode) {
  const Shape& in = arch_.audio.input;
  if (cube.shape() != Shape{in[0], in[1], in[2]} && cube.shape() != in) {
    throw ShapeError("speech cube must be " + shape_string({in[0], in[1], in[2]}) + ", got " +
                     shape_string(cube.shape()));
  }
  return single_embedding(*this, cube, mode, false);
}

Var CoupledModel::regularization(Tape& tape) {
  Var total = tape.constant(Tensor({1}, Real(0)));
  for (auto& p : parameters()) {
    if (p.regularized) total = ops::add(total, ops::sum_squares(tape.parameter(*p.tensor)));
  }
  if (config_.regularizer == Regularizer::kNorm) {
    // sqrt of the accumulated squares; eps keeps d/dW finite at W = 0.
    Tensor v = total.value();
    const Real norm = std::sqrt(v[0] + Real(1e-12));
    total = tape.record(Tensor({1}, norm), {total}, [](BackwardContext& ctx) {
      ctx.grad_input(0)[0] += ctx.grad_output()[0] / (2 * ctx.output()[0]);
    });
  }
  return ops::scale(total, config_.lambda);
}

Var CoupledModel::loss(Var visual_embeddings, Var audio_embeddings, std::span<const int> labels) {
  Var d = pair_distance(visual_embeddings, audio_embeddings);
  Var data = contrastive_loss(d, labels, config_.mu);
  if (config_.lambda == 0) return data;
  return ops::add(data, regularization(visual_embeddings.tape()));
}

void CoupledModel::collect(Stream& stream, const std::string& prefix, std::vector<ParameterRef>& out) {
  for (auto& b : stream.blocks) {
    const std::string base = prefix + b.spec.name + ".";
    out.push_back({base + "kernels", &b.conv.kernels, true});
    out.push_back({base + "bias", &b.conv.bias, false});
    out.push_back({base + "bn.gamma", &b.bn.gamma, false});
    out.push_back({base + "bn.beta", &b.bn.beta, false});
    out.push_back({base + "prelu", &b.act.slopes, false});
  }
  for (auto& h : stream.hidden) {
    out.push_back({prefix + h.name + ".weights", &h.fc.weights, true});
    out.push_back({prefix + h.name + ".bias", &h.fc.bias, false});
    out.push_back({prefix + h.name + ".prelu", &h.act.slopes, false});
  }
  out.push_back({prefix + stream.spec.head_name + ".weights", &stream.head.weights, true});
  out.push_back({prefix + stream.spec.head_name + ".bias", &stream.head.bias, false});
}

std::vector<ParameterRef> CoupledModel::parameters() {
  std::vector<ParameterRef> out;
  collect(visual_, "visual.", out);
  collect(audio_, "audio.", out);
  return out;
}

std::vector<std::pair<std::string, Tensor*>> CoupledModel::buffers() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (auto* s : {&visual_, &audio_}) {
    const std::string prefix = s == &visual_ ? "visual." : "audio.";
    for (auto& b : s->blocks) {
      out.emplace_back(prefix + b.spec.name + ".bn.running_mean", &b.bn.running_mean);
      out.emplace_back(prefix + b.spec.name + ".bn.running_var", &b.bn.running_var);
    }
  }
  return out;
}

std::size_t CoupledModel::parameter_count() {
  std::size_t n = 0;
  for (auto& p : parameters()) n += p.tensor->size();
  return n;
}

void CoupledModel::zero_grad() {
  for (auto& p : parameters()) p.tensor->zero_grad();
}

Var pair_distance(Var a, Var b, Real eps) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.shape() != bv.shape()) {
    throw ShapeError("pair_distance: shape mismatch " + shape_string(av.shape()) + " vs " + shape_string(bv.shape()));
  }
  const std::size_t rows = av.rank() == 1 ? 1 : av.extent(0);
  const std::size_t cols = av.size() / rows;
  Tensor out({rows});
  for (std::size_t r = 0; r < rows; ++r) {
    Real acc = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      const Real d = av[r * cols + j] - bv[r * cols + j];
      acc += d * d;
    }
    out[r] = std::sqrt(acc + eps);
  }
  return a.tape().record(std::move(out), {a, b}, [rows, cols](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto d = ctx.output().data();
    auto av = ctx.input(0).data();
    auto bv = ctx.input(1).data();
    for (std::size_t k = 0; k < 2; ++k) {
      if (!ctx.needs_grad(k)) continue;
      auto gi = ctx.grad_input(k);
      const Real sign = k == 0 ? Real(1) : Real(-1);
      for (std::size_t r = 0; r < rows; ++r) {
        const Real coef = sign * g[r] / d[r];
        for (std::size_t j = 0; j < cols; ++j) {
          const std::size_t i = r * cols + j;
          gi[i] += coef * (av[i] - bv[i]);
        }
      }
    }
  });
}

Real pair_distance(std::span<const Real> a, std::span<const Real> b, Real eps) {
  if (a.size() != b.size()) throw ShapeError("pair_distance: length mismatch");
  Real acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc + eps);
}

Real contrastive_term(Real distance, int label, Real margin) {
  if (label != 0 && label != 1) throw ContractError("pair label must be 0 or 1");
  if (!(distance >= 0)) throw ContractError("pair distance must be non-negative");
  if (label == 1) return distance * distance / 2;
  const Real gap = std::max(Real(0), margin - distance);
  return gap * gap / 2;
}

Real contrastive_loss(std::span<const DistanceLabel> batch, Real margin, Real lambda, Real regularizer_value) {
  if (batch.empty()) throw ContractError("contrastive loss of an empty batch");
  Real acc = 0;
  for (const auto& p : batch) acc += contrastive_term(p.distance, p.label, margin);
  return acc / static_cast<Real>(batch.size()) + lambda * regularizer_value;
}

Var contrastive_loss(Var distances, std::span<const int> labels, Real margin) {
  const Tensor& d = distances.value();
  if (d.size() == 0 || labels.empty()) throw ContractError("contrastive loss of an empty batch");
  if (d.size() != labels.size()) throw ShapeError("contrastive loss: distances and labels differ in length");
  Real acc = 0;
  for (std::size_t i = 0; i < d.size(); ++i) acc += contrastive_term(d[i], labels[i], margin);
  const Real inv_n = Real(1) / static_cast<Real>(d.size());
  std::vector<int> y(labels.begin(), labels.end());
  return distances.tape().record(Tensor({1}, acc * inv_n), {distances},
                                 [y = std::move(y), margin, inv_n](BackwardContext& ctx) {
                                   const Real g = ctx.grad_output()[0] * inv_n;
                                   auto d = ctx.input(0).data();
                                   auto gd = ctx.grad_input(0);
                                   for (std::size_t i = 0; i < gd.size(); ++i) {
                                     if (y[i] == 1) {
                                       gd[i] += g * d[i];
                                     } else if (d[i] < margin) {
                                       gd[i] -= g * (margin - d[i]);
                                     }
                                   }
                                 });
}

}  // namespace avsync
