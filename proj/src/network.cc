// src/network.cc

// Copyright 2026 The textrec Authors

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

#include "textrec/net/network.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace textrec {
namespace {

std::string KindName(LayerKind k) {
  switch (k) {
    case LayerKind::kConvMaxout: return "conv_maxout";
    case LayerKind::kDenseMaxout: return "dense_maxout";
    case LayerKind::kSoftmax: return "softmax";
  }
  return "?";
}

LayerKind KindFromName(const std::string& s) {
  if (s == "conv_maxout") return LayerKind::kConvMaxout;
  if (s == "dense_maxout") return LayerKind::kDenseMaxout;
  if (s == "softmax") return LayerKind::kSoftmax;
  throw std::invalid_argument("unknown layer kind: " + s);
}

void GlorotFill(std::vector<double>* w, int fan_in, int fan_out, Rng* rng) {
  const double s = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> unif(-s, s);
  for (double& v : *w) v = unif(*rng);
}

}  // namespace

nlohmann::json LayerSpec::ToJson() const {
  return nlohmann::json{{"kind", KindName(kind)},
                        {"maps", maps},
                        {"filter", filter},
                        {"pool", pool},
                        {"pool_stride", pool_stride},
                        {"units", units},
                        {"pieces", pieces},
                        {"dropout_include", dropout_include}};
}

LayerSpec LayerSpec::FromJson(const nlohmann::json& j) {
  LayerSpec s;
  s.kind = KindFromName(j.at("kind").get<std::string>());
  s.maps = j.value("maps", 0);
  s.filter = j.value("filter", 0);
  s.pool = j.value("pool", 1);
  s.pool_stride = j.value("pool_stride", 1);
  s.units = j.value("units", 0);
  s.pieces = j.value("pieces", 1);
  s.dropout_include = j.value("dropout_include", 1.0);
  return s;
}

nlohmann::json NetworkSpec::ToJson() const {
  nlohmann::json layer_list = nlohmann::json::array();
  for (const LayerSpec& l : layers) layer_list.push_back(l.ToJson());
  return nlohmann::json{{"input_side", input_side},
                        {"num_labels", num_labels},
                        {"softmax_dropout_include", softmax_dropout_include},
                        {"layers", layer_list}};
}

NetworkSpec NetworkSpec::FromJson(const nlohmann::json& j) {
  NetworkSpec s;
  s.input_side = j.at("input_side").get<int>();
  s.num_labels = j.at("num_labels").get<int>();
  s.softmax_dropout_include = j.value("softmax_dropout_include", 1.0);
  for (const nlohmann::json& lj : j.at("layers"))
    s.layers.push_back(LayerSpec::FromJson(lj));
  return s;
}

std::vector<const ParamBlock*> Layer::Blocks() const {
  std::vector<ParamBlock*> mut = const_cast<Layer*>(this)->Blocks();
  return {mut.begin(), mut.end()};
}

namespace {

// ---------------------------------------------------------------------------
// Dense maxout: out[i] = max_j ( b[i,j] + sum_x in[x] * W[j,i,x] ).
// Ties go to the lowest piece index so gradient routing is deterministic.
// ---------------------------------------------------------------------------
class DenseMaxoutLayer : public Layer {
 public:
  DenseMaxoutLayer(const LayerSpec& spec, VolumeShape in)
      : spec_(spec), in_shape_(in), d_(in.Size()) {
    if (spec.units <= 0 || spec.pieces <= 0)
      throw std::invalid_argument("dense_maxout: units and pieces must be positive");
    w_.name = "W";
    w_.shape = {spec.pieces, spec.units, d_};
    w_.value.assign(static_cast<size_t>(spec.pieces) * spec.units * d_, 0.0);
    w_.grad = w_.value;
    b_.name = "b";
    b_.shape = {spec.units, spec.pieces};
    b_.value.assign(static_cast<size_t>(spec.units) * spec.pieces, 0.0);
    b_.grad = b_.value;
  }

  const LayerSpec& spec() const override { return spec_; }
  VolumeShape InShape() const override { return in_shape_; }
  VolumeShape OutShape() const override { return {spec_.units, 1, 1}; }

  void InitParams(Rng* rng) override {
    GlorotFill(&w_.value, d_, spec_.units, rng);
    std::fill(b_.value.begin(), b_.value.end(), 0.0);
  }

  void Forward(const std::vector<double>& in, std::vector<double>* out,
               Ctx* ctx) const override {
    const int m = spec_.units, k = spec_.pieces;
    out->assign(m, 0.0);
    if (ctx != nullptr) {
      ctx->input = in;
      ctx->piece_arg.assign(m, 0);
    }
    for (int i = 0; i < m; ++i) {
      double best = 0.0;
      int arg = 0;
      for (int j = 0; j < k; ++j) {
        const double* row = w_.value.data() + (static_cast<size_t>(j) * m + i) * d_;
        double z = b_.value[static_cast<size_t>(i) * k + j];
        for (int x = 0; x < d_; ++x) z += in[x] * row[x];
        if (j == 0 || z > best) {
          best = z;
          arg = j;
        }
      }
      (*out)[i] = best;
      if (ctx != nullptr) ctx->piece_arg[i] = arg;
    }
  }

  void Backward(const Ctx& ctx, const std::vector<double>& dout,
                std::vector<double>* din) override {
    const int m = spec_.units, k = spec_.pieces;
    din->assign(d_, 0.0);
    for (int i = 0; i < m; ++i) {
      const double g = dout[i];
      if (g == 0.0) continue;
      const int j = ctx.piece_arg[i];
      const size_t base = (static_cast<size_t>(j) * m + i) * d_;
      const double* row = w_.value.data() + base;
      double* grow = w_.grad.data() + base;
      for (int x = 0; x < d_; ++x) {
        grow[x] += ctx.input[x] * g;
        (*din)[x] += row[x] * g;
      }
      b_.grad[static_cast<size_t>(i) * k + j] += g;
    }
  }

  std::vector<ParamBlock*> Blocks() override { return {&w_, &b_}; }

 private:
  LayerSpec spec_;
  VolumeShape in_shape_;
  int d_;
  ParamBlock w_, b_;
};

// ---------------------------------------------------------------------------
// Conv maxout: valid cross-correlation per piece, bias, max over pieces,
// then square max pooling.  Pool windows that would overrun the conv output
// are dropped (no padding anywhere).
// ---------------------------------------------------------------------------
class ConvMaxoutLayer : public Layer {
 public:
  ConvMaxoutLayer(const LayerSpec& spec, VolumeShape in)
      : spec_(spec), in_shape_(in) {
    if (spec.maps <= 0 || spec.pieces <= 0)
      throw std::invalid_argument("conv_maxout: maps and pieces must be positive");
    if (spec.filter <= 0 || spec.filter > in.height || spec.filter > in.width)
      throw std::invalid_argument("conv_maxout: filter does not fit input " +
                                  std::to_string(in.height) + "x" +
                                  std::to_string(in.width));
    conv_h_ = in.height - spec.filter + 1;
    conv_w_ = in.width - spec.filter + 1;
    if (spec.pool <= 0 || spec.pool_stride <= 0)
      throw std::invalid_argument("conv_maxout: pool and pool_stride must be positive");
    if (spec.pool > conv_h_ || spec.pool > conv_w_)
      throw std::invalid_argument("conv_maxout: pool window exceeds conv output");
    out_h_ = (conv_h_ - spec.pool) / spec.pool_stride + 1;
    out_w_ = (conv_w_ - spec.pool) / spec.pool_stride + 1;

    const int c = in.channels, f = spec.filter;
    filters_.name = "filters";
    filters_.shape = {spec.pieces, spec.maps, c, f, f};
    filters_.value.assign(
        static_cast<size_t>(spec.pieces) * spec.maps * c * f * f, 0.0);
    filters_.grad = filters_.value;
    biases_.name = "biases";
    biases_.shape = {spec.maps, spec.pieces};
    biases_.value.assign(static_cast<size_t>(spec.maps) * spec.pieces, 0.0);
    biases_.grad = biases_.value;
  }

  const LayerSpec& spec() const override { return spec_; }
  VolumeShape InShape() const override { return in_shape_; }
  VolumeShape OutShape() const override { return {spec_.maps, out_h_, out_w_}; }

  void InitParams(Rng* rng) override {
    const int patch = in_shape_.channels * spec_.filter * spec_.filter;
    GlorotFill(&filters_.value, patch, spec_.maps * spec_.filter * spec_.filter,
               rng);
    std::fill(biases_.value.begin(), biases_.value.end(), 0.0);
  }

  void Forward(const std::vector<double>& in, std::vector<double>* out,
               Ctx* ctx) const override {
    const int c_in = in_shape_.channels, h = in_shape_.height, w = in_shape_.width;
    const int maps = spec_.maps, k = spec_.pieces, f = spec_.filter;
    std::vector<double> maxed(static_cast<size_t>(conv_h_) * conv_w_);
    std::vector<double> plane(static_cast<size_t>(conv_h_) * conv_w_);
    out->assign(static_cast<size_t>(maps) * out_h_ * out_w_, 0.0);
    if (ctx != nullptr) {
      ctx->input = in;
      ctx->piece_arg.assign(static_cast<size_t>(maps) * conv_h_ * conv_w_, 0);
      ctx->pool_arg.assign(static_cast<size_t>(maps) * out_h_ * out_w_, 0);
    }
    for (int m = 0; m < maps; ++m) {
      int* args = ctx != nullptr
                      ? ctx->piece_arg.data() + static_cast<size_t>(m) * conv_h_ * conv_w_
                      : nullptr;
      for (int j = 0; j < k; ++j) {
        const double bias = biases_.value[static_cast<size_t>(m) * k + j];
        const double* filt =
            filters_.value.data() +
            (static_cast<size_t>(j) * maps + m) * c_in * f * f;
        for (int oy = 0; oy < conv_h_; ++oy) {
          for (int ox = 0; ox < conv_w_; ++ox) {
            double z = bias;
            for (int c = 0; c < c_in; ++c) {
              const double* fplane = filt + static_cast<size_t>(c) * f * f;
              const double* iplane = in.data() + static_cast<size_t>(c) * h * w;
              for (int fy = 0; fy < f; ++fy) {
                const double* irow = iplane + static_cast<size_t>(oy + fy) * w + ox;
                const double* frow = fplane + static_cast<size_t>(fy) * f;
                for (int fx = 0; fx < f; ++fx) z += irow[fx] * frow[fx];
              }
            }
            plane[static_cast<size_t>(oy) * conv_w_ + ox] = z;
          }
        }
        if (j == 0) {
          maxed = plane;
          if (args != nullptr) std::fill(args, args + conv_h_ * conv_w_, 0);
        } else {
          for (int p = 0; p < conv_h_ * conv_w_; ++p) {
            if (plane[p] > maxed[p]) {
              maxed[p] = plane[p];
              if (args != nullptr) args[p] = j;
            }
          }
        }
      }
      // Max pool over `maxed`; ties keep the earliest window position.
      for (int py = 0; py < out_h_; ++py) {
        for (int px = 0; px < out_w_; ++px) {
          const int oy0 = py * spec_.pool_stride, ox0 = px * spec_.pool_stride;
          double best = 0.0;
          int arg = -1;
          for (int dy = 0; dy < spec_.pool; ++dy) {
            for (int dx = 0; dx < spec_.pool; ++dx) {
              const int pos = (oy0 + dy) * conv_w_ + (ox0 + dx);
              if (arg < 0 || maxed[pos] > best) {
                best = maxed[pos];
                arg = pos;
              }
            }
          }
          const size_t oi =
              (static_cast<size_t>(m) * out_h_ + py) * out_w_ + px;
          (*out)[oi] = best;
          if (ctx != nullptr) ctx->pool_arg[oi] = arg;
        }
      }
    }
  }

  void Backward(const Ctx& ctx, const std::vector<double>& dout,
                std::vector<double>* din) override {
    const int c_in = in_shape_.channels, h = in_shape_.height, w = in_shape_.width;
    const int maps = spec_.maps, k = spec_.pieces, f = spec_.filter;
    din->assign(static_cast<size_t>(c_in) * h * w, 0.0);
    for (int m = 0; m < maps; ++m) {
      const int* args = ctx.piece_arg.data() + static_cast<size_t>(m) * conv_h_ * conv_w_;
      for (int py = 0; py < out_h_; ++py) {
        for (int px = 0; px < out_w_; ++px) {
          const size_t oi = (static_cast<size_t>(m) * out_h_ + py) * out_w_ + px;
          const double g = dout[oi];
          if (g == 0.0) continue;
          const int pos = ctx.pool_arg[oi];
          const int oy = pos / conv_w_, ox = pos % conv_w_;
          const int j = args[pos];
          biases_.grad[static_cast<size_t>(m) * k + j] += g;
          const size_t fbase =
              (static_cast<size_t>(j) * maps + m) * c_in * f * f;
          for (int c = 0; c < c_in; ++c) {
            const double* iplane = ctx.input.data() + static_cast<size_t>(c) * h * w;
            double* dplane = din->data() + static_cast<size_t>(c) * h * w;
            const double* fplane = filters_.value.data() + fbase + static_cast<size_t>(c) * f * f;
            double* gplane = filters_.grad.data() + fbase + static_cast<size_t>(c) * f * f;
            for (int fy = 0; fy < f; ++fy) {
              const double* irow = iplane + static_cast<size_t>(oy + fy) * w + ox;
              double* drow = dplane + static_cast<size_t>(oy + fy) * w + ox;
              const double* frow = fplane + static_cast<size_t>(fy) * f;
              double* grow = gplane + static_cast<size_t>(fy) * f;
              for (int fx = 0; fx < f; ++fx) {
                grow[fx] += irow[fx] * g;
                drow[fx] += frow[fx] * g;
              }
            }
          }
        }
      }
    }
  }

  std::vector<ParamBlock*> Blocks() override { return {&filters_, &biases_}; }

 private:
  LayerSpec spec_;
  VolumeShape in_shape_;
  int conv_h_, conv_w_, out_h_, out_w_;
  ParamBlock filters_, biases_;
};

// ---------------------------------------------------------------------------
// Softmax read-out: affine layer producing logits.  Normalization lives in
// Softmax()/SoftmaxXent() so logits stay usable for loss computation.
// ---------------------------------------------------------------------------
class SoftmaxLayer : public Layer {
 public:
  SoftmaxLayer(int num_labels, double dropout_include, VolumeShape in)
      : in_shape_(in), d_(in.Size()), labels_(num_labels) {
    if (num_labels < 2)
      throw std::invalid_argument("softmax: need at least two labels");
    spec_.kind = LayerKind::kSoftmax;
    spec_.units = num_labels;
    spec_.pieces = 1;
    spec_.dropout_include = dropout_include;
    w_.name = "W";
    w_.shape = {labels_, d_};
    w_.value.assign(static_cast<size_t>(labels_) * d_, 0.0);
    w_.grad = w_.value;
    b_.name = "b";
    b_.shape = {labels_};
    b_.value.assign(labels_, 0.0);
    b_.grad = b_.value;
  }

  const LayerSpec& spec() const override { return spec_; }
  VolumeShape InShape() const override { return in_shape_; }
  VolumeShape OutShape() const override { return {labels_, 1, 1}; }

  void InitParams(Rng* rng) override {
    GlorotFill(&w_.value, d_, labels_, rng);
    std::fill(b_.value.begin(), b_.value.end(), 0.0);
  }

  void Forward(const std::vector<double>& in, std::vector<double>* out,
               Ctx* ctx) const override {
    out->assign(labels_, 0.0);
    if (ctx != nullptr) ctx->input = in;
    for (int l = 0; l < labels_; ++l) {
      const double* row = w_.value.data() + static_cast<size_t>(l) * d_;
      double z = b_.value[l];
      for (int x = 0; x < d_; ++x) z += in[x] * row[x];
      (*out)[l] = z;
    }
  }

  void Backward(const Ctx& ctx, const std::vector<double>& dout,
                std::vector<double>* din) override {
    din->assign(d_, 0.0);
    for (int l = 0; l < labels_; ++l) {
      const double g = dout[l];
      if (g == 0.0) continue;
      const size_t base = static_cast<size_t>(l) * d_;
      for (int x = 0; x < d_; ++x) {
        w_.grad[base + x] += ctx.input[x] * g;
        (*din)[x] += w_.value[base + x] * g;
      }
      b_.grad[l] += g;
    }
  }

  std::vector<ParamBlock*> Blocks() override { return {&w_, &b_}; }

 private:
  LayerSpec spec_;
  VolumeShape in_shape_;
  int d_;
  int labels_;
  ParamBlock w_, b_;
};

}  // namespace

std::unique_ptr<Layer> MakeConvMaxoutLayer(const LayerSpec& spec, VolumeShape in) {
  return std::make_unique<ConvMaxoutLayer>(spec, in);
}
std::unique_ptr<Layer> MakeDenseMaxoutLayer(const LayerSpec& spec, VolumeShape in) {
  return std::make_unique<DenseMaxoutLayer>(spec, in);
}
std::unique_ptr<Layer> MakeSoftmaxLayer(int num_labels, double dropout_include,
                                        VolumeShape in) {
  return std::make_unique<SoftmaxLayer>(num_labels, dropout_include, in);
}

Network::Network(const NetworkSpec& spec) : spec_(spec) {
  if (spec.input_side <= 0)
    throw std::invalid_argument("network: input_side must be positive");
  VolumeShape shape{1, spec.input_side, spec.input_side};
  bool seen_dense = false;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    try {
      switch (l.kind) {
        case LayerKind::kConvMaxout:
          if (seen_dense)
            throw std::invalid_argument("conv_maxout after dense_maxout");
          layers_.push_back(MakeConvMaxoutLayer(l, shape));
          break;
        case LayerKind::kDenseMaxout:
          seen_dense = true;
          layers_.push_back(MakeDenseMaxoutLayer(l, shape));
          break;
        case LayerKind::kSoftmax:
          throw std::invalid_argument("softmax may not appear in spec layers");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("layer " + std::to_string(i) + ": " + e.what());
    }
    shape = layers_.back()->OutShape();
  }
  layers_.push_back(
      MakeSoftmaxLayer(spec.num_labels, spec.softmax_dropout_include, shape));
}

void Network::InitParams(Rng* rng) {
  for (auto& l : layers_) l->InitParams(rng);
}

std::vector<ParamBlock*> Network::Blocks() {
  std::vector<ParamBlock*> out;
  for (auto& l : layers_)
    for (ParamBlock* b : l->Blocks()) out.push_back(b);
  return out;
}

std::vector<const ParamBlock*> Network::Blocks() const {
  std::vector<const ParamBlock*> out;
  for (const auto& l : layers_)
    for (const ParamBlock* b : l->Blocks()) out.push_back(b);
  return out;
}

size_t Network::ParamCount() const {
  size_t n = 0;
  for (const ParamBlock* b : Blocks()) n += b->Size();
  return n;
}

std::vector<double> Network::ForwardLogits(
    const std::vector<double>& input, std::vector<Layer::Ctx>* ctxs,
    std::vector<std::vector<double>>* masks, Rng* rng) const {
  if (static_cast<int>(input.size()) != layers_.front()->InShape().Size())
    throw std::invalid_argument("network: input size " +
                                std::to_string(input.size()) + ", expected " +
                                std::to_string(layers_.front()->InShape().Size()));
  std::vector<double> x = input;
  std::vector<double> next;
  for (size_t i = 0; i < layers_.size(); ++i) {
    if (masks != nullptr) {
      const double keep = layers_[i]->spec().dropout_include;
      if (keep < 1.0) {
        (*masks)[i] = DropoutMask(x.size(), keep, rng);
        for (size_t t = 0; t < x.size(); ++t) x[t] *= (*masks)[i][t];
      }
    }
    layers_[i]->Forward(x, &next, ctxs != nullptr ? &(*ctxs)[i] : nullptr);
    x.swap(next);
  }
  return x;
}

std::vector<double> Network::Posteriors(const std::vector<double>& input) const {
  return Softmax(ForwardLogits(input, nullptr, nullptr, nullptr));
}

double Network::TrainStep(const std::vector<double>& input, int label, Rng* rng,
                          int* predicted) {
  std::vector<Layer::Ctx> ctxs(layers_.size());
  std::vector<std::vector<double>> masks(layers_.size());
  const std::vector<double> logits = ForwardLogits(input, &ctxs, &masks, rng);
  auto [post, loss] = SoftmaxXent(logits, label);
  if (predicted != nullptr)
    *predicted = static_cast<int>(
        std::max_element(post.begin(), post.end()) - post.begin());
  std::vector<double> dout = post;
  dout[label] -= 1.0;
  std::vector<double> din;
  for (size_t i = layers_.size(); i-- > 0;) {
    layers_[i]->Backward(ctxs[i], dout, &din);
    if (!masks[i].empty())
      for (size_t t = 0; t < din.size(); ++t) din[t] *= masks[i][t];
    dout.swap(din);
  }
  return loss;
}

}  // namespace textrec
