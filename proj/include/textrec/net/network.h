// textrec/net/network.h

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

// Maxout feed-forward networks: convolutional and dense maxout layers with a
// softmax read-out, trained by plain backprop.  Everything is double
// precision and single threaded so a fixed seed reproduces training exactly.

#ifndef TEXTREC_NET_NETWORK_H_
#define TEXTREC_NET_NETWORK_H_

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "textrec/common.h"
#include "textrec/net/ops.h"

namespace textrec {

enum class LayerKind { kConvMaxout, kDenseMaxout, kSoftmax };

// One layer of a NetworkSpec.  Fields that do not apply to the kind are
// ignored.  `dropout_include` is the probability of keeping a unit of this
// layer's *input* during training (1.0 disables dropout).
struct LayerSpec {
  LayerKind kind = LayerKind::kDenseMaxout;
  // conv_maxout
  int maps = 0;          // output feature maps
  int filter = 0;        // square filter side
  int pool = 1;          // square max-pool side (1 = no pooling)
  int pool_stride = 1;
  // dense_maxout
  int units = 0;
  // conv + dense
  int pieces = 1;        // maxout pieces per unit / map
  double dropout_include = 1.0;

  nlohmann::json ToJson() const;
  static LayerSpec FromJson(const nlohmann::json& j);
};

// Network architecture: a square single-channel input followed by conv
// maxout layers, then dense maxout layers, then one softmax layer producing
// `num_labels` logits.  The softmax layer is implicit (it is always last and
// is not listed in `layers`).
struct NetworkSpec {
  int input_side = 32;
  int num_labels = 2;
  std::vector<LayerSpec> layers;
  double softmax_dropout_include = 1.0;  // dropout on the softmax input

  nlohmann::json ToJson() const;
  static NetworkSpec FromJson(const nlohmann::json& j);
};

// A named, shaped parameter tensor with a matching gradient accumulator.
struct ParamBlock {
  std::string name;
  std::vector<int> shape;
  std::vector<double> value;
  std::vector<double> grad;

  size_t Size() const { return value.size(); }
  void ZeroGrad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// Shape of an activation volume between layers.
struct VolumeShape {
  int channels = 1;
  int height = 1;
  int width = 1;
  int Size() const { return channels * height * width; }
};

class Layer {
 public:
  // Per-sample state captured by Forward(train) and consumed by Backward.
  struct Ctx {
    std::vector<double> input;     // post-dropout input actually used
    std::vector<int> piece_arg;    // winning maxout piece per output unit
    std::vector<int> pool_arg;     // winning conv position per pooled output
  };

  virtual ~Layer() = default;

  virtual const LayerSpec& spec() const = 0;
  virtual VolumeShape InShape() const = 0;
  virtual VolumeShape OutShape() const = 0;

  // Glorot uniform initialization, biases zero.
  virtual void InitParams(Rng* rng) = 0;

  // `ctx` may be null for inference.
  virtual void Forward(const std::vector<double>& in, std::vector<double>* out,
                       Ctx* ctx) const = 0;

  // Accumulates parameter gradients and writes d(loss)/d(input) to `din`.
  virtual void Backward(const Ctx& ctx, const std::vector<double>& dout,
                        std::vector<double>* din) = 0;

  virtual std::vector<ParamBlock*> Blocks() = 0;
  std::vector<const ParamBlock*> Blocks() const;
};

std::unique_ptr<Layer> MakeConvMaxoutLayer(const LayerSpec& spec, VolumeShape in);
std::unique_ptr<Layer> MakeDenseMaxoutLayer(const LayerSpec& spec, VolumeShape in);
std::unique_ptr<Layer> MakeSoftmaxLayer(int num_labels, double dropout_include,
                                        VolumeShape in);

// A spec instantiated into layers with parameters.  Activation shapes are
// validated at construction; a spec whose volumes do not chain throws
// std::invalid_argument naming the offending layer.
class Network {
 public:
  explicit Network(const NetworkSpec& spec);

  const NetworkSpec& spec() const { return spec_; }
  size_t NumLayers() const { return layers_.size(); }
  Layer& layer(size_t i) { return *layers_[i]; }
  const Layer& layer(size_t i) const { return *layers_[i]; }

  void InitParams(Rng* rng);
  std::vector<ParamBlock*> Blocks();
  std::vector<const ParamBlock*> Blocks() const;
  size_t ParamCount() const;

  // Inference: no dropout, returns posteriors over labels.
  std::vector<double> Posteriors(const std::vector<double>& input) const;

  // Training pass for one sample: dropout active, gradients accumulated into
  // the blocks.  Returns the cross-entropy loss; `predicted` (optional)
  // receives the argmax label.
  double TrainStep(const std::vector<double>& input, int label, Rng* rng,
                   int* predicted);

 private:
  std::vector<double> ForwardLogits(const std::vector<double>& input,
                                    std::vector<Layer::Ctx>* ctxs,
                                    std::vector<std::vector<double>>* masks,
                                    Rng* rng) const;

  NetworkSpec spec_;
  std::vector<std::unique_ptr<Layer>> layers_;  // spec layers + softmax last
};

}  // namespace textrec

#endif  // TEXTREC_NET_NETWORK_H_
