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

#include "avsync/checkpoint.hpp"

#include <fstream>

#include "avsync/errors.hpp"
#include "binio.hpp"

namespace avsync {
namespace {

constexpr std::uint16_t kDtypeF32 = 1;
constexpr std::uint16_t kDtypeF64 = 2;
constexpr std::uint16_t kNativeDtype = sizeof(Real) == 8 ? kDtypeF64 : kDtypeF32;

struct Header {
  ModelConfig config;
  std::uint64_t seed = 0;
  std::uint64_t digest = 0;
  std::string arch_text;
  std::uint16_t dtype = kNativeDtype;
};

void put_tensor(std::ostream& os, const std::string& name, const Tensor& t) {
  binio::put_string(os, name);
  binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(t.rank()));
  for (std::size_t e : t.shape()) binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(e));
  for (Real v : t.data()) binio::put<Real>(os, v);
}

void get_tensor(std::istream& is, const std::string& what, std::uint16_t dtype, const std::string& name, Tensor& t) {
  const std::string stored = binio::get_string(is, what);
  if (stored != name) throw InputError(what + ": expected tensor '" + name + "', found '" + stored + "'");
  const auto rank = binio::get<std::uint16_t>(is, what);
  Shape shape;
  for (std::uint16_t i = 0; i < rank; ++i) shape.push_back(binio::get<std::uint32_t>(is, what));
  if (shape != t.shape()) {
    throw InputError(what + ": tensor '" + name + "' is " + shape_string(shape) + ", model expects " +
                     shape_string(t.shape()));
  }
  for (Real& v : t.data()) {
    v = dtype == kDtypeF64 ? static_cast<Real>(binio::get<double>(is, what)) : static_cast<Real>(binio::get<float>(is, what));
  }
}

Header read_header(std::istream& is, const std::string& what) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "AVCK") throw InputError(what + ": not an AVCK checkpoint");
  const auto version = binio::get<std::uint16_t>(is, what);
  if (version != kCheckpointVersion) throw InputError(what + ": unsupported checkpoint version " + std::to_string(version));
  Header h;
  h.dtype = binio::get<std::uint16_t>(is, what);
  if (h.dtype != kDtypeF32 && h.dtype != kDtypeF64) throw InputError(what + ": unknown dtype tag");
  h.config.zeta = binio::get<std::uint64_t>(is, what);
  h.config.mu = static_cast<Real>(binio::get<double>(is, what));
  h.config.lambda = static_cast<Real>(binio::get<double>(is, what));
  h.config.rho = static_cast<Real>(binio::get<double>(is, what));
  h.config.regularizer = binio::get<std::uint8_t>(is, what) ? Regularizer::kNorm : Regularizer::kSquaredNorm;
  h.seed = binio::get<std::uint64_t>(is, what);
  h.digest = binio::get<std::uint64_t>(is, what);
  h.arch_text = binio::get_string(is, what);
  if (Architecture::parse(h.arch_text).digest() != h.digest) {
    throw InputError(what + ": architecture text does not match its digest");
  }
  return h;
}

void read_tensors(std::istream& is, const std::string& what, std::uint16_t dtype, CoupledModel& model) {
  const auto params = model.parameters();
  if (binio::get<std::uint32_t>(is, what) != params.size()) throw InputError(what + ": parameter count mismatch");
  for (const auto& p : params) get_tensor(is, what, dtype, p.name, *p.tensor);
  const auto buffers = model.buffers();
  if (binio::get<std::uint32_t>(is, what) != buffers.size()) throw InputError(what + ": buffer count mismatch");
  for (const auto& [name, t] : buffers) get_tensor(is, what, dtype, name, *t);
  if (is.peek() != std::char_traits<char>::eof()) throw InputError(what + ": trailing bytes");
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, CoupledModel& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError(path.string() + ": cannot open for writing");
  const ModelConfig& c = model.config();
  os.write("AVCK", 4);
  binio::put<std::uint16_t>(os, kCheckpointVersion);
  binio::put<std::uint16_t>(os, kNativeDtype);
  binio::put<std::uint64_t>(os, c.zeta);
  binio::put<double>(os, c.mu);
  binio::put<double>(os, c.lambda);
  binio::put<double>(os, c.rho);
  binio::put<std::uint8_t>(os, c.regularizer == Regularizer::kNorm ? 1 : 0);
  binio::put<std::uint64_t>(os, model.seed());
  binio::put<std::uint64_t>(os, model.architecture().digest());
  binio::put_string(os, model.architecture().describe());
  const auto params = model.parameters();
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) put_tensor(os, p.name, *p.tensor);
  const auto buffers = model.buffers();
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(buffers.size()));
  for (const auto& [name, t] : buffers) put_tensor(os, name, *t);
  if (!os) throw InputError(path.string() + ": write failed");
}

std::unique_ptr<CoupledModel> load_checkpoint(const std::filesystem::path& path) {
  const std::string what = path.string();
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError(what + ": cannot open");
  const Header h = read_header(is, what);
  auto model = std::make_unique<CoupledModel>(Architecture::parse(h.arch_text), h.config, h.seed);
  read_tensors(is, what, h.dtype, *model);
  return model;
}

void load_checkpoint_into(const std::filesystem::path& path, CoupledModel& model) {
  const std::string what = path.string();
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError(what + ": cannot open");
  const Header h = read_header(is, what);
  if (h.digest != model.architecture().digest()) {
    throw InputError(what + ": architecture digest differs from the target model; refusing to load");
  }
  read_tensors(is, what, h.dtype, model);
}

}  // namespace avsync
