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

#include "avsync/cube_file.hpp"

#include <fstream>

#include "avsync/errors.hpp"
#include "binio.hpp"

namespace avsync {

void write_cube(const std::filesystem::path& path, const Tensor& cube) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError(path.string() + ": cannot open for writing");
  os.write("AVCB", 4);
  binio::put<std::uint16_t>(os, kCubeFileVersion);
  binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(cube.rank()));
  for (std::size_t e : cube.shape()) binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(e));
  for (Real v : cube.data()) binio::put<float>(os, static_cast<float>(v));
  if (!os) throw InputError(path.string() + ": write failed");
}

Tensor read_cube(const std::filesystem::path& path) {
  const std::string what = path.string();
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError(what + ": cannot open");
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "AVCB") throw InputError(what + ": not an AVCB cube file");
  const auto version = binio::get<std::uint16_t>(is, what);
  if (version != kCubeFileVersion) throw InputError(what + ": unsupported cube version " + std::to_string(version));
  const auto rank = binio::get<std::uint16_t>(is, what);
  if (rank == 0) throw InputError(what + ": rank 0 cube");
  Shape shape;
  for (std::uint16_t i = 0; i < rank; ++i) {
    const auto e = binio::get<std::uint32_t>(is, what);
    if (e == 0) throw InputError(what + ": zero extent");
    shape.push_back(e);
  }
  std::vector<Real> data(shape_size(shape));
  for (auto& v : data) v = static_cast<Real>(binio::get<float>(is, what));
  if (is.peek() != std::char_traits<char>::eof()) throw InputError(what + ": trailing bytes after payload");
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace avsync
