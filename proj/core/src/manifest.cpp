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

#include "avsync/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "avsync/errors.hpp"
#include "avsync/parallel.hpp"

namespace avsync {
namespace {

const std::vector<std::string> kColumns{"subject_id", "audio_path", "frames_dir", "fps", "sample_rate"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": '" + text + "' is not a number");
  }
}

void finish(ManifestRecord& r, const std::filesystem::path& base, const ManifestOptions& options,
            const std::string& where) {
  if (r.subject_id.empty()) throw InputError(where + ": empty subject_id");
  if (r.audio_path.is_relative()) r.audio_path = base / r.audio_path;
  if (r.frames_dir.is_relative()) r.frames_dir = base / r.frames_dir;
  if (!(r.sample_rate > 0)) throw InputError(where + ": sample_rate must be positive");
  if (!(r.fps > 0)) throw InputError(where + ": fps must be positive");
  if (!options.allow_fps && r.fps != 30.0) {
    throw InputError(where + ": frame rate " + std::to_string(r.fps) + " is not 30 (use --allow-fps to override)");
  }
  if (options.check_paths) {
    if (!std::filesystem::is_regular_file(r.audio_path)) throw InputError(where + ": missing audio file " + r.audio_path.string());
    if (!std::filesystem::is_directory(r.frames_dir)) throw InputError(where + ": missing frames dir " + r.frames_dir.string());
  }
}

}  // namespace

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path, const ManifestOptions& options) {
  std::ifstream is(path);
  if (!is) throw InputError(path.string() + ": cannot open manifest");
  const auto base = path.parent_path();
  const bool jsonl = path.extension() == ".jsonl";
  std::vector<ManifestRecord> records;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (trim(line).empty()) continue;
    ManifestRecord r;
    if (jsonl) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
        r.subject_id = j.at("subject_id").get<std::string>();
        r.audio_path = j.at("audio_path").get<std::string>();
        r.frames_dir = j.at("frames_dir").get<std::string>();
        r.fps = j.value("fps", 30.0);
        r.sample_rate = j.value("sample_rate", 16000.0);
      } catch (const nlohmann::json::exception& e) {
        throw InputError(where + ": " + e.what());
      }
    } else if (header.empty()) {
      header = split_csv(line);
      if (header != kColumns) throw InputError(where + ": expected header subject_id,audio_path,frames_dir,fps,sample_rate");
      continue;
    } else {
      const auto cells = split_csv(line);
      if (cells.size() != kColumns.size()) throw InputError(where + ": expected 5 columns");
      r.subject_id = cells[0];
      r.audio_path = cells[1];
      r.frames_dir = cells[2];
      r.fps = parse_number(cells[3], where);
      r.sample_rate = parse_number(cells[4], where);
    }
    finish(r, base, options, where);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw InputError(path.string() + ": manifest has no records");
  return records;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRecord> records) {
  std::ofstream os(path);
  if (!os) throw InputError(path.string() + ": cannot open for writing");
  const auto base = path.parent_path();
  auto rel = [&base](const std::filesystem::path& p) {
    return base.empty() ? p.generic_string() : p.lexically_relative(base).generic_string();
  };
  if (path.extension() == ".jsonl") {
    for (const auto& r : records) {
      const nlohmann::json j{{"subject_id", r.subject_id}, {"audio_path", rel(r.audio_path)},
                             {"frames_dir", rel(r.frames_dir)}, {"fps", r.fps}, {"sample_rate", r.sample_rate}};
      os << j.dump() << '\n';
    }
    if (!os) throw InputError(path.string() + ": write failed");
    return;
  }
  os << "subject_id,audio_path,frames_dir,fps,sample_rate\n";
  for (const auto& r : records) {
    os << r.subject_id << ',' << rel(r.audio_path) << ',' << rel(r.frames_dir) << ',' << r.fps << ','
       << r.sample_rate << '\n';
  }
  if (!os) throw InputError(path.string() + ": write failed");
}

std::vector<ClipSource> load_clips(std::span<const ManifestRecord> records) {
  return parallel_map<ClipSource>(records.size(), [&](std::size_t i) {
    const ManifestRecord& r = records[i];
    ClipSource c;
    c.subject_id = r.subject_id;
    const auto dir = r.frames_dir.lexically_normal();
    c.clip_id = (dir.has_filename() ? dir.filename() : dir.parent_path().filename()).string();
    c.audio = read_wav(r.audio_path);
    if (c.audio.sample_rate != r.sample_rate) {
      throw InputError(r.audio_path.string() + ": sample rate " + std::to_string(c.audio.sample_rate) +
                       " differs from the manifest's " + std::to_string(r.sample_rate));
    }
    c.frames = load_frame_dir(r.frames_dir);
    c.fps = r.fps;
    return c;
  });
}

}  // namespace avsync
