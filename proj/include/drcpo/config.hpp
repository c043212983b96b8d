// Copyright 2026 The drcpo Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "drcpo/baseline_aug.hpp"
#include "drcpo/construction.hpp"
#include "drcpo/gt_database.hpp"
#include "drcpo/hpr.hpp"
#include "drcpo/placement.hpp"

namespace drcpo {

enum class Mode { kNone, kCda, kDrcpo };

std::string_view mode_name(Mode m);

struct PipelineConfig {
  Mode mode = Mode::kDrcpo;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  DatabaseConfig database;
  ConstructionConfig construction;
  PlacementConfig placement;
  SHprConfig shpr;
  EHprParams ehpr;
  bool drcpo_global_augment = false;
  std::array<std::uint32_t, 3> cda_counts = {20, 15, 15};
  GlobalAugParams gda;

  void validate() const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

/// Flat `key = value` text with dotted keys; `#` starts a comment. Unknown
/// keys and unparsable values throw kInvalidConfig with the line number.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, one per line, in a fixed order.
/// parse_config(format_config(c)) == c.
std::string format_config(const PipelineConfig& config);

/// Key reference with defaults, for --help.
std::string config_help();

}  // namespace drcpo
