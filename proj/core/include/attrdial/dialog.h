// Copyright 2026 The attrdial Authors. All Rights Reserved.
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
// =============================================================================

#ifndef ATTRDIAL_DIALOG_H_
#define ATTRDIAL_DIALOG_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/kb.h"

namespace attrdial {

enum class Side { kUser, kSystem };

// "user" / "system".
std::string_view SideName(Side side);
std::optional<Side> ParseSide(std::string_view name);

struct AttributeMention {
  Attribute attribute;
  size_t begin = 0;  // byte span [begin, end) into the utterance
  size_t end = 0;
  Side side = Side::kUser;
};

// One utterance. Turn i of a dialog (1-based) is element i-1 of the turn
// list.
struct Turn {
  Side speaker = Side::kUser;
  std::string text;
  std::vector<AttributeMention> mentions;
};

}  // namespace attrdial

#endif  // ATTRDIAL_DIALOG_H_
