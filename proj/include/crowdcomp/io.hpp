// Copyright 2026 The crowdcomp Authors
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

// JSON interchange for instances, plans and side constraints.
//
// Doubles are written in shortest round-trip form, so save followed by load
// reproduces every numeric field bit for bit. Model fields a pair does not
// use are written as null and read back as NaN. Loading validates the
// document and reports the offending field path in the error message.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crowdcomp/model.hpp"
#include "crowdcomp/nonsep.hpp"

namespace crowdcomp {

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(std::string_view text);

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

std::string plan_to_json(const OfferPlan& plan);
OfferPlan plan_from_json(std::string_view text);

void save_plan(const OfferPlan& plan, const std::filesystem::path& path);
OfferPlan load_plan(const std::filesystem::path& path);

// [{a: [[...]], b: [[...]], B: number}] with |I| rows of |J| entries. A
// missing a or b table counts as all zeros.
std::vector<NonSepConstraint> constraints_from_json(std::string_view text,
                                                    const ProblemInstance& inst);
std::vector<NonSepConstraint> load_constraints(const std::filesystem::path& path,
                                               const ProblemInstance& inst);

// Whole-file helpers; errors name the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace crowdcomp
