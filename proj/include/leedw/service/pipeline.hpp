// Copyright (c) 2026 The leedw Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>

#include "leedw/orchestrator/executor.hpp"
#include "leedw/service/config.hpp"

namespace leedw::service {

/// One runner per default pipeline task, wired to the adapters in `config`.
/// Each returns {module: subtree}.
std::map<std::string, orchestrator::TaskRunner> pipeline_runners(const Config& config);

orchestrator::ExecutionOptions execution_options(const Config& config);

}  // namespace leedw::service
