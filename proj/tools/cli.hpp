/*
 * Copyright 2026 The stvrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STVRLA_TOOLS_CLI_HPP_
#define STVRLA_TOOLS_CLI_HPP_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "stvrla/report.hpp"

namespace stvrla::cli {

inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Audits one file; returns the canonical report and fills `result`.
std::string audit_file(const std::filesystem::path& path, const RunParams& params, std::optional<int> seats,
                       InstanceResult& result);

/// Election files in `dir` (.txt, .json), sorted by file name.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

}  // namespace stvrla::cli

#endif  // STVRLA_TOOLS_CLI_HPP_
