/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTIB_CLI_H_
#define QTIB_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace qtib::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;

// Entry point of the qtib tool. args[0] is the program name. Subcommands:
// abstract, sweep, render, oracle, demo-map. Returns 0 on success, 1 on a
// usage error and 2 on an input, parse or configuration error.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// "25,50,100" or "lo:hi:n" (n log-spaced values).
std::vector<double> ParseBetaList(const std::string& text);

}  // namespace qtib::cli

#endif  // QTIB_CLI_H_
