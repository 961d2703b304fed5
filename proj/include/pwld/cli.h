// include/pwld/cli.h

// Copyright 2026  The pwld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PWLD_CLI_H_
#define PWLD_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace pwld {

/// Entry point of the `pwld` tool. Data goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on a processing error and 2 on a usage error.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

/// Half-star quantization of a score in [0, 5]: round(2 * score) / 2.
double QuantizeStars(double score);

/// Lower-case hex SHA-256 of a file's bytes.
std::string FileSha256(const std::string &path);

}  // namespace pwld

#endif  // PWLD_CLI_H_
