/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRID_CORE_ERROR_HPP_
#define PRID_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace prid {

/// Error categories. `validation` maps to CLI exit code 2, everything else
/// to exit code 1.
enum class ErrorCode {
  validation,  // bad arguments, malformed inputs, contract violations
  io,          // filesystem and codec failures
  numeric,     // divergence, non-finite values
  protocol,    // evaluation protocol violations
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prid

#endif  // PRID_CORE_ERROR_HPP_
