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

#ifndef PRID_TESTS_TEST_PATHS_HPP_
#define PRID_TESTS_TEST_PATHS_HPP_

#include <cstdlib>
#include <string>

namespace prid::testpaths {

/// Repository root, for golden files. The build bakes it in; the env var
/// wins when set.
inline std::string source_dir() {
  if (const char* env = std::getenv("PRID_SOURCE_DIR")) return env;
#ifdef PRID_SOURCE_DIR_STR
  return PRID_SOURCE_DIR_STR;
#else
  return ".";
#endif
}

/// Path of the installed command line binary.
inline std::string cli_path() {
  if (const char* env = std::getenv("PRID_CLI")) return env;
#ifdef PRID_CLI_PATH_STR
  return PRID_CLI_PATH_STR;
#else
  return "prid";
#endif
}

}  // namespace prid::testpaths

#endif  // PRID_TESTS_TEST_PATHS_HPP_
