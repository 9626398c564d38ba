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

#ifndef PRID_CORE_PIPELINE_HPP_
#define PRID_CORE_PIPELINE_HPP_

#include <string>

#include <json.hpp>

namespace prid {

/// Pipeline stages behind the CLI subcommands. Every runner takes a
/// resolved JSON config, validates it before touching any input, writes a
/// config echo next to its outputs, and returns a JSON report. All runners
/// are deterministic functions of (inputs, config).
///
/// Commands and their config keys (defaults in parentheses):
///   gen-crops   input_manifest, s, o_min, seed(0), out
///   align       input_manifest, joints, out, ref_width(48), ref_height(96),
///               n_sigma(3), ref_joints(=joints), ref_cameras(all),
///               threads(1)
///   hallucinate input_manifest, out, mode("baseline"|"tiny-trained"),
///               steps(200), lr(2e-4), lambda(10), seed(0), batch_size(8),
///               hidden(16), train_edge(16), threads(1)
///   embed       aligned_manifest, hallucinated_manifest(none), out,
///               n_strides(6), bins(32), dim(0 = raw histogram dim),
///               projection_seed(17), normalize(false), threads(1)
///   eval        features, protocol("crop-cuhk03"), query_camera,
///               gallery_camera, exclude_same_camera, single_shot,
///               trials(10), seed(0), out(none), threads(1)
///   make-toy    out
///   demo        out, seed(0), s(0.5), o_min(0.25), trials(1)
nlohmann::json run_command(const std::string& command,
                           const nlohmann::json& config);

}  // namespace prid

#endif  // PRID_CORE_PIPELINE_HPP_
