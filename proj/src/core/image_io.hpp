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

#ifndef PRID_CORE_IMAGE_IO_HPP_
#define PRID_CORE_IMAGE_IO_HPP_

#include <string>

#include "core/imaging.hpp"

namespace prid {

/// Loads an 8-bit PNG or PPM/PGM image, dividing intensities by 255.
/// The format is chosen by extension (.png, .ppm, .pgm).
ImageBuffer load_image(const std::string& path);

/// Stores an image as 8-bit PNG or PPM/PGM, multiplying by 255 with
/// round-half-up. 1-channel buffers become grayscale, 3-channel RGB.
void save_image(const ImageBuffer& image, const std::string& path);

}  // namespace prid

#endif  // PRID_CORE_IMAGE_IO_HPP_
