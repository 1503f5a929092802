// Copyright 2026 The Prodstage Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef PRODSTAGE_PNG_IO_H_
#define PRODSTAGE_PNG_IO_H_

#include <filesystem>

#include "prodstage/image.h"

namespace prodstage {

// Decodes any 8/16-bit PNG into 8-bit RGB; alpha is dropped and palette or
// gray inputs are expanded.
Image ReadPng(const std::filesystem::path& path);
// 8-bit RGB, non-interlaced.
void WritePng(const std::filesystem::path& path, const Image& img);

// Masks are single-channel 8-bit PNGs: 0 background, 255 foreground. On read
// any value >= 128 decodes to true; RGB inputs use their first channel.
BinaryMask ReadMaskPng(const std::filesystem::path& path);
void WriteMaskPng(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace prodstage

#endif  // PRODSTAGE_PNG_IO_H_
