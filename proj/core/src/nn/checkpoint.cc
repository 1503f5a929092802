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
#include "prodstage/nn/checkpoint.h"

#include <bit>
#include <fstream>
#include <sstream>

#include "prodstage/error.h"

namespace prodstage::nn {

namespace {

constexpr std::string_view kMagic = "STKCKPT";

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutString(std::string& out, std::string_view s) {
  PutU32(out, static_cast<uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}
  std::string_view Take(std::size_t n) {
    if (pos_ + n > bytes_.size()) Fail(ErrorCode::kParse, "checkpoint truncated");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  uint32_t U32() {
    auto b = Take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<uint8_t>(b[i])) << (8 * i);
    }
    return v;
  }
  std::string String() { return std::string(Take(U32())); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::Serialize() const {
  std::string out(kMagic);
  PutU32(out, kCheckpointMajorVersion);
  PutU32(out, kCheckpointMinorVersion);
  PutString(out, kind);
  PutString(out, config_json);
  PutU32(out, static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    PutString(out, name);
    PutU32(out, static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) PutU32(out, static_cast<uint32_t>(d));
    PutU32(out, static_cast<uint32_t>(t.values.size()));
    for (float v : t.values) PutU32(out, std::bit_cast<uint32_t>(v));
  }
  return out;
}

Checkpoint Checkpoint::Deserialize(std::string_view bytes) {
  Reader in(bytes);
  if (in.Take(kMagic.size()) != kMagic) {
    Fail(ErrorCode::kParse, "not a checkpoint (bad magic)");
  }
  const uint32_t major = in.U32();
  in.U32();  // minor
  if (major != kCheckpointMajorVersion) {
    Fail(ErrorCode::kParse,
         "unsupported checkpoint major version " + std::to_string(major));
  }
  Checkpoint ckpt;
  ckpt.kind = in.String();
  ckpt.config_json = in.String();
  const uint32_t count = in.U32();
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = in.String();
    NamedTensor t;
    const uint32_t rank = in.U32();
    for (uint32_t r = 0; r < rank; ++r) t.shape.push_back(static_cast<int>(in.U32()));
    const uint32_t n = in.U32();
    t.values.resize(n);
    for (uint32_t j = 0; j < n; ++j) t.values[j] = std::bit_cast<float>(in.U32());
    ckpt.tensors.emplace(std::move(name), std::move(t));
  }
  if (!in.done()) Fail(ErrorCode::kParse, "trailing bytes in checkpoint");
  return ckpt;
}

void Checkpoint::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write checkpoint " + path.string());
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint Checkpoint::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Deserialize(buffer.str());
}

void StoreParams(const std::vector<ParamRef>& params, Checkpoint* ckpt) {
  for (const ParamRef& p : params) {
    ckpt->tensors[p.name] = NamedTensor{p.shape, *p.value};
  }
}

void RestoreParams(const Checkpoint& ckpt, const std::vector<ParamRef>& params) {
  for (const ParamRef& p : params) {
    auto it = ckpt.tensors.find(p.name);
    if (it == ckpt.tensors.end()) {
      Fail(ErrorCode::kParse, "checkpoint is missing tensor " + p.name);
    }
    if (it->second.shape != p.shape ||
        it->second.values.size() != p.value->size()) {
      Fail(ErrorCode::kParse, "checkpoint tensor " + p.name + " has wrong shape");
    }
    *p.value = it->second.values;
  }
}

}  // namespace prodstage::nn
