#pragma once

#include <cstdint>
#include <string>

#include "tabletitle/seqmodel/hyperparams.hpp"
#include "tabletitle/seqmodel/params.hpp"

namespace tabletitle::seqmodel {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Hyperparams hyper;
  ModelParams params;
};

// Layout: magic "TTGCKPT\0", u32 version, hyperparameter block, u32 tensor
// count, then per tensor u32 name length, name bytes, u32 rank, u32 dims,
// row-major little-endian float32 values.
std::string serialize_checkpoint(const Checkpoint& checkpoint);
// Throws Error(BadFormat) on anything malformed, including shapes that do
// not match the stored dimensions.
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace tabletitle::seqmodel
