#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabletitle/corpus/encode.hpp"
#include "tabletitle/decoder/beam.hpp"
#include "tabletitle/seqmodel/checkpoint.hpp"

namespace tabletitle::decoder {

using seqmodel::GenMode;

std::string_view mode_name(GenMode mode);
// Accepts copy_generate, copy_only, generate_only; throws Error(Usage).
GenMode parse_mode(std::string_view name);

struct GenerateOptions {
  GenMode mode = GenMode::CopyGenerate;
  BeamOptions beam;
  corpus::FieldConfig fields;
  bool debug_oov = false;      // render copied OOV tokens as __token__
  bool dedup_surface = true;   // drop tokens whose surface form already appeared
};

struct GeneratedTitle {
  std::string title;
  std::vector<std::string> tokens;  // surface tokens of `title`, no debug decoration
  std::vector<TokenId> ids;         // extended ids, STOP removed, after dedup
  double score = 0;
  corpus::EncodedExample source;
};

// Decodes an already encoded source.
GeneratedTitle generate_from_example(const seqmodel::Checkpoint& checkpoint, const corpus::Vocabulary& vocab,
                                     const corpus::EncodedExample& source, const GenerateOptions& options);

// linearize, encode, beam search with p_gen pinned per mode, render.
// Throws Error(EmptyInput) when linearization yields no tokens.
GeneratedTitle generate_title(const seqmodel::Checkpoint& checkpoint, const corpus::Vocabulary& vocab,
                              const corpus::TableContext& context, const GenerateOptions& options);

}  // namespace tabletitle::decoder
