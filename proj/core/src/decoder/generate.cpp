#include "tabletitle/decoder/generate.hpp"

#include <unordered_set>

#include "tabletitle/error.hpp"

namespace tabletitle::decoder {

std::string_view mode_name(GenMode mode) {
  switch (mode) {
    case GenMode::CopyGenerate: return "copy_generate";
    case GenMode::CopyOnly: return "copy_only";
    case GenMode::GenerateOnly: return "generate_only";
  }
  return "copy_generate";
}

GenMode parse_mode(std::string_view name) {
  if (name == "copy_generate") return GenMode::CopyGenerate;
  if (name == "copy_only") return GenMode::CopyOnly;
  if (name == "generate_only") return GenMode::GenerateOnly;
  throw Error(ErrorCode::Usage, "unknown mode '" + std::string(name) + "'");
}

GeneratedTitle generate_from_example(const seqmodel::Checkpoint& checkpoint, const corpus::Vocabulary& vocab,
                                     const corpus::EncodedExample& source, const GenerateOptions& options) {
  if (vocab.size() != checkpoint.params.vocab_size())
    throw Error(ErrorCode::ShapeError, "vocabulary has " + std::to_string(vocab.size()) + " entries, checkpoint " +
                                           std::to_string(checkpoint.params.vocab_size()));
  seqmodel::ModelOptions model;
  model.mode = options.mode;
  model.gen_bias = checkpoint.hyper.gen_bias;
  const BeamResult found = beam_search(checkpoint.params, source, model, options.beam);

  GeneratedTitle out;
  out.source = source;
  out.score = found.best.score;
  const auto vocab_size = static_cast<TokenId>(vocab.size());
  std::unordered_set<std::string> seen;
  for (TokenId id : found.best.title_ids()) {
    if (id == corpus::kPadId || id == corpus::kStartId || id == corpus::kUnkId || corpus::is_marker_id(id)) {
      out.ids.push_back(id);
      continue;
    }
    const std::string& surface =
        id >= vocab_size ? source.oov_tokens.at(static_cast<std::size_t>(id - vocab_size)) : vocab.token(id);
    if (options.dedup_surface && !seen.insert(surface).second) continue;
    out.ids.push_back(id);
    out.tokens.push_back(surface);
  }
  out.title = corpus::render_title(out.ids, vocab, source.oov_tokens, options.debug_oov);
  return out;
}

GeneratedTitle generate_title(const seqmodel::Checkpoint& checkpoint, const corpus::Vocabulary& vocab,
                              const corpus::TableContext& context, const GenerateOptions& options) {
  const corpus::Tokens source = corpus::linearize(context, options.fields);
  if (source.empty()) throw Error(ErrorCode::EmptyInput, "table context has no usable fields");
  return generate_from_example(checkpoint, vocab, corpus::encode_source(source, vocab), options);
}

}  // namespace tabletitle::decoder
