#include "tabletitle/decoder/beam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabletitle/error.hpp"

namespace tabletitle::decoder {

namespace {

template <typename S>
struct Live {
  Hypothesis hyp;
  seqmodel::Vec<S> h, c;
};

struct Candidate {
  std::size_t parent;
  TokenId id;
  double log_prob;
};

Hypothesis finish(Hypothesis h, bool finished) {
  h.finished = finished;
  h.score = h.tokens.empty() ? 0.0 : h.log_prob / static_cast<double>(h.tokens.size());
  return h;
}

}  // namespace

std::span<const TokenId> Hypothesis::title_ids() const {
  std::span<const TokenId> ids = tokens;
  if (!ids.empty() && ids.back() == corpus::kStopId) ids = ids.first(ids.size() - 1);
  return ids;
}

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

std::optional<Distribution> mask_step_distribution(const Distribution& p_final, std::span<const TokenId> emitted,
                                                   std::size_t step, const BeamOptions& options) {
  Distribution p = p_final;
  const auto n = p.size();
  auto zero = [&](TokenId id) {
    if (id >= 0 && id < n) p[id] = 0;
  };
  zero(corpus::kPadId);
  zero(corpus::kStartId);
  if (options.mask_markers_unk) {
    zero(corpus::kUnkId);
    for (TokenId id = corpus::kFirstMarkerId; id < corpus::kFirstRegularId; ++id) zero(id);
  }
  if (options.no_repeat)
    for (TokenId id : emitted)
      if (id != corpus::kStopId) zero(id);
  if (step < options.min_len) zero(corpus::kStopId);
  const double total = p.sum();
  if (!(total > 0)) return std::nullopt;
  if (options.renormalize) p /= total;
  return p;
}

template <typename S>
BeamResult beam_search(const seqmodel::Params<S>& params, const corpus::EncodedExample& source,
                       const seqmodel::ModelOptions& model, const BeamOptions& options) {
  if (options.beam == 0) throw Error(ErrorCode::Usage, "beam width must be positive");
  if (options.min_len > options.max_len) throw Error(ErrorCode::Usage, "min_len exceeds max_len");
  const seqmodel::DecoderSession<S> session(params, source, model);

  BeamResult result;
  std::vector<Live<S>> live;
  live.push_back({Hypothesis{}, session.initial_h(), session.initial_c()});
  std::vector<Hypothesis> dropped;
  const std::size_t per_hyp = 2 * options.beam;

  for (std::size_t step = 0; step < options.max_len && !live.empty(); ++step) {
    std::vector<Candidate> candidates;
    std::vector<seqmodel::StepOutputs<S>> outputs;
    outputs.reserve(live.size());
    for (std::size_t k = 0; k < live.size(); ++k) {
      const Hypothesis& hyp = live[k].hyp;
      const TokenId input = hyp.tokens.empty() ? corpus::kStartId : hyp.tokens.back();
      outputs.push_back(session.step(live[k].h, live[k].c, input));
      const Distribution raw = outputs.back().p_final.template cast<double>();
      const auto masked = mask_step_distribution(raw, hyp.tokens, step, options);
      if (!masked) {
        ++result.dead_ends;
        dropped.push_back(finish(hyp, false));
        continue;
      }
      std::vector<TokenId> ids;
      for (Eigen::Index i = 0; i < masked->size(); ++i)
        if ((*masked)[i] > 0) ids.push_back(static_cast<TokenId>(i));
      const std::size_t keep = std::min(per_hyp, ids.size());
      std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                        [&](TokenId a, TokenId b) {
                          if ((*masked)[a] != (*masked)[b]) return (*masked)[a] > (*masked)[b];
                          return a < b;
                        });
      for (std::size_t j = 0; j < keep; ++j)
        candidates.push_back({k, ids[j], hyp.log_prob + std::log((*masked)[ids[j]])});
    }

    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      const auto& ta = live[a.parent].hyp.tokens;
      const auto& tb = live[b.parent].hyp.tokens;
      if (ta != tb) return ta < tb;
      return a.id < b.id;
    });

    std::vector<Live<S>> next;
    for (const Candidate& cand : candidates) {
      if (next.size() >= options.beam) break;
      Hypothesis hyp = live[cand.parent].hyp;
      hyp.tokens.push_back(cand.id);
      hyp.log_prob = cand.log_prob;
      if (cand.id == corpus::kStopId) {
        result.completed.push_back(finish(std::move(hyp), true));
        if (result.completed.size() >= options.beam) break;
      } else {
        const auto& out = outputs[cand.parent];
        next.push_back({std::move(hyp), out.h, out.c});
      }
    }
    if (result.completed.size() >= options.beam) {
      live.clear();
      break;
    }
    live = std::move(next);
  }

  // Whatever is still alive has reached max_len.
  for (auto& l : live) {
    if (l.hyp.tokens.size() >= options.min_len || result.completed.empty())
      result.completed.push_back(finish(std::move(l.hyp), false));
  }
  if (result.completed.empty()) result.completed = std::move(dropped);
  if (result.completed.empty()) result.completed.push_back(finish(Hypothesis{}, false));
  std::sort(result.completed.begin(), result.completed.end(), better);
  result.best = result.completed.front();
  return result;
}

template BeamResult beam_search<float>(const seqmodel::Params<float>&, const corpus::EncodedExample&,
                                       const seqmodel::ModelOptions&, const BeamOptions&);
template BeamResult beam_search<double>(const seqmodel::Params<double>&, const corpus::EncodedExample&,
                                        const seqmodel::ModelOptions&, const BeamOptions&);

}  // namespace tabletitle::decoder
