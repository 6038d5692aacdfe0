#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/corpus/vocab.hpp"
#include "tabletitle/decoder/beam.hpp"
#include "tabletitle/evalkit/rouge.hpp"
#include "tabletitle/extractor/extract.hpp"
#include "tabletitle/extractor/html.hpp"
#include "tabletitle/random.hpp"
#include "tabletitle/seqmodel/model.hpp"
#include "tabletitle/seqmodel/params.hpp"

using namespace tabletitle;

namespace {

std::string sample_page(std::size_t rows) {
  std::string html =
      "<html><head><title>Nicole Eggert - Wikipedia</title></head><body>"
      "<h1>Nicole Eggert</h1><p>An actress &amp; producer.</p><h2>Filmography[edit]</h2>"
      "<table><tr><th>Year</th><th>Title</th><th>Role</th></tr>";
  for (std::size_t i = 0; i < rows; ++i)
    html += "<tr><td>" + std::to_string(1980 + i) + "</td><td>Film number " + std::to_string(i) +
            "</td><td>Herself</td></tr>";
  return html + "</table><p>See also other lists.</p></body></html>";
}

// Random source of `n` in-vocabulary tokens.
corpus::EncodedExample random_example(std::size_t vocab, std::size_t n, std::size_t target, Rng& rng) {
  corpus::EncodedExample ex;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<corpus::TokenId>(corpus::kFirstMarkerId + rng.below(vocab - corpus::kFirstMarkerId));
    ex.source_ids.push_back(id);
    ex.source_extended_ids.push_back(id);
  }
  for (std::size_t i = 0; i < target; ++i)
    ex.target_ids.push_back(ex.source_ids[rng.below(n)]);
  ex.target_ids.push_back(corpus::kStopId);
  return ex;
}

seqmodel::Params<float> model(std::size_t vocab, std::size_t dim) {
  seqmodel::Hyperparams h;
  h.embedding_dim = dim / 2;
  h.hidden_dim = dim;
  return seqmodel::init_params<float>(h, vocab, 3);
}

void BM_ParseAndExtract(benchmark::State& state) {
  const std::string html = sample_page(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto doc = extractor::parse_document(html);
    benchmark::DoNotOptimize(extractor::extract_all(doc, "u"));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * html.size()));
}
BENCHMARK(BM_ParseAndExtract)->Arg(10)->Arg(200);

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 200; ++i) text += "Word" + std::to_string(i) + ", (Mixed) CASE-text; ";
  for (auto _ : state) benchmark::DoNotOptimize(corpus::tokenize(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_ForwardBackward(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto params = model(2000, dim);
  Rng rng(5);
  std::vector<corpus::EncodedExample> batch;
  for (int i = 0; i < 8; ++i) batch.push_back(random_example(2000, 150, 8, rng));
  for (auto _ : state) {
    const auto fwd = seqmodel::forward_loss(params, batch);
    benchmark::DoNotOptimize(seqmodel::backward(params, fwd));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * batch.size()));
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BeamSearch(benchmark::State& state) {
  const auto params = model(2000, 64);
  Rng rng(6);
  const auto source = random_example(2000, 150, 0, rng);
  decoder::BeamOptions options;
  options.beam = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decoder::beam_search(params, source, {}, options));
}
BENCHMARK(BM_BeamSearch)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Rouge(benchmark::State& state) {
  Rng rng(7);
  std::vector<std::string> a, b;
  for (int i = 0; i < 20; ++i) {
    a.push_back(std::string(1, static_cast<char>('a' + rng.below(10))));
    b.push_back(std::string(1, static_cast<char>('a' + rng.below(10))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(evalkit::score(a, b));
}
BENCHMARK(BM_Rouge);

}  // namespace

BENCHMARK_MAIN();
