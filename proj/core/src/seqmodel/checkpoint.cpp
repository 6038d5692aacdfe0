#include "tabletitle/seqmodel/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>

#include "tabletitle/error.hpp"

namespace tabletitle::seqmodel {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'T', 'T', 'G', 'C', 'K', 'P', 'T', '\0'};

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void bytes(const char* data, std::size_t n) { out_.append(data, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  template <typename T>
  T get() {
    T value;
    std::memcpy(&value, need(sizeof(T)), sizeof(T));
    return value;
  }
  std::string string(std::size_t n) { return std::string(need(n), n); }
  bool done() const { return pos_ == in_.size(); }

 private:
  const char* need(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::BadFormat, "checkpoint truncated");
    const char* p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  const std::string& in_;
  std::size_t pos_ = 0;
};

void write_hyper(Writer& w, const Hyperparams& h, std::uint64_t vocab) {
  w.put<std::uint64_t>(vocab);
  w.put<std::uint64_t>(h.embedding_dim);
  w.put<std::uint64_t>(h.hidden_dim);
  w.put<double>(h.learning_rate);
  w.put<double>(h.gradient_clip);
  w.put<std::uint64_t>(h.batch_size);
  w.put<std::uint64_t>(h.max_source_len);
  w.put<double>(h.init_magnitude);
  w.put<double>(h.accumulator_init);
  w.put<std::uint64_t>(h.patience);
  w.put<std::uint64_t>(h.seed);
  w.put<std::uint8_t>(h.gen_bias ? 1 : 0);
  w.put<std::uint64_t>(h.eval_interval);
  w.put<std::uint64_t>(h.max_epochs);
  w.put<double>(h.target_loss);
}

Hyperparams read_hyper(Reader& r, std::uint64_t& vocab) {
  Hyperparams h;
  vocab = r.get<std::uint64_t>();
  h.embedding_dim = r.get<std::uint64_t>();
  h.hidden_dim = r.get<std::uint64_t>();
  h.learning_rate = r.get<double>();
  h.gradient_clip = r.get<double>();
  h.batch_size = r.get<std::uint64_t>();
  h.max_source_len = r.get<std::uint64_t>();
  h.init_magnitude = r.get<double>();
  h.accumulator_init = r.get<double>();
  h.patience = r.get<std::uint64_t>();
  h.seed = r.get<std::uint64_t>();
  h.gen_bias = r.get<std::uint8_t>() != 0;
  h.eval_interval = r.get<std::uint64_t>();
  h.max_epochs = r.get<std::uint64_t>();
  h.target_loss = r.get<double>();
  return h;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ck) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kCheckpointVersion);
  write_hyper(w, ck.hyper, ck.params.vocab_size());
  std::uint32_t count = 0;
  for_each_tensor(ck.params, [&](const TensorInfo&, const Mat<float>&) { ++count; });
  w.put<std::uint32_t>(count);
  for_each_tensor(ck.params, [&](const TensorInfo& info, const Mat<float>& t) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(info.name.size()));
    w.bytes(info.name.data(), info.name.size());
    if (info.vector) {
      w.put<std::uint32_t>(1);
      w.put<std::uint32_t>(static_cast<std::uint32_t>(t.size()));
    } else {
      w.put<std::uint32_t>(2);
      w.put<std::uint32_t>(static_cast<std::uint32_t>(t.rows()));
      w.put<std::uint32_t>(static_cast<std::uint32_t>(t.cols()));
    }
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) w.put<float>(t(r, c));
  });
  return w.take();
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  if (r.string(sizeof kMagic) != std::string(kMagic, sizeof kMagic))
    throw Error(ErrorCode::BadFormat, "not a checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw Error(ErrorCode::BadFormat, "unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  std::uint64_t vocab = 0;
  ck.hyper = read_hyper(r, vocab);
  if (vocab == 0 || ck.hyper.embedding_dim == 0 || ck.hyper.hidden_dim == 0 || vocab > (1u << 26) ||
      ck.hyper.embedding_dim > 1u << 16 || ck.hyper.hidden_dim > 1u << 16)
    throw Error(ErrorCode::BadFormat, "checkpoint dimensions out of range");
  ck.params = make_params<float>(vocab, ck.hyper.embedding_dim, ck.hyper.hidden_dim);
  const auto count = r.get<std::uint32_t>();
  std::uint32_t expected = 0;
  for_each_tensor(ck.params, [&](const TensorInfo&, const Mat<float>&) { ++expected; });
  if (count != expected) throw Error(ErrorCode::BadFormat, "unexpected tensor count");
  for_each_tensor(ck.params, [&](const TensorInfo& info, Mat<float>& t) {
    const std::string name = r.string(r.get<std::uint32_t>());
    if (name != info.name) throw Error(ErrorCode::BadFormat, "expected tensor " + std::string(info.name) + ", got " + name);
    const auto rank = r.get<std::uint32_t>();
    bool ok;
    if (info.vector) {
      ok = rank == 1 && r.get<std::uint32_t>() == t.size();
    } else {
      ok = rank == 2 && r.get<std::uint32_t>() == t.rows();
      ok = ok && r.get<std::uint32_t>() == t.cols();
    }
    if (!ok) throw Error(ErrorCode::BadFormat, "shape mismatch for tensor " + name);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = r.get<float>();
  });
  if (!r.done()) throw Error(ErrorCode::BadFormat, "trailing bytes after checkpoint");
  return ck;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  const std::string bytes = serialize_checkpoint(checkpoint);
  std::ofstream out(path, std::ios::binary);
  if (!out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error(ErrorCode::IoError, "cannot write " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace tabletitle::seqmodel
