#include "dsaa/replay.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace dsaa {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
  store_.reserve(std::min(capacity_, size_t{4096}));
}

void ReplayBuffer::push(StoredTransition t) {
  if (size_ < capacity_) {
    store_.push_back(std::move(t));
    ++size_;
  } else {
    store_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

void ReplayBuffer::clear() {
  store_.clear();
  size_ = 0;
  cursor_ = 0;
}

const StoredTransition& ReplayBuffer::at(size_t logical_index) const {
  if (logical_index >= size_) throw std::out_of_range("ReplayBuffer::at");
  if (size_ < capacity_) return store_[logical_index];
  return store_[(cursor_ + logical_index) % capacity_];
}

std::vector<const StoredTransition*> ReplayBuffer::sample(size_t batch_size,
                                                          Rng& rng) const {
  if (size_ == 0) throw std::invalid_argument("ReplayBuffer::sample: buffer is empty");
  std::vector<const StoredTransition*> out;
  out.reserve(batch_size);
  for (size_t i = 0; i < batch_size; ++i)
    out.push_back(&store_[static_cast<size_t>(rng.uniform_int(static_cast<int>(size_)))]);
  return out;
}

namespace {

constexpr char kMagic[8] = {'D', 'S', 'A', 'A', 'R', 'P', 'L', 'Y'};
constexpr uint32_t kVersion = 1;

void put(FILE* f, const void* p, size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("replay dump: write failed");
}
void get(FILE* f, void* p, size_t n) {
  if (std::fread(p, 1, n, f) != n) throw std::runtime_error("replay load: truncated");
}

}  // namespace

void ReplayBuffer::dump(const std::string& path) const {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("replay dump: cannot open " + path);
  const uint32_t obs_dim = size_ ? static_cast<uint32_t>(at(0).t.x.size()) : 0;
  put(f, kMagic, sizeof(kMagic));
  put(f, &kVersion, sizeof(kVersion));
  const uint64_t cap = capacity_, n = size_;
  put(f, &cap, sizeof(cap));
  put(f, &n, sizeof(n));
  put(f, &obs_dim, sizeof(obs_dim));
  for (size_t i = 0; i < size_; ++i) {
    const StoredTransition& st = at(i);
    if (st.t.x.size() != obs_dim || st.t.x_next.size() != obs_dim) {
      std::fclose(f);
      throw std::runtime_error("replay dump: mixed observation widths");
    }
    put(f, st.t.x.data(), obs_dim * sizeof(double));
    const int32_t a = st.t.a;
    put(f, &a, sizeof(a));
    put(f, st.t.x_next.data(), obs_dim * sizeof(double));
    put(f, &st.t.r, sizeof(double));
    const uint8_t done = st.t.done ? 1 : 0, term = st.terminated ? 1 : 0;
    const int32_t s = st.s, sg = st.s_goal, sn = st.s_next;
    put(f, &done, 1);
    put(f, &s, sizeof(s));
    put(f, &sg, sizeof(sg));
    put(f, &sn, sizeof(sn));
    put(f, &term, 1);
  }
  std::fclose(f);
}

ReplayBuffer ReplayBuffer::load(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("replay load: cannot open " + path);
  char magic[8];
  get(f, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    std::fclose(f);
    throw std::runtime_error("replay load: bad magic");
  }
  uint32_t version;
  get(f, &version, sizeof(version));
  if (version != kVersion) {
    std::fclose(f);
    throw std::runtime_error("replay load: unsupported version");
  }
  uint64_t cap, n;
  uint32_t obs_dim;
  get(f, &cap, sizeof(cap));
  get(f, &n, sizeof(n));
  get(f, &obs_dim, sizeof(obs_dim));
  ReplayBuffer buf(cap);
  for (uint64_t i = 0; i < n; ++i) {
    StoredTransition st;
    st.t.x.resize(obs_dim);
    st.t.x_next.resize(obs_dim);
    get(f, st.t.x.data(), obs_dim * sizeof(double));
    int32_t a;
    get(f, &a, sizeof(a));
    st.t.a = a;
    get(f, st.t.x_next.data(), obs_dim * sizeof(double));
    get(f, &st.t.r, sizeof(double));
    uint8_t done, term;
    int32_t s, sg, sn;
    get(f, &done, 1);
    get(f, &s, sizeof(s));
    get(f, &sg, sizeof(sg));
    get(f, &sn, sizeof(sn));
    get(f, &term, 1);
    st.t.done = done != 0;
    st.terminated = term != 0;
    st.s = s;
    st.s_goal = sg;
    st.s_next = sn;
    buf.push(std::move(st));
  }
  std::fclose(f);
  return buf;
}

}  // namespace dsaa
