#include "dsaa/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace dsaa {

namespace {

constexpr char kMagic[8] = {'D', 'S', 'A', 'A', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

struct File {
  FILE* f = nullptr;
  explicit File(FILE* handle) : f(handle) {}
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

void write_bytes(FILE* f, const void* p, size_t n) {
  if (std::fwrite(p, 1, n, f) != n)
    throw std::runtime_error("checkpoint: write failed");
}

void read_bytes(FILE* f, void* p, size_t n) {
  if (std::fread(p, 1, n, f) != n)
    throw std::runtime_error("checkpoint: truncated file");
}

template <typename T>
void write_pod(FILE* f, T v) {
  write_bytes(f, &v, sizeof(T));
}

template <typename T>
T read_pod(FILE* f) {
  T v;
  read_bytes(f, &v, sizeof(T));
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors) {
  File file(std::fopen(path.c_str(), "wb"));
  if (!file.f) throw std::runtime_error("checkpoint: cannot open " + path);
  write_bytes(file.f, kMagic, sizeof(kMagic));
  write_pod<uint32_t>(file.f, kVersion);
  write_pod<uint64_t>(file.f, tensors.size());
  for (const auto& t : tensors) {
    write_pod<uint32_t>(file.f, static_cast<uint32_t>(t.name.size()));
    write_bytes(file.f, t.name.data(), t.name.size());
    write_pod<uint32_t>(file.f, static_cast<uint32_t>(t.dims.size()));
    uint64_t n = 1;
    for (uint64_t d : t.dims) {
      write_pod<uint64_t>(file.f, d);
      n *= d;
    }
    if (n != t.data.size())
      throw std::invalid_argument("checkpoint: dims do not match data size for " + t.name);
    write_bytes(file.f, t.data.data(), n * sizeof(double));
  }
}

std::vector<NamedTensor> load_checkpoint(const std::string& path) {
  File file(std::fopen(path.c_str(), "rb"));
  if (!file.f) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  read_bytes(file.f, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const uint32_t version = read_pod<uint32_t>(file.f);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const uint64_t count = read_pod<uint64_t>(file.f);
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    NamedTensor t;
    const uint32_t name_len = read_pod<uint32_t>(file.f);
    t.name.resize(name_len);
    read_bytes(file.f, t.name.data(), name_len);
    const uint32_t ndims = read_pod<uint32_t>(file.f);
    uint64_t n = 1;
    for (uint32_t d = 0; d < ndims; ++d) {
      t.dims.push_back(read_pod<uint64_t>(file.f));
      n *= t.dims.back();
    }
    t.data.resize(n);
    read_bytes(file.f, t.data.data(), n * sizeof(double));
    tensors.push_back(std::move(t));
  }
  return tensors;
}

void mlp_to_tensors(const std::string& prefix, const Mlp& net,
                    std::vector<NamedTensor>& out) {
  const auto& layers = net.layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    NamedTensor w;
    w.name = prefix + ".w" + std::to_string(l);
    w.dims = {static_cast<uint64_t>(layers[l].w.rows),
              static_cast<uint64_t>(layers[l].w.cols)};
    w.data = layers[l].w.data;
    out.push_back(std::move(w));
    NamedTensor b;
    b.name = prefix + ".b" + std::to_string(l);
    b.dims = {static_cast<uint64_t>(layers[l].b.size())};
    b.data = layers[l].b;
    out.push_back(std::move(b));
  }
}

void mlp_from_tensors(const std::string& prefix, const std::vector<NamedTensor>& tensors,
                      Mlp& net) {
  auto find = [&](const std::string& name) -> const NamedTensor& {
    for (const auto& t : tensors)
      if (t.name == name) return t;
    throw std::runtime_error("checkpoint: missing tensor " + name);
  };
  auto& layers = net.layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    const NamedTensor& w = find(prefix + ".w" + std::to_string(l));
    if (w.dims.size() != 2 || w.dims[0] != static_cast<uint64_t>(layers[l].w.rows) ||
        w.dims[1] != static_cast<uint64_t>(layers[l].w.cols))
      throw std::runtime_error("checkpoint: shape mismatch for " + w.name);
    layers[l].w.data = w.data;
    const NamedTensor& b = find(prefix + ".b" + std::to_string(l));
    if (b.dims.size() != 1 || b.dims[0] != layers[l].b.size())
      throw std::runtime_error("checkpoint: shape mismatch for " + b.name);
    layers[l].b = b.data;
  }
}

}  // namespace dsaa
