// Parameter checkpoints: a flat binary list of named tensors with a
// versioned header. Round trips are bit-exact.
//
// Layout (little-endian):
//   magic   "DSAACKPT" (8 bytes)
//   version u32 (= 1)
//   count   u64
//   per tensor: name_len u32, name bytes, ndims u32, dims u64[ndims],
//               data f64[prod(dims)]
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsaa/mlp.hpp"

namespace dsaa {

struct NamedTensor {
  std::string name;
  std::vector<uint64_t> dims;
  std::vector<double> data;
};

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

// Appends one tensor per parameter block: <prefix>.w0, <prefix>.b0, ...
void mlp_to_tensors(const std::string& prefix, const Mlp& net,
                    std::vector<NamedTensor>& out);
// Loads parameters back into an identically shaped net.
void mlp_from_tensors(const std::string& prefix, const std::vector<NamedTensor>& tensors,
                      Mlp& net);

}  // namespace dsaa
