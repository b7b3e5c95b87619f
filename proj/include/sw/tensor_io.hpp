#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>

#include "sw/tensor.hpp"

namespace sw {

/// Tensor container format:
///   bytes 0..7   magic "SWTENSR0"
///   bytes 8..11  little-endian uint32 header length
///   header       UTF-8 JSON {"dtype":"f32"|"f64","shape":[...]}
///   payload      raw little-endian row-major values
/// Round-trips are bit-exact.
void write_tensor(std::ostream& os, const Tensor32& t);
void write_tensor(std::ostream& os, const Tensor64& t);
void write_tensor_file(const std::string& path, const Tensor32& t);
void write_tensor_file(const std::string& path, const Tensor64& t);

using AnyTensor = std::variant<Tensor32, Tensor64>;

AnyTensor read_tensor(std::istream& is);
AnyTensor read_tensor_file(const std::string& path);

template <class T>
Tensor<T> read_tensor_file_as(const std::string& path) {
  AnyTensor any = read_tensor_file(path);
  if (auto* t = std::get_if<Tensor<T>>(&any)) return std::move(*t);
  throw std::runtime_error("tensor file dtype does not match requested type: " + path);
}

/// Archive of named tensors: magic "SWARCHV0", uint32 manifest length, a JSON
/// manifest {"meta": {...}, "entries": ["name", ...]}, then one tensor
/// container per entry, in manifest order.
struct TensorArchive {
  std::string meta_json;  // caller-defined manifest metadata
  std::map<std::string, AnyTensor> entries;
};

void write_archive_file(const std::string& path, const TensorArchive& archive);
TensorArchive read_archive_file(const std::string& path);

/// Writes to <path>.tmp then renames, so readers never see partial files.
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace sw
