#include "sw/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "tensor container I/O assumes a little-endian host");

namespace sw {

namespace {

constexpr char kTensorMagic[8] = {'S', 'W', 'T', 'E', 'N', 'S', 'R', '0'};
constexpr char kArchiveMagic[8] = {'S', 'W', 'A', 'R', 'C', 'H', 'V', '0'};

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw std::runtime_error("truncated container header");
  return v;
}

template <class T>
void write_tensor_impl(std::ostream& os, const Tensor<T>& t, const char* dtype) {
  nlohmann::ordered_json header;
  header["dtype"] = dtype;
  header["shape"] = t.shape();
  const std::string hs = header.dump();
  os.write(kTensorMagic, 8);
  write_u32(os, static_cast<uint32_t>(hs.size()));
  os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  os.write(reinterpret_cast<const char*>(t.data()),
           static_cast<std::streamsize>(t.numel() * sizeof(T)));
  if (!os) throw std::runtime_error("tensor write failed");
}

template <class T>
Tensor<T> read_payload(std::istream& is, Shape shape) {
  Tensor<T> t(std::move(shape));
  is.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.numel() * sizeof(T)));
  if (!is) throw std::runtime_error("truncated tensor payload");
  return t;
}

}  // namespace

void write_tensor(std::ostream& os, const Tensor32& t) { write_tensor_impl(os, t, "f32"); }
void write_tensor(std::ostream& os, const Tensor64& t) { write_tensor_impl(os, t, "f64"); }

void write_tensor_file(const std::string& path, const Tensor32& t) {
  std::ostringstream os(std::ios::binary);
  write_tensor(os, t);
  atomic_write_file(path, os.str());
}

void write_tensor_file(const std::string& path, const Tensor64& t) {
  std::ostringstream os(std::ios::binary);
  write_tensor(os, t);
  atomic_write_file(path, os.str());
}

AnyTensor read_tensor(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kTensorMagic, 8) != 0)
    throw std::runtime_error("not a tensor container (bad magic)");
  const uint32_t hlen = read_u32(is);
  std::string hs(hlen, '\0');
  is.read(hs.data(), hlen);
  if (!is) throw std::runtime_error("truncated container header");
  const auto header = nlohmann::json::parse(hs);
  const std::string dtype = header.at("dtype").get<std::string>();
  Shape shape = header.at("shape").get<Shape>();
  if (dtype == "f32") return read_payload<float>(is, std::move(shape));
  if (dtype == "f64") return read_payload<double>(is, std::move(shape));
  throw std::runtime_error("unknown tensor dtype: " + dtype);
}

AnyTensor read_tensor_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open tensor file: " + path);
  return read_tensor(is);
}

void write_archive_file(const std::string& path, const TensorArchive& archive) {
  nlohmann::ordered_json manifest;
  manifest["meta"] = archive.meta_json.empty() ? nlohmann::json::object()
                                               : nlohmann::json::parse(archive.meta_json);
  auto names = nlohmann::json::array();
  for (const auto& [name, _] : archive.entries) names.push_back(name);
  manifest["entries"] = names;
  const std::string ms = manifest.dump();

  std::ostringstream os(std::ios::binary);
  os.write(kArchiveMagic, 8);
  write_u32(os, static_cast<uint32_t>(ms.size()));
  os.write(ms.data(), static_cast<std::streamsize>(ms.size()));
  for (const auto& [_, tensor] : archive.entries)
    std::visit([&](const auto& t) { write_tensor(os, t); }, tensor);
  atomic_write_file(path, os.str());
}

TensorArchive read_archive_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open archive: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kArchiveMagic, 8) != 0)
    throw std::runtime_error("not a tensor archive (bad magic): " + path);
  const uint32_t mlen = read_u32(is);
  std::string ms(mlen, '\0');
  is.read(ms.data(), mlen);
  if (!is) throw std::runtime_error("truncated archive manifest");
  const auto manifest = nlohmann::json::parse(ms);

  TensorArchive archive;
  archive.meta_json = manifest.at("meta").dump();
  for (const auto& name : manifest.at("entries"))
    archive.entries.emplace(name.get<std::string>(), read_tensor(is));
  return archive;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sw
