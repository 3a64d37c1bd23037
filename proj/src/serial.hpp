#pragma once

// Little-endian binary readers/writers shared by the file-format code.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tnav/error.hpp"

namespace tnav::serial {

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot open for writing: " + path);
  }

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void magic(const char tag[4]) { bytes(tag, 4); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u16(std::uint16_t v) { put_le(v); }
  void u32(std::uint32_t v) { put_le(v); }
  void u64(std::uint64_t v) { put_le(v); }
  void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

  void close() {
    out_.close();
    if (!out_) throw IoError("write failure: " + path_);
  }

 private:
  template <typename T>
  void put_le(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    }
    bytes(buf, sizeof(T));
  }

  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open for reading: " + path);
  }

  void bytes(void* data, std::size_t n, const char* field) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(std::string("short payload reading '") + field + "' in " + path_);
    }
  }
  void expect_magic(const char tag[4]) {
    char buf[4];
    bytes(buf, 4, "magic");
    if (std::memcmp(buf, tag, 4) != 0) {
      throw FormatError("bad magic in " + path_ + " (expected " + std::string(tag, 4) + ")");
    }
  }
  std::uint8_t u8(const char* field) {
    std::uint8_t v;
    bytes(&v, 1, field);
    return v;
  }
  std::uint16_t u16(const char* field) { return get_le<std::uint16_t>(field); }
  std::uint32_t u32(const char* field) { return get_le<std::uint32_t>(field); }
  std::uint64_t u64(const char* field) { return get_le<std::uint64_t>(field); }
  float f32(const char* field) { return std::bit_cast<float>(get_le<std::uint32_t>(field)); }
  double f64(const char* field) { return std::bit_cast<double>(get_le<std::uint64_t>(field)); }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  const std::string& path() const { return path_; }

 private:
  template <typename T>
  T get_le(const char* field) {
    unsigned char buf[sizeof(T)];
    bytes(buf, sizeof(T), field);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
    }
    return v;
  }

  std::ifstream in_;
  std::string path_;
};

}  // namespace tnav::serial
