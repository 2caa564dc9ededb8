#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "acgd/common.hpp"

namespace acgd {

// Little-endian flat binary writer/reader for checkpoints. The host is
// assumed little-endian (checked at startup of the serializers).
class BinWriter {
 public:
  void u32(uint32_t v) { raw(&v, sizeof(v)); }
  void u64(uint64_t v) { raw(&v, sizeof(v)); }
  void i64(int64_t v) { raw(&v, sizeof(v)); }
  void f64(double v) { raw(&v, sizeof(v)); }
  void boolean(bool v) { u32(v ? 1u : 0u); }

  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }

  void f64_vec(const std::vector<double>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
  }

  void u64_vec(const std::vector<uint64_t>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(uint64_t));
  }

  void f64_span(const double* data, int64_t n) {
    u64(static_cast<uint64_t>(n));
    if (n > 0) raw(data, static_cast<size_t>(n) * sizeof(double));
  }

  const std::string& bytes() const { return buf_; }

 private:
  void raw(const void* p, size_t n) { buf_.append(static_cast<const char*>(p), n); }
  std::string buf_;
};

class BinReader {
 public:
  explicit BinReader(std::string bytes) : buf_(std::move(bytes)) {}

  uint32_t u32() { return read_pod<uint32_t>(); }
  uint64_t u64() { return read_pod<uint64_t>(); }
  int64_t i64() { return read_pod<int64_t>(); }
  double f64() { return read_pod<double>(); }
  bool boolean() { return u32() != 0; }

  std::string str() {
    const uint64_t n = u64();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::vector<double> f64_vec() {
    const uint64_t n = u64();
    std::vector<double> v(n);
    need(n * sizeof(double));
    std::memcpy(v.data(), buf_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return v;
  }

  std::vector<uint64_t> u64_vec() {
    const uint64_t n = u64();
    std::vector<uint64_t> v(n);
    need(n * sizeof(uint64_t));
    std::memcpy(v.data(), buf_.data() + pos_, n * sizeof(uint64_t));
    pos_ += n * sizeof(uint64_t);
    return v;
  }

  void f64_into(double* data, int64_t expect) {
    const uint64_t n = u64();
    if (static_cast<int64_t>(n) != expect) {
      throw ParseError("checkpoint tensor length mismatch: expected " + std::to_string(expect) +
                       ", found " + std::to_string(n));
    }
    need(n * sizeof(double));
    std::memcpy(data, buf_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }

  bool at_end() const { return pos_ == buf_.size(); }

 private:
  template <typename T>
  T read_pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void need(uint64_t n) {
    if (pos_ + n > buf_.size()) throw ParseError("checkpoint truncated");
  }

  std::string buf_;
  size_t pos_ = 0;
};

}  // namespace acgd
