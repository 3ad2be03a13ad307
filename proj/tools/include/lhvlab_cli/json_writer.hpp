#pragma once

// Minimal streaming JSON writer with fixed number formatting (%.17g), so
// reports are byte-identical across runs and every double round-trips.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lhvlab/linalg.hpp"

namespace lhvlab::cli {

class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();

  JsonWriter& value(Complex z);
  JsonWriter& value(std::span<const double> v);
  JsonWriter& value(std::span<const std::uint32_t> v);
  JsonWriter& value(const ComplexMatrix& m);

  const std::string& str() const noexcept { return out_; }

 private:
  void separate();
  void newline();
  void write_string(std::string_view v);

  std::string out_;
  // One entry per open container: number of members written so far.
  std::vector<std::size_t> counts_;
  bool after_key_ = false;
};

std::string format_double(double v);

}  // namespace lhvlab::cli
