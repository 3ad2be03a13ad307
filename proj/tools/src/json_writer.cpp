#include "lhvlab_cli/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace lhvlab::cli {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::newline() {
  out_ += '\n';
  out_.append(2 * counts_.size(), ' ');
}

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (counts_.empty()) return;
  if (counts_.back()++ > 0) out_ += ',';
  newline();
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  counts_.push_back(0);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool empty = counts_.back() == 0;
  counts_.pop_back();
  if (!empty) newline();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  counts_.push_back(0);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool empty = counts_.back() == 0;
  counts_.pop_back();
  if (!empty) newline();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separate();
  write_string(k);
  out_ += ": ";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separate();
  write_string(v);
  return *this;
}

void JsonWriter::write_string(std::string_view v) {
  out_ += '"';
  for (const char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

// Compact forms: complex numbers, vectors and matrix rows stay on one line.
JsonWriter& JsonWriter::value(Complex z) {
  separate();
  out_ += '[' + format_double(z.real()) + ", " + format_double(z.imag()) + ']';
  return *this;
}

JsonWriter& JsonWriter::value(std::span<const double> v) {
  separate();
  out_ += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out_ += ", ";
    out_ += format_double(v[i]);
  }
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::value(std::span<const std::uint32_t> v) {
  separate();
  out_ += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out_ += ", ";
    out_ += std::to_string(v[i]);
  }
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::value(const ComplexMatrix& m) {
  begin_array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    separate();
    out_ += '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out_ += ", ";
      out_ += '[' + format_double(m(r, c).real()) + ", " + format_double(m(r, c).imag()) + ']';
    }
    out_ += ']';
  }
  return end_array();
}

}  // namespace lhvlab::cli
