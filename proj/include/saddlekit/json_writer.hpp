#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "saddlekit/extended.hpp"

namespace saddlekit {

// Minimal JSON emitter with insertion-ordered keys and floats rendered at 17
// significant digits, so identical inputs serialize byte-identically.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    separator();
    out_ += '{';
    stack_.push_back(true);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    stack_.pop_back();
    fresh_ = false;
    return *this;
  }
  JsonWriter& begin_array() {
    separator();
    out_ += '[';
    stack_.push_back(true);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    stack_.pop_back();
    fresh_ = false;
    return *this;
  }

  JsonWriter& key(const std::string& k) {
    separator();
    append_string(k);
    out_ += ':';
    fresh_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    separator();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ += buf;
    return *this;
  }
  JsonWriter& value(long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<long>(v)); }
  JsonWriter& value(unsigned long long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    separator();
    append_string(v);
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }

  // Extended payoffs render as a number or a status string.
  JsonWriter& value(const ExtendedPayoff& v) {
    switch (v.tag) {
      case ExtendedPayoff::Tag::Finite: return value(v.value);
      case ExtendedPayoff::Tag::PlusInfinity: return value("+inf");
      case ExtendedPayoff::Tag::MinusInfinity: return value("-inf");
      case ExtendedPayoff::Tag::Undefined: return value("undefined");
    }
    return *this;
  }

  const std::string& str() const { return out_; }

 private:
  void separator() {
    if (!stack_.empty() && !fresh_ && !out_.empty()) {
      char last = out_.back();
      if (last != '{' && last != '[' && last != ':') out_ += ',';
    }
    fresh_ = false;
  }

  void append_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;
  bool fresh_ = false;
};

}  // namespace saddlekit
