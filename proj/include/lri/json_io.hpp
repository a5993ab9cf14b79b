#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lri {

// All floating-point output goes through this formatter: 17 significant
// digits guarantee that a reader parsing the text recovers the exact
// double, so a config plus the artifact version determines every output
// byte.
inline std::string fmt17(double v) {
  if (!(v == v) || v == __builtin_inf() || v == -__builtin_inf()) {
    throw std::logic_error("fmt17: refusing to serialize a non-finite value");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal ordered JSON emitter. Keys appear exactly in insertion order
// and numbers are formatted deterministically, which keeps byte-identical
// reruns achievable without post-processing.
class JsonWriter {
 public:
  explicit JsonWriter(int indent = 2) : indent_(indent) {}

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(std::string_view k) {
    separate();
    escape(k);
    out_ += indent_ > 0 ? ": " : ":";
    pending_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(fmt17(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(std::uint64_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::int64_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::string_view v) {
    separate();
    escape(v);
    return *this;
  }
  // Without this overload a string literal would convert to bool, not
  // to string_view; overload resolution prefers the standard conversion.
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null() { return raw("null"); }

  JsonWriter& kv(std::string_view k, double v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, bool v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, std::uint64_t v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, std::int64_t v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, int v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, std::string_view v) { return key(k).value(v); }
  JsonWriter& kv(std::string_view k, const char* v) { return key(k).value(v); }

  const std::string& str() const {
    if (!stack_.empty()) {
      throw std::logic_error("JsonWriter: unbalanced containers");
    }
    return out_;
  }

 private:
  JsonWriter& raw(std::string_view text) {
    separate();
    out_ += text;
    return *this;
  }

  JsonWriter& open(char ch) {
    separate();
    out_ += ch;
    stack_.push_back(0);
    return *this;
  }

  JsonWriter& close(char ch) {
    if (stack_.empty()) throw std::logic_error("JsonWriter: close without open");
    const bool had_items = stack_.back() > 0;
    stack_.pop_back();
    if (had_items) newline();
    out_ += ch;
    return *this;
  }

  // Inserts the comma/newline owed before a new item; a value directly
  // after key() is part of the current item and gets neither.
  void separate() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (stack_.empty()) return;
    if (stack_.back() > 0) out_ += ',';
    ++stack_.back();
    newline();
  }

  void newline() {
    if (indent_ <= 0) return;
    out_ += '\n';
    out_.append(indent_ * stack_.size(), ' ');
  }

  void escape(std::string_view s) {
    out_ += '"';
    for (unsigned char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (ch < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
            out_ += buf;
          } else {
            out_ += static_cast<char>(ch);
          }
      }
    }
    out_ += '"';
  }

  int indent_;
  std::string out_;
  std::vector<int> stack_;
  bool pending_key_ = false;
};

}  // namespace lri
