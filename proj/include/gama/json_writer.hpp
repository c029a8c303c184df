#ifndef GAMA_JSON_WRITER_HPP
#define GAMA_JSON_WRITER_HPP

#include <string>
#include <vector>

namespace gama {

// Minimal ordered JSON emitter for report files. Fields appear in insertion
// order and doubles are printed with 17 significant digits, so identical
// inputs produce identical bytes; non-finite doubles become null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::vector<double>& v);

  const std::string& str() const { return out_; }

 private:
  void separate();
  void push_container();
  void pop_container();

  std::string out_;
  std::vector<bool> needs_comma_;
  bool after_key_ = false;
};

}  // namespace gama

#endif  // GAMA_JSON_WRITER_HPP
