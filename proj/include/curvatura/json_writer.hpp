#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace curvatura {

/// Fixed-precision formatting used by every emitter: 12 significant digits,
/// C locale, byte-stable for a given value.
std::string fmt_double(double v);

/// Streaming writer for ordered JSON objects/arrays. Key order follows call
/// order, numbers are printed with fmt_double, so output is byte-stable.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s);
  JsonWriter& null();
  JsonWriter& vector(const Eigen::VectorXd& v);
  JsonWriter& matrix(const Eigen::MatrixXd& m);

  std::string str() const { return out_; }

private:
  void separator();
  void escape_into(const std::string& s);

  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

}  // namespace curvatura
