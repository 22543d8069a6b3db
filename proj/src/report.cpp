// Copyright 2026 The ci-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ciengine/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace ciengine {

namespace {

using Json = nlohmann::ordered_json;

std::string real_text(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <class T, class F>
std::string matrix_lines(const Matrix<T>& m, F cell, const std::string& indent) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (const auto& v : m.data()) {
    cells.push_back(cell(v));
    width = std::max(width, cells.back().size());
  }
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += indent;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::string& s = cells[r * m.cols() + c];
      out += std::string(width - s.size() + (c ? 2 : 0), ' ') + s;
    }
    out += "\n";
  }
  return out;
}

struct HumanText {
  std::string operator()(const std::string& s) const { return s; }
  std::string operator()(bool b) const { return b ? "true" : "false"; }
  std::string operator()(std::int64_t i) const { return std::to_string(i); }
  std::string operator()(const Rational& q) const { return to_string(q); }
  std::string operator()(double d) const { return real_text(d); }
  std::string operator()(const std::vector<Rational>& v) const {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + "]";
  }
  std::string operator()(const Matrix<Rational>& m) const {
    return "\n" + matrix_lines(m, [](const Rational& q) { return to_string(q); }, "    ");
  }
  std::string operator()(const Matrix<double>& m) const {
    return "\n" + matrix_lines(m, [](double d) { return real_text(d); }, "    ");
  }
};

struct RecordJson {
  Json& j;
  void operator()(const std::string& s) const {
    j["type"] = "text";
    j["value"] = s;
  }
  void operator()(bool b) const {
    j["type"] = "bool";
    j["value"] = b;
  }
  void operator()(std::int64_t i) const {
    j["type"] = "integer";
    j["value"] = i;
  }
  void operator()(const Rational& q) const {
    j["type"] = "rational";
    j["value"] = to_string(q);
  }
  void operator()(double d) const {
    j["type"] = "real";
    j["value"] = d;
  }
  void operator()(const std::vector<Rational>& v) const {
    j["type"] = "rational-vector";
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    j["value"] = a;
  }
  void operator()(const Matrix<Rational>& m) const {
    j["type"] = "rational-matrix";
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json a = Json::array();
    for (const auto& q : m.data()) a.push_back(to_string(q));
    j["value"] = a;
  }
  void operator()(const Matrix<double>& m) const {
    j["type"] = "real-matrix";
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["value"] = m.data();
  }
};

}  // namespace

const ReportField* Report::find(const std::string& key) const {
  for (const auto& f : fields)
    if (f.key == key) return &f;
  return nullptr;
}

std::string Report::human() const {
  std::ostringstream out;
  out << "command: " << command << "\n";
  for (const auto& f : fields) {
    const std::string text = std::visit(HumanText{}, f.value);
    if (!text.empty() && text.front() == '\n') {
      out << f.key << ":" << text;
      if (text.back() != '\n') out << "\n";
    } else {
      out << f.key << ": " << text << "\n";
    }
  }
  if (!verdict.empty()) out << "verdict: " << verdict << "\n";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  out << "time: " << buf << " s\n";
  return out.str();
}

std::string Report::records() const {
  std::string out;
  Json head;
  head["record"] = "command";
  head["value"] = command;
  out += head.dump() + "\n";
  for (const auto& f : fields) {
    Json j;
    j["record"] = "field";
    j["key"] = f.key;
    std::visit(RecordJson{j}, f.value);
    out += j.dump() + "\n";
  }
  if (!verdict.empty()) {
    Json v;
    v["record"] = "verdict";
    v["value"] = verdict;
    out += v.dump() + "\n";
  }
  return out;
}

}  // namespace ciengine
