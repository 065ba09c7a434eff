#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "polar/spaces.hpp"

namespace polar::cli {

enum class Format { Csv, JsonLines };

Format parse_format(const std::string& name);
std::string format_name(Format f);

// 17 significant digits: doubles round-trip losslessly through text.
std::string fmt_double(double v);
std::string fmt_extended(double v);  // like fmt_double but "inf" spelled out
double parse_extended_real(const std::string& text);

std::string fmt_complex(const cplx& c);
cplx parse_complex(const std::string& text);
std::string fmt_vector(const Vec& v);   // entries joined by ';'
Vec parse_vector(const std::string& text);

using FieldValue = std::variant<std::int64_t, double, std::string, bool>;

// One flat key-value result row. Non-finite doubles are stored as strings
// so CSV and the JSON format carry identical values.
struct Record {
  std::vector<std::pair<std::string, FieldValue>> fields;

  void add_int(const std::string& key, std::int64_t v);
  void add_double(const std::string& key, double v);
  void add_string(const std::string& key, std::string v);
  void add_bool(const std::string& key, bool v);
};

std::string render(const std::vector<Record>& records, Format format);

}  // namespace polar::cli
