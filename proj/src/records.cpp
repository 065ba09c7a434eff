#include "polar/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace polar::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json-lines" || name == "jsonl") return Format::JsonLines;
  throw std::invalid_argument("unknown format '" + name + "' (use csv|json-lines)");
}

std::string format_name(Format f) { return f == Format::Csv ? "csv" : "json-lines"; }

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_extended(double v) { return fmt_double(v); }

double parse_extended_real(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return kInf;
  }
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("cannot parse number '" + text + "'");
  return v;
}

std::string fmt_complex(const cplx& c) {
  if (c.imag() == 0.0) return fmt_double(c.real());
  std::string out = fmt_double(c.real());
  out += c.imag() < 0 ? "-" : "+";
  out += fmt_double(std::abs(c.imag()));
  out += "i";
  return out;
}

cplx parse_complex(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  const std::size_t ipos = text.find('i');
  if (ipos == std::string::npos) {
    return cplx{parse_extended_real(text), 0.0};
  }
  if (ipos != text.size() - 1) {
    throw std::invalid_argument("cannot parse complex literal '" + text + "'");
  }
  const std::string body = text.substr(0, text.size() - 1);
  // split at the sign separating the real and imaginary parts (skip
  // leading sign and exponent signs)
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < body.size(); ++k) {
    const char ch = body[k];
    if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') split = k;
  }
  if (split == std::string::npos) {
    // pure imaginary: "2i", "-1.5i", "i"
    if (body.empty() || body == "+") return cplx{0.0, 1.0};
    if (body == "-") return cplx{0.0, -1.0};
    return cplx{0.0, parse_extended_real(body)};
  }
  const double re = parse_extended_real(body.substr(0, split));
  std::string imtext = body.substr(split);
  if (imtext == "+") imtext = "1";
  if (imtext == "-") imtext = "-1";
  return cplx{re, parse_extended_real(imtext)};
}

std::string fmt_vector(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ";";
    out += fmt_complex(v[i]);
  }
  return out;
}

Vec parse_vector(const std::string& text) {
  Vec out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(';', start);
    const std::string piece =
        text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) out.push_back(parse_complex(piece));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

void Record::add_int(const std::string& key, std::int64_t v) { fields.emplace_back(key, v); }

void Record::add_double(const std::string& key, double v) {
  if (!std::isfinite(v)) {
    fields.emplace_back(key, fmt_double(v));
  } else {
    if (v == 0.0) v = 0.0;
    fields.emplace_back(key, v);
  }
}

void Record::add_string(const std::string& key, std::string v) {
  fields.emplace_back(key, std::move(v));
}

void Record::add_bool(const std::string& key, bool v) { fields.emplace_back(key, v); }

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

std::string to_text(const FieldValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return fmt_double(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v) ? "true" : "false";
}

}  // namespace

std::string render(const std::vector<Record>& records, Format format) {
  std::string out;
  if (format == Format::JsonLines) {
    for (const Record& rec : records) {
      nlohmann::ordered_json row;
      for (const auto& [key, value] : rec.fields) {
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
          row[key] = *i;
        } else if (const auto* d = std::get_if<double>(&value)) {
          row[key] = *d;
        } else if (const auto* s = std::get_if<std::string>(&value)) {
          row[key] = *s;
        } else {
          row[key] = std::get<bool>(value);
        }
      }
      out += row.dump();
      out += "\n";
    }
    return out;
  }

  // CSV: header is the first-appearance union of keys; rows missing a key
  // leave the cell empty
  std::vector<std::string> header;
  for (const Record& rec : records) {
    for (const auto& [key, value] : rec.fields) {
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += csv_escape(header[i]);
  }
  out += "\n";
  for (const Record& rec : records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ",";
      for (const auto& [key, value] : rec.fields) {
        if (key == header[i]) {
          out += csv_escape(to_text(value));
          break;
        }
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace polar::cli
