#include "fracinv/csv.hpp"

#include <array>
#include <charconv>

#include "fracinv/error.hpp"

namespace fracinv {
namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                       std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buffer.data(), end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw ConfigError("csv row has " + std::to_string(fields.size()) +
                                                   " fields, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << '\n';
  if (!out_) throw ConfigError("write failed on '" + path_.string() + "'");
}

void CsvWriter::row(const ConstVectorRef& values) {
  std::vector<std::string> fields(values.size());
  for (Index i = 0; i < values.size(); ++i) fields[i] = format_double(values(i));
  row(fields);
}

void write_columns(const std::filesystem::path& path, const std::string& first, const ConstVectorRef& a,
                   const std::string& second, const ConstVectorRef& b) {
  if (a.size() != b.size()) throw ConfigError("write_columns: column lengths differ");
  CsvWriter csv(path, {first, second});
  for (Index i = 0; i < a.size(); ++i) csv.row({format_double(a(i)), format_double(b(i))});
}

}  // namespace fracinv
