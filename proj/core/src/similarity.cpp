#include "railtap/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "railtap/error.hpp"

namespace railtap {
namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty() || a.size() != b.size()) {
    throw Error(Errc::DIMENSION_MISMATCH,
                "vectors must be non-empty and equal length: " +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double mean(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

std::string_view to_token(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::L2: return "L2";
    case DistanceKind::L1: return "L1";
    case DistanceKind::COSINE: return "COSINE";
    case DistanceKind::PEARSON: return "PEARSON";
  }
  return "L2";
}

std::optional<DistanceKind> distance_kind_from_token(std::string_view token) {
  if (token == "L2") return DistanceKind::L2;
  if (token == "L1") return DistanceKind::L1;
  if (token == "COSINE") return DistanceKind::COSINE;
  if (token == "PEARSON") return DistanceKind::PEARSON;
  return {};
}

double distance(std::span<const double> a, std::span<const double> b,
                DistanceKind kind) {
  check_dims(a, b);
  if (kind == DistanceKind::COSINE) {
    if (dot(a, a) == 0.0 || dot(b, b) == 0.0) {
      throw Error(Errc::ZERO_VECTOR,
                  "cosine distance is undefined for a zero vector");
    }
  } else if (kind == DistanceKind::PEARSON) {
    double ma = mean(a), mb = mean(b);
    double va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      va += (a[i] - ma) * (a[i] - ma);
      vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
      throw Error(Errc::DEGENERATE_VARIANCE,
                  "correlation distance is undefined for a constant vector");
    }
  }
  if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;

  switch (kind) {
    case DistanceKind::L2: {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case DistanceKind::L1: {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
      return s;
    }
    case DistanceKind::COSINE: {
      double cs = dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
      return std::max(0.0, 1.0 - cs);
    }
    case DistanceKind::PEARSON: {
      double ma = mean(a), mb = mean(b);
      double cov = 0, va = 0, vb = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
      }
      double r = cov / (std::sqrt(va) * std::sqrt(vb));
      return std::max(0.0, 1.0 - r);
    }
  }
  throw Error(Errc::BAD_CONFIG, "unknown distance kind");
}

SimilarityMatrix pairwise_matrix(std::span<const std::vector<double>> vectors,
                                 std::span<const std::string> labels,
                                 DistanceKind kind) {
  if (vectors.size() != labels.size()) {
    throw Error(Errc::DIMENSION_MISMATCH,
                "label count does not match vector count");
  }
  SimilarityMatrix m;
  m.kind = kind;
  m.labels.assign(labels.begin(), labels.end());
  std::size_t n = vectors.size();
  m.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d;
      try {
        d = distance(vectors[i], vectors[j], kind);
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (pair " + labels[i] +
                                  ", " + labels[j] + ")");
      }
      m.values[i * n + j] = d;
      m.values[j * n + i] = d;
    }
  }
  return m;
}

double coherence(const SimilarityMatrix& matrix) {
  std::size_t n = matrix.n();
  if (n < 2) {
    throw Error(Errc::INSUFFICIENT_SUPPORT,
                "coherence needs at least 2 profiles");
  }
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += matrix.at(i, j);
      ++pairs;
    }
  }
  return sum / double(pairs);
}

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  if (matrix.values.size() != matrix.n() * matrix.n()) {
    throw Error(Errc::DIMENSION_MISMATCH, "matrix storage is not n x n");
  }
  for (const auto& label : matrix.labels) {
    if (label.empty() || label.find(',') != std::string::npos ||
        label.find('\n') != std::string::npos) {
      throw Error(Errc::BAD_CONFIG, "matrix label is not a plain token",
                  label);
    }
  }
  out << "label";
  for (const auto& label : matrix.labels) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < matrix.n(); ++i) {
    out << matrix.labels[i];
    for (std::size_t j = 0; j < matrix.n(); ++j) {
      out << ',' << format_double_exact(matrix.at(i, j));
    }
    out << '\n';
  }
}

SimilarityMatrix read_matrix_csv(std::istream& in, std::string_view origin) {
  auto split = [](std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      fields.emplace_back(comma == std::string_view::npos
                              ? line.substr(start)
                              : line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  };

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::BAD_HEADER, std::string(origin) + ": missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line);
  if (header.empty() || header[0] != "label") {
    throw Error(Errc::BAD_HEADER, std::string(origin) + ": unexpected header",
                line);
  }
  SimilarityMatrix m;
  m.labels.assign(header.begin() + 1, header.end());
  std::size_t n = m.labels.size();
  m.values.reserve(n * n);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = std::string(origin) + " row " + std::to_string(row + 1);
    auto fields = split(line);
    if (fields.size() != n + 1) {
      throw Error(Errc::BAD_FIELD_COUNT,
                  where + ": expected " + std::to_string(n + 1) +
                      " fields, got " + std::to_string(fields.size()));
    }
    if (row >= n || fields[0] != m.labels[row]) {
      throw Error(Errc::BAD_HEADER,
                  where + ": row label does not match header order",
                  fields[0]);
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      char* end = nullptr;
      double v = std::strtod(fields[j].c_str(), &end);
      if (end != fields[j].c_str() + fields[j].size() || fields[j].empty()) {
        throw Error(Errc::BAD_CONFIG, where + ": unparseable value",
                    fields[j]);
      }
      m.values.push_back(v);
    }
    ++row;
  }
  if (row != n) {
    throw Error(Errc::BAD_FIELD_COUNT,
                std::string(origin) + ": expected " + std::to_string(n) +
                    " rows, got " + std::to_string(row));
  }
  return m;
}

std::string format_double_exact(double value) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  return buf;
}

}  // namespace railtap
